//! The Gaussian analytic field coupled to the recurrence.
//!
//! Two independent Brownian motions X, Y on [0, 1] drive the stochastic
//! integral
//!
//! ```text
//! W_t(z) = (1/2) int_0^t (dX_u + J(z/sqrt(u)) dY_u) / sqrt(z^2 - u),
//! ```
//!
//! whose covariance is E[W_t(z) W_s(q)] = -log(1 - J(z/sqrt(m)) J(q/sqrt(m)))
//! with m = min(s, t). The t = 1 field is the pull-back under J of the
//! Gaussian analytic function xi(q) = sum_k xi_k q^k / sqrt(k) on the disk,
//! and its boundary values on [-1, 1] form a log-correlated field.
//!
//! Discrete side: the running sum of eta_{k,11} + eta_{k,11}^2 / 2 over the
//! factored transfer steps plays the role of sqrt(2/beta) W + E[W^2]/beta,
//! which is what `coupling_ratio` probes.

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::{StreamKind, Substream};
use crate::sampling::{NoiseSequence, TridiagonalModel};
use crate::transfer::{
    char_poly, factored_steps, hermite_pi, in_domain_p, inverse_joukowsky, lambda_pm, FactoredStep,
};

/// Default alpha for the planar-domain check used by `coupling_ratio`.
pub const DEFAULT_ALPHA: f64 = 1.0 / 9.0;

/// Standard-deviation budget for the truncated analytic-function series.
pub const GAF_TAIL_SD_BUDGET: f64 = 1e-4;

/// Coupled discrete paths on the grid k/N, k = 0..N, with Brownian-bridge
/// midpoint fill. When embedded from a noise sequence, the grid values are
/// the exact scaled partial sums; the midpoints carry fresh bridge noise.
#[derive(Debug, Clone)]
pub struct BrownianPair {
    pub grid: Vec<f64>,
    pub x_path: Vec<f64>,
    pub y_path: Vec<f64>,
    /// Bridge samples at the interval midpoints (k + 1/2)/N.
    pub x_mid: Vec<f64>,
    pub y_mid: Vec<f64>,
}

impl BrownianPair {
    pub fn n_dim(&self) -> usize {
        self.grid.len() - 1
    }

    /// Fresh pair of standard Brownian paths sampled on the grid, one
    /// substream per increment.
    pub fn fresh(n_dim: usize, seed: u64, replica: u64) -> Self {
        let step = 1.0 / n_dim as f64;
        let sd = step.sqrt();
        let mut x_path = vec![0.0; n_dim + 1];
        let mut y_path = vec![0.0; n_dim + 1];
        for k in 1..=n_dim {
            let mut rx = Substream::new(seed, replica, k as u64, StreamKind::PathX);
            let mut ry = Substream::new(seed, replica, k as u64, StreamKind::PathY);
            let gx: f64 = StandardNormal.sample(&mut rx);
            let gy: f64 = StandardNormal.sample(&mut ry);
            x_path[k] = x_path[k - 1] + sd * gx;
            y_path[k] = y_path[k - 1] + sd * gy;
        }
        Self::with_bridge_fill(n_dim, x_path, y_path, seed, replica)
    }

    fn with_bridge_fill(
        n_dim: usize,
        x_path: Vec<f64>,
        y_path: Vec<f64>,
        seed: u64,
        replica: u64,
    ) -> Self {
        let step = 1.0 / n_dim as f64;
        let grid = (0..=n_dim).map(|k| k as f64 * step).collect();
        // Midpoint of a bridge over [t_k, t_{k+1}]: mean of the endpoints
        // plus N(0, step/4) noise.
        let mid_sd = (step / 4.0).sqrt();
        let mut x_mid = Vec::with_capacity(n_dim);
        let mut y_mid = Vec::with_capacity(n_dim);
        for k in 0..n_dim {
            let mut rx = Substream::new(seed, replica, k as u64, StreamKind::BridgeX);
            let mut ry = Substream::new(seed, replica, k as u64, StreamKind::BridgeY);
            let gx: f64 = StandardNormal.sample(&mut rx);
            let gy: f64 = StandardNormal.sample(&mut ry);
            x_mid.push(0.5 * (x_path[k] + x_path[k + 1]) + mid_sd * gx);
            y_mid.push(0.5 * (y_path[k] + y_path[k + 1]) + mid_sd * gy);
        }
        BrownianPair {
            grid,
            x_path,
            y_path,
            x_mid,
            y_mid,
        }
    }
}

/// Embed a noise sequence: grid values are exactly the scaled partial sums
/// (1/sqrt(N)) sum_{j<=k} X_j and likewise for Y; the in-between fill is
/// fresh bridge noise keyed by (seed, replica).
pub fn embed_noise(noise: &NoiseSequence, n_dim: usize, seed: u64, replica: u64) -> BrownianPair {
    assert_eq!(noise.len(), n_dim, "noise length must match the grid");
    let scale = 1.0 / (n_dim as f64).sqrt();
    let mut x_path = vec![0.0; n_dim + 1];
    let mut y_path = vec![0.0; n_dim + 1];
    for k in 1..=n_dim {
        x_path[k] = x_path[k - 1] + scale * noise.x[k - 1];
        y_path[k] = y_path[k - 1] + scale * noise.y[k - 1];
    }
    BrownianPair::with_bridge_fill(n_dim, x_path, y_path, seed, replica)
}

/// Value of the field at one spectral point and time.
#[derive(Debug, Clone, Copy)]
pub struct FieldValue {
    pub w: Complex64,
    pub t: f64,
    pub z: Complex64,
}

/// Left-endpoint Riemann-Stieltjes discretization of W_t(z) along the pair.
pub fn field_w(z: Complex64, t: f64, pair: &BrownianPair) -> Result<FieldValue> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter {
            name: "t",
            reason: format!("time must lie in [0, 1], got {t}"),
        });
    }
    let n = pair.n_dim();
    let m = ((t * n as f64) + 1e-9).floor() as usize;
    let m = m.min(n);
    // The integrand is singular on [-sqrt(t), sqrt(t)].
    if z.im == 0.0 && z.re.abs() <= t.sqrt() + 1e-12 {
        return Err(Error::CutViolation {
            point: z,
            half_width: t.sqrt(),
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..m {
        let u = pair.grid[k];
        let (lp, lm) = lambda_pm(z, u)?;
        let split = lp - lm; // sqrt(z^2 - u) on the right branch
        let j = if u > 0.0 {
            2.0 * lm / u.sqrt()
        } else {
            Complex64::new(0.0, 0.0)
        };
        let dx = pair.x_path[k + 1] - pair.x_path[k];
        let dy = pair.y_path[k + 1] - pair.y_path[k];
        acc += (dx + j * dy) / split;
    }
    Ok(FieldValue { w: 0.5 * acc, t, z })
}

/// A truncated Gaussian analytic function: xi(q) = sum_{k<=K} xi_k q^k / sqrt(k).
#[derive(Debug, Clone)]
pub struct GafSample {
    pub xi: Vec<f64>,
    pub truncation: usize,
}

impl GafSample {
    pub fn sample(truncation: usize, seed: u64, replica: u64) -> Self {
        let mut rng = Substream::new(seed, replica, 0, StreamKind::Gaf);
        let xi = (0..truncation)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        GafSample { xi, truncation }
    }
}

/// Standard deviation of the truncated tail sum_{k>K} xi_k q^k / sqrt(k):
/// bounded by the geometric tail |q|^{2K+2} / ((K+1)(1 - |q|^2)).
pub fn gaf_tail_sd(abs_q: f64, terms: usize) -> f64 {
    if abs_q >= 1.0 {
        return f64::INFINITY;
    }
    let k = terms as f64;
    (abs_q.powf(2.0 * k + 2.0) / ((k + 1.0) * (1.0 - abs_q * abs_q))).sqrt()
}

/// Smallest truncation meeting the tail budget at radius |q|.
pub fn gaf_required_terms(abs_q: f64, sd_budget: f64) -> usize {
    let mut k = 1usize;
    while gaf_tail_sd(abs_q, k) > sd_budget {
        k *= 2;
        if k > 1 << 30 {
            return k;
        }
    }
    // Binary refine between k/2 and k.
    let (mut lo, mut hi) = (k / 2, k);
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if gaf_tail_sd(abs_q, mid) > sd_budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Evaluate the truncated series at q. Errors when the truncation cannot
/// meet the tail budget at this radius, reporting the required K.
pub fn gaf_eval(sample: &GafSample, q: Complex64) -> Result<Complex64> {
    let abs_q = q.norm();
    if gaf_tail_sd(abs_q, sample.truncation) > GAF_TAIL_SD_BUDGET {
        return Err(Error::SeriesRadius {
            abs_q,
            terms: sample.truncation,
            required: gaf_required_terms(abs_q, GAF_TAIL_SD_BUDGET),
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut power = Complex64::new(1.0, 0.0);
    for (k, &xi) in sample.xi.iter().enumerate() {
        power *= q;
        acc += xi / ((k + 1) as f64).sqrt() * power;
    }
    Ok(acc)
}

/// The pulled-back field W(z) = xi(J(z)).
pub fn gaf_w(sample: &GafSample, z: Complex64) -> Result<Complex64> {
    gaf_eval(sample, inverse_joukowsky(z))
}

fn check_off_cut(point: Complex64, half_width: f64) -> Result<()> {
    if point.im == 0.0 && point.re.abs() <= half_width {
        return Err(Error::CutViolation { point, half_width });
    }
    Ok(())
}

/// Closed-form covariance E[W(z) W(w)] = -log(1 - J(z) J(w)).
pub fn covariance_w(z: Complex64, w: Complex64) -> Result<Complex64> {
    check_off_cut(z, 1.0)?;
    check_off_cut(w, 1.0)?;
    Ok(-(1.0 - inverse_joukowsky(z) * inverse_joukowsky(w)).ln())
}

/// Closed-form covariance E[W_t(z) W_s(q)] with m = min(s, t):
/// -log(1 - J(z/sqrt(m)) J(q/sqrt(m))).
pub fn covariance_wt(z: Complex64, q: Complex64, s: f64, t: f64) -> Result<Complex64> {
    for (name, v) in [("s", s), ("t", t)] {
        if !(0.0 < v && v <= 1.0) {
            return Err(Error::InvalidParameter {
                name,
                reason: format!("time must lie in (0, 1], got {v}"),
            });
        }
    }
    let m = s.min(t).sqrt();
    check_off_cut(z, m)?;
    check_off_cut(q, m)?;
    Ok(-(1.0 - inverse_joukowsky(z / m) * inverse_joukowsky(q / m)).ln())
}

/// Relative error between the central finite difference of
/// t -> log(1 - J(q/sqrt(t)) J(z/sqrt(t))) and the closed form
/// -(1 + J(z/sqrt(t)) J(q/sqrt(t))) / (4 sqrt(q^2 - t) sqrt(z^2 - t)).
pub fn magic_derivative_check(z: Complex64, q: Complex64, t: f64, h: f64) -> Result<f64> {
    if !(0.0 < t && t <= 1.0) || h <= 0.0 || t - h <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "t",
            reason: format!("need 0 < t <= 1 and 0 < h < t, got t = {t}, h = {h}"),
        });
    }
    let phi = |tt: f64| -> Result<Complex64> {
        let m = tt.sqrt();
        check_off_cut(z, m)?;
        check_off_cut(q, m)?;
        Ok((1.0 - inverse_joukowsky(q / m) * inverse_joukowsky(z / m)).ln())
    };
    let fd = (phi(t + h)? - phi(t - h)?) / (2.0 * h);
    let m = t.sqrt();
    let jz = inverse_joukowsky(z / m);
    let jq = inverse_joukowsky(q / m);
    let (zp, zm) = lambda_pm(z, t)?;
    let (qp, qm) = lambda_pm(q, t)?;
    let closed = -(1.0 + jz * jq) / (4.0 * (qp - qm) * (zp - zm));
    Ok((fd - closed).norm() / closed.norm())
}

/// Boundary covariances of the field on (-1, 1):
/// E[Re W(x) Re W(y)] = (1/2) log(1/|2(x-y)|) and
/// E[Im W(x) Im W(y)] = -(1/2) log|(x-y)/(1 - xy + sqrt(1-x^2) sqrt(1-y^2))|.
pub fn boundary_covariances(x: f64, y: f64) -> Result<(f64, f64)> {
    for v in [x, y] {
        if !(-1.0 < v && v < 1.0) {
            return Err(Error::InvalidParameter {
                name: "x",
                reason: format!("boundary points must lie in (-1, 1), got {v}"),
            });
        }
    }
    if x == y {
        return Err(Error::CoincidentPoints { x });
    }
    let re_cov = 0.5 * (1.0 / (2.0 * (x - y)).abs()).ln();
    let denom = 1.0 - x * y + (1.0 - x * x).sqrt() * (1.0 - y * y).sqrt();
    let im_cov = -0.5 * ((x - y) / denom).abs().ln();
    Ok((re_cov, im_cov))
}

/// Partial sum of eta_{k,11} + eta_{k,11}^2 / 2 over the factored steps with
/// k <= upto: the discrete stand-in for sqrt(2/beta) W(z) + E[W(z)^2]/beta.
pub fn discrete_field(steps: &[FactoredStep], upto: usize) -> Complex64 {
    steps
        .iter()
        .take_while(|s| s.k <= upto)
        .map(|s| s.eta_11 + 0.5 * s.eta_11 * s.eta_11)
        .sum()
}

/// |exp(log Phi_N - log pi_N + sum(eta_11 + eta_11^2/2)) - 1|: how far the
/// draw sits from its Gaussian-field prediction. Requires z in the planar
/// domain (alpha = 1/9).
pub fn coupling_ratio(z: Complex64, model: &TridiagonalModel, beta: f64) -> Result<f64> {
    let n = model.n_dim();
    if !in_domain_p(z, n, DEFAULT_ALPHA) {
        return Err(Error::DomainViolation {
            z,
            domain: "the planar domain (alpha = 1/9)",
        });
    }
    let steps = factored_steps(z, model, beta)?;
    let log_phi = char_poly(z, model, beta)[n - 1].log_first();
    let log_pi = hermite_pi(z, n, n).log_first();
    let field = discrete_field(&steps, n);
    Ok(((log_phi - log_pi + field).exp() - 1.0).norm())
}
