//! The transfer-matrix recurrence and its hyperbolic factorization.
//!
//! The characteristic polynomial of the scaled model satisfies
//!
//! ```text
//! (Phi_n, Phi_{n-1})^T = T_n (Phi_{n-1}, Phi_{n-2})^T,
//! T_n = [[z - b_n / (2 sqrt(N beta)), -a_{n-1}^2 / (4 N beta)], [1, 0]],
//! ```
//!
//! with `Phi_0 = 1` and `Phi_1 = z - b_1 / (2 sqrt(N beta))`. Its mean is the
//! deterministic Hermite recurrence with step matrices
//! `[[z, -(n-1)/(4N)], [1, 0]]`, whose eigenvalues
//! `lambda_pm(t) = (z +- sqrt(z^2 - t))/2` at `t = (n-1)/N` drive everything:
//! the recurrence is hyperbolic while `|lambda_+| > |lambda_-|`, degenerates
//! at the turning point `n ~ N (Re z)^2`, and oscillates beyond it.
//!
//! Conjugating each step by the eigenvector frames `V_k` of the deterministic
//! recurrence factors the product into independent scalars times matrices
//! `U_k` that stay near `diag(1, 0)`:
//!
//! ```text
//! T_n ... T_2 = prod_k lambda_+((k-1)/N) (1 - delta_k - eta_{k,11})
//!               * V_{n+1} [prod_k U_k] V_2^{-1}.
//! ```
//!
//! `factored_steps` produces those scalars and matrices; everything is exact
//! (up to rounding), not asymptotic, and the reconstruction identity is
//! enforced by tests.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::sampling::{noise_from_model, TridiagonalModel};

/// Square root of z^2 - 1 with branch cut on [-1, 1], asymptotic to z at
/// infinity. On the cut the value from the closed upper half-plane is
/// returned.
pub fn sqrt_cut(z: Complex64) -> Complex64 {
    // Normalize -0.0 imaginary parts so the boundary extension comes from
    // above for every representation of a real input.
    let z = if z.im == 0.0 {
        Complex64::new(z.re, 0.0)
    } else {
        z
    };
    (z - 1.0).sqrt() * (z + 1.0).sqrt()
}

/// Square root of z^2 - t with branch cut on [-sqrt(t), sqrt(t)], asymptotic
/// to z at infinity. Equals `lambda_plus - lambda_minus`.
pub fn sqrt_cut_t(z: Complex64, t: f64) -> Complex64 {
    if t == 0.0 {
        z
    } else {
        let r = t.sqrt();
        r * sqrt_cut(z / r)
    }
}

/// Inverse Joukowsky transform J(z) = z - sqrt(z^2 - 1), mapping the
/// complement of [-1, 1] into the unit disk with J(z) ~ 1/(2z) at infinity.
/// Computed as 1/(z + sqrt(z^2 - 1)), which is cancellation-free.
pub fn inverse_joukowsky(z: Complex64) -> Complex64 {
    1.0 / (z + sqrt_cut(z))
}

/// Eigenvalues lambda_pm(t) = (z +- sqrt(z^2 - t)) / 2 of the deterministic
/// step matrix, ordered so |lambda_+| >= |lambda_-|. At t = 0 this is (z, 0).
pub fn lambda_pm(z: Complex64, t: f64) -> Result<(Complex64, Complex64)> {
    if t < 0.0 {
        return Err(Error::InvalidParameter {
            name: "t",
            reason: format!("time must be nonnegative, got {t}"),
        });
    }
    let s = sqrt_cut_t(z, t);
    Ok((0.5 * (z + s), 0.5 * (z - s)))
}

/// rho(t) = lambda_-(t) / lambda_+(t) = J(z/sqrt(t))^2, the per-step
/// contraction factor. Requires t > 0.
pub fn rho(z: Complex64, t: f64) -> Complex64 {
    debug_assert!(t > 0.0);
    let r = t.sqrt();
    let j = inverse_joukowsky(z / r);
    j * j
}

/// One spectral point: z, time t, the step eigenvalues, and J(z/sqrt(t)).
#[derive(Debug, Clone, Copy)]
pub struct SpectralPoint {
    pub z: Complex64,
    pub t: f64,
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
    pub j_value: Complex64,
}

impl SpectralPoint {
    pub fn new(z: Complex64, t: f64) -> Result<Self> {
        let (lp, lm) = lambda_pm(z, t)?;
        let j_value = if t > 0.0 {
            inverse_joukowsky(z / t.sqrt())
        } else {
            Complex64::new(0.0, 0.0)
        };
        Ok(SpectralPoint {
            z,
            t,
            lambda_plus: lp,
            lambda_minus: lm,
            j_value,
        })
    }
}

/// delta_k = (lambda_+(k/N) - lambda_+((k-1)/N)) / (lambda_+(k/N) - lambda_-(k/N)),
/// the relative drift of the expanding eigenvalue over one step.
pub fn delta_step(z: Complex64, n_dim: usize, k: usize) -> Result<Complex64> {
    if k < 2 || k > n_dim {
        return Err(Error::InvalidParameter {
            name: "k",
            reason: format!("need 2 <= k <= N = {n_dim}, got {k}"),
        });
    }
    let n = n_dim as f64;
    let (lp_cur, lm_cur) = lambda_pm(z, k as f64 / n)?;
    let (lp_prev, _) = lambda_pm(z, (k - 1) as f64 / n)?;
    let denom = lp_cur - lm_cur;
    if denom.norm() <= 1e-13 * (1.0 + z.norm()) {
        return Err(Error::ParabolicStep { k, z });
    }
    Ok((lp_cur - lp_prev) / denom)
}

/// A two-vector stored as a unit-scale pair plus the log of the removed
/// scalar, so recurrences that grow like e^{cN} never overflow.
#[derive(Debug, Clone, Copy)]
pub struct ScaledPair {
    pub v: [Complex64; 2],
    pub log_prefactor: Complex64,
}

impl ScaledPair {
    pub fn new(v: [Complex64; 2]) -> Self {
        let mut pair = ScaledPair {
            v,
            log_prefactor: Complex64::new(0.0, 0.0),
        };
        pair.renormalize();
        pair
    }

    /// Divide out the max-norm and absorb it into the log prefactor.
    pub fn renormalize(&mut self) {
        let m = self.v[0].norm().max(self.v[1].norm());
        if m > 0.0 && m.is_finite() {
            self.v[0] /= m;
            self.v[1] /= m;
            self.log_prefactor += m.ln();
        }
    }

    /// exp(log_prefactor) * v; overflows for large prefactors, by design.
    pub fn reconstruct(&self) -> [Complex64; 2] {
        let s = self.log_prefactor.exp();
        [self.v[0] * s, self.v[1] * s]
    }

    /// A logarithm of the first component.
    pub fn log_first(&self) -> Complex64 {
        self.log_prefactor + self.v[0].ln()
    }

    /// A logarithm of the second component.
    pub fn log_second(&self) -> Complex64 {
        self.log_prefactor + self.v[1].ln()
    }
}

/// The transfer matrix T_k of a model draw, for k >= 2.
pub fn transfer_matrix(z: Complex64, model: &TridiagonalModel, beta: f64, k: usize) -> Mat2 {
    let n = model.n_dim() as f64;
    let b = model.diag[k - 1];
    let a = model.offdiag[k - 2];
    Mat2::new(
        z - b / (2.0 * (n * beta).sqrt()),
        Complex64::new(-a * a / (4.0 * n * beta), 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
    )
}

/// Eigenvector frame V_k of the deterministic step, built from the
/// eigenvalues at time (k-1)/N.
pub fn v_matrix(z: Complex64, n_dim: usize, k: usize) -> Result<Mat2> {
    let t = (k - 1) as f64 / n_dim as f64;
    let (lp, lm) = lambda_pm(z, t)?;
    Ok(Mat2::new(
        lp,
        lm,
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
    ))
}

/// Full trajectory of the characteristic-polynomial recurrence: entry n-1
/// holds (Phi_n, Phi_{n-1}) in scaled form, n = 1..=N. The final entry's
/// first component is det(z - A/sqrt(4 N beta)) of the N x N minor.
pub fn char_poly(z: Complex64, model: &TridiagonalModel, beta: f64) -> Vec<ScaledPair> {
    let n = model.n_dim();
    let nf = n as f64;
    let diag_scale = 2.0 * (nf * beta).sqrt();
    let off_scale = 4.0 * nf * beta;
    let mut out = Vec::with_capacity(n);
    let mut pair = ScaledPair::new([z - model.diag[0] / diag_scale, Complex64::new(1.0, 0.0)]);
    out.push(pair);
    for k in 2..=n {
        let top = (z - model.diag[k - 1] / diag_scale) * pair.v[0]
            - (model.offdiag[k - 2].powi(2) / off_scale) * pair.v[1];
        pair = ScaledPair {
            v: [top, pair.v[0]],
            log_prefactor: pair.log_prefactor,
        };
        pair.renormalize();
        out.push(pair);
    }
    out
}

/// Monic Hermite polynomials scaled to the weight e^{-2 N x^2}: trajectory
/// of (pi_n, pi_{n-1}) for n = 1..=n_max.
pub fn hermite_pi_trajectory(z: Complex64, n_max: usize, n_dim: usize) -> Vec<ScaledPair> {
    if n_max == 0 {
        return Vec::new();
    }
    let nf = n_dim as f64;
    let mut out = Vec::with_capacity(n_max);
    let mut pair = ScaledPair::new([z, Complex64::new(1.0, 0.0)]);
    out.push(pair);
    for k in 2..=n_max {
        let top = z * pair.v[0] - ((k - 1) as f64 / (4.0 * nf)) * pair.v[1];
        pair = ScaledPair {
            v: [top, pair.v[0]],
            log_prefactor: pair.log_prefactor,
        };
        pair.renormalize();
        out.push(pair);
    }
    out
}

/// (pi_n, pi_{n-1}) in scaled form; n = 0 returns (1, 0).
pub fn hermite_pi(z: Complex64, n: usize, n_dim: usize) -> ScaledPair {
    if n == 0 {
        return ScaledPair::new([Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
    }
    hermite_pi_trajectory(z, n, n_dim)[n - 1]
}

/// One factored transfer step: the matrix U_k, its noise entries, and the
/// log of the scalar lambda_+((k-1)/N) (1 - delta_k - eta_{k,11}) that was
/// pulled out. U_k has the layout
/// `[[1, eta_12], [eta_21, rho_{k-1} - eta_22]]`.
#[derive(Debug, Clone, Copy)]
pub struct FactoredStep {
    pub k: usize,
    pub u_matrix: Mat2,
    pub eta_11: Complex64,
    pub eta_12: Complex64,
    pub eta_21: Complex64,
    pub eta_22: Complex64,
    pub delta_k: Complex64,
    pub rho_km1: Complex64,
    pub log_scalar: Complex64,
}

/// Factor the transfer steps k = 2..=N of a model draw. Fails with the
/// offending index if a step is numerically parabolic (or the pulled-out
/// scalar degenerates to zero).
pub fn factored_steps(
    z: Complex64,
    model: &TridiagonalModel,
    beta: f64,
) -> Result<Vec<FactoredStep>> {
    factored_steps_upto(z, model, beta, model.n_dim())
}

/// Factor only the steps k = 2..=upto. Inside the semicircle the recurrence
/// passes a turning point before k = N; factoring just the hyperbolic part
/// avoids the parabolic singularity beyond it.
pub fn factored_steps_upto(
    z: Complex64,
    model: &TridiagonalModel,
    beta: f64,
    upto: usize,
) -> Result<Vec<FactoredStep>> {
    let n = upto.min(model.n_dim());
    let nf = model.n_dim() as f64;
    let noise = noise_from_model(model, beta);
    let base = 1.0 / (2.0 * beta * nf).sqrt();
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    let (mut lp_prev, mut lm_prev) = lambda_pm(z, 1.0 / nf)?;
    for k in 2..=n {
        let t_cur = k as f64 / nf;
        let (lp_cur, lm_cur) = lambda_pm(z, t_cur)?;
        let split = lp_cur - lm_cur;
        if split.norm() <= 1e-13 * (1.0 + z.norm()) {
            return Err(Error::ParabolicStep { k, z });
        }
        let delta = (lp_cur - lp_prev) / split;
        let rho_km1 = lm_prev / lp_prev;
        let c = base / split;
        // J(z sqrt(N/(k-1))) = 2 lambda_-((k-1)/N) / sqrt((k-1)/N).
        let j_prev = 2.0 * lm_prev / ((k - 1) as f64 / nf).sqrt();
        let x = noise.x[k - 1];
        let ybreve = noise.y[k - 1] * j_prev;
        let eta_11 = c * (x + ybreve);
        let d = Complex64::new(1.0, 0.0) - delta - eta_11;
        if d.norm() <= 1e-14 {
            return Err(Error::ParabolicStep { k, z });
        }
        let cross = c * (rho_km1 * x + ybreve);
        let eta_12 = (rho_km1 * delta - cross) / d;
        let eta_21 = (delta + eta_11) / d;
        let eta_22 = -(rho_km1 * eta_11 + cross) / d;
        let u_matrix = Mat2::new(Complex64::new(1.0, 0.0), eta_12, eta_21, rho_km1 - eta_22);
        out.push(FactoredStep {
            k,
            u_matrix,
            eta_11,
            eta_12,
            eta_21,
            eta_22,
            delta_k: delta,
            rho_km1,
            log_scalar: lp_prev.ln() + d.ln(),
        });
        lp_prev = lp_cur;
        lm_prev = lm_cur;
    }
    Ok(out)
}

/// Step classification by position relative to the turning point
/// n ~ N (Re z)^2, with the parabolic window of half-width omega_N.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Hyperbolic,
    Parabolic,
    Elliptic,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::Hyperbolic => "hyperbolic",
            Regime::Parabolic => "parabolic",
            Regime::Elliptic => "elliptic",
        };
        f.write_str(s)
    }
}

/// The hyperbolic window of the recurrence at z: turning index
/// N_p = floor(N (Re z)^2), window half-width
/// omega_N = N_p^{1/3} (Omega log N_p)^{2/3}, and the usable hyperbolic
/// length N_H = min(N_p - omega_N, N).
#[derive(Debug, Clone, Copy)]
pub struct HyperbolicWindow {
    pub n_p: usize,
    pub omega_n: f64,
    pub n_h: usize,
    pub omega_param: f64,
}

impl HyperbolicWindow {
    pub fn new(z: Complex64, n_dim: usize, omega_param: f64) -> Self {
        let n_p = (n_dim as f64 * z.re * z.re).floor().max(0.0) as usize;
        let omega_n = if n_p <= 1 {
            0.0
        } else {
            (n_p as f64).cbrt() * (omega_param * (n_p as f64).ln()).powf(2.0 / 3.0)
        };
        let n_h = ((n_p as f64 - omega_n).floor().max(0.0) as usize).min(n_dim);
        HyperbolicWindow {
            n_p,
            omega_n,
            n_h,
            omega_param,
        }
    }
}

/// Classify step n at omega_param = 1. Ties at the window edge resolve to
/// parabolic.
pub fn classify_regime(z: Complex64, n_dim: usize, n: usize) -> Regime {
    classify_regime_with(z, n_dim, n, 1.0)
}

pub fn classify_regime_with(z: Complex64, n_dim: usize, n: usize, omega_param: f64) -> Regime {
    let window = HyperbolicWindow::new(z, n_dim, omega_param);
    let turning = n_dim as f64 * z.re * z.re;
    let d = n as f64 - turning;
    if d.abs() <= window.omega_n {
        Regime::Parabolic
    } else if d < 0.0 {
        Regime::Hyperbolic
    } else {
        Regime::Elliptic
    }
}

/// Membership in the planar domain: |Im z| >= N^{-alpha} or
/// |Re z| >= 1 + N^{-2 alpha}/2.
pub fn in_domain_p(z: Complex64, n_dim: usize, alpha: f64) -> bool {
    let n = n_dim as f64;
    z.im.abs() >= n.powf(-alpha) || z.re.abs() >= 1.0 + 0.5 * n.powf(-2.0 * alpha)
}

/// Membership in the hyperbolic domain: 0 <= Im z <= 2 Re z and
/// Re z >= N^{delta - 1/2}.
pub fn in_domain_dh(z: Complex64, n_dim: usize, delta: f64) -> bool {
    let n = n_dim as f64;
    0.0 <= z.im && z.im <= 2.0 * z.re && z.re >= n.powf(delta - 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat2::product_desc;
    use crate::sampling::{sample_model_replica, EnsembleConfig};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Reference root form of lambda_pm: principal sqrt of z^2 - t with the
    /// sign chosen to behave like z (|z + s| maximal), ties from above.
    fn lambda_pm_root_form(z: Complex64, t: f64) -> (Complex64, Complex64) {
        let s0 = (z * z - t).sqrt();
        let plus = (z + s0).norm();
        let minus = (z - s0).norm();
        let s = if (plus - minus).abs() < 1e-14 * (plus + minus) {
            if s0.im >= 0.0 {
                s0
            } else {
                -s0
            }
        } else if plus >= minus {
            s0
        } else {
            -s0
        };
        (0.5 * (z + s), 0.5 * (z - s))
    }

    #[test]
    fn joukowsky_fixed_values() {
        assert!((inverse_joukowsky(c(1.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((inverse_joukowsky(c(1.25, 0.0)) - c(0.5, 0.0)).norm() < 1e-15);
        // J(2) = 2 - sqrt(3).
        let j2 = inverse_joukowsky(c(2.0, 0.0));
        assert!((j2 - c(2.0 - 3.0f64.sqrt(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn joukowsky_identities_on_grid() {
        // J + 1/J = 2z and the Schwarz-lemma bounds on a deterministic grid
        // with |q| > 1.
        for i in 0..100 {
            let angle = 2.0 * std::f64::consts::PI * i as f64 / 100.0;
            let r = 1.05 + 2.0 * (i as f64 / 100.0);
            let q = c(r * angle.cos(), r * angle.sin());
            let j = inverse_joukowsky(q);
            assert!((j + 1.0 / j - 2.0 * q).norm() < 1e-12, "q = {q}");
            assert!(j.norm() <= 1.0 / q.norm() + 1e-12, "q = {q}");
            let j_re = inverse_joukowsky(c(q.re, 0.0));
            assert!(j.norm() <= j_re.norm() + 1e-12, "q = {q}");
        }
    }

    #[test]
    fn joukowsky_exponential_bound_on_segment() {
        for i in 0..50 {
            let q = 1.0 + (i as f64 + 0.5) / 50.0;
            let j = inverse_joukowsky(c(q, 0.0));
            assert!(j.im.abs() < 1e-15);
            let bound = (-(2.0 / 3.0) * (q * q - 1.0).sqrt()).exp();
            assert!(
                0.0 <= j.re && j.re <= bound + 1e-12,
                "q = {q}, J = {}",
                j.re
            );
        }
    }

    #[test]
    fn joukowsky_log_derivative() {
        // -J'(q)/J(q) = 1/sqrt(q^2 - 1) against central differences.
        let h = 1e-5;
        for i in 1..40 {
            let q = 1.05 + i as f64 * 0.05;
            let fd = ((inverse_joukowsky(c(q + h, 0.0)).ln()
                - inverse_joukowsky(c(q - h, 0.0)).ln())
                / (2.0 * h))
                .re;
            let closed = -1.0 / (q * q - 1.0).sqrt();
            assert!(
                ((fd - closed) / closed).abs() < 1e-6,
                "q = {q}: fd {fd} vs {closed}"
            );
        }
    }

    #[test]
    fn lambda_basics() {
        let (lp, lm) = lambda_pm(c(0.7, 0.3), 0.0).unwrap();
        assert_eq!(lm, c(0.0, 0.0));
        assert_eq!(lp, c(0.7, 0.3));

        let (lp, lm) = lambda_pm(c(2.0, 0.0), 1.0).unwrap();
        let r3 = 3.0f64.sqrt();
        assert!((lp - c((2.0 + r3) / 2.0, 0.0)).norm() < 1e-14);
        assert!((lm - c((2.0 - r3) / 2.0, 0.0)).norm() < 1e-14);
    }

    proptest! {
        #[test]
        fn lambda_product_and_sum(re in -2.0f64..2.0, im in -2.0f64..2.0, t in 0.05f64..1.0) {
            let z = c(re, im);
            // Stay away from the parabolic locus z^2 = t.
            prop_assume!((z * z - t).norm() > 1e-3);
            let (lp, lm) = lambda_pm(z, t).unwrap();
            prop_assert!((lp * lm - t / 4.0).norm() <= 1e-12 * (1.0 + lp.norm() * lm.norm()));
            prop_assert!((lp + lm - z).norm() <= 1e-12 * (1.0 + z.norm()));
            prop_assert!(lp.norm() >= lm.norm() - 1e-12);
        }

        #[test]
        fn lambda_branch_matches_root_form(re in -2.0f64..2.0, im in 0.0f64..2.0, t in 0.05f64..1.0) {
            let z = c(re, im);
            prop_assume!((z * z - t).norm() > 1e-2);
            let (lp, lm) = lambda_pm(z, t).unwrap();
            let (lp2, lm2) = lambda_pm_root_form(z, t);
            prop_assert!((lp - lp2).norm() < 1e-12 * (1.0 + lp.norm()));
            prop_assert!((lm - lm2).norm() < 1e-12 * (1.0 + lm.norm()));
        }
    }

    #[test]
    fn delta_matches_mean_value_bound() {
        // z real with z^2 >> k/N: delta is real, and its magnitude is within
        // a factor two of (1/4N) / (z^2 - k/N) (the mean-value form). The
        // sign is negative there: lambda_+ decreases in t to the right of
        // the spectrum, which the reconstruction identity pins down.
        let z = c(3.0, 0.0);
        let n = 50;
        for k in 2..=n {
            let d = delta_step(z, n, k).unwrap();
            assert!(d.im.abs() < 1e-15);
            assert!(d.re < 0.0);
            let reference = 0.25 / n as f64 / (z.re * z.re - k as f64 / n as f64);
            let ratio = d.re.abs() / reference;
            assert!((0.5..=2.0).contains(&ratio), "k = {k}: ratio {ratio}");
        }
    }

    #[test]
    fn delta_two_algebraic_forms() {
        // Evaluate the eigenvalue difference once from the root form and once
        // from the Joukowsky form of lambda; they agree to 1e-12.
        let z = c(2.0, 0.0);
        let n = 100;
        let k = 2;
        let d = delta_step(z, n, k).unwrap();
        let (lp_cur, lm_cur) = lambda_pm_root_form(z, k as f64 / n as f64);
        let (lp_prev, _) = lambda_pm_root_form(z, (k - 1) as f64 / n as f64);
        let d_root = (lp_cur - lp_prev) / (lp_cur - lm_cur);
        assert!((d - d_root).norm() < 1e-12);
    }

    #[test]
    fn delta_rejects_out_of_range_and_parabolic() {
        assert!(delta_step(c(2.0, 0.0), 10, 1).is_err());
        assert!(delta_step(c(2.0, 0.0), 10, 11).is_err());
        // z^2 = k/N exactly: parabolic singularity.
        let n = 16;
        let k = 4;
        let z = c((k as f64 / n as f64).sqrt(), 0.0);
        match delta_step(z, n, k) {
            Err(Error::ParabolicStep { k: bad, .. }) => assert_eq!(bad, k),
            other => panic!("expected parabolic error, got {other:?}"),
        }
    }

    #[test]
    fn char_poly_single_step() {
        // N = 1: Phi_1 = z - b_1 / (2 sqrt(beta)).
        let beta = 2.0;
        let model = TridiagonalModel::new(vec![0.8], vec![]).unwrap();
        let traj = char_poly(c(2.0, 0.0), &model, beta);
        let phi1 = traj[0].reconstruct()[0];
        assert!((phi1 - (c(2.0, 0.0) - 0.8 / (2.0 * beta.sqrt()))).norm() < 1e-14);
    }

    #[test]
    fn char_poly_zero_noise_is_hermite() {
        let n = 64;
        let beta = 2.0;
        let model = TridiagonalModel::noiseless(n, beta);
        let z = c(1.7, 0.4);
        let phi = char_poly(z, &model, beta);
        let pi = hermite_pi_trajectory(z, n, n);
        for k in 0..n {
            let diff = (phi[k].log_first() - pi[k].log_first()).norm();
            assert!(diff < 1e-10, "n = {}: log gap {diff}", k + 1);
        }
    }

    #[test]
    fn char_poly_scaled_matches_unscaled() {
        // Small N where nothing overflows: compare against a bare recurrence.
        let n = 24;
        let beta = 2.0;
        let config = EnsembleConfig::new(n, beta, 99).unwrap();
        let model = sample_model_replica(&config, 0).unwrap();
        let z = c(1.3, 0.2);
        let traj = char_poly(z, &model, beta);

        let nf = n as f64;
        let mut prev = c(1.0, 0.0);
        let mut cur = z - model.diag[0] / (2.0 * (nf * beta).sqrt());
        for k in 2..=n {
            let next = (z - model.diag[k - 1] / (2.0 * (nf * beta).sqrt())) * cur
                - model.offdiag[k - 2].powi(2) / (4.0 * nf * beta) * prev;
            prev = cur;
            cur = next;
        }
        let scaled = traj[n - 1].reconstruct();
        assert!((scaled[0] - cur).norm() / cur.norm() < 1e-12);
        assert!((scaled[1] - prev).norm() / prev.norm() < 1e-12);
    }

    #[test]
    fn hermite_first_values() {
        let n = 25;
        let z = c(0.3, -0.7);
        let pi1 = hermite_pi(z, 1, n).reconstruct()[0];
        assert!((pi1 - z).norm() < 1e-15);
        let pi2 = hermite_pi(z, 2, n).reconstruct()[0];
        assert!((pi2 - (z * z - 1.0 / (4.0 * n as f64))).norm() < 1e-15);
    }

    #[test]
    fn factored_step_zero_noise_entries() {
        let n = 40;
        let beta = 2.0;
        let model = TridiagonalModel::noiseless(n, beta);
        let z = c(2.0, 0.0);
        let steps = factored_steps(z, &model, beta).unwrap();
        for s in &steps {
            assert!(s.eta_11.norm() < 1e-14);
            assert!(s.eta_22.norm() < 1e-14);
            let expect12 = s.rho_km1 * s.delta_k / (1.0 - s.delta_k);
            let expect21 = s.delta_k / (1.0 - s.delta_k);
            assert!((s.eta_12 - expect12).norm() < 1e-14);
            assert!((s.eta_21 - expect21).norm() < 1e-14);
            assert!((s.u_matrix.m[1][1] - s.rho_km1).norm() < 1e-14);
        }
    }

    #[test]
    fn factored_step_reconstructs_transfer_matrix() {
        // V_{k+1} U_k V_k^{-1} scaled by e^{log_scalar} equals T_k.
        let n = 30;
        let beta = 2.0;
        let config = EnsembleConfig::new(n, beta, 3).unwrap();
        let model = sample_model_replica(&config, 0).unwrap();
        let z = c(1.9, 0.3);
        let steps = factored_steps(z, &model, beta).unwrap();
        for s in &steps {
            let t_direct = transfer_matrix(z, &model, beta, s.k);
            let v_next = v_matrix(z, n, s.k + 1).unwrap();
            let v_cur = v_matrix(z, n, s.k).unwrap();
            let rebuilt = v_next
                .mul(&s.u_matrix)
                .mul(&v_cur.inverse())
                .scale(s.log_scalar.exp());
            let err = rebuilt.sub(&t_direct).max_abs_entry() / t_direct.max_abs_entry();
            assert!(err < 1e-12, "k = {}: err {err}", s.k);
        }
    }

    #[test]
    fn factored_product_reconstructs_trajectory() {
        // Full product identity: scalars * V_{N+1} [prod U_k] V_2^{-1}
        // applied to (Phi_1, 1) recovers (Phi_N, Phi_{N-1}).
        let n = 50;
        let beta = 2.0;
        let z = c(2.0, 0.0);
        for seed in 0..5 {
            let config = EnsembleConfig::new(n, beta, seed).unwrap();
            let model = sample_model_replica(&config, 0).unwrap();
            let steps = factored_steps(z, &model, beta).unwrap();
            let u_prod = product_desc(&steps.iter().map(|s| s.u_matrix).collect::<Vec<_>>());
            let log_scale: Complex64 = steps.iter().map(|s| s.log_scalar).sum();
            let v_last = v_matrix(z, n, n + 1).unwrap();
            let v_first = v_matrix(z, n, 2).unwrap();
            let phi1 = z - model.diag[0] / (2.0 * (n as f64 * beta).sqrt());
            let vec = v_last
                .mul(&u_prod)
                .mul(&v_first.inverse())
                .mul_vec([phi1, c(1.0, 0.0)]);
            let rebuilt = [vec[0] * log_scale.exp(), vec[1] * log_scale.exp()];
            let direct = char_poly(z, &model, beta)[n - 1].reconstruct();
            for i in 0..2 {
                let rel = (rebuilt[i] - direct[i]).norm() / direct[i].norm();
                assert!(rel < 1e-10, "seed {seed} component {i}: rel {rel}");
            }
        }
    }

    #[test]
    fn spectral_point_invariants() {
        let z = c(1.3, 0.4);
        for &t in &[0.2, 0.5, 1.0] {
            let p = SpectralPoint::new(z, t).unwrap();
            assert!(p.lambda_plus.norm() >= p.lambda_minus.norm());
            assert!((p.lambda_plus + p.lambda_minus - z).norm() < 1e-14);
            assert!((p.lambda_plus * p.lambda_minus - t / 4.0).norm() < 1e-14);
            // rho = J(z/sqrt(t))^2 = lambda_- / lambda_+.
            let ratio = p.lambda_minus / p.lambda_plus;
            assert!((p.j_value * p.j_value - ratio).norm() < 1e-13);
        }
        let p0 = SpectralPoint::new(z, 0.0).unwrap();
        assert_eq!(p0.j_value, c(0.0, 0.0));
        assert_eq!(p0.lambda_minus, c(0.0, 0.0));
    }

    #[test]
    fn full_factorization_flags_turning_point_inside_bulk() {
        // z = 0.8, N = 300: the step k = 192 sits within machine epsilon of
        // z^2 = k/N and must be flagged, not regularized; the hyperbolic
        // prefix up to N_H still factors cleanly.
        let n = 300;
        let beta = 2.0;
        let z = c(0.8, 0.0);
        let config = EnsembleConfig::new(n, beta, 8).unwrap();
        let model = sample_model_replica(&config, 0).unwrap();
        match factored_steps(z, &model, beta) {
            Err(Error::ParabolicStep { k, .. }) => assert_eq!(k, 192),
            other => panic!("expected a parabolic flag, got {other:?}"),
        }
        let w = HyperbolicWindow::new(z, n, 1.0);
        let steps = factored_steps_upto(z, &model, beta, w.n_h).unwrap();
        assert_eq!(steps.len(), w.n_h - 1);
    }

    #[test]
    fn regime_examples() {
        let n = 200;
        assert_eq!(classify_regime(c(2.0, 0.0), n, n), Regime::Hyperbolic);
        assert_eq!(classify_regime(c(0.5, 0.0), n, n), Regime::Elliptic);
        assert_eq!(classify_regime(c(1.0, 0.0), n, n), Regime::Parabolic);
    }

    #[test]
    fn domain_membership_examples() {
        assert!(in_domain_p(c(2.0, 0.0), 100, 1.0 / 9.0));
        let n = 100usize;
        let alpha = 1.0 / 9.0;
        let z = c(0.0, 0.5 * (n as f64).powf(-alpha));
        assert!(!in_domain_p(z, n, alpha));
        assert!(in_domain_dh(c(0.5, 0.0), 10_000, 0.1));
        assert!(!in_domain_dh(c(0.5, -0.1), 10_000, 0.1));
        assert!(!in_domain_dh(c(0.001, 0.0), 10_000, 0.1));
    }

    #[test]
    fn hyperbolic_window_margin_and_rho_decay() {
        // On a sample of z in the hyperbolic domain: |N z^2 - k| is at least
        // (omega_N + (N_H - k))/sqrt(2), and |rho_k| obeys the exponential
        // envelope exp(-(4/3) sqrt((omega_N + N_H - k)/N_H)).
        let n = 500;
        for &(re, im) in &[(0.6, 0.0), (0.8, 0.2), (1.2, 0.5), (0.4, 0.3)] {
            let z = c(re, im);
            assert!(in_domain_dh(z, n, 0.1), "z = {z} should be in the domain");
            let w = HyperbolicWindow::new(z, n, 1.0);
            for k in 1..=w.n_h {
                let k_hat = (w.n_h - k) as f64;
                let margin = (n as f64 * z * z - k as f64).norm();
                assert!(
                    margin >= (w.omega_n + k_hat) / 2.0f64.sqrt() - 1e-9,
                    "z = {z}, k = {k}: margin {margin}"
                );
                let r = rho(z, k as f64 / n as f64).norm();
                let envelope = (-(4.0 / 3.0) * ((w.omega_n + k_hat) / w.n_h as f64).sqrt()).exp();
                assert!(
                    r <= envelope + 1e-12,
                    "z = {z}, k = {k}: |rho| = {r}, envelope {envelope}"
                );
            }
        }
    }

    /// Empirical moments of the factored noise: |E eta_{k,ij}| and
    /// Var(eta_{k,ij}) stay below a fitted constant over (omega_N + k_hat),
    /// and the variance profile decreases in k_hat.
    #[test]
    fn factored_noise_moment_profile() {
        let n = 300;
        let beta = 2.0;
        let z = c(0.8, 0.0);
        let w = HyperbolicWindow::new(z, n, 1.0);
        let replicas = 4_000;
        let config = EnsembleConfig::new(n, beta, 31).unwrap();
        let m = w.n_h - 1; // steps k = 2..=n_h
        let mut sums = vec![[Complex64::new(0.0, 0.0); 4]; m];
        let mut sq_sums = vec![[0.0f64; 4]; m];
        for r in 0..replicas {
            let model = sample_model_replica(&config, r as u64).unwrap();
            let steps = factored_steps_upto(z, &model, beta, w.n_h).unwrap();
            for (i, s) in steps.iter().take(m).enumerate() {
                for (j, v) in [s.eta_11, s.eta_12, s.eta_21, s.eta_22].iter().enumerate() {
                    sums[i][j] += v;
                    sq_sums[i][j] += v.norm_sqr();
                }
            }
        }
        let mut fitted = 0.0f64;
        let mut var_profile = Vec::with_capacity(m);
        for i in 0..m {
            let k = i + 2;
            let k_hat = (w.n_h - k) as f64;
            let scale = w.omega_n + k_hat;
            let mut var_cell = 0.0f64;
            for j in 0..4 {
                let mean = sums[i][j] / replicas as f64;
                let var = sq_sums[i][j] / replicas as f64 - mean.norm_sqr();
                fitted = fitted.max(mean.norm() * scale).max(var * scale);
                var_cell = var_cell.max(var);
            }
            var_profile.push(var_cell);
        }
        // The constant exists and is modest for beta = 2.
        assert!(fitted < 3.0, "fitted constant {fitted}");
        // Decreasing in k_hat: variance near the turning point (large k,
        // small k_hat) dominates variance far from it.
        let half = m / 2;
        let far: f64 = var_profile[..half].iter().sum::<f64>() / half as f64;
        let near: f64 = var_profile[half..].iter().sum::<f64>() / (m - half) as f64;
        assert!(
            near > far,
            "variance should grow toward the turning point: near {near}, far {far}"
        );
    }
}
