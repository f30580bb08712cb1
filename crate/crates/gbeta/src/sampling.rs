//! Seeded sampling of the tridiagonal model and its normalized noise.
//!
//! The model is the random Jacobi matrix with independent entries
//! b_k ~ N(0, 2) on the diagonal and a_k ~ chi_{beta k} off the diagonal.
//! The eigenvalues of its N x N minor, scaled by 1/sqrt(4 N beta), follow
//! the Gaussian beta-ensemble whose limiting spectral density is the
//! semicircle on [-1, 1].
//!
//! The normalized noise attached to a draw is
//!
//! ```text
//! X_k = b_k / sqrt(2),   Y_k = (a_{k-1}^2 - beta (k-1)) / sqrt(2 beta (k-1)),   Y_1 = 0,
//! ```
//!
//! all independent with mean 0 and variance 1.

use std::io::Write;

use rand::RngCore;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{StreamKind, Substream};

/// Parameters of one ensemble draw. Identical `(n_dim, beta, seed)` always
/// reproduce the same model bit for bit.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub n_dim: usize,
    pub beta: f64,
    pub seed: u64,
}

impl EnsembleConfig {
    pub fn new(n_dim: usize, beta: f64, seed: u64) -> Result<Self> {
        if n_dim == 0 {
            return Err(Error::InvalidParameter {
                name: "n_dim",
                reason: "must be at least 1".into(),
            });
        }
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "beta",
                reason: format!("must be positive, got {beta}"),
            });
        }
        Ok(EnsembleConfig { n_dim, beta, seed })
    }
}

/// One draw of the tridiagonal model: `diag` holds b_1..b_N and `offdiag`
/// holds a_1..a_{N-1} (all nonnegative).
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalModel {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl TridiagonalModel {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::InvalidParameter {
                name: "offdiag",
                reason: format!(
                    "need len(offdiag) = len(diag) - 1, got {} and {}",
                    offdiag.len(),
                    diag.len()
                ),
            });
        }
        if offdiag.iter().any(|&a| a < 0.0) {
            return Err(Error::InvalidParameter {
                name: "offdiag",
                reason: "chi entries must be nonnegative".into(),
            });
        }
        Ok(TridiagonalModel { diag, offdiag })
    }

    /// The zero-noise model: b = 0 and a_k^2 = beta k exactly. Feeding it to
    /// the characteristic-polynomial recurrence reproduces the deterministic
    /// Hermite recurrence.
    pub fn noiseless(n_dim: usize, beta: f64) -> Self {
        TridiagonalModel {
            diag: vec![0.0; n_dim],
            offdiag: (1..n_dim).map(|k| (beta * k as f64).sqrt()).collect(),
        }
    }

    pub fn n_dim(&self) -> usize {
        self.diag.len()
    }
}

/// The centered unit-variance variables derived from a model at fixed beta.
/// Entry `x[k-1]` is X_k and `y[k-1]` is Y_k; `y[0]` is exactly 0.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSequence {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl NoiseSequence {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

/// Truncation level S for the high-probability envelope event.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TruncationConfig {
    pub level: f64,
}

impl TruncationConfig {
    pub fn new(level: f64) -> Result<Self> {
        if !level.is_finite() || level <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "level",
                reason: format!("must be positive, got {level}"),
            });
        }
        Ok(TruncationConfig { level })
    }
}

/// Draw of a chi random variable with parameter `alpha` (density on x > 0
/// proportional to x^{alpha-1} e^{-x^2/2}), via chi_alpha^2 ~ Gamma(alpha/2, scale 2).
pub fn sample_chi<R: RngCore>(alpha: f64, rng: &mut R) -> Result<f64> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "alpha",
            reason: format!("chi parameter must be positive, got {alpha}"),
        });
    }
    let gamma = Gamma::new(0.5 * alpha, 2.0).expect("validated shape/scale");
    Ok(gamma.sample(rng).sqrt())
}

/// Sample the model for replica 0 of the configured seed.
pub fn sample_model(config: &EnsembleConfig) -> Result<TridiagonalModel> {
    sample_model_replica(config, 0)
}

/// Sample the model for an arbitrary replica index. Every entry draws from
/// its own substream, so replicas may be generated concurrently and in any
/// order.
pub fn sample_model_replica(config: &EnsembleConfig, replica: u64) -> Result<TridiagonalModel> {
    EnsembleConfig::new(config.n_dim, config.beta, config.seed)?;
    let n = config.n_dim;
    let sqrt2 = std::f64::consts::SQRT_2;
    let diag: Vec<f64> = (1..=n)
        .map(|k| {
            let mut rng = Substream::new(config.seed, replica, k as u64, StreamKind::Diag);
            let g: f64 = StandardNormal.sample(&mut rng);
            sqrt2 * g
        })
        .collect();
    let offdiag: Vec<f64> = (1..n)
        .map(|k| {
            let mut rng = Substream::new(config.seed, replica, k as u64, StreamKind::OffDiag);
            sample_chi(config.beta * k as f64, &mut rng).expect("beta * k > 0")
        })
        .collect();
    Ok(TridiagonalModel { diag, offdiag })
}

/// The normalized noise of a model: X_k = b_k / sqrt(2) and
/// Y_k = (a_{k-1}^2 - beta (k-1)) / sqrt(2 beta (k-1)) with Y_1 = 0.
pub fn noise_from_model(model: &TridiagonalModel, beta: f64) -> NoiseSequence {
    let n = model.n_dim();
    let x: Vec<f64> = model
        .diag
        .iter()
        .map(|b| b / std::f64::consts::SQRT_2)
        .collect();
    let mut y = vec![0.0; n];
    for k in 2..=n {
        let a = model.offdiag[k - 2];
        let c = beta * (k - 1) as f64;
        y[k - 1] = (a * a - c) / (2.0 * c).sqrt();
    }
    NoiseSequence { x, y }
}

/// Whether the truncation event holds: |X_k| <= sqrt(S) for every k,
/// |Y_k| <= S for k <= floor(S/beta), and |Y_k| <= sqrt(S) for
/// k >= ceil(S/beta) (the boundary index belongs to the sqrt clause).
pub fn truncation_holds(noise: &NoiseSequence, trunc: &TruncationConfig, beta: f64) -> bool {
    let s = trunc.level;
    let sqrt_s = s.sqrt();
    let lo_end = (s / beta).floor() as usize;
    let hi_start = (s / beta).ceil() as usize;
    for (idx, (&x, &y)) in noise.x.iter().zip(noise.y.iter()).enumerate() {
        let k = idx + 1;
        if x.abs() > sqrt_s {
            return false;
        }
        if k <= lo_end && y.abs() > s {
            return false;
        }
        if k >= hi_start && y.abs() > sqrt_s {
            return false;
        }
    }
    true
}

/// Write a model as CSV with columns (index, b, a); the header comments
/// record N, beta, and seed. The last row has an empty `a` field.
pub fn write_model_csv<W: Write>(
    w: &mut W,
    model: &TridiagonalModel,
    config: &EnsembleConfig,
) -> Result<()> {
    writeln!(
        w,
        "# N={} beta={} seed={}",
        config.n_dim, config.beta, config.seed
    )?;
    writeln!(w, "index,b,a")?;
    for (i, b) in model.diag.iter().enumerate() {
        if i < model.offdiag.len() {
            writeln!(w, "{},{},{}", i + 1, b, model.offdiag[i])?;
        } else {
            writeln!(w, "{},{},", i + 1, b)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{StreamKind, Substream};
    use crate::stats;

    fn scalar_stream(seed: u64, idx: u64) -> Substream {
        Substream::new(seed, 0, idx, StreamKind::Scalar)
    }

    #[test]
    fn chi_rejects_nonpositive_alpha() {
        let mut rng = scalar_stream(1, 0);
        assert!(sample_chi(0.0, &mut rng).is_err());
        assert!(sample_chi(-1.0, &mut rng).is_err());
    }

    /// E[chi_alpha^2] = alpha; Monte Carlo mean of squares within 3 standard
    /// errors for alpha in {1, 2, 10}.
    #[test]
    fn chi_second_moment() {
        for (i, &alpha) in [1.0, 2.0, 10.0].iter().enumerate() {
            let mut rng = scalar_stream(42, i as u64);
            let n = 100_000;
            let sq: Vec<f64> = (0..n)
                .map(|_| sample_chi(alpha, &mut rng).unwrap().powi(2))
                .collect();
            let m = stats::mean(&sq);
            let se = stats::standard_error(&sq);
            assert!(
                (m - alpha).abs() <= 3.0 * se,
                "alpha={alpha}: mean {m} vs {alpha} (se {se})"
            );
        }
    }

    /// Var(chi_alpha^2) = 2 alpha, from the Gamma(alpha/2, scale 2) identity
    /// Var = (alpha/2) * 2^2. The closed form is cross-checked against direct
    /// quadrature of the chi density in `chi_variance_quadrature_oracle`.
    #[test]
    fn chi_square_variance() {
        for (i, &alpha) in [1.0, 2.0, 10.0].iter().enumerate() {
            let mut rng = scalar_stream(43, i as u64);
            let n = 200_000;
            let sq: Vec<f64> = (0..n)
                .map(|_| sample_chi(alpha, &mut rng).unwrap().powi(2))
                .collect();
            let v = stats::variance(&sq);
            let expect = 2.0 * alpha;
            assert!(
                (v - expect).abs() <= 0.05 * expect,
                "alpha={alpha}: var {v} vs {expect}"
            );
        }
    }

    /// Brute-force oracle: moments of the chi density by quadrature agree
    /// with the Gamma identities E[chi^2] = alpha, Var(chi^2) = 2 alpha.
    #[test]
    fn chi_variance_quadrature_oracle() {
        let rule = crate::numeric::gauss_legendre(64);
        for &alpha in &[1.0, 2.0, 10.0] {
            // Integrate x^{alpha-1} e^{-x^2/2} * x^p on [0, 30] piecewise.
            let moment = |p: f64| -> f64 {
                let mut total = 0.0;
                for seg in 0..30 {
                    let (a, b) = (seg as f64, seg as f64 + 1.0);
                    total += crate::numeric::integrate_gl(
                        |x: f64| x.powf(alpha - 1.0 + p) * (-0.5 * x * x).exp(),
                        a,
                        b,
                        &rule,
                    );
                }
                total
            };
            let z = moment(0.0);
            let m2 = moment(2.0) / z;
            let m4 = moment(4.0) / z;
            assert!((m2 - alpha).abs() < 1e-10 * alpha);
            assert!((m4 - m2 * m2 - 2.0 * alpha).abs() < 1e-9 * alpha);
        }
    }

    /// chi_2^2 is Exp(rate 1/2): Kolmogorov-Smirnov against that CDF stays
    /// below the 1% critical value 1.63 / sqrt(n).
    #[test]
    fn chi2_squared_is_exponential() {
        let mut rng = scalar_stream(7, 0);
        let n = 100_000;
        let samples: Vec<f64> = (0..n)
            .map(|_| sample_chi(2.0, &mut rng).unwrap().powi(2))
            .collect();
        let d = stats::ks_statistic(&samples, |x| 1.0 - (-0.5 * x).exp());
        let critical = 1.63 / (n as f64).sqrt();
        assert!(d < critical, "KS = {d}, critical = {critical}");
    }

    #[test]
    fn model_shapes_and_determinism() {
        let config = EnsembleConfig::new(1, 2.0, 5).unwrap();
        let one = sample_model(&config).unwrap();
        assert_eq!(one.diag.len(), 1);
        assert!(one.offdiag.is_empty());

        let config = EnsembleConfig::new(64, 2.0, 5).unwrap();
        let a = sample_model(&config).unwrap();
        let b = sample_model(&config).unwrap();
        assert_eq!(a, b);
        let c = sample_model(&EnsembleConfig::new(64, 2.0, 6).unwrap()).unwrap();
        assert_ne!(a, c);
        assert!(a.offdiag.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn model_moments() {
        let n_models = 100_000;
        let config = EnsembleConfig::new(4, 2.0, 11).unwrap();
        let mut diag_all = Vec::with_capacity(4 * n_models);
        let mut off_sq: Vec<Vec<f64>> = (0..3).map(|_| Vec::with_capacity(n_models)).collect();
        for r in 0..n_models {
            let m = sample_model_replica(&config, r as u64).unwrap();
            diag_all.extend_from_slice(&m.diag);
            for (i, &a) in m.offdiag.iter().enumerate() {
                off_sq[i].push(a * a);
            }
        }
        let dm = stats::mean(&diag_all);
        let dse = stats::standard_error(&diag_all);
        assert!(dm.abs() <= 3.0 * dse, "diag mean {dm} (se {dse})");
        let dv = stats::variance(&diag_all);
        assert!((dv - 2.0).abs() <= 0.05 * 2.0, "diag var {dv}");
        // E[a_i^2] = beta * i for the chi_{beta i} entries.
        for (i, sq) in off_sq.iter().enumerate() {
            let expect = 2.0 * (i + 1) as f64;
            let m = stats::mean(sq);
            let se = stats::standard_error(sq);
            assert!(
                (m - expect).abs() <= 3.0 * se,
                "offdiag[{i}]: {m} vs {expect}"
            );
        }
    }

    #[test]
    fn noise_definitions() {
        // b = (sqrt(2), 0), a_1 = sqrt(beta): X_1 = 1, Y_2 = 0.
        let beta = 3.0f64;
        let model =
            TridiagonalModel::new(vec![std::f64::consts::SQRT_2, 0.0], vec![beta.sqrt()]).unwrap();
        let noise = noise_from_model(&model, beta);
        assert_eq!(noise.y[0], 0.0);
        assert!((noise.x[0] - 1.0).abs() < 1e-15);
        assert!(noise.y[1].abs() < 1e-15);
    }

    /// mean(Y_k) within 3 SE of 0 and var(Y_k) within 5% of 1 for
    /// k in {2, 10, 100}.
    #[test]
    fn noise_moments() {
        let n_models = 100_000;
        let config = EnsembleConfig::new(100, 2.0, 13).unwrap();
        let mut ys: Vec<Vec<f64>> = (0..3).map(|_| Vec::with_capacity(n_models)).collect();
        let ks = [2usize, 10, 100];
        for r in 0..n_models {
            let m = sample_model_replica(&config, r as u64).unwrap();
            let noise = noise_from_model(&m, config.beta);
            for (slot, &k) in ks.iter().enumerate() {
                ys[slot].push(noise.y[k - 1]);
            }
        }
        for (slot, &k) in ks.iter().enumerate() {
            let m = stats::mean(&ys[slot]);
            let se = stats::standard_error(&ys[slot]);
            let v = stats::variance(&ys[slot]);
            assert!(m.abs() <= 3.0 * se, "k={k}: mean {m} (se {se})");
            assert!((v - 1.0).abs() <= 0.05, "k={k}: var {v}");
        }
    }

    /// Lag-1 correlation between X entries and between Y entries across
    /// replicas stays below 3/sqrt(n): the substreams are disjoint.
    #[test]
    fn noise_independence_lag1() {
        let n_models = 10_000;
        let config = EnsembleConfig::new(16, 2.0, 17).unwrap();
        let mut x_pairs = (Vec::new(), Vec::new());
        let mut y_pairs = (Vec::new(), Vec::new());
        for r in 0..n_models {
            let m = sample_model_replica(&config, r as u64).unwrap();
            let noise = noise_from_model(&m, config.beta);
            x_pairs.0.push(noise.x[4]);
            x_pairs.1.push(noise.x[5]);
            y_pairs.0.push(noise.y[4]);
            y_pairs.1.push(noise.y[5]);
        }
        let corr = |a: &[f64], b: &[f64]| -> f64 {
            let (ma, mb) = (stats::mean(a), stats::mean(b));
            let cov: f64 = a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - ma) * (y - mb))
                .sum::<f64>()
                / (a.len() - 1) as f64;
            cov / (stats::variance(a) * stats::variance(b)).sqrt()
        };
        let bound = 3.0 / (n_models as f64).sqrt();
        let cx = corr(&x_pairs.0, &x_pairs.1);
        let cy = corr(&y_pairs.0, &y_pairs.1);
        assert!(cx.abs() < bound, "corr(X_5, X_6) = {cx}");
        assert!(cy.abs() < bound, "corr(Y_5, Y_6) = {cy}");
    }

    #[test]
    fn truncation_clauses() {
        let beta = 2.0;
        let trunc = TruncationConfig::new(4.0).unwrap();
        let zero = NoiseSequence {
            x: vec![0.0; 8],
            y: vec![0.0; 8],
        };
        assert!(truncation_holds(&zero, &trunc, beta));

        // X_1 = 2 sqrt(S) violates the X clause.
        let mut bad_x = zero.clone();
        bad_x.x[0] = 2.0 * trunc.level.sqrt();
        assert!(!truncation_holds(&bad_x, &trunc, beta));

        // S = 4, beta = 2: k <= 2 allows |Y| up to S, k >= 2 demands sqrt(S).
        // The boundary index k = 2 belongs to both clauses, so the sqrt
        // clause wins there.
        let mut y_low = zero.clone();
        y_low.y[0] = 3.0; // k = 1: 3 <= S = 4 and k < ceil(S/beta) = 2
        assert!(truncation_holds(&y_low, &trunc, beta));
        let mut y_boundary = zero.clone();
        y_boundary.y[1] = 3.0; // k = 2: violates |Y_2| <= sqrt(S) = 2
        assert!(!truncation_holds(&y_boundary, &trunc, beta));
        let mut y_tail = zero.clone();
        y_tail.y[7] = 2.5; // k = 8: violates the sqrt clause
        assert!(!truncation_holds(&y_tail, &trunc, beta));
    }

    /// Failure frequency of the truncation event decreases monotonically in
    /// S over {4, 9, 16} at N = 100, beta = 2.
    #[test]
    fn truncation_failure_decays_in_s() {
        let n_models = 10_000;
        let config = EnsembleConfig::new(100, 2.0, 23).unwrap();
        let mut failures = [0usize; 3];
        let levels = [4.0, 9.0, 16.0];
        for r in 0..n_models {
            let m = sample_model_replica(&config, r as u64).unwrap();
            let noise = noise_from_model(&m, config.beta);
            for (slot, &s) in levels.iter().enumerate() {
                let trunc = TruncationConfig::new(s).unwrap();
                if !truncation_holds(&noise, &trunc, config.beta) {
                    failures[slot] += 1;
                }
            }
        }
        assert!(
            failures[0] > failures[1] && failures[1] > failures[2],
            "failure counts {failures:?} should decrease in S"
        );
    }

    #[test]
    fn csv_export_shape() {
        let config = EnsembleConfig::new(3, 2.0, 1).unwrap();
        let model = sample_model(&config).unwrap();
        let mut buf = Vec::new();
        write_model_csv(&mut buf, &model, &config).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# N=3 beta=2 seed=1"));
        assert_eq!(lines[1], "index,b,a");
        assert_eq!(lines.len(), 5);
        assert!(lines[4].ends_with(','), "last row has no offdiagonal");
    }
}
