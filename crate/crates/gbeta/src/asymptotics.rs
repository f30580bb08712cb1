//! Deterministic Hermite asymptotics, a Sturm-sequence eigensolver, and the
//! central limit theorem for linear eigenvalue statistics.
//!
//! The g-function g_t(z) = int log(z - x) rho_t(x) dx (log-potential of the
//! scaled semicircle) enters through t g_t(z) = int_0^t log lambda_+(u) du,
//! and powers the Plancherel-Rotach approximation
//! pi_n(z) ~ ((gamma + 1/gamma)/2) exp(n g_t(z)) away from the turning
//! point, with gamma(w) = ((w+1)/(w-1))^{1/4} at w = z/sqrt(t). At the
//! turning point the Hermite polynomials obey Airy asymptotics instead.
//!
//! The eigensolver runs bisection on the Sturm pivot counts of the shifted
//! tridiagonal matrix; it reuses the characteristic-polynomial recurrence in
//! ratio form (the pivots are q_k = -Phi_k / Phi_{k-1} up to scaling), so
//! eigenvalue counts come with guaranteed bracketing.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{cheb_t, gauss_legendre, integrate_gl, ln_gamma};
use crate::sampling::TridiagonalModel;
use crate::transfer::{classify_regime, lambda_pm, Regime};

/// All eigenvalues of a symmetric tridiagonal matrix by bisection on the
/// Sturm pivot count. `tol` is an absolute tolerance on each eigenvalue.
/// Returns the sorted eigenvalues and the largest final bracket half-width.
pub fn sturm_eigenvalues(diag: &[f64], offdiag: &[f64], tol: f64) -> (Vec<f64>, f64) {
    let n = diag.len();
    assert!(n >= 1 && offdiag.len() + 1 == n);
    let esq: Vec<f64> = offdiag.iter().map(|e| e * e).collect();

    // Gershgorin bracket.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { offdiag[i - 1].abs() } else { 0.0 }
            + if i < n - 1 { offdiag[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let pivmin = 1e-300;

    // Number of eigenvalues below x = number of negative pivots in the
    // LDL^T factorization of A - xI. A vanishing pivot is clamped to
    // -pivmin *before* the sign test: an exact zero pivot means x is an
    // eigenvalue of a leading minor and must count as crossed, otherwise
    // structurally symmetric matrices (zero diagonal) lose an eigenvalue
    // at x = 0.
    let count_below = |x: f64| -> usize {
        let mut count = 0usize;
        let mut q = diag[0] - x;
        for i in 0..n {
            if i > 0 {
                q = (diag[i] - x) - esq[i - 1] / q;
            }
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };

    let mut eigs = Vec::with_capacity(n);
    let mut worst = 0.0f64;
    for j in 0..n {
        let (mut a, mut b) = (lo, hi);
        while b - a > tol {
            let mid = 0.5 * (a + b);
            if count_below(mid) > j {
                b = mid;
            } else {
                a = mid;
            }
        }
        worst = worst.max(0.5 * (b - a));
        eigs.push(0.5 * (a + b));
    }
    (eigs, worst)
}

/// Eigenvalues of the scaled model.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    /// Largest bisection bracket half-width: a guaranteed bound on the
    /// eigenvalue error.
    pub residual: f64,
}

/// Eigenvalues of A / sqrt(4 N beta) restricted to the N x N minor, by
/// Sturm bisection at absolute tolerance 1e-12 * max(1, spectral radius).
pub fn tridiag_eigenvalues(model: &TridiagonalModel, beta: f64) -> SpectrumResult {
    let n = model.n_dim() as f64;
    let scale = 2.0 * (n * beta).sqrt();
    let diag: Vec<f64> = model.diag.iter().map(|b| b / scale).collect();
    let offdiag: Vec<f64> = model.offdiag.iter().map(|a| a / scale).collect();
    let radius = diag
        .iter()
        .map(|d| d.abs())
        .chain(offdiag.iter().map(|e| 2.0 * e.abs()))
        .fold(1.0f64, f64::max);
    let tol = 1e-12 * radius.max(1.0);
    let (eigenvalues, residual) = sturm_eigenvalues(&diag, &offdiag, tol);
    SpectrumResult {
        eigenvalues,
        residual,
    }
}

/// g_t(z) and the Plancherel-Rotach prefactor ingredient gamma(z/sqrt(t)).
#[derive(Debug, Clone, Copy)]
pub struct GFunctionEval {
    pub z: Complex64,
    pub t: f64,
    pub g_value: Complex64,
    pub gamma_value: Complex64,
}

fn log_lambda_plus(z: Complex64, u: f64) -> Complex64 {
    let (lp, _) = lambda_pm(z, u).expect("u >= 0");
    lp.ln()
}

/// Quadrature of int_0^t log lambda_+(u) du with dyadic panel refinement
/// toward u = t, where the integrand loses smoothness when z^2 is close to
/// t. Requires Re z > 0 (right half-plane convention keeps the logarithm on
/// one branch) and z off the cut [-sqrt(t), sqrt(t)].
pub fn g_function(z: Complex64, t: f64) -> Result<GFunctionEval> {
    g_function_with_panels(z, t, 40)
}

fn g_function_with_panels(z: Complex64, t: f64, levels: usize) -> Result<GFunctionEval> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "t",
            reason: format!("time must lie in (0, 1], got {t}"),
        });
    }
    if z.im == 0.0 && z.re.abs() <= t.sqrt() {
        return Err(Error::CutViolation {
            point: z,
            half_width: t.sqrt(),
        });
    }
    if z.re <= 0.0 {
        return Err(Error::DomainViolation {
            z,
            domain: "the right half-plane (required for a single log branch)",
        });
    }
    let rule = gauss_legendre(16);
    let mut total = Complex64::new(0.0, 0.0);
    // Dyadic shells accumulating toward u = t: [0, t/2], [t/2, 3t/4], ...
    let mut left = 0.0f64;
    for level in 0..levels {
        let right = if level + 1 == levels {
            t
        } else {
            t * (1.0 - 0.5f64.powi(level as i32 + 1))
        };
        let re = integrate_gl(|u| log_lambda_plus(z, u).re, left, right, &rule);
        let im = integrate_gl(|u| log_lambda_plus(z, u).im, left, right, &rule);
        total += Complex64::new(re, im);
        left = right;
    }
    let w = z / t.sqrt();
    let gamma_value = ((w + 1.0) / (w - 1.0)).powf(0.25);
    Ok(GFunctionEval {
        z,
        t,
        g_value: total / t,
        gamma_value,
    })
}

/// Plancherel-Rotach value ((gamma + 1/gamma)/2) exp(n g_t(z)) with
/// t = n/N, as a log to dodge overflow.
pub fn plancherel_rotach_log(n: usize, n_dim: usize, z: Complex64) -> Result<Complex64> {
    if classify_regime(z, n_dim, n) != Regime::Hyperbolic {
        return Err(Error::RegimeViolation {
            n,
            n_dim,
            z,
            expected: "hyperbolic",
        });
    }
    let t = n as f64 / n_dim as f64;
    let gf = g_function(z, t)?;
    let prefactor = 0.5 * (gf.gamma_value + 1.0 / gf.gamma_value);
    Ok(prefactor.ln() + n as f64 * gf.g_value)
}

/// Plancherel-Rotach main-term value; overflows for n g beyond ~709.
pub fn plancherel_rotach(n: usize, n_dim: usize, z: Complex64) -> Result<Complex64> {
    Ok(plancherel_rotach_log(n, n_dim, z)?.exp())
}

/// Airy function of the first kind by its Maclaurin series; |x| <= 8 keeps
/// the alternating-sum cancellation below the 1e-10 tail budget.
pub fn airy_ai(x: f64) -> Result<f64> {
    if x.abs() > 8.0 {
        return Err(Error::InvalidParameter {
            name: "x",
            reason: format!("series budget covers |x| <= 8, got {x}"),
        });
    }
    // Ai(x) = alpha f(x) - beta g(x) with
    // f = sum x^{3k} prod..., term ratio x^3 / ((3k+2)(3k+3)),
    // g = x * (term ratio x^3 / ((3k+3)(3k+4))).
    let alpha = (-ln_gamma(2.0 / 3.0)).exp() / 3.0f64.powf(2.0 / 3.0);
    let beta = (-ln_gamma(1.0 / 3.0)).exp() / 3.0f64.powf(1.0 / 3.0);
    let x3 = x * x * x;
    let mut f_term = 1.0;
    let mut f_sum = 1.0;
    let mut g_term = x;
    let mut g_sum = x;
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        f_term *= x3 / ((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        g_term *= x3 / ((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        f_sum += f_term;
        g_sum += g_term;
        k += 1;
        if f_term.abs() < 1e-18 * f_sum.abs().max(1.0)
            && g_term.abs() < 1e-18 * g_sum.abs().max(1.0)
        {
            break;
        }
        if k > 300 {
            break;
        }
    }
    Ok(alpha * f_sum - beta * g_sum)
}

/// Ratio of pi_n(z) to the turning-point Airy approximation
/// (2 pi)^{1/4} e^{N z^2} 2^{-n} n^{-1/12} sqrt(n!/N^n) Ai(-k) with
/// k = (n - N z^2) (N z^2)^{-1/3}. Factorials live in log space.
pub fn airy_regime_ratio(n: usize, n_dim: usize, z: Complex64) -> Result<f64> {
    if z.im.abs() > 1e-12 {
        return Err(Error::RegimeViolation {
            n,
            n_dim,
            z,
            expected: "parabolic (real turning point)",
        });
    }
    if classify_regime(z, n_dim, n) != Regime::Parabolic {
        return Err(Error::RegimeViolation {
            n,
            n_dim,
            z,
            expected: "parabolic",
        });
    }
    let x = z.re;
    let nf = n as f64;
    let nz2 = n_dim as f64 * x * x;
    let k = (nf - nz2) / nz2.cbrt();
    let ai = airy_ai(-k)?;
    if ai.abs() < 1e-3 {
        return Err(Error::AiryConditioning { value: ai });
    }
    let log_abs_formula =
        0.25 * (2.0 * std::f64::consts::PI).ln() + nz2 - nf * 2.0f64.ln() - nf.ln() / 12.0
            + 0.5 * (ln_gamma(nf + 1.0) - nf * (n_dim as f64).ln())
            + ai.abs().ln();
    let log_formula = Complex64::new(
        log_abs_formula,
        if ai < 0.0 { std::f64::consts::PI } else { 0.0 },
    );
    let log_pi = crate::transfer::hermite_pi(z, n, n_dim).log_first();
    let ratio = (log_pi - log_formula).exp();
    Ok(ratio.re)
}

/// Fourier-Chebyshev coefficients f_0..f_order of a function on [-1, 1],
/// in the normalization f = f_0 + 2 sum_{k>=1} f_k T_k.
#[derive(Debug, Clone)]
pub struct ChebyshevSeries {
    pub coeffs: Vec<f64>,
    pub source: String,
}

impl ChebyshevSeries {
    /// Series reconstruction at x.
    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = self.coeffs[0];
        for (k, &c) in self.coeffs.iter().enumerate().skip(1) {
            acc += 2.0 * c * cheb_t(k, x);
        }
        acc
    }

    /// The spectral form factor Sigma(f) = sum_{k>=1} k f_k^2.
    pub fn sigma(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| k as f64 * c * c)
            .sum()
    }

    /// The boundary functional m(f) = (f(1) + f(-1))/4 - f_0/2.
    pub fn m_functional(&self, f_at_1: f64, f_at_m1: f64) -> f64 {
        0.25 * (f_at_1 + f_at_m1) - 0.5 * self.coeffs[0]
    }
}

/// Gauss-Chebyshev quadrature of f_k = int f T_k / (pi sqrt(1 - x^2)) dx for
/// k = 0..=order; exact to 1e-10 for polynomials up to the given order.
pub fn chebyshev_coeffs<F: Fn(f64) -> f64>(f: F, order: usize, source: &str) -> ChebyshevSeries {
    let m = (4 * (order + 1)).max(128);
    let mf = m as f64;
    let samples: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let theta = (2.0 * i as f64 + 1.0) * std::f64::consts::PI / (2.0 * mf);
            (theta, f(theta.cos()))
        })
        .collect();
    let coeffs = (0..=order)
        .map(|k| {
            samples
                .iter()
                .map(|&(theta, fv)| fv * (k as f64 * theta).cos())
                .sum::<f64>()
                / mf
        })
        .collect();
    ChebyshevSeries {
        coeffs,
        source: source.to_string(),
    }
}

/// Predicted limit of the centered linear statistic sum f(lambda_j) -
/// N int f rho: mean (1 - 2/beta) m(f) and variance (2/beta) Sigma(f).
pub fn clt_prediction(series: &ChebyshevSeries, beta: f64, f_at_pm1: (f64, f64)) -> (f64, f64) {
    let m = series.m_functional(f_at_pm1.0, f_at_pm1.1);
    let mean = (1.0 - 2.0 / beta) * m;
    let variance = 2.0 / beta * series.sigma();
    (mean, variance)
}

/// int f rho dx against the semicircle rho = (2/pi) sqrt(1 - x^2), by
/// Gauss-Chebyshev (second kind) quadrature.
pub fn semicircle_integral<F: Fn(f64) -> f64>(f: F) -> f64 {
    let m = 256usize;
    let step = std::f64::consts::PI / (m as f64 + 1.0);
    let mut acc = 0.0;
    for i in 1..=m {
        let theta = i as f64 * step;
        let s = theta.sin();
        acc += s * s * f(theta.cos());
    }
    acc * 2.0 / (m as f64 + 1.0)
}

/// The centered linear statistic sum_j f(lambda_j) - N int f rho dx of one
/// model draw, eigenvalues from the Sturm solver.
pub fn clt_statistic<F: Fn(f64) -> f64>(f: F, model: &TridiagonalModel, beta: f64) -> Result<f64> {
    let spectrum = tridiag_eigenvalues(model, beta);
    let sum: f64 = spectrum.eigenvalues.iter().map(|&l| f(l)).sum();
    Ok(sum - model.n_dim() as f64 * semicircle_integral(&f))
}

/// Zeros of pi_N: eigenvalues of the Jacobi matrix with zero diagonal and
/// off-diagonals sqrt(k / (4N)).
pub fn hermite_zeros(n_dim: usize) -> Vec<f64> {
    let diag = vec![0.0; n_dim];
    let offdiag: Vec<f64> = (1..n_dim)
        .map(|k| (k as f64 / (4.0 * n_dim as f64)).sqrt())
        .collect();
    sturm_eigenvalues(&diag, &offdiag, 1e-13).0
}

/// Discrepancy sum_j f(z_j) - N int f rho + m(f) over the zeros of pi_N;
/// the identity predicts O(1/N).
pub fn hermite_zero_identity<F: Fn(f64) -> f64>(f: F, n_dim: usize) -> f64 {
    let zeros = hermite_zeros(n_dim);
    let sum: f64 = zeros.iter().map(|&x| f(x)).sum();
    let series = chebyshev_coeffs(&f, 48, "hermite-zero test function");
    let m = series.m_functional(f(1.0), f(-1.0));
    sum - n_dim as f64 * semicircle_integral(&f) + m
}
