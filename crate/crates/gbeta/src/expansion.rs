//! Perturbative expansion of matrix products around their diagonal parts.
//!
//! For families U_k with V_k = diag(U_k), the product over k = p..n splits
//! by the number j of "perturbed" factors:
//!
//! ```text
//! psi^(j)_{n,p} = sum over |S| = j subsets of {p..n} of the ordered product
//!                 with (U_k - V_k) at indices in S and V_k elsewhere,
//! prod_{k=p}^n U_k = sum_j psi^(j)_{n,p}.
//! ```
//!
//! Products run in descending index order (highest index leftmost). With
//! diagonal V the orders alternate: even-order terms are diagonal, odd-order
//! terms are anti-diagonal, exactly.
//!
//! `psi_bruteforce` sums subsets literally (the oracle); `psi_recursive`
//! computes the same matrices in O((n-p) j) work; `psi_tail` is the
//! remainder beyond a given order. On top of these sit the hyperbolic
//! collapse diagnostics: the distance of the transfer product from
//! diag(1, 0) and its Monte Carlo deviation table.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mat2::{product_desc, Mat2};
use crate::sampling::{sample_model_replica, EnsembleConfig};
use crate::stats::wilson_interval;
use crate::transfer::{factored_steps, factored_steps_upto, FactoredStep, HyperbolicWindow};

/// Largest index span the subset-sum oracle accepts (2^20 subsets).
pub const BRUTE_FORCE_MAX_SPAN: usize = 20;

/// One term of the expansion: the order j, the index range [p, n], and the
/// 2x2 matrix value.
#[derive(Debug, Clone, Copy)]
pub struct PsiTerm {
    pub order: usize,
    pub p_idx: usize,
    pub n_idx: usize,
    pub matrix: Mat2,
}

/// A family of matrices U_1..U_m with their comparison family V. By default
/// V_k = diag(U_k).
#[derive(Debug, Clone)]
pub struct MatrixFamily {
    pub u_list: Vec<Mat2>,
    pub v_list: Vec<Mat2>,
}

impl MatrixFamily {
    /// Family with V_k = diag(U_k).
    pub fn from_u(u_list: Vec<Mat2>) -> Self {
        let v_list = u_list.iter().map(Mat2::diagonal_part).collect();
        MatrixFamily { u_list, v_list }
    }

    pub fn new(u_list: Vec<Mat2>, v_list: Vec<Mat2>) -> Result<Self> {
        if u_list.len() != v_list.len() {
            return Err(Error::InvalidParameter {
                name: "v_list",
                reason: "u_list and v_list must have equal length".into(),
            });
        }
        Ok(MatrixFamily { u_list, v_list })
    }

    /// Family built from factored transfer steps; family index i holds the
    /// step with label k = i + 1 (steps start at k = 2).
    pub fn from_steps(steps: &[FactoredStep]) -> Self {
        MatrixFamily::from_u(steps.iter().map(|s| s.u_matrix).collect())
    }

    pub fn len(&self) -> usize {
        self.u_list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u_list.is_empty()
    }

    fn check_range(&self, p: usize, n: usize) -> Result<()> {
        if p < 1 || n > self.len() || n + 1 < p {
            return Err(Error::InvalidParameter {
                name: "range",
                reason: format!(
                    "need 1 <= p <= n + 1 <= len + 1 = {}, got p = {p}, n = {n}",
                    self.len() + 1
                ),
            });
        }
        Ok(())
    }

    fn u(&self, k: usize) -> &Mat2 {
        &self.u_list[k - 1]
    }

    fn v(&self, k: usize) -> &Mat2 {
        &self.v_list[k - 1]
    }

    fn perturbation(&self, k: usize) -> Mat2 {
        self.u(k).sub(self.v(k))
    }
}

/// Exact subset sum for psi^(j)_{n,p}; guarded to spans of at most 20
/// indices. The empty range (n = p - 1) gives the identity at order 0 and
/// zero otherwise.
pub fn psi_bruteforce(family: &MatrixFamily, j: usize, p: usize, n: usize) -> Result<PsiTerm> {
    family.check_range(p, n)?;
    let span = n + 1 - p;
    if span > BRUTE_FORCE_MAX_SPAN {
        return Err(Error::OracleGuard {
            span,
            max: BRUTE_FORCE_MAX_SPAN,
        });
    }
    let mut acc = Mat2::zero();
    for mask in 0u32..(1u32 << span) {
        if mask.count_ones() as usize != j {
            continue;
        }
        let mut prod = Mat2::identity();
        for (offset, k) in (p..=n).enumerate() {
            let factor = if mask >> offset & 1 == 1 {
                family.perturbation(k)
            } else {
                *family.v(k)
            };
            prod = factor.mul(&prod);
        }
        acc = acc.add(&prod);
    }
    Ok(PsiTerm {
        order: j,
        p_idx: p,
        n_idx: n,
        matrix: acc,
    })
}

/// All orders 0..=j_max of psi^(.)_{n,p} by the one-step recurrence
/// psi^(j)_{m,p} = V_m psi^(j)_{m-1,p} + (U_m - V_m) psi^(j-1)_{m-1,p}.
pub fn psi_all_orders(
    family: &MatrixFamily,
    j_max: usize,
    p: usize,
    n: usize,
) -> Result<Vec<Mat2>> {
    family.check_range(p, n)?;
    let mut layers = vec![Mat2::zero(); j_max + 1];
    layers[0] = Mat2::identity();
    for m in p..=n {
        let pert = family.perturbation(m);
        let v = family.v(m);
        for j in (0..=j_max).rev() {
            let mut next = v.mul(&layers[j]);
            if j > 0 {
                next = next.add(&pert.mul(&layers[j - 1]));
            }
            layers[j] = next;
        }
    }
    Ok(layers)
}

/// psi^(j)_{n,p} in O((n-p) j) matrix operations. Agrees with
/// `psi_bruteforce` wherever both are defined.
pub fn psi_recursive(family: &MatrixFamily, j: usize, p: usize, n: usize) -> Result<PsiTerm> {
    let layers = psi_all_orders(family, j, p, n)?;
    Ok(PsiTerm {
        order: j,
        p_idx: p,
        n_idx: n,
        matrix: layers[j],
    })
}

/// Ordered product prod_{k=p}^n U_k (descending index order).
pub fn full_product(family: &MatrixFamily, p: usize, n: usize) -> Result<Mat2> {
    family.check_range(p, n)?;
    if n + 1 == p {
        return Ok(Mat2::identity());
    }
    Ok(product_desc(&family.u_list[p - 1..n]))
}

/// The remainder psi^(>j)_{n,p} = prod U - sum_{l <= j} psi^(l)_{n,p}.
pub fn psi_tail(family: &MatrixFamily, j: usize, p: usize, n: usize) -> Result<PsiTerm> {
    let layers = psi_all_orders(family, j, p, n)?;
    let mut acc = full_product(family, p, n)?;
    for layer in &layers {
        acc = acc.sub(layer);
    }
    Ok(PsiTerm {
        order: j,
        p_idx: p,
        n_idx: n,
        matrix: acc,
    })
}

/// Operator-norm distance of the transfer product prod_{k <= upto} U_k from
/// the projector diag(1, 0).
pub fn projector_distance(
    z: Complex64,
    model: &crate::sampling::TridiagonalModel,
    beta: f64,
    upto: usize,
) -> Result<f64> {
    let steps = factored_steps(z, model, beta)?;
    Ok(projector_distance_from_steps(&steps, upto))
}

/// Same, from precomputed steps. `upto` is a step label (k), so the product
/// runs over the steps with k <= upto.
pub fn projector_distance_from_steps(steps: &[FactoredStep], upto: usize) -> f64 {
    let mut acc = Mat2::identity();
    for s in steps.iter().take_while(|s| s.k <= upto) {
        acc = s.u_matrix.mul(&acc);
    }
    acc.sub(&Mat2::e11()).op_norm()
}

/// |psi^(0)_{n,p,22}| = |prod_{k=p}^n (rho_{k-1} - eta_{k,22})|, the decaying
/// 22-product of the hyperbolic block. Empty ranges give 1.
pub fn psi0_decay(
    z: Complex64,
    model: &crate::sampling::TridiagonalModel,
    beta: f64,
    p: usize,
    n: usize,
) -> Result<f64> {
    if n < p {
        return Ok(1.0);
    }
    if p < 2 {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: "factored steps start at k = 2".into(),
        });
    }
    if n > model.n_dim() {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: format!("n = {n} exceeds the model dimension {}", model.n_dim()),
        });
    }
    let steps = factored_steps_upto(z, model, beta, n)?;
    let mut log_abs = 0.0f64;
    for s in &steps[(p - 2)..=(n - 2)] {
        log_abs += s.u_matrix.m[1][1].norm().ln();
    }
    Ok(log_abs.exp())
}

/// Configuration of the deviation harness for the projector collapse.
#[derive(Debug, Clone)]
pub struct DeviationConfig {
    pub n_values: Vec<usize>,
    pub z: Complex64,
    pub beta: f64,
    pub omega: f64,
    pub replicas: usize,
    pub epsilons: Vec<f64>,
    pub seed: u64,
}

/// One cell of the deviation table: the empirical tail
/// P[ || prod U - diag(1,0) || >= epsilon ] with its 95% Wilson interval.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DeviationRow {
    pub n_dim: usize,
    pub z_re: f64,
    pub z_im: f64,
    pub beta: f64,
    pub omega: f64,
    pub epsilon: f64,
    pub tail: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub replicas: usize,
}

/// Distances of the hyperbolic product from the projector, one per replica,
/// computed over the window N_H(z).
pub fn projector_distances(
    n_dim: usize,
    z: Complex64,
    beta: f64,
    omega: f64,
    replicas: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let config = EnsembleConfig::new(n_dim, beta, seed)?;
    let window = HyperbolicWindow::new(z, n_dim, omega);
    if window.n_h < 2 {
        return Err(Error::RegimeViolation {
            n: window.n_h,
            n_dim,
            z,
            expected: "hyperbolic",
        });
    }
    (0..replicas)
        .into_par_iter()
        .map(|r| {
            let model = sample_model_replica(&config, r as u64)?;
            let steps = factored_steps_upto(z, &model, beta, window.n_h)?;
            Ok(projector_distance_from_steps(&steps, window.n_h))
        })
        .collect()
}

/// Empirical tail probabilities of the projector distance over a grid of
/// matrix sizes and thresholds.
pub fn deviation_table(config: &DeviationConfig) -> Result<Vec<DeviationRow>> {
    let mut rows = Vec::new();
    for &n_dim in &config.n_values {
        let distances = projector_distances(
            n_dim,
            config.z,
            config.beta,
            config.omega,
            config.replicas,
            config.seed,
        )?;
        for &eps in &config.epsilons {
            let hits = distances.iter().filter(|&&d| d >= eps).count();
            let (lo, hi) = wilson_interval(hits, distances.len(), 1.96);
            rows.push(DeviationRow {
                n_dim,
                z_re: config.z.re,
                z_im: config.z.im,
                beta: config.beta,
                omega: config.omega,
                epsilon: eps,
                tail: hits as f64 / distances.len() as f64,
                ci_lo: lo,
                ci_hi: hi,
                replicas: distances.len(),
            });
        }
    }
    Ok(rows)
}
