//! The Gaussian analytic field: path-integral samples, the series
//! representation, covariance closed forms, and the boundary field.
//!
//! ```bash
//! cargo run --release --example gaussian_field
//! ```

use gbeta::field::{
    boundary_covariances, covariance_w, covariance_wt, field_w, gaf_required_terms, gaf_w,
    magic_derivative_check, BrownianPair, GafSample, GAF_TAIL_SD_BUDGET,
};
use gbeta::stats;
use num_complex::Complex64;

fn main() -> gbeta::Result<()> {
    let z = Complex64::new(2.0, 0.0);

    // Monte Carlo variance of the discretized stochastic integral vs the
    // closed form -log(1 - J(2)^2).
    let samples = 20_000;
    let ws: Vec<f64> = (0..samples)
        .map(|r| {
            let pair = BrownianPair::fresh(500, 1, r as u64);
            field_w(z, 1.0, &pair).unwrap().w.re
        })
        .collect();
    let target = covariance_w(z, z)?.re;
    println!(
        "Var W_1(2): Monte Carlo {:.5} vs closed form {:.5}",
        stats::variance(&ws),
        target
    );

    // The same field through the series: W = xi(J(z)).
    let k = gaf_required_terms(0.5, GAF_TAIL_SD_BUDGET);
    println!("series terms for |q| <= 0.5 at sd budget {GAF_TAIL_SD_BUDGET:.0e}: {k}");
    let sample = GafSample::sample(k, 2, 0);
    println!(
        "one draw of W(2) from the series: {:.4}",
        gaf_w(&sample, z)?
    );

    // Covariance identities.
    let w = Complex64::new(1.5, 0.5);
    println!("E[W(2) W(1.5+0.5i)] = {:.5}", covariance_w(z, w)?);
    println!(
        "time-scaling check, s = 0.49: {:.5e}",
        (covariance_wt(z * 0.7, z * 0.7, 0.49, 0.49)? - covariance_w(z, z)?).norm()
    );
    println!(
        "time-derivative identity, rel err = {:.2e}",
        magic_derivative_check(w, z, 0.7, 1e-5)?
    );

    // Log-correlated boundary values.
    let (re_cov, im_cov) = boundary_covariances(0.3, 0.1)?;
    println!("boundary covariances at (0.3, 0.1): Re {re_cov:.4}, Im {im_cov:.4}");
    Ok(())
}
