//! Evaluate the characteristic polynomial through the transfer recurrence,
//! watch the regime change along the trajectory, and check the zero-noise
//! reduction to the Hermite polynomials.
//!
//! ```bash
//! cargo run --release --example characteristic_polynomial
//! ```

use gbeta::sampling::{sample_model, EnsembleConfig, TridiagonalModel};
use gbeta::transfer::{char_poly, classify_regime, hermite_pi, hermite_pi_trajectory};
use num_complex::Complex64;

fn main() -> gbeta::Result<()> {
    let n = 500;
    let beta = 2.0;
    let config = EnsembleConfig::new(n, beta, 7)?;
    let model = sample_model(&config)?;

    // Inside the bulk the trajectory passes hyperbolic -> parabolic ->
    // elliptic as n crosses N (Re z)^2.
    let z = Complex64::new(0.7, 0.0);
    let traj = char_poly(z, &model, beta);
    for &n_probe in &[50usize, 240, 245, 250, 400] {
        let pair = traj[n_probe - 1];
        println!(
            "n = {n_probe:3}: log|Phi_n({z})| = {:8.3}  regime = {}",
            pair.log_first().re,
            classify_regime(z, n, n_probe)
        );
    }

    // At z = 2 the whole recurrence is hyperbolic and Phi_N stays within a
    // Gaussian factor of pi_N.
    let z = Complex64::new(2.0, 0.0);
    let log_phi = char_poly(z, &model, beta).last().unwrap().log_first();
    let log_pi = hermite_pi(z, n, n).log_first();
    println!(
        "z = 2: log Phi_N = {:.4}, log pi_N = {:.4}, ratio Phi/pi = {:.4}",
        log_phi.re,
        log_pi.re,
        (log_phi - log_pi).exp().re
    );

    // Zero noise: the recurrence is exactly the Hermite one.
    let clean = TridiagonalModel::noiseless(n, beta);
    let phi = char_poly(z, &clean, beta);
    let pi = hermite_pi_trajectory(z, n, n);
    let worst = (0..n)
        .map(|k| (phi[k].log_first() - pi[k].log_first()).norm())
        .fold(0.0f64, f64::max);
    println!("zero-noise worst |log Phi_n - log pi_n| = {worst:.2e}");
    Ok(())
}
