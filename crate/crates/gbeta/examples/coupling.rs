//! How close one polynomial draw sits to its Gaussian-field prediction:
//! the coupling ratio |exp(log Phi_N - log pi_N + sum(eta + eta^2/2)) - 1|
//! shrinks as N grows.
//!
//! ```bash
//! cargo run --release --example coupling
//! ```

use gbeta::field::{coupling_ratio, discrete_field};
use gbeta::sampling::{sample_model_replica, EnsembleConfig};
use gbeta::stats;
use gbeta::transfer::factored_steps;
use num_complex::Complex64;
use rayon::prelude::*;

fn main() -> gbeta::Result<()> {
    let beta = 2.0;
    let z = Complex64::new(2.0, 0.0);

    for n in [100usize, 400, 1600] {
        let config = EnsembleConfig::new(n, beta, 5)?;
        let ratios: Vec<f64> = (0..500u64)
            .into_par_iter()
            .map(|r| {
                let model = sample_model_replica(&config, r).unwrap();
                coupling_ratio(z, &model, beta).unwrap()
            })
            .collect();
        println!(
            "N = {n:4}: median coupling ratio = {:.4}",
            stats::median(&ratios)
        );
    }

    // The discrete field itself: one draw's running sum of
    // eta_{k,11} + eta_{k,11}^2 / 2.
    let n = 400;
    let config = EnsembleConfig::new(n, beta, 5)?;
    let model = sample_model_replica(&config, 0)?;
    let steps = factored_steps(z, &model, beta)?;
    for upto in [100usize, 200, 400] {
        println!(
            "discrete field up to k = {upto}: {:.5}",
            discrete_field(&steps, upto)
        );
    }
    Ok(())
}
