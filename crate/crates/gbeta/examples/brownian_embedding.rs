//! Embed a model's noise into coupled discrete Brownian paths and integrate
//! the field along them: the partial sums match the path at every grid
//! point, and the stochastic integral tracks the Gaussian limit.
//!
//! ```bash
//! cargo run --release --example brownian_embedding
//! ```

use gbeta::field::{covariance_w, embed_noise, field_w};
use gbeta::sampling::{noise_from_model, sample_model_replica, EnsembleConfig};
use gbeta::stats;
use num_complex::Complex64;
use rayon::prelude::*;

fn main() -> gbeta::Result<()> {
    let n = 400;
    let beta = 2.0;
    let config = EnsembleConfig::new(n, beta, 23)?;

    let model = sample_model_replica(&config, 0)?;
    let noise = noise_from_model(&model, beta);
    let pair = embed_noise(&noise, n, config.seed, 0);
    let scale = 1.0 / (n as f64).sqrt();
    let partial: f64 = noise.x[..n / 2].iter().sum::<f64>() * scale;
    println!(
        "grid-point match at t = 1/2: path {:.12} vs scaled partial sum {:.12}",
        pair.x_path[n / 2],
        partial
    );
    println!(
        "bridge midpoint fill near t = 1/2: {:.6} (between {:.6} and {:.6})",
        pair.x_mid[n / 2],
        pair.x_path[n / 2],
        pair.x_path[n / 2 + 1]
    );

    // W_1(2) integrated along embedded paths over many replicas has the
    // closed-form variance.
    let z = Complex64::new(2.0, 0.0);
    let ws: Vec<f64> = (0..20_000u64)
        .into_par_iter()
        .map(|r| {
            let model = sample_model_replica(&config, r).unwrap();
            let noise = noise_from_model(&model, beta);
            let pair = embed_noise(&noise, n, config.seed, r);
            field_w(z, 1.0, &pair).unwrap().w.re
        })
        .collect();
    println!(
        "Var of W_1(2) along embedded noise paths: {:.5} (closed form {:.5})",
        stats::variance(&ws),
        covariance_w(z, z)?.re
    );
    Ok(())
}
