//! Central limit theorem for linear eigenvalue statistics: the centered sum
//! of f over the spectrum against its predicted mean and variance,
//! including the beta-dependent mean shift.
//!
//! ```bash
//! cargo run --release --example clt_linear_statistics
//! ```

use gbeta::asymptotics::{chebyshev_coeffs, clt_prediction, clt_statistic, tridiag_eigenvalues};
use gbeta::numeric::cheb_t;
use gbeta::sampling::{sample_model_replica, EnsembleConfig};
use gbeta::stats;
use rayon::prelude::*;

fn main() -> gbeta::Result<()> {
    let n = 150;
    let f = |x: f64| cheb_t(2, x);
    let series = chebyshev_coeffs(f, 8, "T2");

    // One spectrum, for scale.
    let config = EnsembleConfig::new(n, 2.0, 17)?;
    let model = sample_model_replica(&config, 0)?;
    let spectrum = tridiag_eigenvalues(&model, 2.0);
    println!(
        "one spectrum at N = {n}: lambda_min = {:.4}, lambda_max = {:.4}, bisection residual {:.1e}",
        spectrum.eigenvalues[0],
        spectrum.eigenvalues.last().unwrap(),
        spectrum.residual
    );

    for beta in [1.0, 2.0, 4.0] {
        let config = EnsembleConfig::new(n, beta, 17)?;
        let vals: Vec<f64> = (0..2000u64)
            .into_par_iter()
            .map(|r| {
                let model = sample_model_replica(&config, r).unwrap();
                clt_statistic(f, &model, beta).unwrap()
            })
            .collect();
        let (pred_mean, pred_var) = clt_prediction(&series, beta, (1.0, 1.0));
        println!(
            "beta = {beta}: sample mean {:+.4} (predicted magnitude {:.4}), sample var {:.4} (predicted {:.4})",
            stats::mean(&vals),
            pred_mean.abs(),
            stats::variance(&vals),
            pred_var
        );
    }
    Ok(())
}
