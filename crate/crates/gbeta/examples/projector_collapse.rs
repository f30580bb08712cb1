//! Monte Carlo tails of || prod U_k - diag(1,0) || over the hyperbolic
//! window: the transfer product collapses onto a rank-one projector as N
//! grows.
//!
//! ```bash
//! cargo run --release --example projector_collapse
//! ```

use gbeta::expansion::{deviation_table, DeviationConfig};
use num_complex::Complex64;

fn main() -> gbeta::Result<()> {
    let config = DeviationConfig {
        n_values: vec![200, 800, 3200],
        z: Complex64::new(1.5, 0.0),
        beta: 2.0,
        omega: 1.0,
        replicas: 800,
        epsilons: vec![0.05, 0.1, 0.2],
        seed: 99,
    };
    let rows = deviation_table(&config)?;
    println!("N     eps    P[dist >= eps]   95% Wilson CI");
    for r in rows {
        println!(
            "{:<5} {:<6} {:<16.4} [{:.4}, {:.4}]",
            r.n_dim, r.epsilon, r.tail, r.ci_lo, r.ci_hi
        );
    }
    Ok(())
}
