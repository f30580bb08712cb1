//! Deterministic Hermite analysis: the g-function, Plancherel-Rotach
//! accuracy away from the turning point, the Airy window at the edge, and
//! the zero-counting identity.
//!
//! ```bash
//! cargo run --release --example hermite_asymptotics
//! ```

use gbeta::asymptotics::{
    airy_ai, airy_regime_ratio, g_function, hermite_zero_identity, plancherel_rotach_log,
};
use gbeta::numeric::cheb_t;
use gbeta::transfer::hermite_pi;
use num_complex::Complex64;

fn main() -> gbeta::Result<()> {
    let z = Complex64::new(2.0, 0.0);

    let gf = g_function(z, 1.0)?;
    println!(
        "g_1(2) = {:.6}, gamma(2) = {:.6}",
        gf.g_value.re, gf.gamma_value.re
    );

    println!("Plancherel-Rotach accuracy at z = 2:");
    for n in [200usize, 400, 800] {
        let log_pr = plancherel_rotach_log(n, n, z)?;
        let log_pi = hermite_pi(z, n, n).log_first();
        println!(
            "  N = {n:3}: |pi_N / PR - 1| = {:.2e}",
            ((log_pi - log_pr).exp() - 1.0).norm()
        );
    }

    println!("Airy window at the spectral edge (z = 1, n = N, k = 0):");
    println!("  Ai(0) = {:.10}", airy_ai(0.0)?);
    for n in [100usize, 200, 400] {
        println!(
            "  N = {n:3}: pi_N(1) / Airy formula = {:.4}",
            airy_regime_ratio(n, n, Complex64::new(1.0, 0.0))?
        );
    }

    println!("Hermite-zero identity discrepancies:");
    for n in [100usize, 200, 400] {
        println!(
            "  N = {n:3}: T_2 -> {:+.2e} (identically zero), T_4 -> {:+.6} (exactly 3/(2N) = {:.6})",
            hermite_zero_identity(|x| cheb_t(2, x), n),
            hermite_zero_identity(|x| cheb_t(4, x), n),
            1.5 / n as f64
        );
    }
    Ok(())
}
