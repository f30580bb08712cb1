//! The perturbative expansion of a matrix product by number of perturbed
//! factors: oracle agreement, parity structure, and tail decay.
//!
//! ```bash
//! cargo run --release --example psi_expansion
//! ```

use gbeta::expansion::{full_product, psi_bruteforce, psi_recursive, psi_tail, MatrixFamily};
use gbeta::sampling::{sample_model, EnsembleConfig};
use gbeta::transfer::factored_steps;
use num_complex::Complex64;

fn main() -> gbeta::Result<()> {
    // Family built from actual factored transfer steps at z = 2.
    let n = 14;
    let beta = 2.0;
    let config = EnsembleConfig::new(n, beta, 3)?;
    let model = sample_model(&config)?;
    let steps = factored_steps(Complex64::new(2.0, 0.0), &model, beta)?;
    let family = MatrixFamily::from_steps(&steps);
    let span = family.len();

    println!("order | brute-vs-recursive | ||psi^(j)||  | ||psi^(>j)||");
    for j in 0..=4 {
        let brute = psi_bruteforce(&family, j, 1, span)?.matrix;
        let rec = psi_recursive(&family, j, 1, span)?.matrix;
        let tail = psi_tail(&family, j, 1, span)?.matrix;
        println!(
            "  {j}   |      {:.2e}      |  {:.3e}  |  {:.3e}",
            brute.sub(&rec).max_abs_entry(),
            rec.op_norm(),
            tail.op_norm()
        );
    }

    // The sum of all orders reassembles the product exactly.
    let prod = full_product(&family, 1, span)?;
    let mut total = gbeta::mat2::Mat2::zero();
    for j in 0..=span {
        total = total.add(&psi_recursive(&family, j, 1, span)?.matrix);
    }
    println!(
        "completeness: ||sum_j psi^(j) - prod U|| = {:.2e}",
        total.sub(&prod).max_abs_entry()
    );
    Ok(())
}
