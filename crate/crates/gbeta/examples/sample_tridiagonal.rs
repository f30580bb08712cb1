//! Draw one tridiagonal model, inspect its normalized noise, and test the
//! truncation event at a few levels.
//!
//! ```bash
//! cargo run --release --example sample_tridiagonal
//! ```

use gbeta::sampling::{
    noise_from_model, sample_model, truncation_holds, write_model_csv, EnsembleConfig,
    TruncationConfig,
};

fn main() -> gbeta::Result<()> {
    let config = EnsembleConfig::new(12, 2.0, 42)?;
    let model = sample_model(&config)?;

    let mut csv = Vec::new();
    write_model_csv(&mut csv, &model, &config)?;
    println!("{}", String::from_utf8(csv).unwrap());

    let noise = noise_from_model(&model, config.beta);
    println!("X_1..X_4 = {:?}", &noise.x[..4]);
    println!("Y_1..Y_4 = {:?} (Y_1 is 0 by convention)", &noise.y[..4]);

    for level in [1.0, 4.0, 9.0] {
        let trunc = TruncationConfig::new(level)?;
        println!(
            "truncation event at S = {level}: {}",
            truncation_holds(&noise, &trunc, config.beta)
        );
    }
    Ok(())
}
