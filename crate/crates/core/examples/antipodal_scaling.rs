//! Antipodal absorbing time for large n on the 2n-dimensional reduced chain.
//!
//! ```text
//! cargo run --release --example antipodal_scaling
//! ```

use std::error::Error;

use absorbing_qwalk::hypercube::reduced_first_passage;
use absorbing_qwalk::{summarize, StoppingRule};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let stop = StoppingRule::reduced_chain().with_max_steps(Some(200_000));
    println!("   n   prob       real       real/n^1.5");
    for n in (10..=60).step_by(10) {
        let s = summarize(&reduced_first_passage(n, &stop)?);
        println!("{n:4}   {:.6}   {:9.3}   {:.4}", s.prob, s.time_real, s.time_real / (n as f64).powf(1.5));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
