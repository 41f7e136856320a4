//! Grover walk on the 8-cube started at the origin, absorbed at each Hamming distance.
//!
//! ```text
//! cargo run --release --example hypercube_table
//! ```

use std::error::Error;

use absorbing_qwalk::hypercube::{conjectured_probability, full_walk_summary, HypercubeConfig, StartCoin};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let n = 8;
    println!(" i   prob     min(1,n/C(n,i))   nominal    real");
    for i in 0..=n {
        let s = full_walk_summary(&HypercubeConfig::at_distance(n, i)?)?;
        println!(
            "{i:2}   {:.4}   {:.4}            {:8.4}   {:8.4}",
            s.prob,
            conjectured_probability(n, i),
            s.time_nominal,
            s.time_real
        );
    }

    // Starting from a single coin label breaks the coordinate symmetry.
    let single = full_walk_summary(&HypercubeConfig::at_distance(n, 1)?.with_start(StartCoin::Label(0)))?;
    println!("\ndistance 1 from |g_1, 0>: prob {:.4}, real time {:.4}", single.prob, single.time_real);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
