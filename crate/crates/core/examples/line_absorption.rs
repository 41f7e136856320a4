//! Absorption probability r_m of the Hadamard walk on the line with a boundary at m.
//!
//! ```text
//! cargo run --release --example line_absorption
//! ```

use std::error::Error;
use std::f64::consts::PI;

use absorbing_qwalk::line::{estimate_rm, run_line_walk, LineWalkConfig};
use absorbing_qwalk::StoppingRule;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let stop = StoppingRule::full_space().with_max_steps(Some(4_000));

    let series = run_line_walk(&LineWalkConfig::new(1, 0.5)?.with_stop(stop))?;
    println!("first arrivals at m = 1:");
    for (t, p) in series.probabilities().iter().enumerate().take(10) {
        println!("  p({t}) = {p:.6}");
    }

    println!("\n  m   r_m       residual");
    for m in 1..=8 {
        let est = estimate_rm(&LineWalkConfig::new(m, 0.5)?.with_stop(stop))?;
        println!("{m:3}   {:.6}  {:.2e}", est.r_m, est.residual_mass);
    }
    let r1 = estimate_rm(&LineWalkConfig::new(1, 0.5)?.with_stop(stop))?.r_m;
    println!("\nr_1 = {r1:.6}, 2/pi = {:.6}", 2.0 / PI);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
