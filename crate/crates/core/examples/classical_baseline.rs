//! The classical random walk on the n-cube: exact absorbing times and a sampled check.
//!
//! ```text
//! cargo run --release --example classical_baseline
//! ```

use std::error::Error;

use absorbing_qwalk::classical::{classical_monte_carlo, classical_times_closed_form, classical_times_linear_solve};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let n = 6;
    let exact = classical_times_closed_form(n)?;
    let solved = classical_times_linear_solve(n)?;
    println!(" i   closed form   tridiagonal   Monte Carlo (20000 trials)");
    for i in 0..=n {
        let mc = classical_monte_carlo(n, i, 20_000, 42)?;
        println!(
            "{i:2}   {:10.4}    {:10.4}    {:.2} ± {:.2}",
            exact.at(i as usize),
            solved.at(i as usize),
            mc.mean,
            mc.stderr
        );
    }
    println!("\n n   s_1 / 2^n");
    for n in [4, 8, 12, 16, 20] {
        let s = classical_times_closed_form(n)?;
        println!("{n:2}   {:.6}", s.at(1) / 2f64.powi(n as i32));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
