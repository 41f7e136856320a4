//! Three independent routes to the antipodal absorbing time: stepping the reduced chain,
//! solving the Stein equation X − A X Aᵀ = e₁e₁ᵀ, and expanding the generating function.
//!
//! ```text
//! cargo run --release --example antipodal_solvers
//! ```

use std::error::Error;

use absorbing_qwalk::hypercube::{
    build_reduced_chain, generating_coefficients, reduced_first_passage, solve_stein, spectral_radius_check,
};
use absorbing_qwalk::StoppingRule;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!("U_3 in the basis f0, b1, f1, b2, f2, b3:");
    println!("{:.4}", build_reduced_chain(3)?.matrix());

    let stop = StoppingRule::reduced_chain().with_epsilon(0.0).with_residual_tolerance(1e-15);
    println!("  n   series          Stein           generating      spectral radius");
    for n in 2..=12 {
        let series = reduced_first_passage(n, &stop)?;
        let (_, stein) = solve_stein(n)?;
        let generating = generating_coefficients(n, series.truncation())?;
        println!(
            "{n:3}   {:.10}   {stein:.10}   {:.10}   {:.8}",
            series.weighted_sum(),
            generating.absorbing_time,
            spectral_radius_check(n)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
