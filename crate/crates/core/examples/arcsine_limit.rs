//! r_m at a far boundary for generalized Hadamard coins H_p, next to the arcsine curve.
//!
//! ```text
//! cargo run --release --example arcsine_limit
//! ```

use std::error::Error;

use absorbing_qwalk::line::{conjectured_limit, estimate_rm, generalized_hadamard_coin, LineWalkConfig};
use absorbing_qwalk::StoppingRule;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let coin = generalized_hadamard_coin(0.3)?;
    println!("H_0.3 = {:.4}", coin.matrix().map(|z| z.re));

    let m = 20;
    let stop = StoppingRule::full_space().with_max_steps(Some(3_000));
    println!("  p     r_{m}     arcsin(2p-1)/pi + 1/2");
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        let est = estimate_rm(&LineWalkConfig::new(m, p)?.with_stop(stop))?;
        println!("{p:4.1}   {:.4}    {:.4}", est.r_m, conjectured_limit(p)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
