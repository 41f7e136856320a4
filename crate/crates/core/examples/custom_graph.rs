//! A walk on a hand-built Cayley graph: Z_4 × Z_2 with generators g, g⁻¹ and h.
//!
//! ```text
//! cargo run --release --example custom_graph
//! ```

use std::error::Error;

use absorbing_qwalk::coin::CoinOperator;
use absorbing_qwalk::{
    build_walk_operator, run_first_passage, summarize, AbsorptionProcess, StoppingRule, TableGraph, WalkState,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // vertex (x, y) with x in Z_4, y in Z_2 is stored as 2x + y
    let vertex = |x: usize, y: usize| 2 * (x % 4) + y % 2;
    let graph = TableGraph::from_fn(8, 3, |v, label| {
        let (x, y) = (v / 2, v % 2);
        match label {
            0 => vertex(x + 1, y),
            1 => vertex(x + 3, y),
            _ => vertex(x, y + 1),
        }
    })?
    .with_diameter(3);

    let walk = build_walk_operator(graph, CoinOperator::grover(3)?)?;
    let stop = StoppingRule::full_space().with_max_steps(Some(20_000));
    let start = WalkState::basis(3, 8, 2, vertex(0, 0));

    println!("start |h, (0,0)>, Grover coin");
    println!("absorber   prob     nominal   real");
    for (x, y) in [(1, 0), (2, 0), (0, 1), (2, 1)] {
        let process = AbsorptionProcess::new(8, [vertex(x, y)])?;
        let s = summarize(&run_first_passage(start.clone(), &walk, &process, &stop)?);
        println!("({x},{y})      {:.4}   {:7.3}   {:7.3}", s.prob, s.time_nominal, s.time_real);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
