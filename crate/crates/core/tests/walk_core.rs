mod common;

use absorbing_qwalk::coin::CoinOperator;
use absorbing_qwalk::walk::FirstPassage;
use absorbing_qwalk::{
    build_walk_operator, run_first_passage, AbsorptionProcess, CycleGraph, HypercubeGraph, LabeledGraph, StoppingRule,
    TableGraph, WalkState,
};
use common::*;
use nalgebra::DMatrix;
use proptest::prelude::*;

/// Z_4 × Z_2 with labels g, g⁻¹, h.
fn cayley_z4_z2() -> TableGraph {
    TableGraph::from_fn(8, 3, |v, a| {
        let (x, y) = (v / 2, v % 2);
        match a {
            0 => 2 * ((x + 1) % 4) + y,
            1 => 2 * ((x + 3) % 4) + y,
            _ => 2 * x + (1 - y),
        }
    })
    .unwrap()
    .with_diameter(3)
}

#[derive(Debug, Clone)]
enum Shape {
    Cycle(usize),
    Cube(u32),
    Cayley,
}

impl Shape {
    fn degree(&self) -> usize {
        match self {
            Shape::Cycle(_) => 2,
            Shape::Cube(n) => *n as usize,
            Shape::Cayley => 3,
        }
    }

    fn vertices(&self) -> usize {
        match self {
            Shape::Cycle(k) => *k,
            Shape::Cube(n) => 1 << n,
            Shape::Cayley => 8,
        }
    }
}

fn shapes() -> impl Strategy<Value = Shape> {
    prop_oneof![(3usize..=16).prop_map(Shape::Cycle), (1u32..=4).prop_map(Shape::Cube), Just(Shape::Cayley)]
}

/// A shape with a coin, a start state, and a nonempty absorbing set, all at most 64 basis states.
fn instances() -> impl Strategy<Value = (Shape, CoinOperator, Vec<num_complex::Complex64>, Vec<usize>)> {
    shapes().prop_flat_map(|shape| {
        let (d, v) = (shape.degree(), shape.vertices());
        (
            Just(shape),
            random_unitary(d),
            random_state(d * v),
            proptest::collection::btree_set(0..v, 1..=v.min(3)).prop_map(|s| s.into_iter().collect::<Vec<_>>()),
        )
    })
}

fn with_graph<R>(shape: &Shape, f: impl FnOnce(&dyn Fn() -> Box<dyn Dense>) -> R) -> R {
    let make: Box<dyn Fn() -> Box<dyn Dense>> = match shape.clone() {
        Shape::Cycle(k) => Box::new(move || Box::new(CycleGraph::new(k).unwrap()) as Box<dyn Dense>),
        Shape::Cube(n) => Box::new(move || Box::new(HypercubeGraph::new(n).unwrap()) as Box<dyn Dense>),
        Shape::Cayley => Box::new(|| Box::new(cayley_z4_z2()) as Box<dyn Dense>),
    };
    f(&*make)
}

/// Object-safe bridge so one test body serves every graph type.
trait Dense {
    fn dense(&self, coin: &CoinOperator) -> DMatrix<num_complex::Complex64>;
    fn library_series(
        &self,
        coin: &CoinOperator,
        psi: &[num_complex::Complex64],
        absorbing: &[usize],
        steps: u64,
    ) -> (Vec<f64>, f64);
    fn library_step(&self, coin: &CoinOperator, psi: &[num_complex::Complex64]) -> Vec<num_complex::Complex64>;
}

impl<G: LabeledGraph + Clone> Dense for G {
    fn dense(&self, coin: &CoinOperator) -> DMatrix<num_complex::Complex64> {
        dense_walk_matrix(self, coin.matrix())
    }

    fn library_series(
        &self,
        coin: &CoinOperator,
        psi: &[num_complex::Complex64],
        absorbing: &[usize],
        steps: u64,
    ) -> (Vec<f64>, f64) {
        let walk = build_walk_operator(self.clone(), coin.clone()).unwrap();
        let process = AbsorptionProcess::new(self.vertex_count(), absorbing.iter().copied()).unwrap();
        let initial = WalkState::from_amplitudes(self.degree(), psi.to_vec()).unwrap();
        let stop = StoppingRule::full_space().with_max_steps(Some(steps)).with_epsilon(0.0).with_window(1 << 40);
        let series = run_first_passage(initial, &walk, &process, &stop).unwrap();
        // the run ends early once nothing is left to absorb
        let mut p = series.probabilities().to_vec();
        assert!(p.len() as u64 <= steps + 1);
        p.resize(steps as usize + 1, 0.0);
        (p, series.residual_mass())
    }

    fn library_step(&self, coin: &CoinOperator, psi: &[num_complex::Complex64]) -> Vec<num_complex::Complex64> {
        let walk = build_walk_operator(self.clone(), coin.clone()).unwrap();
        let state = WalkState::from_amplitudes(self.degree(), psi.to_vec()).unwrap();
        walk.apply(&state).unwrap().amplitudes().to_vec()
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn walk_operator_is_unitary((shape, coin, psi, _) in instances()) {
        with_graph(&shape, |make| {
            let g = make();
            let w = g.dense(&coin);
            let dim = w.nrows();
            let defect = (w.adjoint() * &w - DMatrix::identity(dim, dim)).iter().map(|z| z.norm()).fold(0.0, f64::max);
            prop_assert!(defect <= 1e-12, "defect {defect:e}");
            // the library's sparse step agrees with the dense definition
            let stepped = g.library_step(&coin, &psi);
            let dense: Vec<_> = (&w * nalgebra::DVector::from_column_slice(&psi)).iter().copied().collect();
            let diff = stepped.iter().zip(&dense).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            prop_assert!(diff <= 1e-12);
            Ok(())
        })?;
    }

    #[test]
    fn absorbed_plus_residual_is_one((shape, coin, psi, absorbing) in instances(), steps in 1u64..400) {
        with_graph(&shape, |make| {
            let (p, residual) = make().library_series(&coin, &psi, &absorbing, steps);
            prop_assert_eq!(p.len() as u64, steps + 1);
            prop_assert!(p.iter().all(|&x| x >= 0.0));
            let total: f64 = p.iter().sum::<f64>() + residual;
            prop_assert!((total - 1.0).abs() <= 1e-9, "total {total}");
            Ok(())
        })?;
    }

    #[test]
    fn pure_branch_matches_density_operator((shape, coin, psi, absorbing) in instances()) {
        with_graph(&shape, |make| {
            let g = make();
            let steps = 40;
            let (p, _) = g.library_series(&coin, &psi, &absorbing, steps as u64);
            let oracle = density_first_passage(&g.dense(&coin), shape.degree(), &absorbing, &psi, steps);
            prop_assert!(max_abs_diff(&p, &oracle) <= 1e-10);
            Ok(())
        })?;
    }
}

#[test]
fn stepper_reports_initial_measurement() {
    let cube = HypercubeGraph::new(2).unwrap();
    let walk = build_walk_operator(cube, CoinOperator::grover(2).unwrap()).unwrap();
    let process = AbsorptionProcess::new(4, [0]).unwrap();
    let mut psi = vec![common::c(0.0); 8];
    psi[0] = common::c(0.6);
    psi[6] = common::c(0.8);
    let mut run = FirstPassage::new(WalkState::from_amplitudes(2, psi).unwrap(), &walk, &process).unwrap();
    assert!((run.initial_absorbed() - 0.36).abs() < 1e-15);
    assert!((run.state().norm_sqr() - 0.64).abs() < 1e-15);
    let p1 = run.step();
    assert_eq!(run.time(), 1);
    assert!((0.0..=0.64 + 1e-15).contains(&p1));
}
