#![allow(dead_code)]

use absorbing_qwalk::coin::CoinOperator;
use absorbing_qwalk::LabeledGraph;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// W = S(C ⊗ I) as a dense matrix, index v·d + a, built straight from the definition
/// W|a, v⟩ = Σ_{a'} C[a', a] |a', g_{a'} v⟩.
pub fn dense_walk_matrix<G: LabeledGraph>(graph: &G, coin: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let d = graph.degree();
    let dim = d * graph.vertex_count();
    let mut w = DMatrix::zeros(dim, dim);
    for v in 0..graph.vertex_count() {
        for a in 0..d {
            for a2 in 0..d {
                let target = graph.neighbor(v, a2) * d + a2;
                w[(target, v * d + a)] += coin[(a2, a)];
            }
        }
    }
    w
}

/// First-arrival probabilities from the density-operator process
/// ρ ↦ P′WρW†P′ with p(t) = tr(P W ρ W† P), after measuring the initial state once.
pub fn density_first_passage(
    w: &DMatrix<Complex64>,
    degree: usize,
    absorbing: &[usize],
    psi: &[Complex64],
    steps: usize,
) -> Vec<f64> {
    let dim = psi.len();
    let absorbed = |i: usize| absorbing.contains(&(i / degree));
    let project = |rho: &mut DMatrix<Complex64>| {
        for i in 0..dim {
            for j in 0..dim {
                if absorbed(i) || absorbed(j) {
                    rho[(i, j)] = c(0.0);
                }
            }
        }
    };
    let trace_p = |rho: &DMatrix<Complex64>| (0..dim).filter(|&i| absorbed(i)).map(|i| rho[(i, i)].re).sum::<f64>();

    let mut rho = DMatrix::from_fn(dim, dim, |i, j| psi[i] * psi[j].conj());
    let mut out = vec![trace_p(&rho)];
    project(&mut rho);
    let w_adj = w.adjoint();
    for _ in 0..steps {
        let mut next = w * &rho * &w_adj;
        out.push(trace_p(&next));
        project(&mut next);
        rho = next;
    }
    out
}

/// Haar-ish random unitary from the QR factorization of a Gaussian-like matrix.
pub fn unitary_from_entries(d: usize, entries: &[(f64, f64)]) -> DMatrix<Complex64> {
    let m = DMatrix::from_fn(d, d, |i, j| {
        let (re, im) = entries[i * d + j];
        Complex64::new(re, im)
    });
    let qr = m.qr();
    let (q, r) = (qr.q(), qr.r());
    // fix column phases so the map from entries to unitaries is deterministic
    let mut q = q;
    for j in 0..d {
        let diag = r[(j, j)];
        let phase = if diag.norm() > 0.0 { diag / diag.norm() } else { c(1.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn random_unitary(d: usize) -> impl Strategy<Value = CoinOperator> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), d * d)
        .prop_filter("well conditioned", move |e| {
            e.iter().map(|(a, b)| a.abs() + b.abs()).sum::<f64>() > 0.1 * d as f64
        })
        .prop_map(move |e| CoinOperator::new(unitary_from_entries(d, &e)).expect("QR factor is unitary"))
}

pub fn random_state(dim: usize) -> impl Strategy<Value = Vec<Complex64>> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
        .prop_filter("nonzero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let norm = v.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
            v.into_iter().map(|(a, b)| Complex64::new(a / norm, b / norm)).collect()
        })
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
