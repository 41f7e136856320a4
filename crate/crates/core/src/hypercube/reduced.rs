//! The 2n-dimensional invariant subspace of the symmetric walk.
//!
//! From the origin, the walk only visits the normalized sector states
//! |f_i⟩ (i = 0..n−1, label leads away from the origin) and |b_i⟩ (i = 1..n, label leads
//! back). One step maps
//!
//! ```text
//! |f_i⟩ ↦  (√(4ni − 4i²)/n)|f_{i−1}⟩ + ((n − 2i)/n)|b_{i+1}⟩
//! |b_i⟩ ↦ −((n − 2i)/n)|f_{i−1}⟩ + (√(4ni − 4i²)/n)|b_{i+1}⟩
//! ```
//!
//! Basis order is f₀, b₁, f₁, b₂, …, b_{n−1}, f_{n−1}, b_n, so the antipode's sector b_n
//! is the last coordinate.

use nalgebra::DMatrix;

use crate::error::{Result, WalkError};
use crate::numeric::binomial_exact;
use crate::walk::{FirstPassageSeries, PassageTracker, StoppingRule};

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedChain {
    n: usize,
    matrix: DMatrix<f64>,
    /// √(4ni − 4i²)/n for i = 0..=n.
    hop: Vec<f64>,
    /// (n − 2i)/n for i = 0..=n.
    bias: Vec<f64>,
}

pub fn build_reduced_chain(n: u32) -> Result<ReducedChain> {
    if n == 0 {
        return Err(WalkError::Domain("reduced chain needs n >= 1".into()));
    }
    let n = n as usize;
    let nf = n as f64;
    let hop: Vec<f64> = (0..=n)
        .map(|i| {
            let i = i as f64;
            (4.0 * nf * i - 4.0 * i * i).sqrt() / nf
        })
        .collect();
    let bias: Vec<f64> = (0..=n).map(|i| (nf - 2.0 * i as f64) / nf).collect();

    let dim = 2 * n;
    let mut matrix = DMatrix::zeros(dim, dim);
    for i in 0..n {
        let col = ReducedChain::forward_index_of(i);
        if i >= 1 {
            matrix[(ReducedChain::forward_index_of(i - 1), col)] = hop[i];
        }
        matrix[(ReducedChain::backward_index_of(i + 1), col)] = bias[i];
    }
    for i in 1..=n {
        let col = ReducedChain::backward_index_of(i);
        matrix[(ReducedChain::forward_index_of(i - 1), col)] = -bias[i];
        if i < n {
            matrix[(ReducedChain::backward_index_of(i + 1), col)] = hop[i];
        }
    }
    Ok(ReducedChain { n, matrix, hop, bias })
}

impl ReducedChain {
    const fn forward_index_of(i: usize) -> usize {
        2 * i
    }

    const fn backward_index_of(i: usize) -> usize {
        2 * i - 1
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        2 * self.n
    }

    /// U_n in the basis order f₀, b₁, f₁, …, b_n.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Coordinate of |f_i⟩, i < n.
    pub fn forward_index(&self, i: usize) -> Option<usize> {
        (i < self.n).then(|| Self::forward_index_of(i))
    }

    /// Coordinate of |b_i⟩, 1 ≤ i ≤ n.
    pub fn backward_index(&self, i: usize) -> Option<usize> {
        (1..=self.n).contains(&i).then(|| Self::backward_index_of(i))
    }

    /// |F_i| = (n − i)·C(n, i); `None` if it overflows u128.
    pub fn forward_sector_size(&self, i: usize) -> Option<u128> {
        binomial_exact(self.n as u64, i as u64)?.checked_mul((self.n - i.min(self.n)) as u128)
    }

    /// |B_i| = i·C(n, i); `None` if it overflows u128.
    pub fn backward_sector_size(&self, i: usize) -> Option<u128> {
        binomial_exact(self.n as u64, i as u64)?.checked_mul(i as u128)
    }

    /// U_n P_n′: the step restricted to walkers not yet absorbed at the antipode.
    pub fn surviving_transition(&self) -> DMatrix<f64> {
        let mut a = self.matrix.clone();
        a.column_mut(self.dimension() - 1).fill(0.0);
        a
    }

    /// Max-entry norm of UᵀU − I.
    pub fn unitarity_defect(&self) -> f64 {
        let gram = self.matrix.transpose() * &self.matrix;
        (gram - DMatrix::identity(self.dimension(), self.dimension())).amax()
    }

    /// One surviving step on split storage: `forward[i]` holds f_i (forward[n] = 0) and
    /// `backward[i]` holds b_i (backward[0] = 0). Returns the absorbed mass |b_n|².
    #[inline]
    fn step(&self, forward: &[f64], backward: &[f64], next_forward: &mut [f64], next_backward: &mut [f64]) -> f64 {
        let n = self.n;
        let (hop, bias) = (&self.hop[1..=n], &self.bias[1..=n]);
        let (f, b, out) = (&forward[1..=n], &backward[1..=n], &mut next_forward[..n]);
        for j in 0..n {
            out[j] = hop[j] * f[j] - bias[j] * b[j];
        }
        let (hop, bias) = (&self.hop[..n], &self.bias[..n]);
        let (f, b, out) = (&forward[..n], &backward[..n], &mut next_backward[1..=n]);
        for j in 0..n {
            out[j] = bias[j] * f[j] + hop[j] * b[j];
        }
        let absorbed = next_backward[n] * next_backward[n];
        next_backward[n] = 0.0;
        absorbed
    }
}

/// First-passage series at the antipode, iterated on the reduced chain from |f₀⟩.
pub fn reduced_first_passage(n: u32, stop: &StoppingRule) -> Result<FirstPassageSeries> {
    let chain = build_reduced_chain(n)?;
    chain_first_passage(&chain, stop)
}

pub fn chain_first_passage(chain: &ReducedChain, stop: &StoppingRule) -> Result<FirstPassageSeries> {
    let n = chain.n;
    let mut tracker = PassageTracker::new(*stop, Some(n))?;
    let mut forward = vec![0.0; n + 1];
    let mut backward = vec![0.0; n + 1];
    let mut next_forward = vec![0.0; n + 1];
    let mut next_backward = vec![0.0; n + 1];
    forward[0] = 1.0;

    tracker.record(0, 0.0);
    if let Some(reason) = tracker.check(0, 1.0) {
        return Ok(tracker.finish(0, 1.0, reason));
    }
    let mut t = 0u64;
    let (residual, reason) = loop {
        t += 1;
        let p = chain.step(&forward, &backward, &mut next_forward, &mut next_backward);
        std::mem::swap(&mut forward, &mut next_forward);
        std::mem::swap(&mut backward, &mut next_backward);
        tracker.record(t, p);
        if tracker.at_window_boundary(t) || tracker.max_steps() == Some(t) {
            let residual: f64 = forward.iter().chain(&backward).map(|x| x * x).sum();
            if let Some(reason) = tracker.check(t, residual) {
                break (residual, reason);
            }
        }
    };
    Ok(tracker.finish(t, residual, reason))
}

/// Largest eigenvalue modulus of U_n P_n′.
pub fn spectral_radius_check(n: u32) -> Result<f64> {
    let a = build_reduced_chain(n)?.surviving_transition();
    spectral_radius(&a)
}

/// Spectral radius of a real square matrix; exactly 0 for matrices whose power A^dim vanishes.
pub fn spectral_radius(a: &DMatrix<f64>) -> Result<f64> {
    let dim = a.nrows();
    let mut power = a.clone();
    let mut exponent = 1;
    while exponent < dim {
        power = &power * &power;
        exponent *= 2;
    }
    if power.iter().all(|&x| x == 0.0) {
        return Ok(0.0);
    }
    let schur = a.clone().try_schur(f64::EPSILON, 100_000).ok_or(WalkError::Convergence {
        method: "Schur eigensolver",
        residual: f64::NAN,
        iterations: 100_000,
    })?;
    Ok(schur.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n2_is_four_cycle() {
        let chain = build_reduced_chain(2).unwrap();
        // order f0, b1, f1, b2; U maps f0->b1, b1->b2, f1->f0, b2->f1
        let want = DMatrix::from_row_slice(
            4,
            4,
            &[0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0],
        );
        assert!((chain.matrix() - &want).amax() < 1e-15);
    }

    #[test]
    fn n1_swap() {
        let chain = build_reduced_chain(1).unwrap();
        assert_eq!(chain.matrix(), &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        assert!(matches!(build_reduced_chain(0), Err(WalkError::Domain(_))));
    }

    #[test]
    fn unitary_and_sparse() {
        for n in 1..=100 {
            let chain = build_reduced_chain(n).unwrap();
            assert!(chain.unitarity_defect() < 1e-12, "n={n}");
            for col in chain.matrix().column_iter() {
                assert!(col.iter().filter(|x| **x != 0.0).count() <= 2);
            }
        }
    }

    #[test]
    fn displayed_entries() {
        let n = 7usize;
        let nf = n as f64;
        let u = build_reduced_chain(n as u32).unwrap();
        let m = u.matrix();
        // first row: (0, -(n-2)/n, sqrt(4n-4)/n)
        assert!((m[(0, 1)] + (nf - 2.0) / nf).abs() < 1e-15);
        assert!((m[(0, 2)] - (4.0 * nf - 4.0).sqrt() / nf).abs() < 1e-15);
        assert_eq!(m[(1, 0)], 1.0);
        // last row: (..., sqrt(4n-4)/n, -(n-2)/n, 0)
        let last = 2 * n - 1;
        assert!((m[(last, last - 2)] - (4.0 * nf - 4.0).sqrt() / nf).abs() < 1e-15);
        assert!((m[(last, last - 1)] + (nf - 2.0) / nf).abs() < 1e-15);
        assert_eq!(m[(last - 1, last)], 1.0);
        // third row: -(n-4)/n at b2, sqrt(8n-16)/n at f2
        assert!((m[(2, 3)] + (nf - 4.0) / nf).abs() < 1e-15);
        assert!((m[(2, 4)] - (8.0 * nf - 16.0).sqrt() / nf).abs() < 1e-15);
    }

    #[test]
    fn sector_sizes() {
        let chain = build_reduced_chain(8).unwrap();
        assert_eq!(chain.forward_sector_size(0), Some(8));
        assert_eq!(chain.forward_sector_size(3), Some(5 * 56));
        assert_eq!(chain.backward_sector_size(3), Some(3 * 56));
        assert_eq!(chain.backward_sector_size(8), Some(8));
        let total: u128 = (0..8).map(|i| chain.forward_sector_size(i).unwrap()).sum();
        assert_eq!(total, 8 * 128);
        assert_eq!(chain.forward_index(0), Some(0));
        assert_eq!(chain.backward_index(8), Some(15));
        assert_eq!(chain.forward_index(8), None);
        assert_eq!(chain.backward_index(0), None);
    }

    #[test]
    fn n2_nilpotent() {
        assert_eq!(spectral_radius_check(2).unwrap(), 0.0);
        assert_eq!(spectral_radius_check(1).unwrap(), 0.0);
    }

    #[test]
    fn spectral_radius_below_one() {
        let rho = spectral_radius_check(8).unwrap();
        assert!(rho > 0.9 && rho < 1.0, "{rho}");
    }

    #[test]
    fn antipode_unreachable_before_n_steps() {
        for n in 1..=12u32 {
            let series = reduced_first_passage(n, &StoppingRule::reduced_chain().with_max_steps(Some(400))).unwrap();
            for t in 0..n as usize {
                assert_eq!(series.p(t), Some(0.0), "n={n} t={t}");
            }
            assert!(series.p(n as usize).unwrap() > 0.0);
        }
    }
}
