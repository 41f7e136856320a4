//! Coin-tossing operators acting on the label space of a walk.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Result, WalkError};

/// Maximum entry of `C†C − I` accepted as unitary.
pub const UNITARITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Dense,
    /// 2|u⟩⟨u| − I about the uniform vector; applied in O(d).
    Grover,
}

/// A unitary d×d coin.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinOperator {
    matrix: DMatrix<Complex64>,
    kind: Kind,
}

impl CoinOperator {
    /// Wraps a square matrix after checking unitarity to within [`UNITARITY_TOLERANCE`].
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(WalkError::Config(format!(
                "coin must be a non-empty square matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let defect = unitarity_defect(&matrix);
        if defect > UNITARITY_TOLERANCE {
            return Err(WalkError::Config(format!("coin is not unitary: max |C†C - I| = {defect:e}")));
        }
        Ok(Self { matrix, kind: Kind::Dense })
    }

    pub fn from_real(rows: usize, cols: usize, row_major: &[f64]) -> Result<Self> {
        if row_major.len() != rows * cols {
            return Err(WalkError::Config("coin entry count does not match its shape".into()));
        }
        Self::new(DMatrix::from_row_iterator(rows, cols, row_major.iter().map(|&x| Complex64::new(x, 0.0))))
    }

    /// The Grover diffusion coin: diagonal 2/d − 1, off-diagonal 2/d.
    pub fn grover(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(WalkError::Domain("Grover coin needs dimension at least 1".into()));
        }
        let off = 2.0 / d as f64;
        let matrix = DMatrix::from_fn(d, d, |i, j| Complex64::new(if i == j { off - 1.0 } else { off }, 0.0));
        Ok(Self { matrix, kind: Kind::Grover })
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Max-entry norm of `C†C − I`.
    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.matrix)
    }

    /// Apply the coin to one vertex's label amplitudes, writing into `out`.
    #[inline]
    pub fn apply(&self, input: &[Complex64], out: &mut [Complex64]) {
        let d = self.dimension();
        debug_assert!(input.len() == d && out.len() == d);
        match self.kind {
            Kind::Grover => {
                let mean: Complex64 = input.iter().sum::<Complex64>() * (2.0 / d as f64);
                for (o, x) in out.iter_mut().zip(input) {
                    *o = mean - x;
                }
            }
            Kind::Dense => {
                for (r, o) in out.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (c, x) in input.iter().enumerate() {
                        acc += self.matrix[(r, c)] * x;
                    }
                    *o = acc;
                }
            }
        }
    }
}

fn unitarity_defect(m: &DMatrix<Complex64>) -> f64 {
    let gram = m.adjoint() * m;
    gram.iter()
        .enumerate()
        .map(|(k, z)| {
            let (i, j) = (k % gram.nrows(), k / gram.nrows());
            let target = if i == j { 1.0 } else { 0.0 };
            (z - Complex64::new(target, 0.0)).norm()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn grover_two_is_swap() {
        let d = CoinOperator::grover(2).unwrap();
        assert_eq!(d.matrix()[(0, 0)], c(0.0));
        assert_eq!(d.matrix()[(0, 1)], c(1.0));
        let mut out = [c(0.0); 2];
        d.apply(&[c(1.0), c(0.0)], &mut out);
        assert_eq!(out, [c(0.0), c(1.0)]);
    }

    #[test]
    fn grover_four_entries() {
        let d = CoinOperator::grover(4).unwrap();
        assert!((d.matrix()[(2, 2)].re + 0.5).abs() < 1e-15);
        assert!((d.matrix()[(2, 3)].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn grover_is_involution() {
        for n in 1..=100 {
            let d = CoinOperator::grover(n).unwrap();
            let sq = d.matrix() * d.matrix();
            let err = (sq - DMatrix::<Complex64>::identity(n, n)).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(err < 1e-12, "n={n}: {err}");
            assert!(d.unitarity_defect() < 1e-12);
            assert_eq!(d.matrix(), &d.matrix().transpose());
        }
        assert!(matches!(CoinOperator::grover(0), Err(WalkError::Domain(_))));
    }

    #[test]
    fn grover_fast_path_matches_dense() {
        let g = CoinOperator::grover(5).unwrap();
        let dense = CoinOperator::new(g.matrix().clone()).unwrap();
        let input: Vec<Complex64> = (0..5).map(|k| Complex64::new(k as f64 * 0.1, 1.0 - k as f64 * 0.2)).collect();
        let mut a = vec![c(0.0); 5];
        let mut b = vec![c(0.0); 5];
        g.apply(&input, &mut a);
        dense.apply(&input, &mut b);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn rejects_non_unitary() {
        let err = CoinOperator::from_real(2, 2, &[1.0, 1.0, 1.0, -1.0]).unwrap_err();
        assert!(matches!(err, WalkError::Config(_)));
        let err = CoinOperator::from_real(2, 3, &[0.0; 6]).unwrap_err();
        assert!(matches!(err, WalkError::Config(_)));
    }
}
