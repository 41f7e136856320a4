//! First-arrival amplitudes at the antipode from the rational generating function
//!
//! ```text
//! Σ_t a_t xᵗ = c_n xⁿ / det(I − x A),   c_n = 2ⁿ⁻¹ (n−1)! / nⁿ⁻¹,
//! ```
//!
//! where A = U_n P_n′. Writing det(λI − A) = λ²ⁿ + k₁λ²ⁿ⁻¹ + … + k₂ₙ, the amplitudes obey
//! the scalar recurrence a_t = c_n[t = n] − Σ_j k_j a_{t−j}.

use std::io::{self, Write};

use nalgebra::DMatrix;

use crate::error::{Result, WalkError};
use crate::hypercube::reduced::build_reduced_chain;
use crate::numeric::{dot, format_sig17, CompensatedSum};

/// Slack on Σ|a_t|² ≤ 1 before the recurrence is declared unstable.
pub const PROBABILITY_SLACK: f64 = 1e-9;

/// Coefficients [1, k₁, …, k_N] of det(λI − A) by the Faddeev–LeVerrier recursion.
pub fn characteristic_polynomial(a: &DMatrix<f64>) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(WalkError::Config(format!("characteristic polynomial of a {:?} matrix", a.shape())));
    }
    let dim = a.nrows();
    let entries: Vec<(usize, usize, f64)> = (0..dim)
        .flat_map(|j| (0..dim).map(move |i| (i, j)))
        .filter(|&(i, j)| a[(i, j)] != 0.0)
        .map(|(i, j)| (i, j, a[(i, j)]))
        .collect();
    let sparse_product = |m: &DMatrix<f64>| {
        let mut out = DMatrix::zeros(dim, dim);
        for &(i, j, v) in &entries {
            for c in 0..dim {
                out[(i, c)] += v * m[(j, c)];
            }
        }
        out
    };

    let mut coefficients = Vec::with_capacity(dim + 1);
    coefficients.push(1.0);
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for k in 1..=dim {
        // M_k = A M_{k−1} + k_{k−1} I,  k_k = −tr(A M_k)/k
        let mut next = sparse_product(&m);
        for i in 0..dim {
            next[(i, i)] += coefficients[k - 1];
        }
        let am = sparse_product(&next);
        coefficients.push(-am.trace() / k as f64);
        m = next;
    }
    Ok(coefficients)
}

/// c_n = 2ⁿ⁻¹(n−1)!/nⁿ⁻¹, the amplitude of the first arrival at t = n.
pub fn path_prefactor(n: u32) -> f64 {
    let nf = n as f64;
    (1..n).map(|j| 2.0 * j as f64 / nf).product()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratingSeries {
    pub n: u32,
    pub prefactor: f64,
    /// a_0, …, a_T, possibly truncated to a record limit.
    pub coefficients: Vec<f64>,
    pub horizon: u64,
    /// Σ_{t ≤ T} |a_t|².
    pub probability: f64,
    /// Σ_{t ≤ T} t |a_t|².
    pub absorbing_time: f64,
}

impl GeneratingSeries {
    /// Writes `n,t,a_t_re,a_t_im` rows for the recorded coefficients.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "n,t,a_t_re,a_t_im")?;
        for (t, a) in self.coefficients.iter().enumerate() {
            writeln!(out, "{},{},{},0", self.n, t, format_sig17(*a))?;
        }
        Ok(())
    }
}

/// a_0 … a_T of the antipodal generating function. Every coefficient is stored; for long
/// horizons use [`generating_coefficients_with`] with a small record limit.
pub fn generating_coefficients(n: u32, horizon: u64) -> Result<GeneratingSeries> {
    generating_coefficients_with(n, horizon, usize::MAX)
}

/// Like [`generating_coefficients`] but keeps only the first `record_limit` coefficients;
/// the sums always run to the full horizon.
pub fn generating_coefficients_with(n: u32, horizon: u64, record_limit: usize) -> Result<GeneratingSeries> {
    if n < 2 {
        return Err(WalkError::Domain(format!("antipodal generating function needs n >= 2, got {n}")));
    }
    let a = build_reduced_chain(n)?.surviving_transition();
    let poly = characteristic_polynomial(&a)?;
    let order = poly.len() - 1;
    // reversed so the dot product lines up with a_{t−N}, …, a_{t−1}
    let reversed: Vec<f64> = poly[1..].iter().rev().copied().collect();
    let prefactor = path_prefactor(n);

    // ring buffer written twice so every window of `order` past values is contiguous
    let mut history = vec![0.0; 2 * order];
    let mut coefficients = Vec::with_capacity(record_limit.min(horizon as usize + 1).min(1 << 24));
    let mut probability = CompensatedSum::new();
    let mut time = CompensatedSum::new();
    let mut slot = 0usize;
    let mut zero_run = 0usize;
    for t in 0..=horizon {
        let source = if t == n as u64 { prefactor } else { 0.0 };
        let mut value = source - dot(&reversed, &history[slot..slot + order]);
        // subnormal arithmetic is very slow and these amplitudes carry no probability
        if value.abs() < f64::MIN_POSITIVE {
            value = 0.0;
        }
        zero_run = if value == 0.0 { zero_run + 1 } else { 0 };
        if t > n as u64 && zero_run > order {
            // a full window of zeros: every later coefficient vanishes too
            let total = usize::try_from(horizon).map_or(usize::MAX, |h| h.saturating_add(1));
            coefficients.resize(record_limit.min(total), 0.0);
            break;
        }
        history[slot] = value;
        history[slot + order] = value;
        slot = if slot + 1 == order { 0 } else { slot + 1 };

        let sq = value * value;
        probability.add(sq);
        time.add(t as f64 * sq);
        if coefficients.len() < record_limit {
            coefficients.push(value);
        }
        if t % 1024 == 0 && !(probability.value() <= 1.0 + PROBABILITY_SLACK) {
            return Err(WalkError::Instability(format!(
                "generating recurrence for n = {n} diverged at t = {t}: Σ|a_t|² = {:e}",
                probability.value()
            )));
        }
    }
    if !(probability.value() <= 1.0 + PROBABILITY_SLACK) {
        return Err(WalkError::Instability(format!(
            "generating recurrence for n = {n}: Σ|a_t|² = {:e} exceeds 1",
            probability.value()
        )));
    }
    Ok(GeneratingSeries {
        n,
        prefactor,
        coefficients,
        horizon,
        probability: probability.value(),
        absorbing_time: time.value(),
    })
}
