//! Classical symmetric random walk on the n-cube absorbed at one vertex.
//!
//! By symmetry the expected absorbing time depends only on the Hamming distance i to the
//! absorber; `s[i]` is that expectation in steps.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::function::factorial::ln_binomial;

use crate::error::{Result, WalkError};
use crate::numeric::{binomial, binomial_exact, CompensatedSum, EXACT_BINOMIAL_MAX_N};

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalTimes {
    pub n: u32,
    /// s_0, …, s_n.
    pub s: Vec<f64>,
}

impl ClassicalTimes {
    pub fn at(&self, distance: usize) -> f64 {
        self.s[distance]
    }
}

fn check_dimension(n: u32) -> Result<()> {
    if n == 0 {
        return Err(WalkError::Domain("classical walk needs n >= 1".into()));
    }
    Ok(())
}

/// Closed-form absorbing times
/// s_k = Σ_{l<k} (Σ_{j>l} C(n, j)) / C(n−1, l).
pub fn classical_times_closed_form(n: u32) -> Result<ClassicalTimes> {
    check_dimension(n)?;
    let nn = n as u64;
    // ratio[l] = Σ_{j>l} C(n, j) / C(n−1, l)
    let ratio: Vec<f64> = if nn <= EXACT_BINOMIAL_MAX_N {
        let mut tail: u128 = 0;
        let mut out = vec![0.0; n as usize];
        for l in (0..nn).rev() {
            tail += binomial_exact(nn, l + 1).expect("n within exact range");
            out[l as usize] = tail as f64 / binomial_exact(nn - 1, l).expect("n within exact range") as f64;
        }
        out
    } else {
        let mut log_tail = f64::NEG_INFINITY;
        let mut out = vec![0.0; n as usize];
        for l in (0..nn).rev() {
            log_tail = log_add_exp(log_tail, ln_binomial(nn, l + 1));
            out[l as usize] = (log_tail - ln_binomial(nn - 1, l)).exp();
        }
        out
    };
    let mut s = Vec::with_capacity(n as usize + 1);
    let mut acc = CompensatedSum::new();
    s.push(0.0);
    for r in ratio {
        acc.add(r);
        s.push(acc.value());
    }
    Ok(ClassicalTimes { n, s })
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    }
}

/// Solves the tridiagonal first-step system
/// s_0 = 0, s_i = (i/n)s_{i−1} + ((n−i)/n)s_{i+1} + 1, s_n = s_{n−1} + 1.
///
/// Interior rows are multiplied by n so every coefficient is an integer. Elimination runs
/// from row n upward, writing s_i = α_i s_{i−1} + β_i. The α recurrence amplifies rounding
/// by (n−i)/i per row, so it has to stay exact, which the integer rows guarantee.
pub fn classical_times_linear_solve(n: u32) -> Result<ClassicalTimes> {
    check_dimension(n)?;
    let size = n as usize + 1;
    let nf = n as f64;
    // row i: lower[i]·s_{i−1} + diag[i]·s_i + upper[i]·s_{i+1} = rhs[i]
    let mut lower = vec![0.0; size];
    let mut diag = vec![1.0f64; size];
    let mut upper = vec![0.0; size];
    let mut rhs = vec![1.0; size];
    rhs[0] = 0.0;
    for i in 1..size - 1 {
        lower[i] = -(i as f64);
        diag[i] = nf;
        upper[i] = -(nf - i as f64);
        rhs[i] = nf;
    }
    lower[size - 1] = -1.0;

    let mut alpha = vec![0.0; size];
    let mut beta = vec![0.0; size];
    for i in (0..size).rev() {
        let (carry_alpha, carry_beta) = if i + 1 < size { (alpha[i + 1], beta[i + 1]) } else { (0.0, 0.0) };
        let pivot = diag[i] + upper[i] * carry_alpha;
        if pivot.abs() < 1e-300 {
            return Err(WalkError::Instability(format!("zero pivot in classical system at row {i}")));
        }
        alpha[i] = -lower[i] / pivot;
        beta[i] = (rhs[i] - upper[i] * carry_beta) / pivot;
    }
    let mut s = vec![0.0; size];
    s[0] = beta[0];
    for i in 1..size {
        s[i] = alpha[i] * s[i - 1] + beta[i];
    }
    Ok(ClassicalTimes { n, s })
}

/// The (n+1)×(n+1) first-step matrix A with A·(s_0, …, s_n)ᵀ = (0, 1, …, 1)ᵀ.
pub fn classical_system_matrix(n: u32) -> Result<DMatrix<f64>> {
    check_dimension(n)?;
    let size = n as usize + 1;
    let nf = n as f64;
    let mut a = DMatrix::identity(size, size);
    for i in 1..size - 1 {
        a[(i, i - 1)] = -(i as f64) / nf;
        a[(i, i + 1)] = -(nf - i as f64) / nf;
    }
    a[(size - 1, size - 2)] = -1.0;
    Ok(a)
}

/// Closed-form inverse B of [`classical_system_matrix`]; in one-based indices
/// b_{i1} = 1, b_{1j} = 0 for j ≥ 2, and b_{ij} = C(n, j−1) Σ_{l=0}^{min(i,j)−2} 1/C(n−1, l).
pub fn classical_inverse(n: u32) -> Result<DMatrix<f64>> {
    check_dimension(n)?;
    let size = n as usize + 1;
    let nn = n as u64;
    // prefix[k] = Σ_{l<k} 1/C(n−1, l)
    let mut prefix = vec![0.0; size];
    for k in 1..size {
        prefix[k] = prefix[k - 1] + 1.0 / binomial(nn - 1, k as u64 - 1);
    }
    Ok(DMatrix::from_fn(size, size, |i, j| match (i, j) {
        (_, 0) => 1.0,
        (0, _) => 0.0,
        _ => binomial(nn, j as u64) * prefix[i.min(j)],
    }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Trials per independently seeded chunk.
const CHUNK_TRIALS: u64 = 4096;

/// Sample mean and standard error of the absorbing time from distance `distance`.
///
/// Trials run in fixed-size chunks, each with its own ChaCha8 stream derived from
/// `seed` and the chunk index, so the result does not depend on the thread count.
pub fn classical_monte_carlo(n: u32, distance: u32, trials: u64, seed: u64) -> Result<MonteCarloEstimate> {
    check_dimension(n)?;
    if distance > n {
        return Err(WalkError::Domain(format!("distance {distance} exceeds n = {n}")));
    }
    if trials == 0 {
        return Err(WalkError::Domain("Monte Carlo needs at least one trial".into()));
    }
    if n > 63 {
        return Err(WalkError::Resource(format!("Monte Carlo walk on a {n}-cube does not fit a u64 vertex")));
    }
    let start: u64 = (0..distance).fold(0, |v, a| v | 1 << (n - 1 - a));
    let chunks = trials.div_ceil(CHUNK_TRIALS);
    let partials: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let count = CHUNK_TRIALS.min(trials - chunk * CHUNK_TRIALS);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..count {
                let steps = walk_to_origin(start, n, &mut rng) as f64;
                sum += steps;
                sum_sq += steps * steps;
            }
            (sum, sum_sq)
        })
        .collect();
    let (sum, sum_sq) = partials.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let count = trials as f64;
    let mean = sum / count;
    let variance = if trials > 1 { ((sum_sq - count * mean * mean) / (count - 1.0)).max(0.0) } else { 0.0 };
    Ok(MonteCarloEstimate { mean, stderr: (variance / count).sqrt(), trials, seed })
}

fn walk_to_origin<R: Rng>(mut vertex: u64, n: u32, rng: &mut R) -> u64 {
    let mut steps = 0;
    while vertex != 0 {
        vertex ^= 1 << rng.random_range(0..n);
        steps += 1;
    }
    steps
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n2_by_hand() {
        for times in [classical_times_closed_form(2).unwrap(), classical_times_linear_solve(2).unwrap()] {
            for (got, want) in times.s.iter().zip([0.0, 3.0, 4.0]) {
                assert!((got - want).abs() < 1e-12, "{:?}", times.s);
            }
        }
    }

    #[test]
    fn closed_form_matches_solve() {
        for n in 1..=40 {
            let a = classical_times_closed_form(n).unwrap();
            let b = classical_times_linear_solve(n).unwrap();
            for i in 1..=n as usize {
                assert!((a.s[i] - b.s[i]).abs() <= 1e-9 * b.s[i], "n={n} i={i}: {} vs {}", a.s[i], b.s[i]);
            }
        }
    }

    #[test]
    fn log_space_branch_is_continuous() {
        // n = 31 takes the log-space path; compare with the recurrence on consecutive differences
        let n = 31u32;
        let s = classical_times_closed_form(n).unwrap().s;
        let mut delta = 1.0;
        let mut want = vec![0.0; n as usize + 1];
        let mut diffs = vec![0.0; n as usize + 1];
        for i in (1..=n as usize).rev() {
            diffs[i] = delta;
            delta = ((n as f64 - (i - 1) as f64) * delta + n as f64) / (i - 1).max(1) as f64;
        }
        for i in 1..=n as usize {
            want[i] = want[i - 1] + diffs[i];
        }
        for i in 1..=n as usize {
            assert!((s[i] - want[i]).abs() <= 1e-11 * want[i], "i={i}");
        }
    }

    #[test]
    fn inverse_times_matrix() {
        for n in 1..=20 {
            let a = classical_system_matrix(n).unwrap();
            let b = classical_inverse(n).unwrap();
            let size = n as usize + 1;
            let err = (&b * &a - DMatrix::identity(size, size)).amax();
            assert!(err <= 1e-9, "n={n}: {err:e}");
        }
    }

    #[test]
    fn bounds() {
        let times = classical_times_closed_form(8).unwrap();
        for &s in &times.s[1..] {
            assert!((255.0..765.0).contains(&s));
        }
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let a = classical_monte_carlo(5, 3, 10_000, 7).unwrap();
        let b = classical_monte_carlo(5, 3, 10_000, 7).unwrap();
        assert_eq!(a, b);
        let c = classical_monte_carlo(5, 3, 10_000, 8).unwrap();
        assert_ne!(a.mean, c.mean);
        assert_eq!(classical_monte_carlo(5, 0, 10, 1).unwrap().mean, 0.0);
    }

    #[test]
    fn monte_carlo_agrees_for_n2() {
        let est = classical_monte_carlo(2, 1, 100_000, 2024).unwrap();
        assert!((est.mean - 3.0).abs() < 3.0 * est.stderr, "{est:?}");
    }
}
