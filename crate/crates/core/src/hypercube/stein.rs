//! Closed form of the antipodal absorbing time through the Stein equation
//! X − A X Aᵀ = e₁e₁ᵀ with A = U_n P_n′.
//!
//! X = Σ_t Aᵗ e₁e₁ᵀ (Aᵗ)ᵀ, so the diagonal of X is the expected number of visits to each
//! sector and tr X − 1 is the nominal absorbing time at the antipode.

use nalgebra::DMatrix;

use crate::error::{Result, WalkError};
use crate::hypercube::reduced::build_reduced_chain;

/// Largest n for the Kronecker-product solver, whose system has (2n)² unknowns.
pub const DIRECT_MAX_N: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SteinMethod {
    /// Squaring iteration X ← X + A_k X A_kᵀ, A_k ← A_k²; after k rounds X sums 2ᵏ terms.
    #[default]
    Doubling,
    /// X ← Q + A X Aᵀ until the residual drops below tolerance.
    FixedPoint,
    /// Dense LU solve of (I − A ⊗ A) vec X = vec Q.
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteinOptions {
    pub method: SteinMethod,
    /// Bound on the max-entry residual ‖X − A X Aᵀ − Q‖.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SteinOptions {
    fn default() -> Self {
        Self { method: SteinMethod::Doubling, tolerance: 1e-10, max_iterations: 1_000_000 }
    }
}

impl SteinOptions {
    pub fn with_method(mut self, method: SteinMethod) -> Self {
        self.method = method;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteinSolution {
    pub x: DMatrix<f64>,
    pub residual: f64,
    pub method: SteinMethod,
    pub iterations: usize,
}

impl SteinSolution {
    /// tr X − 1.
    pub fn absorbing_time(&self) -> f64 {
        self.x.trace() - 1.0
    }
}

/// Solve the antipodal Stein equation with the default doubling method.
pub fn solve_stein(n: u32) -> Result<(SteinSolution, f64)> {
    solve_stein_with(n, &SteinOptions::default())
}

pub fn solve_stein_with(n: u32, options: &SteinOptions) -> Result<(SteinSolution, f64)> {
    if n < 2 {
        return Err(WalkError::Domain(format!("Stein closed form needs n >= 2, got {n}")));
    }
    if options.method == SteinMethod::Direct && n > DIRECT_MAX_N {
        return Err(WalkError::Resource(format!(
            "direct Stein solve is limited to n <= {DIRECT_MAX_N}; use doubling for n = {n}"
        )));
    }
    let a = build_reduced_chain(n)?.surviving_transition();
    let dim = a.nrows();
    let mut q = DMatrix::zeros(dim, dim);
    q[(0, 0)] = 1.0;
    let solution = solve_stein_equation(&a, &q, options)?;
    let time = solution.absorbing_time();
    Ok((solution, time))
}

/// Solve X − A X Aᵀ = Q for a square A with spectral radius below one.
pub fn solve_stein_equation(a: &DMatrix<f64>, q: &DMatrix<f64>, options: &SteinOptions) -> Result<SteinSolution> {
    if !a.is_square() || a.shape() != q.shape() {
        return Err(WalkError::Config(format!(
            "Stein equation needs square A and Q of equal shape, got {:?} and {:?}",
            a.shape(),
            q.shape()
        )));
    }
    let (x, iterations) = match options.method {
        SteinMethod::Doubling => doubling(a, q, options.max_iterations),
        SteinMethod::FixedPoint => fixed_point(a, q, options),
        SteinMethod::Direct => direct(a, q)?,
    };
    let residual = stein_residual(a, &x, q);
    if !(residual < options.tolerance) {
        return Err(WalkError::Convergence { method: method_name(options.method), residual, iterations });
    }
    Ok(SteinSolution { x, residual, method: options.method, iterations })
}

/// Max-entry norm of X − A X Aᵀ − Q.
pub fn stein_residual(a: &DMatrix<f64>, x: &DMatrix<f64>, q: &DMatrix<f64>) -> f64 {
    (x - a * x * a.transpose() - q).amax()
}

fn method_name(method: SteinMethod) -> &'static str {
    match method {
        SteinMethod::Doubling => "Stein doubling",
        SteinMethod::FixedPoint => "Stein fixed point",
        SteinMethod::Direct => "Stein direct solve",
    }
}

fn doubling(a: &DMatrix<f64>, q: &DMatrix<f64>, max_iterations: usize) -> (DMatrix<f64>, usize) {
    let cap = max_iterations.min(200);
    let mut powers = vec![a.clone()];
    let mut x = q.clone();
    let mut rounds = 0;
    while rounds < cap {
        rounds += 1;
        let power = powers.last().expect("nonempty");
        let update = power * &x * power.transpose();
        x += &update;
        let next = power * power;
        let size = next.amax();
        if !size.is_finite() || !x.amax().is_finite() {
            return (x, rounds);
        }
        powers.push(next);
        if size < 1e-13 && update.amax() <= f64::EPSILON * x.amax() {
            break;
        }
    }
    // Rounding in the high powers of A leaves a residual R; the correction E solves the same
    // equation with right-hand side −R and is summed with the stored powers.
    let mut residual = stein_residual(a, &x, q);
    for _ in 0..4 {
        let mut correction = -(&x - a * &x * a.transpose() - q);
        for power in &powers {
            correction += power * &correction * power.transpose();
        }
        let refined = &x + correction;
        let refined_residual = stein_residual(a, &refined, q);
        if !(refined_residual < 0.5 * residual) {
            break;
        }
        x = refined;
        residual = refined_residual;
        rounds += 1;
    }
    (x, rounds)
}

fn fixed_point(a: &DMatrix<f64>, q: &DMatrix<f64>, options: &SteinOptions) -> (DMatrix<f64>, usize) {
    let at = a.transpose();
    let mut x = q.clone();
    for k in 1..=options.max_iterations {
        // the residual of x is exactly the size of the next update
        let next = q + a * &x * &at;
        let change = (&next - &x).amax();
        if change < options.tolerance || !change.is_finite() {
            return (x, k);
        }
        x = next;
    }
    (x, options.max_iterations)
}

fn direct(a: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<(DMatrix<f64>, usize)> {
    let dim = a.nrows();
    // column-major vec: vec(A X Aᵀ) = (A ⊗ A) vec X
    let mut system = -a.kronecker(a);
    for i in 0..dim * dim {
        system[(i, i)] += 1.0;
    }
    let rhs = nalgebra::DVector::from_column_slice(q.as_slice());
    let sol = system
        .lu()
        .solve(&rhs)
        .ok_or_else(|| WalkError::Domain("I − A ⊗ A is singular: A has an eigenvalue pair with product 1".into()))?;
    Ok((DMatrix::from_column_slice(dim, dim, sol.as_slice()), 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let (_, t2) = solve_stein(2).unwrap();
        assert!((t2 - 2.0).abs() < 1e-12);
        let (_, t3) = solve_stein(3).unwrap();
        assert!((t3 - 4.0).abs() < 1e-10);
        let (sol, t8) = solve_stein(8).unwrap();
        assert!((t8 - 22.313_650_793_650_79).abs() < 1e-9, "{t8}");
        assert!(sol.residual < 1e-10);
    }

    #[test]
    fn methods_agree() {
        for n in [4, 7, 10] {
            let (_, d) = solve_stein(n).unwrap();
            for method in [SteinMethod::FixedPoint, SteinMethod::Direct] {
                let (_, t) = solve_stein_with(n, &SteinOptions::default().with_method(method)).unwrap();
                assert!((t - d).abs() < 1e-8 * d, "n={n} {method:?}: {t} vs {d}");
            }
        }
    }

    #[test]
    fn domain_and_resource_errors() {
        assert!(matches!(solve_stein(1), Err(WalkError::Domain(_))));
        let direct = SteinOptions::default().with_method(SteinMethod::Direct);
        assert!(matches!(solve_stein_with(31, &direct), Err(WalkError::Resource(_))));
    }

    #[test]
    fn divergent_fixed_point_reports_convergence_error() {
        let a = DMatrix::from_row_slice(1, 1, &[1.0]);
        let q = DMatrix::from_row_slice(1, 1, &[1.0]);
        let options = SteinOptions { method: SteinMethod::FixedPoint, tolerance: 1e-10, max_iterations: 50 };
        assert!(matches!(solve_stein_equation(&a, &q, &options), Err(WalkError::Convergence { .. })));
    }
}
