use num_complex::Complex64;

use crate::coin::CoinOperator;
use crate::error::{Result, WalkError};
use crate::graph::{HypercubeGraph, LabeledGraph, DEFAULT_MAX_HYPERCUBE_DIMENSION};
use crate::numeric::binomial;
use crate::state::WalkState;
use crate::walk::{
    build_walk_operator, run_first_passage, summarize, AbsorptionProcess, AbsorptionSummary, FirstPassageSeries,
    StoppingRule,
};

/// Grover diffusion coin of dimension n.
pub fn grover_coin(n: u32) -> Result<CoinOperator> {
    if n == 0 {
        return Err(WalkError::Domain("Grover coin needs n >= 1".into()));
    }
    CoinOperator::grover(n as usize)
}

/// The n-cube with the default dimension cap.
pub fn hypercube_graph(n: u32) -> Result<HypercubeGraph> {
    HypercubeGraph::new(n)
}

/// Coin state of the walker at the origin at time 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StartCoin {
    /// (1/√n) Σ_a |a, 0⟩, invariant under permuting the coordinates.
    #[default]
    Symmetric,
    /// |a, 0⟩ for a zero-based label a.
    Label(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypercubeConfig {
    pub n: u32,
    pub absorbing_vertex: usize,
    pub start: StartCoin,
    pub stop: StoppingRule,
    pub max_dimension: u32,
}

impl HypercubeConfig {
    /// Absorber at g_1⋯g_i, Hamming distance `distance` from the origin.
    pub fn at_distance(n: u32, distance: u32) -> Result<Self> {
        if n == 0 {
            return Err(WalkError::Domain("hypercube dimension must be at least 1".into()));
        }
        if distance > n {
            return Err(WalkError::Domain(format!("Hamming distance {distance} exceeds n = {n}")));
        }
        let vertex = (0..distance).fold(0usize, |v, a| v | 1usize << (n - 1 - a));
        Self::with_vertex(n, vertex)
    }

    pub fn with_vertex(n: u32, absorbing_vertex: usize) -> Result<Self> {
        if n == 0 {
            return Err(WalkError::Domain("hypercube dimension must be at least 1".into()));
        }
        if n < usize::BITS && absorbing_vertex >> n != 0 {
            return Err(WalkError::Domain(format!("vertex {absorbing_vertex:#b} is not an {n}-bit vector")));
        }
        Ok(Self {
            n,
            absorbing_vertex,
            start: StartCoin::Symmetric,
            stop: StoppingRule::full_space(),
            max_dimension: DEFAULT_MAX_HYPERCUBE_DIMENSION,
        })
    }

    pub fn with_start(mut self, start: StartCoin) -> Self {
        self.start = start;
        self
    }

    pub fn with_stop(mut self, stop: StoppingRule) -> Self {
        self.stop = stop;
        self
    }

    pub fn with_max_dimension(mut self, max_dimension: u32) -> Self {
        self.max_dimension = max_dimension;
        self
    }

    /// Hamming distance between the origin and the absorber.
    pub fn distance(&self) -> u32 {
        self.absorbing_vertex.count_ones()
    }
}

/// Initial state at the origin.
pub fn start_state(n: u32, start: StartCoin) -> Result<WalkState> {
    let cube = HypercubeGraph::with_cap(n, usize::BITS - 1)?;
    let d = n as usize;
    match start {
        StartCoin::Symmetric => {
            let mut state = WalkState::zeros(d, cube.vertex_count());
            let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
            for a in 0..d {
                state.set_amplitude(a, 0, amp);
            }
            Ok(state)
        }
        StartCoin::Label(a) if a < d => Ok(WalkState::basis(d, cube.vertex_count(), a, 0)),
        StartCoin::Label(a) => Err(WalkError::Domain(format!("start label {a} out of range for n = {n}"))),
    }
}

/// First-passage series of the Grover walk on the full 2ⁿ·n-dimensional space.
pub fn full_walk(config: &HypercubeConfig) -> Result<FirstPassageSeries> {
    let cube = HypercubeGraph::with_cap(config.n, config.max_dimension)?;
    let walk = build_walk_operator(cube, grover_coin(config.n)?)?;
    let process = AbsorptionProcess::new(cube.vertex_count(), [config.absorbing_vertex])?;
    run_first_passage(start_state(config.n, config.start)?, &walk, &process, &config.stop)
}

pub fn full_walk_summary(config: &HypercubeConfig) -> Result<AbsorptionSummary> {
    full_walk(config).map(|series| summarize(&series))
}

/// min{1, n / C(n, i)}: the conjectured absorbing probability at Hamming distance i.
pub fn conjectured_probability(n: u32, distance: u32) -> f64 {
    (n as f64 / binomial(n as u64, distance as u64)).min(1.0)
}

/// (n² − n + 2)/2: the conjectured real absorbing time at Hamming distance 1.
pub fn conjectured_distance_one_time(n: u32) -> f64 {
    let n = n as f64;
    (n * n - n + 2.0) / 2.0
}

/// Which of the two symmetric sector states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    /// |f_i⟩: label points away from the origin.
    Forward,
    /// |b_i⟩: label points back toward the origin.
    Backward,
}

/// Full-space embedding of |f_i⟩ or |b_i⟩ for the origin as initial vertex.
pub fn sector_state(n: u32, level: u32, sector: Sector) -> Result<WalkState> {
    let cube = HypercubeGraph::new(n)?;
    let valid = match sector {
        Sector::Forward => level < n,
        Sector::Backward => (1..=n).contains(&level),
    };
    if !valid {
        return Err(WalkError::Domain(format!("no {sector:?} sector at level {level} for n = {n}")));
    }
    let d = n as usize;
    let mut members = Vec::new();
    for v in (0..cube.vertex_count()).filter(|v| v.count_ones() == level) {
        for a in 0..d {
            let next = cube.neighbor(v, a).count_ones();
            let keep = match sector {
                Sector::Forward => next == level + 1,
                Sector::Backward => next + 1 == level,
            };
            if keep {
                members.push((a, v));
            }
        }
    }
    let mut state = WalkState::zeros(d, cube.vertex_count());
    let amp = Complex64::new(1.0 / (members.len() as f64).sqrt(), 0.0);
    for (a, v) in members {
        state.set_amplitude(a, v, amp);
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(matches!(HypercubeConfig::at_distance(4, 5), Err(WalkError::Domain(_))));
        assert!(matches!(HypercubeConfig::with_vertex(3, 8), Err(WalkError::Domain(_))));
        let c = HypercubeConfig::at_distance(8, 3).unwrap();
        assert_eq!(c.absorbing_vertex, 0b1110_0000);
        assert_eq!(c.distance(), 3);
        let big = HypercubeConfig::at_distance(21, 1).unwrap();
        assert!(matches!(full_walk(&big), Err(WalkError::Resource(_))));
    }

    #[test]
    fn origin_absorber() {
        let s = full_walk_summary(&HypercubeConfig::at_distance(8, 0).unwrap()).unwrap();
        assert!((s.prob - 1.0).abs() < 1e-15);
        assert_eq!((s.time_nominal, s.time_real), (0.0, 0.0));
    }

    #[test]
    fn start_states() {
        let s = start_state(4, StartCoin::Symmetric).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
        assert!((s.amplitude(3, 0).re - 0.5).abs() < 1e-15);
        assert!(start_state(4, StartCoin::Label(4)).is_err());
        let f0 = sector_state(4, 0, Sector::Forward).unwrap();
        assert_eq!(f0, s);
    }

    #[test]
    fn sector_states_are_normalized() {
        for level in 0..5 {
            let f = sector_state(5, level, Sector::Forward).unwrap();
            assert!((f.norm_sqr() - 1.0).abs() < 1e-12);
            let b = sector_state(5, level + 1, Sector::Backward).unwrap();
            assert!((b.norm_sqr() - 1.0).abs() < 1e-12);
        }
        assert!(sector_state(5, 5, Sector::Forward).is_err());
        assert!(sector_state(5, 0, Sector::Backward).is_err());
    }

    #[test]
    fn predicted_laws() {
        assert_eq!(conjectured_probability(8, 0), 1.0);
        assert_eq!(conjectured_probability(8, 1), 1.0);
        assert!((conjectured_probability(8, 2) - 2.0 / 7.0).abs() < 1e-15);
        assert!((conjectured_probability(8, 4) - 8.0 / 70.0).abs() < 1e-15);
        assert_eq!(conjectured_distance_one_time(8), 29.0);
    }
}
