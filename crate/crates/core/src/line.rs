//! Generalized Hadamard walks on the integer line with an absorbing boundary at m.
//!
//! The walker starts in |R, 0⟩. Each step applies the coin H_p, shifts R-amplitudes one
//! site right and L-amplitudes one site left, then removes the amplitude found at m.
//! Nothing ever lives to the right of m and the left edge of the support moves one site
//! per step, so the simulation keeps exactly the window [−t, m] at step t.

use crate::coin::CoinOperator;
use crate::error::{Result, WalkError};
use crate::walk::{FirstPassageSeries, PassageTracker, StopReason, StoppingRule};

/// Default bound on stored positions (two f64 buffers per chirality).
pub const DEFAULT_MAX_POSITIONS: usize = 50_000_000;

/// Number of trailing windows inspected for the monotone-tail diagnostic.
const TAIL_WINDOWS: usize = 4;

/// H_p = [[√p, √(1−p)], [√(1−p), −√p]]; p = 1/2 is the Hadamard coin.
pub fn generalized_hadamard_coin(p: f64) -> Result<CoinOperator> {
    check_parameter(p)?;
    let (a, b) = ((p).sqrt(), (1.0 - p).sqrt());
    CoinOperator::from_real(2, 2, &[a, b, b, -a])
}

/// The conjectured large-m limit of r_m: arcsin(2p − 1)/π + 1/2.
pub fn conjectured_limit(p: f64) -> Result<f64> {
    check_parameter(p)?;
    Ok((2.0 * p - 1.0).asin() / std::f64::consts::PI + 0.5)
}

fn check_parameter(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(WalkError::Domain(format!("coin parameter p = {p} is outside [0, 1]")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineWalkConfig {
    /// Absorbing vertex, m ≥ 1.
    pub m: u32,
    /// Coin parameter in [0, 1].
    pub p: f64,
    pub stop: StoppingRule,
    pub max_positions: usize,
}

impl LineWalkConfig {
    pub fn new(m: u32, p: f64) -> Result<Self> {
        let config = Self { m, p, stop: StoppingRule::full_space(), max_positions: DEFAULT_MAX_POSITIONS };
        config.validate()?;
        Ok(config)
    }

    pub fn with_stop(mut self, stop: StoppingRule) -> Self {
        self.stop = stop;
        self
    }

    pub fn with_max_positions(mut self, max_positions: usize) -> Self {
        self.max_positions = max_positions;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(WalkError::Domain("absorbing vertex m must be at least 1".into()));
        }
        check_parameter(self.p)?;
        self.stop.validate()
    }

    /// Window used by the stopping rule: the distance to the boundary plays the diameter.
    pub fn window(&self) -> u64 {
        self.stop.window_for(Some(self.m as usize))
    }
}

/// Real amplitudes of the R and L chiralities over positions [−left, m], padded by one
/// zero cell on each side.
struct LineBuffers {
    left: usize,
    m: usize,
    right: Vec<f64>,
    leftward: Vec<f64>,
    next_right: Vec<f64>,
    next_left: Vec<f64>,
}

impl LineBuffers {
    fn new(left: usize, m: usize) -> Self {
        let len = left + m + 3;
        let mut buffers = Self {
            left,
            m,
            right: vec![0.0; len],
            leftward: vec![0.0; len],
            next_right: vec![0.0; len],
            next_left: vec![0.0; len],
        };
        let origin = buffers.index(0);
        buffers.right[origin] = 1.0;
        buffers
    }

    #[inline]
    fn index(&self, position: i64) -> usize {
        (position + self.left as i64 + 1) as usize
    }

    /// Double the left extent, keeping the amplitudes in place relative to the positions.
    fn grow(&mut self, new_left: usize) {
        let shift = new_left - self.left;
        for buf in [&mut self.right, &mut self.leftward, &mut self.next_right, &mut self.next_left] {
            let mut grown = vec![0.0; new_left + self.m + 3];
            grown[shift..].copy_from_slice(buf);
            *buf = grown;
        }
        self.left = new_left;
    }

    /// Advance from step t − 1 to step t and return the amplitude mass arriving at m.
    #[inline]
    fn step(&mut self, t: u64, a: f64, b: f64) -> f64 {
        let lo = self.index(-(t as i64));
        let hi = self.index(self.m as i64);
        {
            let (src_r, src_l) = (&self.right[lo - 1..hi], &self.leftward[lo - 1..hi]);
            for ((out, r), l) in self.next_right[lo..=hi].iter_mut().zip(src_r).zip(src_l) {
                *out = a * r + b * l;
            }
            let (src_r, src_l) = (&self.right[lo + 1..=hi + 1], &self.leftward[lo + 1..=hi + 1]);
            for ((out, r), l) in self.next_left[lo..=hi].iter_mut().zip(src_r).zip(src_l) {
                *out = b * r - a * l;
            }
        }
        std::mem::swap(&mut self.right, &mut self.next_right);
        std::mem::swap(&mut self.leftward, &mut self.next_left);
        let absorbed = self.right[hi] * self.right[hi] + self.leftward[hi] * self.leftward[hi];
        self.right[hi] = 0.0;
        self.leftward[hi] = 0.0;
        debug_assert!(self.right[hi + 1] == 0.0 && self.leftward[hi + 1] == 0.0);
        absorbed
    }

    fn norm_sqr(&self, t: u64) -> f64 {
        let lo = self.index(-(t as i64));
        let hi = self.index(self.m as i64);
        self.right[lo..=hi].iter().chain(&self.leftward[lo..=hi]).map(|x| x * x).sum()
    }
}

/// Simulate the boundary-absorbed walk from |R, 0⟩ and return its first-passage series.
pub fn run_line_walk(config: &LineWalkConfig) -> Result<FirstPassageSeries> {
    config.validate()?;
    let m = config.m as usize;
    let positions_needed = |left: usize| left + m + 3;
    let initial_left = match config.stop.max_steps {
        Some(max) => {
            let max = usize::try_from(max).unwrap_or(usize::MAX);
            if max.saturating_add(m + 3) > config.max_positions {
                return Err(WalkError::Resource(format!(
                    "a line window for {max} steps needs {} positions, budget is {}",
                    max.saturating_add(m + 3),
                    config.max_positions
                )));
            }
            max.max(1)
        }
        None => 1024.min(config.max_positions.saturating_sub(m + 3)).max(1),
    };

    let mut tracker = PassageTracker::new(config.stop, Some(m))?;
    let mut buffers = LineBuffers::new(initial_left, m);
    let (a, b) = (config.p.sqrt(), (1.0 - config.p).sqrt());

    // the start vertex 0 is never the boundary since m ≥ 1
    tracker.record(0, 0.0);
    if let Some(reason) = tracker.check(0, 1.0) {
        return Ok(tracker.finish(0, 1.0, reason));
    }
    let mut t = 0u64;
    let (residual, reason) = loop {
        t += 1;
        if t as usize > buffers.left {
            let new_left = (2 * buffers.left).max(t as usize);
            if positions_needed(new_left) > config.max_positions {
                return Err(WalkError::Resource(format!(
                    "line window exceeded {} positions at step {t}",
                    config.max_positions
                )));
            }
            buffers.grow(new_left);
        }
        let p = buffers.step(t, a, b);
        tracker.record(t, p);
        if tracker.at_window_boundary(t) || tracker.max_steps() == Some(t) {
            let residual = buffers.norm_sqr(t);
            if let Some(reason) = tracker.check(t, residual) {
                break (residual, reason);
            }
        }
    };
    Ok(tracker.finish(t, residual, reason))
}

/// Truncated estimate of the eventual absorption probability r_m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryAbsorptionEstimate {
    /// Σ_{t≤T} p(t); never extrapolated.
    pub r_m: f64,
    pub truncation: u64,
    pub residual_mass: f64,
    pub stop_reason: StopReason,
    /// True when the mass absorbed per window was non-increasing over the last few windows.
    pub monotone_tail: bool,
}

pub fn estimate_rm(config: &LineWalkConfig) -> Result<BoundaryAbsorptionEstimate> {
    let series = run_line_walk(config)?;
    let window = config.window() as usize;
    let p = series.probabilities();
    let monotone_tail = series.is_complete() && p.len() >= TAIL_WINDOWS * window && {
        let sums: Vec<f64> = p[p.len() - TAIL_WINDOWS * window..].chunks(window).map(|c| c.iter().sum()).collect();
        sums.windows(2).all(|w| w[1] <= w[0])
    };
    Ok(BoundaryAbsorptionEstimate {
        r_m: series.absorbed_mass(),
        truncation: series.truncation(),
        residual_mass: series.residual_mass(),
        stop_reason: series.stop_reason(),
        monotone_tail,
    })
}
