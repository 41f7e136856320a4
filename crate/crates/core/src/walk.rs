//! Coined walk operator W = S(C ⊗ I), absorbing measurements and first-passage statistics.
//!
//! The walk starts from a pure state and every absorbing measurement keeps only the
//! unabsorbed branch, so the surviving part of the density operator stays rank one:
//! one unnormalized amplitude vector is tracked instead of a density matrix.
//!
//! Convention: p(0) is the weight of the initial state on the absorbing set; for t ≥ 1
//! the walk applies W and then measures, giving p(t) = ‖P W (P′W)^{t−1} P′ψ₀‖².

use std::io::{self, Write};

use num_complex::Complex64;

use crate::coin::CoinOperator;
use crate::error::{Result, WalkError};
use crate::graph::LabeledGraph;
use crate::numeric::{format_sig17, CompensatedSum};
use crate::state::WalkState;

/// Accepted deviation of the initial squared norm from one.
pub const INITIAL_NORM_TOLERANCE: f64 = 1e-10;

/// One step of a coined walk on a labeled graph.
#[derive(Debug, Clone)]
pub struct WalkOperator<G> {
    graph: G,
    coin: CoinOperator,
}

/// Pair a labeled graph with a coin whose dimension equals the graph degree.
pub fn build_walk_operator<G: LabeledGraph>(graph: G, coin: CoinOperator) -> Result<WalkOperator<G>> {
    if coin.dimension() != graph.degree() {
        return Err(WalkError::Config(format!(
            "coin dimension {} does not match graph degree {}",
            coin.dimension(),
            graph.degree()
        )));
    }
    Ok(WalkOperator { graph, coin })
}

impl<G: LabeledGraph> WalkOperator<G> {
    pub fn graph(&self) -> &G {
        &self.graph
    }

    pub fn coin(&self) -> &CoinOperator {
        &self.coin
    }

    pub fn dimension(&self) -> usize {
        self.graph.degree() * self.graph.vertex_count()
    }

    fn check_shape(&self, state: &WalkState) -> Result<()> {
        if state.degree() != self.graph.degree() || state.vertex_count() != self.graph.vertex_count() {
            return Err(WalkError::Config(format!(
                "state has shape {}x{}, walk expects {}x{}",
                state.degree(),
                state.vertex_count(),
                self.graph.degree(),
                self.graph.vertex_count()
            )));
        }
        Ok(())
    }

    /// `output = S (C ⊗ I) input`. Every entry of `output` is overwritten.
    pub fn apply_into(&self, input: &WalkState, output: &mut WalkState) {
        let d = self.graph.degree();
        let mut tossed = vec![Complex64::new(0.0, 0.0); d];
        let out = output.amplitudes_mut();
        for v in 0..self.graph.vertex_count() {
            self.coin.apply(input.vertex_block(v), &mut tossed);
            for (a, amp) in tossed.iter().enumerate() {
                out[self.graph.neighbor(v, a) * d + a] = *amp;
            }
        }
    }

    pub fn apply(&self, input: &WalkState) -> Result<WalkState> {
        self.check_shape(input)?;
        let mut out = WalkState::zeros(self.graph.degree(), self.graph.vertex_count());
        self.apply_into(input, &mut out);
        Ok(out)
    }
}

/// Whether the initial state is measured at t = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StepConvention {
    /// p(0) is the initial weight on the absorbing set (a walker starting there is absorbed at once).
    #[default]
    MeasureInitial,
    /// Skip the t = 0 measurement; p(0) = 0 and the first measurement follows the first step.
    SkipInitial,
}

/// Absorbing vertex set with the projectors P (absorbed) and P′ (survive).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbsorptionProcess {
    vertex_count: usize,
    absorbing: Vec<usize>,
    convention: StepConvention,
}

impl AbsorptionProcess {
    pub fn new(vertex_count: usize, absorbing: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut absorbing: Vec<usize> = absorbing.into_iter().collect();
        absorbing.sort_unstable();
        absorbing.dedup();
        if absorbing.is_empty() {
            return Err(WalkError::Config("absorbing vertex set is empty".into()));
        }
        if let Some(&v) = absorbing.iter().find(|&&v| v >= vertex_count) {
            return Err(WalkError::Config(format!("absorbing vertex {v} outside a graph of {vertex_count} vertices")));
        }
        Ok(Self { vertex_count, absorbing, convention: StepConvention::default() })
    }

    pub fn with_convention(mut self, convention: StepConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn vertices(&self) -> &[usize] {
        &self.absorbing
    }

    pub fn convention(&self) -> StepConvention {
        self.convention
    }

    pub fn contains(&self, vertex: usize) -> bool {
        self.absorbing.binary_search(&vertex).is_ok()
    }

    /// Apply P′ in place and return ‖P ψ‖².
    pub fn absorb_in_place(&self, state: &mut WalkState) -> f64 {
        let d = state.degree();
        let amps = state.amplitudes_mut();
        let mut absorbed = 0.0;
        for &v in &self.absorbing {
            for z in &mut amps[v * d..(v + 1) * d] {
                absorbed += z.norm_sqr();
                *z = Complex64::new(0.0, 0.0);
            }
        }
        absorbed
    }
}

/// Measure `state` against the absorbing set: returns (‖Pψ‖², P′ψ).
pub fn absorb_measure(state: &WalkState, process: &AbsorptionProcess) -> (f64, WalkState) {
    let mut collapsed = state.clone();
    let absorbed = process.absorb_in_place(&mut collapsed);
    (absorbed, collapsed)
}

/// When to stop iterating a first-passage series.
///
/// A run stops at step T when T reaches `max_steps`, when the mass absorbed during the
/// last `window` steps is below `epsilon`, or when the unabsorbed mass is at most
/// `residual_tolerance`. The window defaults to max(100, 10·diameter).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StoppingRule {
    pub max_steps: Option<u64>,
    pub epsilon: f64,
    pub window: Option<u64>,
    pub residual_tolerance: f64,
    /// Number of leading p(t) values kept in the series; aggregates always cover every step.
    pub record_limit: usize,
}

impl StoppingRule {
    pub const FULL_SPACE_MAX_STEPS: u64 = 100_000;
    pub const REDUCED_MAX_STEPS: u64 = 1_000_000;
    pub const DEFAULT_EPSILON: f64 = 1e-12;
    pub const MIN_WINDOW: u64 = 100;

    /// Defaults for walks on the full (label, vertex) space.
    pub fn full_space() -> Self {
        Self {
            max_steps: Some(Self::FULL_SPACE_MAX_STEPS),
            epsilon: Self::DEFAULT_EPSILON,
            window: None,
            residual_tolerance: 0.0,
            record_limit: usize::MAX,
        }
    }

    /// Defaults for the 2n-dimensional reduced hypercube chain.
    pub fn reduced_chain() -> Self {
        Self { max_steps: Some(Self::REDUCED_MAX_STEPS), ..Self::full_space() }
    }

    pub fn with_max_steps(mut self, max_steps: Option<u64>) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_window(mut self, window: u64) -> Self {
        self.window = Some(window);
        self
    }

    pub fn with_residual_tolerance(mut self, tolerance: f64) -> Self {
        self.residual_tolerance = tolerance;
        self
    }

    pub fn with_record_limit(mut self, limit: usize) -> Self {
        self.record_limit = limit;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon >= 0.0) || !(self.residual_tolerance >= 0.0) {
            return Err(WalkError::Config("stopping tolerances must be non-negative".into()));
        }
        if self.max_steps.is_none() && self.epsilon == 0.0 {
            return Err(WalkError::Config("stopping rule can never fire: no step limit and epsilon = 0".into()));
        }
        if self.window == Some(0) {
            return Err(WalkError::Config("stopping window must be positive".into()));
        }
        Ok(())
    }

    /// Window length for a graph of the given diameter.
    pub fn window_for(&self, diameter: Option<usize>) -> u64 {
        self.window.unwrap_or_else(|| Self::MIN_WINDOW.max(10 * diameter.unwrap_or(0) as u64))
    }
}

impl Default for StoppingRule {
    fn default() -> Self {
        Self::full_space()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Converged,
    MaxSteps,
}

/// First-arrival probabilities p(0..=T) with unabsorbed-mass bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstPassageSeries {
    probabilities: Vec<f64>,
    absorbed: f64,
    weighted: f64,
    residual_mass: f64,
    truncation: u64,
    stop_reason: StopReason,
}

impl FirstPassageSeries {
    /// Series from explicit values p(0), p(1), ... with the given residual mass.
    pub fn from_probabilities(probabilities: Vec<f64>, residual_mass: f64) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(WalkError::Precondition("first-passage series is empty".into()));
        }
        if let Some(p) = probabilities.iter().find(|p| !(**p >= 0.0)) {
            return Err(WalkError::Precondition(format!("negative probability {p}")));
        }
        let absorbed: CompensatedSum = probabilities.iter().copied().collect();
        let weighted: CompensatedSum = probabilities.iter().enumerate().map(|(t, p)| t as f64 * p).collect();
        Ok(Self {
            truncation: probabilities.len() as u64 - 1,
            probabilities,
            absorbed: absorbed.value(),
            weighted: weighted.value(),
            residual_mass,
            stop_reason: StopReason::Converged,
        })
    }

    /// Recorded values p(0), p(1), ...; may be shorter than the run (see `record_limit`).
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn p(&self, t: usize) -> Option<f64> {
        self.probabilities.get(t).copied()
    }

    /// Σ_{t≤T} p(t) over every step of the run.
    pub fn absorbed_mass(&self) -> f64 {
        self.absorbed
    }

    /// Σ_{t≤T} t·p(t) over every step of the run.
    pub fn weighted_sum(&self) -> f64 {
        self.weighted
    }

    /// ‖ψ_T‖² at truncation.
    pub fn residual_mass(&self) -> f64 {
        self.residual_mass
    }

    pub fn truncation(&self) -> u64 {
        self.truncation
    }

    pub fn stop_reason(&self) -> StopReason {
        self.stop_reason
    }

    /// True when every p(t) up to the truncation is stored.
    pub fn is_complete(&self) -> bool {
        self.probabilities.len() as u64 == self.truncation + 1
    }

    /// Running partial sums Σ_{s≤t} p(s) over the recorded prefix.
    pub fn partial_sums(&self) -> Vec<f64> {
        let mut acc = CompensatedSum::new();
        self.probabilities
            .iter()
            .map(|&p| {
                acc.add(p);
                acc.value()
            })
            .collect()
    }

    /// Write the recorded prefix as CSV with columns `t,p_t`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,p_t")?;
        for (t, p) in self.probabilities.iter().enumerate() {
            writeln!(out, "{t},{}", format_sig17(*p))?;
        }
        Ok(())
    }
}

/// Incremental bookkeeping shared by every first-passage driver in the crate.
#[derive(Debug)]
pub(crate) struct PassageTracker {
    rule: StoppingRule,
    window: u64,
    probabilities: Vec<f64>,
    absorbed: CompensatedSum,
    weighted: CompensatedSum,
    window_mass: f64,
}

impl PassageTracker {
    pub(crate) fn new(rule: StoppingRule, diameter: Option<usize>) -> Result<Self> {
        rule.validate()?;
        Ok(Self {
            window: rule.window_for(diameter),
            rule,
            probabilities: Vec::new(),
            absorbed: CompensatedSum::new(),
            weighted: CompensatedSum::new(),
            window_mass: 0.0,
        })
    }

    #[inline]
    pub(crate) fn record(&mut self, t: u64, p: f64) {
        if self.probabilities.len() < self.rule.record_limit {
            self.probabilities.push(p);
        }
        self.absorbed.add(p);
        self.weighted.add(t as f64 * p);
        self.window_mass += p;
    }

    /// Decide whether to stop after step `t` with unabsorbed mass `residual`.
    pub(crate) fn check(&mut self, t: u64, residual: f64) -> Option<StopReason> {
        if residual <= self.rule.residual_tolerance {
            return Some(StopReason::Converged);
        }
        if t > 0 && t.is_multiple_of(self.window) {
            let quiet = self.window_mass < self.rule.epsilon;
            self.window_mass = 0.0;
            if quiet {
                return Some(StopReason::Converged);
            }
        }
        match self.rule.max_steps {
            Some(max) if t >= max => Some(StopReason::MaxSteps),
            _ => None,
        }
    }

    /// Like [`check`](Self::check) but only looks at the window and step limit, for drivers
    /// that measure the residual mass lazily.
    pub(crate) fn at_window_boundary(&self, t: u64) -> bool {
        t > 0 && t.is_multiple_of(self.window)
    }

    pub(crate) fn max_steps(&self) -> Option<u64> {
        self.rule.max_steps
    }

    pub(crate) fn finish(self, truncation: u64, residual_mass: f64, stop_reason: StopReason) -> FirstPassageSeries {
        FirstPassageSeries {
            probabilities: self.probabilities,
            absorbed: self.absorbed.value(),
            weighted: self.weighted.value(),
            residual_mass,
            truncation,
            stop_reason,
        }
    }
}

/// Step-by-step first-passage iteration on the full (label, vertex) space.
#[derive(Debug)]
pub struct FirstPassage<'a, G> {
    walk: &'a WalkOperator<G>,
    process: &'a AbsorptionProcess,
    state: WalkState,
    scratch: WalkState,
    time: u64,
    initial_absorbed: f64,
}

impl<'a, G: LabeledGraph> FirstPassage<'a, G> {
    /// Checks the initial state and performs the t = 0 measurement.
    pub fn new(initial: WalkState, walk: &'a WalkOperator<G>, process: &'a AbsorptionProcess) -> Result<Self> {
        walk.check_shape(&initial)?;
        if process.vertex_count != walk.graph.vertex_count() {
            return Err(WalkError::Config(format!(
                "absorbing process is defined on {} vertices, graph has {}",
                process.vertex_count,
                walk.graph.vertex_count()
            )));
        }
        let norm = initial.norm_sqr();
        if (norm - 1.0).abs() > INITIAL_NORM_TOLERANCE {
            return Err(WalkError::Precondition(format!("initial state must have unit norm, got squared norm {norm}")));
        }
        let mut state = initial;
        let initial_absorbed = match process.convention {
            StepConvention::MeasureInitial => process.absorb_in_place(&mut state),
            StepConvention::SkipInitial => 0.0,
        };
        let scratch = WalkState::zeros(state.degree(), state.vertex_count());
        Ok(Self { walk, process, state, scratch, time: 0, initial_absorbed })
    }

    /// p(0).
    pub fn initial_absorbed(&self) -> f64 {
        self.initial_absorbed
    }

    /// Advance one step and return p(t) for the new time t.
    pub fn step(&mut self) -> f64 {
        self.walk.apply_into(&self.state, &mut self.scratch);
        std::mem::swap(&mut self.state, &mut self.scratch);
        self.time += 1;
        self.process.absorb_in_place(&mut self.state)
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    /// Unabsorbed branch after the latest measurement.
    pub fn state(&self) -> &WalkState {
        &self.state
    }
}

/// Iterate the absorbing walk from `initial` until `stop` fires.
pub fn run_first_passage<G: LabeledGraph>(
    initial: WalkState,
    walk: &WalkOperator<G>,
    process: &AbsorptionProcess,
    stop: &StoppingRule,
) -> Result<FirstPassageSeries> {
    let mut tracker = PassageTracker::new(*stop, walk.graph.diameter())?;
    let mut passage = FirstPassage::new(initial, walk, process)?;
    tracker.record(0, passage.initial_absorbed());
    let mut residual = passage.state().norm_sqr();
    let mut reason = tracker.check(0, residual);
    while reason.is_none() {
        let p = passage.step();
        tracker.record(passage.time(), p);
        residual = passage.state().norm_sqr();
        reason = tracker.check(passage.time(), residual);
    }
    Ok(tracker.finish(passage.time(), residual, reason.expect("loop exits on a stop reason")))
}

/// Absorbing probability, nominal time and real time of a first-passage series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsorptionSummary {
    pub prob: f64,
    pub time_nominal: f64,
    /// time_nominal / prob, or 0 when `degenerate`.
    pub time_real: f64,
    /// residual_mass · T: a rough size for the contribution beyond the truncation.
    pub tail_bound: f64,
    pub residual_mass: f64,
    pub truncation: u64,
    /// Set when prob = 0 and the real time is undefined.
    pub degenerate: bool,
}

pub fn summarize(series: &FirstPassageSeries) -> AbsorptionSummary {
    let prob = series.absorbed_mass();
    let time_nominal = series.weighted_sum();
    let degenerate = prob == 0.0;
    AbsorptionSummary {
        prob,
        time_nominal,
        time_real: if degenerate { 0.0 } else { time_nominal / prob },
        tail_bound: series.residual_mass() * series.truncation() as f64,
        residual_mass: series.residual_mass(),
        truncation: series.truncation(),
        degenerate,
    }
}
