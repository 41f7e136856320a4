//! Parameter sweeps for the line walk, the n-cube distance table and the
//! scaling runs, written as CSV.
//!
//! Every CSV starts with a `# qwalk ...` comment recording the resolved configuration,
//! followed by a header row and one row per parameter point in ascending order. Fits and
//! other derived quantities follow as trailing `#` comments. Rows are computed on a rayon
//! pool of `jobs` threads and collected in parameter order, so the bytes do not depend on
//! scheduling.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::classical::{classical_monte_carlo, classical_times_closed_form};
use crate::error::{Result, WalkError};
use crate::hypercube::{
    conjectured_probability, full_walk_summary, generating_coefficients_with, reduced_first_passage, solve_stein_with,
    HypercubeConfig, StartCoin, SteinMethod, SteinOptions,
};
use crate::line::{conjectured_limit, estimate_rm, LineWalkConfig};
use crate::numeric::{binomial, format_sig17 as g};
use crate::walk::{summarize, StoppingRule};

/// Environment variable naming the directory for CSV files written without `--output`.
pub const OUTPUT_DIR_ENV: &str = "QWALK_OUTPUT_DIR";

#[derive(Debug, Clone, PartialEq)]
pub enum Experiment {
    /// r_m for m in a range at one coin parameter.
    LineRm { p: f64, m_min: u32, m_max: u32 },
    /// r_m at fixed m over a uniform grid of coin parameters.
    LineLimitSweep { m: u32, p_min: f64, p_max: f64, p_step: f64 },
    /// Full-space summaries for every Hamming distance of the absorber.
    HypercubeTable { n: u32, start: StartCoin },
    /// Antipodal summaries on the reduced chain over a range of n.
    HypercubeScaling { n_min: u32, n_max: u32, n_step: u32 },
    /// Exact classical absorbing times with optional Monte Carlo estimates.
    ClassicalScaling { n_min: u32, n_max: u32, trials: u64, seed: u64, mc_max_n: u32 },
    /// Reduced series, Stein solution and generating series side by side.
    SolverCrosscheck { n_min: u32, n_max: u32, stein: SteinOptions, series_records: usize },
}

impl Experiment {
    pub fn command_name(&self) -> &'static str {
        match self {
            Experiment::LineRm { .. } => "line-rm",
            Experiment::LineLimitSweep { .. } => "line-limit-sweep",
            Experiment::HypercubeTable { .. } => "hypercube-table",
            Experiment::HypercubeScaling { .. } => "hypercube-scaling",
            Experiment::ClassicalScaling { .. } => "classical-scaling",
            Experiment::SolverCrosscheck { .. } => "solver-crosscheck",
        }
    }

    /// Stopping rule defaults: full-space limits for line and table runs, reduced-chain
    /// limits for the antipodal commands.
    pub fn default_stop(&self) -> StoppingRule {
        match self {
            Experiment::HypercubeScaling { .. } | Experiment::SolverCrosscheck { .. } => StoppingRule::reduced_chain(),
            _ => StoppingRule::full_space(),
        }
    }
}

/// Overrides applied on top of [`Experiment::default_stop`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StopOverrides {
    pub t_max: Option<u64>,
    pub epsilon: Option<f64>,
    pub residual_tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub stop: StopOverrides,
    pub jobs: usize,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self { experiment, stop: StopOverrides::default(), jobs: 1 }
    }

    pub fn with_stop(mut self, stop: StopOverrides) -> Self {
        self.stop = stop;
        self
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }

    pub fn stopping_rule(&self) -> StoppingRule {
        let mut rule = self.experiment.default_stop();
        if let Some(t) = self.stop.t_max {
            rule.max_steps = Some(t);
        }
        if let Some(e) = self.stop.epsilon {
            rule.epsilon = e;
        }
        if let Some(r) = self.stop.residual_tolerance {
            rule.residual_tolerance = r;
        }
        rule
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(WalkError::Config(msg));
        if self.jobs == 0 {
            return bad("--jobs must be at least 1".into());
        }
        if self.stop.t_max == Some(0) {
            return bad("--t-max must be at least 1".into());
        }
        if let Some(e) = self.stop.epsilon {
            if !(e > 0.0) {
                return bad(format!("--epsilon must be positive, got {e}"));
            }
        }
        if let Some(r) = self.stop.residual_tolerance {
            if !(r >= 0.0) {
                return bad(format!("--residual-tol must be non-negative, got {r}"));
            }
        }
        let range = |name: &str, lo: u32, hi: u32, min: u32| -> Result<()> {
            if lo < min || lo > hi {
                return Err(WalkError::Config(format!("{name} range {lo}..={hi} is empty or starts below {min}")));
            }
            Ok(())
        };
        let unit = |name: &str, p: f64| -> Result<()> {
            if !(0.0..=1.0).contains(&p) {
                return Err(WalkError::Config(format!("{name} = {p} is outside [0, 1]")));
            }
            Ok(())
        };
        match &self.experiment {
            Experiment::LineRm { p, m_min, m_max } => {
                unit("--p", *p)?;
                range("m", *m_min, *m_max, 1)?;
            }
            Experiment::LineLimitSweep { m, p_min, p_max, p_step } => {
                range("m", *m, *m, 1)?;
                unit("--p-min", *p_min)?;
                unit("--p-max", *p_max)?;
                if p_min > p_max || !(*p_step > 0.0) {
                    return bad(format!("p grid {p_min}..={p_max} step {p_step} is empty"));
                }
            }
            Experiment::HypercubeTable { n, start } => {
                range("n", *n, *n, 1)?;
                if let StartCoin::Label(a) = start {
                    if *a >= *n as usize {
                        return bad(format!("--start-label {a} is not a label of the {n}-cube"));
                    }
                }
            }
            Experiment::HypercubeScaling { n_min, n_max, n_step } => {
                range("n", *n_min, *n_max, 1)?;
                if *n_step == 0 {
                    return bad("--n-step must be at least 1".into());
                }
            }
            Experiment::ClassicalScaling { n_min, n_max, trials, .. } => {
                range("n", *n_min, *n_max, 1)?;
                if *trials == 0 {
                    return bad("--trials must be at least 1".into());
                }
            }
            Experiment::SolverCrosscheck { n_min, n_max, stein, .. } => {
                range("n", *n_min, *n_max, 2)?;
                if !(stein.tolerance > 0.0) {
                    return bad(format!("--stein-tol must be positive, got {}", stein.tolerance));
                }
                if stein.max_iterations == 0 {
                    return bad("--stein-max-iterations must be at least 1".into());
                }
            }
        }
        self.stopping_rule().validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub command: &'static str,
    /// Primary CSV, including the configuration comment and trailing fit comments.
    pub csv: String,
    /// One human-readable line per row.
    pub summary: Vec<String>,
    /// Extra CSV with generating-series coefficients (solver-crosscheck only).
    pub series_csv: Option<String>,
}

/// `$QWALK_OUTPUT_DIR/<command>.csv`, or `./<command>.csv` when the variable is unset.
pub fn default_output_path(command: &str) -> PathBuf {
    let dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
    dir.join(format!("{command}.csv"))
}

pub fn write_output(path: &Path, contents: &str) -> std::io::Result<()> {
    std::fs::write(path, contents)
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| WalkError::Resource(format!("cannot start {} worker threads: {e}", config.jobs)))?;
    pool.install(|| dispatch(config))
}

fn parallel_rows<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> Result<R> + Sync + Send) -> Result<Vec<R>> {
    items.par_iter().map(f).collect::<Vec<_>>().into_iter().collect()
}

fn config_line(config: &ExperimentConfig, fields: &str) -> String {
    let stop = config.stopping_rule();
    let t_max = stop.max_steps.map_or("none".to_string(), |t| t.to_string());
    let window = stop.window.map_or("auto".to_string(), |w| w.to_string());
    format!(
        "# qwalk {} {fields} t_max={t_max} epsilon={:e} window={window} residual_tol={:e} jobs={}\n",
        config.experiment.command_name(),
        stop.epsilon,
        stop.residual_tolerance,
        config.jobs
    )
}

fn dispatch(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let stop = config.stopping_rule();
    let command = config.experiment.command_name();
    let mut summary = Vec::new();
    let mut series_csv = None;
    let csv = match &config.experiment {
        Experiment::LineRm { p, m_min, m_max } => {
            let ms: Vec<u32> = (*m_min..=*m_max).collect();
            let rows = parallel_rows(&ms, |&m| estimate_rm(&LineWalkConfig::new(m, *p)?.with_stop(stop)))?;
            let mut csv = config_line(config, &format!("p={p} m_min={m_min} m_max={m_max}"));
            csv.push_str("m,p,r_m,T,residual\n");
            for (m, est) in ms.iter().zip(&rows) {
                writeln!(csv, "{m},{},{},{},{}", g(*p), g(est.r_m), est.truncation, g(est.residual_mass)).unwrap();
                summary.push(format!(
                    "m={m} p={p} r_m={:.6} T={} residual={:.3e}",
                    est.r_m, est.truncation, est.residual_mass
                ));
            }
            writeln!(csv, "# predicted limit arcsin(2p-1)/pi+1/2 = {}", g(conjectured_limit(*p)?)).unwrap();
            csv
        }
        Experiment::LineLimitSweep { m, p_min, p_max, p_step } => {
            let count = ((p_max - p_min) / p_step + 1e-9).floor() as usize + 1;
            // grid points are computed from the index, not accumulated
            let ps: Vec<f64> = (0..count).map(|k| (p_min + k as f64 * p_step).min(1.0)).collect();
            let rows = parallel_rows(&ps, |&p| estimate_rm(&LineWalkConfig::new(*m, p)?.with_stop(stop)))?;
            let mut csv = config_line(config, &format!("m={m} p_min={p_min} p_max={p_max} p_step={p_step}"));
            csv.push_str("m,p,r_m,T,residual\n");
            let mut worst = 0.0f64;
            for (p, est) in ps.iter().zip(&rows) {
                let limit = conjectured_limit(*p)?;
                worst = worst.max((est.r_m - limit).abs());
                writeln!(csv, "{m},{},{},{},{}", g(*p), g(est.r_m), est.truncation, g(est.residual_mass)).unwrap();
                summary.push(format!("m={m} p={p:.4} r_m={:.6} predicted={limit:.6} T={}", est.r_m, est.truncation));
            }
            writeln!(csv, "# max |r_m - (arcsin(2p-1)/pi+1/2)| = {}", g(worst)).unwrap();
            csv
        }
        Experiment::HypercubeTable { n, start } => {
            let distances: Vec<u32> = (0..=*n).collect();
            let rows = parallel_rows(&distances, |&i| {
                full_walk_summary(&HypercubeConfig::at_distance(*n, i)?.with_start(*start).with_stop(stop))
            })?;
            let start_name = match start {
                StartCoin::Symmetric => "symmetric".to_string(),
                StartCoin::Label(a) => format!("label:{a}"),
            };
            let mut csv = config_line(config, &format!("n={n} start={start_name}"));
            csv.push_str("n,i,prob,time_nominal,time_real,T,residual\n");
            let mut weighted = 0.0;
            let mut weight = 0.0;
            for (i, s) in distances.iter().zip(&rows) {
                writeln!(
                    csv,
                    "{n},{i},{},{},{},{},{}",
                    g(s.prob),
                    g(s.time_nominal),
                    g(s.time_real),
                    s.truncation,
                    g(s.residual_mass)
                )
                .unwrap();
                summary.push(format!(
                    "n={n} i={i} prob={:.4} (predicted {:.4}) nominal={:.4} real={:.4} T={}",
                    s.prob,
                    conjectured_probability(*n, *i),
                    s.time_nominal,
                    s.time_real,
                    s.truncation
                ));
                if *i > 0 {
                    let c = binomial(*n as u64, *i as u64);
                    weighted += c * s.time_real;
                    weight += c;
                }
            }
            writeln!(
                csv,
                "# real time averaged over absorbing vertices other than the start = {}",
                g(weighted / weight)
            )
            .unwrap();
            csv
        }
        Experiment::HypercubeScaling { n_min, n_max, n_step } => {
            let ns: Vec<u32> = (*n_min..=*n_max).step_by(*n_step as usize).collect();
            let rows = parallel_rows(&ns, |&n| reduced_first_passage(n, &stop).map(|s| summarize(&s)))?;
            let mut csv =
                config_line(config, &format!("n_min={n_min} n_max={n_max} n_step={n_step} absorber=antipode"));
            csv.push_str("n,i,prob,time_nominal,time_real,T,residual\n");
            for (n, s) in ns.iter().zip(&rows) {
                writeln!(
                    csv,
                    "{n},{n},{},{},{},{},{}",
                    g(s.prob),
                    g(s.time_nominal),
                    g(s.time_real),
                    s.truncation,
                    g(s.residual_mass)
                )
                .unwrap();
                summary.push(format!(
                    "n={n} prob={:.6} real={:.4} real/n^1.5={:.4} T={} residual={:.3e}",
                    s.prob,
                    s.time_real,
                    s.time_real / (*n as f64).powf(1.5),
                    s.truncation,
                    s.residual_mass
                ));
            }
            let points: Vec<(f64, f64)> = ns.iter().zip(&rows).map(|(&n, s)| (n as f64, s.time_real)).collect();
            for exponent in [1.5, 2.0] {
                writeln!(csv, "# fit time_real = a*n^{exponent}: a = {}", g(power_fit(&points, exponent))).unwrap();
            }
            if let Some(slope) = log_log_slope(&points) {
                writeln!(csv, "# log-log slope of time_real against n = {}", g(slope)).unwrap();
            }
            csv
        }
        Experiment::ClassicalScaling { n_min, n_max, trials, seed, mc_max_n } => {
            let ns: Vec<u32> = (*n_min..=*n_max).collect();
            let exact = parallel_rows(&ns, |&n| classical_times_closed_form(n))?;
            let jobs: Vec<(u32, u32)> =
                ns.iter().filter(|&&n| n <= *mc_max_n).flat_map(|&n| (0..=n).map(move |i| (n, i))).collect();
            // each (n, i) gets its own seed so rows do not share random streams
            let mc = parallel_rows(&jobs, |&(n, i)| classical_monte_carlo(n, i, *trials, row_seed(*seed, n, i)))?;
            let mut mc_iter = jobs.iter().zip(&mc);
            let mut csv = config_line(
                config,
                &format!("n_min={n_min} n_max={n_max} trials={trials} seed={seed} mc_max_n={mc_max_n}"),
            );
            csv.push_str("n,i,s_exact,s_mc,stderr,trials,seed\n");
            for times in &exact {
                let n = times.n;
                for (i, s) in times.s.iter().enumerate() {
                    if n <= *mc_max_n {
                        let (_, est) = mc_iter.next().expect("one estimate per row");
                        writeln!(
                            csv,
                            "{n},{i},{},{},{},{},{}",
                            g(*s),
                            g(est.mean),
                            g(est.stderr),
                            est.trials,
                            est.seed
                        )
                        .unwrap();
                    } else {
                        writeln!(csv, "{n},{i},{},,,0,", g(*s)).unwrap();
                    }
                }
                let list: Vec<String> = times.s.iter().map(|s| g(*s)).collect();
                summary.push(format!("n={n} s=({}) s_1/2^n={:.4}", list.join(", "), times.s[1] / 2f64.powi(n as i32)));
            }
            let points: Vec<(f64, f64)> = exact.iter().map(|t| (2f64.powi(t.n as i32), t.s[1])).collect();
            writeln!(csv, "# fit s_1 = c*2^n: c = {}", g(power_fit(&points, 1.0))).unwrap();
            csv
        }
        Experiment::SolverCrosscheck { n_min, n_max, stein, series_records } => {
            let ns: Vec<u32> = (*n_min..=*n_max).collect();
            let options = *stein;
            let rows = parallel_rows(&ns, |&n| {
                let series = reduced_first_passage(n, &stop)?;
                let (_, stein_time) = solve_stein_with(n, &options)?;
                let generating = generating_coefficients_with(n, series.truncation(), *series_records)?;
                Ok((series, stein_time, generating))
            })?;
            let method = match stein.method {
                SteinMethod::Doubling => "doubling",
                SteinMethod::FixedPoint => "fixed-point",
                SteinMethod::Direct => "direct",
            };
            let mut csv = config_line(
                config,
                &format!(
                    "n_min={n_min} n_max={n_max} stein={method} stein_tol={:e} stein_max_iterations={}",
                    stein.tolerance, stein.max_iterations
                ),
            );
            csv.push_str(
                "n,series_time,stein_time,generating_time,series_prob,generating_prob,T,residual,max_rel_diff\n",
            );
            let mut coefficients = String::from("n,t,a_t_re,a_t_im\n");
            for (n, (series, stein_time, generating)) in ns.iter().zip(&rows) {
                let times = [series.weighted_sum(), *stein_time, generating.absorbing_time];
                let spread = max_relative_difference(&times);
                writeln!(
                    csv,
                    "{n},{},{},{},{},{},{},{},{}",
                    g(times[0]),
                    g(times[1]),
                    g(times[2]),
                    g(series.absorbed_mass()),
                    g(generating.probability),
                    series.truncation(),
                    g(series.residual_mass()),
                    g(spread)
                )
                .unwrap();
                summary.push(format!(
                    "n={n} series={:.9} stein={:.9} generating={:.9} max_rel_diff={spread:.3e} T={}",
                    times[0],
                    times[1],
                    times[2],
                    series.truncation()
                ));
                if *series_records > 0 {
                    let mut block = Vec::new();
                    generating.write_csv(&mut block).expect("in-memory write");
                    let text = String::from_utf8(block).expect("ascii csv");
                    coefficients.push_str(text.split_once('\n').map_or("", |(_, rows)| rows));
                }
            }
            if *series_records > 0 {
                series_csv = Some(format!(
                    "{}{coefficients}",
                    config_line(config, &format!("n_min={n_min} n_max={n_max} records={series_records}"))
                ));
            }
            csv
        }
    };
    Ok(ExperimentOutput { command, csv, summary, series_csv })
}

/// Seed for one Monte Carlo row, a SplitMix64-style mix of the base seed and (n, i).
fn row_seed(seed: u64, n: u32, i: u32) -> u64 {
    let mut z = seed ^ ((n as u64) << 32 | i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Least-squares coefficient a in y = a·x^exponent.
pub fn power_fit(points: &[(f64, f64)], exponent: f64) -> f64 {
    let (num, den) = points.iter().fold((0.0, 0.0), |(num, den), &(x, y)| {
        let basis = x.powf(exponent);
        (num + basis * y, den + basis * basis)
    });
    num / den
}

/// Ordinary least-squares slope of ln y against ln x over points with positive coordinates.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> =
        points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if logs.len() < 2 {
        return None;
    }
    let k = logs.len() as f64;
    let (mx, my) = logs.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / k, b + y / k));
    let (sxy, sxx) = logs.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    (sxx > 0.0).then(|| sxy / sxx)
}

fn max_relative_difference(values: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            worst = worst.max((a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fits() {
        let pts: Vec<(f64, f64)> = (1..10).map(|n| (n as f64, 3.0 * (n as f64).powf(1.5))).collect();
        assert!((power_fit(&pts, 1.5) - 3.0).abs() < 1e-12);
        assert!((log_log_slope(&pts).unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(log_log_slope(&pts[..1]), None);
        assert!((max_relative_difference(&[1.0, 1.1, 0.9]) - 0.2 / 1.1).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        let bad_range = ExperimentConfig::new(Experiment::HypercubeScaling { n_min: 5, n_max: 4, n_step: 1 });
        assert!(matches!(bad_range.validate(), Err(WalkError::Config(_))));
        let bad_eps = ExperimentConfig::new(Experiment::HypercubeTable { n: 3, start: StartCoin::Symmetric })
            .with_stop(StopOverrides { epsilon: Some(0.0), ..Default::default() });
        assert!(bad_eps.validate().is_err());
        let bad_p = ExperimentConfig::new(Experiment::LineRm { p: 1.5, m_min: 1, m_max: 1 });
        assert!(bad_p.validate().is_err());
        let no_jobs = ExperimentConfig::new(Experiment::LineRm { p: 0.5, m_min: 1, m_max: 1 }).with_jobs(0);
        assert!(no_jobs.validate().is_err());
    }

    #[test]
    fn row_seeds_differ() {
        assert_ne!(row_seed(1, 2, 0), row_seed(1, 2, 1));
        assert_ne!(row_seed(1, 2, 0), row_seed(2, 2, 0));
        assert_eq!(row_seed(9, 4, 4), row_seed(9, 4, 4));
    }

    #[test]
    fn classical_rows() {
        let out = run_experiment(&ExperimentConfig::new(Experiment::ClassicalScaling {
            n_min: 2,
            n_max: 2,
            trials: 100,
            seed: 1,
            mc_max_n: 2,
        }))
        .unwrap();
        let rows: Vec<&str> = out.csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(rows[0], "n,i,s_exact,s_mc,stderr,trials,seed");
        assert!(rows[1].starts_with("2,0,0,0,0,100,"));
        assert!(rows[2].starts_with("2,1,3,"));
        assert!(rows[3].starts_with("2,2,4,"));
        assert_eq!(out.summary, vec!["n=2 s=(0, 3, 4) s_1/2^n=0.7500".to_string()]);
    }
}
