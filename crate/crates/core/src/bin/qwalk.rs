use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use absorbing_qwalk::experiment::{
    default_output_path, run_experiment, write_output, Experiment, ExperimentConfig, StopOverrides,
};
use absorbing_qwalk::hypercube::{StartCoin, SteinMethod, SteinOptions};
use absorbing_qwalk::WalkError;

const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_CONVERGENCE: u8 = 4;
const EXIT_OUTPUT: u8 = 5;
const EXIT_INVALID_VALUE: u8 = 6;

/// Absorbing probabilities and absorbing times of coined quantum walks, written as CSV.
#[derive(Parser, Debug)]
#[command(name = "qwalk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// CSV destination [default: $QWALK_OUTPUT_DIR/<command>.csv, or ./<command>.csv]
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Worker threads for independent rows
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Step limit T_max [default: 100000, or 1000000 on the reduced chain]
    #[arg(long)]
    t_max: Option<u64>,
    /// Stop once the mass absorbed over one window falls below this [default: 1e-12]
    #[arg(long)]
    epsilon: Option<f64>,
    /// Stop once the unabsorbed mass is at most this [default: 0]
    #[arg(long)]
    residual_tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// r_m against m for one coin parameter
    LineRm {
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        m_min: u32,
        #[arg(long, default_value_t = 30)]
        m_max: u32,
        #[command(flatten)]
        common: Common,
    },
    /// r_m at fixed m over a uniform grid of coin parameters
    LineLimitSweep {
        #[arg(long, default_value_t = 30)]
        m: u32,
        #[arg(long, default_value_t = 0.0)]
        p_min: f64,
        #[arg(long, default_value_t = 1.0)]
        p_max: f64,
        #[arg(long, default_value_t = 0.05)]
        p_step: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Probability and times for every Hamming distance of the absorber
    HypercubeTable {
        #[arg(long, default_value_t = 8)]
        n: u32,
        /// Start in |a, 0⟩ (zero-based label) instead of the symmetric coin state
        #[arg(long)]
        start_label: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Antipodal absorbing time on the reduced chain over a range of n
    HypercubeScaling {
        #[arg(long, default_value_t = 2)]
        n_min: u32,
        #[arg(long, default_value_t = 100)]
        n_max: u32,
        #[arg(long, default_value_t = 1)]
        n_step: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Classical absorbing times, exact and sampled
    ClassicalScaling {
        #[arg(long, default_value_t = 1)]
        n_min: u32,
        #[arg(long, default_value_t = 20)]
        n_max: u32,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest n that gets Monte Carlo estimates
        #[arg(long, default_value_t = 12)]
        mc_max_n: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the reduced series, the Stein solution and the generating series
    SolverCrosscheck {
        #[arg(long, default_value_t = 2)]
        n_min: u32,
        #[arg(long, default_value_t = 20)]
        n_max: u32,
        #[arg(long, value_enum, default_value_t = SteinArg::Doubling)]
        stein: SteinArg,
        /// Residual bound the Stein solution must meet
        #[arg(long, default_value_t = SteinOptions::default().tolerance)]
        stein_tol: f64,
        /// Iteration cap for the fixed-point Stein method
        #[arg(long, default_value_t = SteinOptions::default().max_iterations)]
        stein_max_iterations: usize,
        /// Also write generating-series coefficients a_t to this CSV
        #[arg(long)]
        series_out: Option<PathBuf>,
        /// Coefficients per n written to --series-out
        #[arg(long, default_value_t = 1000)]
        series_records: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SteinArg {
    Doubling,
    FixedPoint,
    Direct,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::InvalidValue | ErrorKind::ValueValidation => EXIT_INVALID_VALUE,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };

    let (experiment, common, series_out) = match cli.command {
        Command::LineRm { p, m_min, m_max, common } => (Experiment::LineRm { p, m_min, m_max }, common, None),
        Command::LineLimitSweep { m, p_min, p_max, p_step, common } => {
            (Experiment::LineLimitSweep { m, p_min, p_max, p_step }, common, None)
        }
        Command::HypercubeTable { n, start_label, common } => {
            let start = start_label.map_or(StartCoin::Symmetric, StartCoin::Label);
            (Experiment::HypercubeTable { n, start }, common, None)
        }
        Command::HypercubeScaling { n_min, n_max, n_step, common } => {
            (Experiment::HypercubeScaling { n_min, n_max, n_step }, common, None)
        }
        Command::ClassicalScaling { n_min, n_max, trials, seed, mc_max_n, common } => {
            (Experiment::ClassicalScaling { n_min, n_max, trials, seed, mc_max_n }, common, None)
        }
        Command::SolverCrosscheck {
            n_min,
            n_max,
            stein,
            stein_tol,
            stein_max_iterations,
            series_out,
            series_records,
            common,
        } => {
            let method = match stein {
                SteinArg::Doubling => SteinMethod::Doubling,
                SteinArg::FixedPoint => SteinMethod::FixedPoint,
                SteinArg::Direct => SteinMethod::Direct,
            };
            let stein = SteinOptions { method, tolerance: stein_tol, max_iterations: stein_max_iterations };
            let records = if series_out.is_some() { series_records } else { 0 };
            (Experiment::SolverCrosscheck { n_min, n_max, stein, series_records: records }, common, series_out)
        }
    };

    let config = ExperimentConfig::new(experiment).with_jobs(common.jobs).with_stop(StopOverrides {
        t_max: common.t_max,
        epsilon: common.epsilon,
        residual_tolerance: common.residual_tol,
    });
    let output = match run_experiment(&config) {
        Ok(output) => output,
        Err(err) => {
            eprintln!("qwalk: {err}");
            return ExitCode::from(exit_code(&err));
        }
    };

    let path = common.output.unwrap_or_else(|| default_output_path(output.command));
    if let Err(err) = write_output(&path, &output.csv) {
        eprintln!("qwalk: cannot write {}: {err}", path.display());
        return ExitCode::from(EXIT_OUTPUT);
    }
    if let (Some(series_path), Some(series)) = (series_out, &output.series_csv) {
        if let Err(err) = write_output(&series_path, series) {
            eprintln!("qwalk: cannot write {}: {err}", series_path.display());
            return ExitCode::from(EXIT_OUTPUT);
        }
    }
    for line in &output.summary {
        println!("{line}");
    }
    println!("wrote {}", path.display());
    ExitCode::SUCCESS
}

fn exit_code(err: &WalkError) -> u8 {
    match err {
        WalkError::Resource(_) => EXIT_RESOURCE,
        WalkError::Convergence { .. } | WalkError::Instability(_) => EXIT_CONVERGENCE,
        WalkError::Config(_) | WalkError::Domain(_) | WalkError::Precondition(_) => EXIT_INVALID_VALUE,
    }
}
