//! `psiweak` — configuration-driven probability-metric computations and
//! consistency/robustness experiments.
//!
//! Every subcommand reads one JSON config (see `config.rs` and the README
//! schema), runs deterministically from the config's master seed, and
//! writes `metadata.json`, `records.csv` and `summary.csv` into the output
//! directory. Exit codes: 0 success, 2 config error, 3 unsupported
//! combination, 4 numeric failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use psiweak::harness::{consistency_experiment, gc_sup_check, robustness_check};
use psiweak::measure::DiscreteMeasure;
use psiweak::metric::d_psi;
use psiweak::risk::check_scoring_modulus;

use psiweak_cli::config::{CommandKind, ExperimentConfig};
use psiweak_cli::output::OutputDir;
use psiweak_cli::CliError;

#[derive(Parser)]
#[command(name = "psiweak", about = "probability metrics and risk-estimator stability experiments", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Path to the JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config's `output_dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for replications; 0 means sequential.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Metric report between two inline measures.
    Metrics(RunArgs),
    /// Empirical-law convergence to the directing measure.
    Consistency(RunArgs),
    /// Glivenko-Cantelli check for iid draws.
    Gc(RunArgs),
    /// Estimator-law robustness under a path perturbation.
    Robustness(RunArgs),
    /// Scoring-modulus violation check.
    Elicitability(RunArgs),
}

impl Command {
    fn kind(&self) -> CommandKind {
        match self {
            Command::Metrics(_) => CommandKind::Metrics,
            Command::Consistency(_) => CommandKind::Consistency,
            Command::Gc(_) => CommandKind::Gc,
            Command::Robustness(_) => CommandKind::Robustness,
            Command::Elicitability(_) => CommandKind::Elicitability,
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Command::Metrics(a)
            | Command::Consistency(a)
            | Command::Gc(a)
            | Command::Robustness(a)
            | Command::Elicitability(a) => a,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("psiweak: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: &Command) -> Result<(), CliError> {
    let args = command.args();
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", args.config.display())))?;
    let config = ExperimentConfig::parse(&text)?;
    if config.command != command.kind() {
        return Err(CliError::Config(format!(
            "config is for command {:?} but {:?} was invoked",
            config.command.as_str(),
            command.kind().as_str()
        )));
    }
    let out_dir = args
        .out
        .clone()
        .or_else(|| config.output_dir.as_ref().map(PathBuf::from))
        .ok_or_else(|| {
            CliError::Config("no output directory (pass --out or set output_dir)".into())
        })?;

    // The experiment body runs inside a pool of the requested size, so
    // `--threads 0` is fully sequential while any other count parallelizes
    // replications; results are identical either way.
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads.max(1))
        .build()
        .map_err(|e| CliError::Numeric(format!("thread pool: {e}")))?;
    let (records, summary, stdout_line) = pool.install(|| execute(&config))?;

    let out = OutputDir::create(&out_dir)?;
    out.write_run(&config, args.threads, &records, &summary)?;
    if let Some(line) = stdout_line {
        println!("{line}");
    }
    println!("wrote {}", out_dir.display());
    Ok(())
}

/// Run the configured experiment; returns (records.csv, summary.csv, an
/// optional stdout line).
fn execute(config: &ExperimentConfig) -> Result<(String, String, Option<String>), CliError> {
    let space = config.build_space()?;
    match config.command {
        CommandKind::Metrics => {
            let (a_spec, b_spec) = config
                .measures
                .as_ref()
                .ok_or_else(|| CliError::Unsupported("metrics needs a measures pair".into()))?;
            let a = config.build_measure(a_spec, &space)?;
            let b = config.build_measure(b_spec, &space)?;
            let psi = config.build_gauge()?;
            let report =
                d_psi(&a, &b, &psi, &space).map_err(|e| CliError::Numeric(e.to_string()))?;
            let row = report.to_csv_row();
            let csv = format!(
                "{}\n{}\n",
                psiweak::metric::MetricReport::<f64>::CSV_HEADER,
                row
            );
            Ok((csv.clone(), csv, Some(row)))
        }
        CommandKind::Consistency => {
            let gen = config.build_generator(&space)?;
            let psi = config.build_gauge()?;
            let run = consistency_experiment(
                &gen,
                &psi,
                config.n_schedule()?,
                config.seeds()?,
                config.seed,
            )?;
            Ok((run.records_csv(), run.summary_csv(), None))
        }
        CommandKind::Gc => {
            let gen = config.build_generator(&space)?;
            let run = gc_sup_check(&gen, config.n_schedule()?, config.seeds()?, config.seed)?;
            Ok((run.records_csv(), run.summary_csv(), None))
        }
        CommandKind::Robustness => {
            let gen = config.build_generator(&space)?;
            let theta = config.build_perturbation()?;
            let tau = config.build_statistic()?;
            let kappa = config.build_kappa()?;
            let psi = config.build_gauge()?;
            let run = robustness_check(
                &gen,
                &theta,
                &tau,
                &kappa,
                &psi,
                config.n_schedule()?,
                config.reps()?,
                config.seed,
            )?;
            let verdict = if run.all_hold() { "holds" } else { "violated" };
            let line = format!(
                "robustness bound {verdict}: max lhs {} vs rhs {} + margin {} (theta_norm {}, quasi_invariant {})",
                run.max_lhs(),
                run.rhs,
                run.margin,
                run.theta_norm,
                run.quasi_invariant,
            );
            Ok((run.records_csv(), run.summary_csv(), Some(line)))
        }
        CommandKind::Elicitability => {
            let tau = config.build_statistic()?;
            let scoring = config.build_scoring()?;
            let kappa = config.build_kappa()?;
            let n_pairs = config
                .pairs
                .ok_or_else(|| CliError::Unsupported("elicitability needs a pairs count".into()))?;
            if !space.is_real_line() {
                return Err(CliError::Unsupported(
                    "elicitability checks run on the real line".into(),
                ));
            }
            let pairs = random_pairs(config.seed, n_pairs)?;
            let report = check_scoring_modulus(&tau, &scoring, &kappa, &pairs, &space)
                .map_err(|e| CliError::Numeric(e.to_string()))?;
            let summary = format!(
                "statistic,scoring,kappa,pairs,violations\n{},{},{},{},{}\n",
                report.statistic,
                report.scoring,
                report.kappa,
                report.rows.len(),
                report.violations
            );
            let line = format!(
                "{} violations out of {} pairs",
                report.violations,
                report.rows.len()
            );
            Ok((report.to_csv(), summary, Some(line)))
        }
    }
}

/// Deterministic random measure pairs for the elicitability check.
fn random_pairs(
    seed: u64,
    n_pairs: u64,
) -> Result<Vec<(DiscreteMeasure<f64>, DiscreteMeasure<f64>)>, CliError> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let make = |rng: &mut ChaCha12Rng| -> Result<DiscreteMeasure<f64>, CliError> {
        let k = rng.gen_range(1..=3usize);
        let raw: Vec<(f64, f64)> = (0..k)
            .map(|_| (rng.gen_range(-5.0..5.0), rng.gen_range(0.05..1.0)))
            .collect();
        let total: f64 = raw.iter().map(|(_, w)| w).sum();
        DiscreteMeasure::from_reals(
            &raw.into_iter()
                .map(|(x, w)| (x, w / total))
                .collect::<Vec<_>>(),
        )
        .map_err(|e| CliError::Numeric(e.to_string()))
    };
    (0..n_pairs)
        .map(|_| Ok((make(&mut rng)?, make(&mut rng)?)))
        .collect()
}
