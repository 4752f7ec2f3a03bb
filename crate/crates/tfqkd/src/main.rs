//! Command-line front end: configuration, subcommand dispatch, gain-table
//! ingestion, and CSV/JSON emission for plotting and regression.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use tfqkd::channel::GainTable;
use tfqkd::config::{parse_config, ConfigError, RunConfig};
use tfqkd::decoy::bound_yields;
use tfqkd::crossterm::phi_bounds;
use tfqkd::keyrate::{
    evaluate_point_detailed, evaluate_point_from_gains, max_tolerable_loss, plob_bound, sweep,
    MuGrid, MuStrategy, PipelineError, PointEvaluation, RateMode,
};

#[derive(Parser)]
#[command(
    name = "tfqkd",
    version,
    about = "Certified secret-key rates for no-phase-postselection twin-field QKD"
)]
struct Cli {
    /// JSON configuration file; built-in defaults apply when omitted
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one distance and print a JSON report
    Point(PointArgs),
    /// Evaluate a range of distances and print CSV rows
    Sweep(SweepArgs),
    /// Print the largest total channel loss (dB) with a positive key rate
    LossLimit(LossLimitArgs),
    /// Validate a measured gain table without computing rates
    IngestCheck(IngestArgs),
}

#[derive(Args)]
struct PointArgs {
    #[arg(long)]
    distance_km: f64,
    /// improved | original | infinite_improved | infinite_original
    #[arg(long)]
    mode: Option<String>,
    /// Measured gain table (CSV); overrides the config gains_file
    #[arg(long)]
    gains: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    from: f64,
    #[arg(long)]
    to: f64,
    #[arg(long)]
    step: f64,
    /// Optimize the code intensity at every point
    #[arg(long)]
    optimize_mu: bool,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LossLimitArgs {
    /// improved | original | infinite_improved | infinite_original
    #[arg(long)]
    mode: Option<String>,
    #[arg(long, default_value_t = 0.25)]
    resolution_db: f64,
    /// Probe with the configured fixed μ instead of optimizing it
    #[arg(long)]
    fixed_mu: bool,
}

#[derive(Args)]
struct IngestArgs {
    #[arg(long)]
    gains: PathBuf,
}

struct AppError {
    class: String,
    message: String,
    code: u8,
}

impl AppError {
    fn new(class: &str, message: impl Into<String>) -> Self {
        let code = match class.split('/').last() {
            Some("validation") | Some("config") | Some("schema") | Some("domain") => 2,
            Some("data-integrity") | Some("data") => 3,
            Some("estimation") => 4,
            Some("solver") => 5,
            Some("io") => 6,
            _ => 1,
        };
        AppError {
            class: class.to_string(),
            message: message.into(),
            code,
        }
    }
}

impl From<ConfigError> for AppError {
    fn from(e: ConfigError) -> Self {
        let class = match &e {
            ConfigError::Io { .. } => "config/io",
            ConfigError::Schema(_) => "config/schema",
            _ => "config/validation",
        };
        AppError::new(class, e.to_string())
    }
}

impl From<PipelineError> for AppError {
    fn from(e: PipelineError) -> Self {
        AppError::new(e.class(), e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {}", e.class, e.message);
            ExitCode::from(e.code)
        }
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<RunConfig, AppError> {
    match path {
        Some(p) => Ok(parse_config(p)?),
        None => Ok(RunConfig::default()),
    }
}

fn parse_mode(name: &Option<String>, config: &RunConfig) -> Result<RateMode, AppError> {
    match name {
        Some(s) => s
            .parse::<RateMode>()
            .map_err(|m| AppError::new("config/validation", m)),
        None => Ok(*config.modes.first().unwrap_or(&RateMode::Improved)),
    }
}

fn read_gain_table(path: &PathBuf) -> Result<GainTable, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::new("config/io", format!("cannot read {}: {e}", path.display())))?;
    GainTable::from_csv(&text)
        .map_err(|e| AppError::new("channel/data-integrity", e.to_string()))
}

fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Serialize)]
struct PointReport {
    #[serde(flatten)]
    evaluation: PointEvaluation,
    plob_bound: f64,
    gains_csv: Option<String>,
}

fn run(cli: Cli) -> Result<(), AppError> {
    let config = load_config(&cli.config)?;
    match cli.command {
        Command::Point(args) => {
            let mode = parse_mode(&args.mode, &config)?;
            let gains_path = args.gains.clone().or_else(|| config.gains_file.clone());
            let (evaluation, gains_csv) = match gains_path {
                Some(path) => {
                    let table = read_gain_table(&path)?;
                    let eval = evaluate_point_from_gains(
                        &config.channel,
                        &table,
                        &config.intensities,
                        &config.settings,
                        args.distance_km,
                        mode,
                    )?;
                    (eval, table.to_csv())
                }
                None => {
                    let eval = evaluate_point_detailed(
                        &config.channel,
                        &config.intensities,
                        &config.settings,
                        args.distance_km,
                        mode,
                    )?;
                    let table = config
                        .channel
                        .build_gain_table(&config.intensities, args.distance_km)
                        .map_err(PipelineError::from)?;
                    (eval, table.to_csv())
                }
            };
            let report = PointReport {
                plob_bound: plob_bound(config.channel.loss_coeff(), args.distance_km),
                gains_csv: Some(gains_csv),
                evaluation,
            };
            let json = serde_json::to_string_pretty(&report)
                .map_err(|e| AppError::new("report/io", e.to_string()))?;
            println!("{json}");
            Ok(())
        }
        Command::Sweep(args) => {
            if !(args.step > 0.0) || args.to < args.from {
                return Err(AppError::new(
                    "config/validation",
                    format!(
                        "sweep range needs from <= to and step > 0, got [{}, {}] step {}",
                        args.from, args.to, args.step
                    ),
                ));
            }
            let mut distances = Vec::new();
            let count = ((args.to - args.from) / args.step).floor() as usize;
            for j in 0..=count {
                let d = args.from + j as f64 * args.step;
                if d > args.to + 1e-9 {
                    break;
                }
                distances.push(d);
            }
            let strategy = if args.optimize_mu {
                match config.mu_strategy {
                    MuStrategy::Optimize(grid) => MuStrategy::Optimize(grid),
                    MuStrategy::Fixed => MuStrategy::Optimize(MuGrid::default()),
                }
            } else {
                config.mu_strategy
            };
            let rows = sweep(
                &config.channel,
                &config.intensities,
                &config.settings,
                &distances,
                &config.modes,
                strategy,
            );
            let mut csv =
                String::from("distance_km,loss_db,mode,mu,q_code,e_code,i_ae_upper,skr,plob_bound\n");
            for row in &rows {
                match &row.result {
                    Ok(p) => {
                        let _ = writeln!(
                            csv,
                            "{},{},{},{},{},{},{},{},{}",
                            fmt_f(p.distance_km),
                            fmt_f(p.total_loss_db),
                            p.mode,
                            fmt_f(p.mu),
                            fmt_f(p.q_code.value()),
                            fmt_f(p.e_code.value()),
                            fmt_f(p.i_ae_upper.value()),
                            fmt_f(p.skr.value()),
                            fmt_f(plob_bound(config.channel.loss_coeff(), p.distance_km)),
                        );
                    }
                    Err(e) => {
                        eprintln!(
                            "warning[{}]: distance {} mode {}: {}",
                            e.class(),
                            row.distance_km,
                            row.mode,
                            e
                        );
                    }
                }
            }
            match args.out {
                Some(path) => std::fs::write(&path, csv).map_err(|e| {
                    AppError::new("report/io", format!("cannot write {}: {e}", path.display()))
                })?,
                None => print!("{csv}"),
            }
            Ok(())
        }
        Command::LossLimit(args) => {
            let mode = parse_mode(&args.mode, &config)?;
            let strategy = if args.fixed_mu {
                MuStrategy::Fixed
            } else {
                match config.mu_strategy {
                    MuStrategy::Optimize(grid) => MuStrategy::Optimize(grid),
                    MuStrategy::Fixed => MuStrategy::Optimize(MuGrid::default()),
                }
            };
            let limit = max_tolerable_loss(
                &config.channel,
                &config.intensities,
                &config.settings,
                mode,
                args.resolution_db,
                strategy,
            )?;
            if limit.no_key {
                eprintln!("warning[keyrate/no-key]: no positive rate even at zero loss");
            }
            println!("{}", fmt_f(limit.loss_db));
            Ok(())
        }
        Command::IngestCheck(args) => {
            let table = read_gain_table(&args.gains)?;
            ingest_check(&config, &table)
        }
    }
}

/// Validates a measured gain table: coverage of the configured intensity
/// sets, the exact vacuum-pair identity, and feasibility of both estimation
/// programs. Prints one line per check.
fn ingest_check(config: &RunConfig, table: &GainTable) -> Result<(), AppError> {
    let ints = &config.intensities;
    if table.mu() != ints.mu() {
        return Err(AppError::new(
            "channel/data-integrity",
            format!(
                "table code intensity {} does not match configured mu {}",
                table.mu(),
                ints.mu()
            ),
        ));
    }
    for &w1 in ints.i1() {
        for &w2 in ints.i1() {
            if table.d1(w1, w2).is_none() {
                return Err(AppError::new(
                    "channel/data-integrity",
                    format!("missing d1 entry for ({w1}, {w2})"),
                ));
            }
        }
    }
    for &w1 in ints.i2() {
        for &w2 in ints.i2() {
            if table.d2(w1, w2).is_none() {
                return Err(AppError::new(
                    "channel/data-integrity",
                    format!("missing d2 entry for ({w1}, {w2})"),
                ));
            }
        }
    }
    for (w1, w2, _) in table.d2_pairs() {
        if !ints.i2().contains(&w1) || !ints.i2().contains(&w2) {
            return Err(AppError::new(
                "channel/data-integrity",
                format!("d2 entry ({w1}, {w2}) lies outside the configured I2 set"),
            ));
        }
    }
    println!("coverage: ok ({} d1 entries, {} d2 entries)", table.d1_len(), table.d2_len());

    // the vacuum pair has no cross terms at all, so the two decoy modes
    // must agree there exactly (up to the LP feasibility tolerance)
    let q1 = table.d1(0.0, 0.0).expect("coverage checked").value();
    let q2 = table.d2(0.0, 0.0).expect("coverage checked").value();
    if (q1 - q2).abs() > config.settings.lp_tolerance {
        return Err(AppError::new(
            "crossterm/data-integrity",
            format!(
                "decoy modes disagree at the vacuum pair (0, 0): d1 = {q1}, d2 = {q2}"
            ),
        ));
    }
    println!("vacuum identity: ok (|d2 - d1| = {:.3e})", (q1 - q2).abs());

    let yields = bound_yields(table, ints, config.settings.yield_cutoff)
        .map_err(PipelineError::from)?;
    println!("yield programs: feasible");

    phi_bounds(table, &yields, ints, ints.mu(), config.settings.pair_cutoff)
        .map_err(PipelineError::from)?;
    println!("cross-term program: feasible");
    println!("ok");
    Ok(())
}
