//! `indset` — command-line front end for the independent-set bounds engine.
//!
//! Subcommands:
//!
//! * `bounds`   — analytic degree thresholds at a density, or density
//!   thresholds at an average degree.
//! * `phi-scan` — sample the pair-overlap rate functions across `[0, alpha]`.
//! * `certify`  — sweep a density grid and certify where the overlap rate
//!   attains its global maximum.
//! * `moments`  — subset-count moments by closed form, exhaustive
//!   enumeration, and Monte Carlo.
//! * `simulate` — sample random multigraphs and run independent-set solvers.
//!
//! Every command is a deterministic function of its flags (and seed), so
//! repeated invocations produce byte-identical output. Exit codes: 0
//! success, 1 internal numeric failure, 2 usage error, 3 violated
//! precondition or exceeded work budget, 4 I/O or parse failure.

mod grid;
mod output;

use std::fmt::Write as _;
use std::fs::File;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use indset_core::bounds::{
    alpha_bounds, alpha_bounds_unchecked, bounds_report_for_alpha, bounds_report_for_c,
    c_lower_unchecked, c_upper, first_moment_alpha, lambert_w, w_expansion, BoundsReport,
    DEFAULT_X, DEFAULT_Y,
};
use indset_core::graph::{run_trials, solve_one, splitmix64, summarize, TrialSummary};
use indset_core::moments::moment_report;
use indset_core::stationary::{
    certify_global_max_with, schedule_c, stationary_report, suggested_margin, CertifyOptions,
    LemmaSchedule,
};
use indset_core::{
    Algorithm, EngineError, MaxCertificate, ModelParams, MomentReport, MultiGraph, SimResult,
    StationaryReport,
};

use grid::GridSpec;
use output::{csv_quote, fmt_f, fmt_opt, json_envelope, Format};

/// Errors surfaced to the user, each carrying its process exit code.
enum CliError {
    /// Flag combinations clap cannot check on its own.
    Usage(String),
    /// An engine failure from a single evaluation.
    Engine(EngineError),
    /// Every row of a sweep failed; carries the first row's exit code.
    Sweep { exit: u8, message: String },
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        CliError::Engine(e)
    }
}

fn engine_exit_code(e: &EngineError) -> u8 {
    match e {
        EngineError::InvalidParameter { .. } => 2,
        EngineError::BelowThreshold { .. } | EngineError::BudgetExceeded { .. } => 3,
        EngineError::Io(_) | EngineError::MalformedGraph(_) => 4,
        EngineError::RootSearch(_) => 1,
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Engine(e) => engine_exit_code(e),
            CliError::Sweep { exit, .. } => *exit,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Engine(e) => e.to_string(),
            CliError::Sweep { message, .. } => message.clone(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "indset",
    version,
    about = "Bounds engine and validation harness for independent sets in sparse random multigraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic thresholds: degree bounds at a density, or density bounds at a degree
    Bounds(BoundsArgs),
    /// Sample the overlap rate functions phi and psi across [0, alpha]
    #[command(name = "phi-scan")]
    PhiScan(PhiScanArgs),
    /// Sweep a density grid and certify where the overlap rate peaks
    Certify(CertifyArgs),
    /// Subset-count moments: closed forms, exhaustive enumeration, Monte Carlo
    Moments(MomentsArgs),
    /// Sample random multigraphs and run independent-set solvers on them
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct BoundsArgs {
    /// Independent-set density in (0, 1); pass exactly one of --alpha / --c
    #[arg(long)]
    alpha: Option<f64>,
    /// Average degree; pass exactly one of --alpha / --c
    #[arg(long)]
    c: Option<f64>,
    /// Window coefficient for the degree lower bound (needs x > 4/e)
    #[arg(long, default_value_t = DEFAULT_X)]
    x: f64,
    /// Window coefficient for the density lower bound (needs y > 4*sqrt(2)/e)
    #[arg(long, default_value_t = DEFAULT_Y)]
    y: f64,
    /// Evaluate even when a window coefficient is at or below its threshold
    #[arg(long)]
    force: bool,
    /// Output encoding
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct PhiScanArgs {
    /// Independent-set density in (0, 1/2)
    #[arg(long)]
    alpha: f64,
    /// Average degree (the edge weight is tuned to mu_star(alpha))
    #[arg(long)]
    c: f64,
    /// Grid steps across [0, alpha], at least 2; the product overlap
    /// alpha^2 is inserted as an extra row when the grid misses it
    #[arg(long, default_value_t = 256)]
    points: usize,
    /// Output encoding
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

/// How the average degree is chosen at each density of a certify sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CMode {
    /// c = 2 ln(1/alpha) / alpha
    #[value(name = "lemma2")]
    Lemma2,
    /// c = (2 ln(1/alpha) + 2) / alpha
    #[value(name = "lemma3")]
    Lemma3,
    /// c = (2 ln(1/alpha) + 2 - x sqrt(alpha)) / alpha
    #[value(name = "lemma4")]
    Lemma4,
    /// The fixed degree passed via --c
    #[value(name = "explicit")]
    Explicit,
}

#[derive(Args)]
struct CertifyArgs {
    /// Density sweep: VALUE or start:end:{log|lin}[:count]
    #[arg(long, value_parser = grid::parse_grid)]
    alpha_grid: GridSpec,
    /// Degree schedule applied at each density
    #[arg(long, value_enum, default_value_t = CMode::Lemma4)]
    c_mode: CMode,
    /// Average degree for --c-mode explicit
    #[arg(long)]
    c: Option<f64>,
    /// Window coefficient used by --c-mode lemma4
    #[arg(long, default_value_t = DEFAULT_X)]
    x: f64,
    /// Evaluation grid density for the certificate scan
    #[arg(long, default_value_t = 4096)]
    grid_points: usize,
    /// Tie margin for the certificate (default: min(1e-10, alpha^1.5 / 100))
    #[arg(long)]
    margin: Option<f64>,
    /// Output encoding
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct MomentsArgs {
    /// Number of vertices
    #[arg(long)]
    n: usize,
    /// Number of ordered edge draws
    #[arg(long)]
    m: usize,
    /// Subset size
    #[arg(long)]
    k: usize,
    /// Outside-edge weight in [0, 1]
    #[arg(long)]
    mu: f64,
    /// Also enumerate every graph and subset exactly
    #[arg(long)]
    brute: bool,
    /// Monte Carlo trial count
    #[arg(long)]
    mc: Option<u64>,
    /// Seed for the Monte Carlo sampler
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output encoding
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct SimulateArgs {
    /// Number of vertices (required unless --import supplies a graph)
    #[arg(long)]
    n: Option<usize>,
    /// Average degree, so m = round(c n / 2) (required unless --import)
    #[arg(long)]
    c: Option<f64>,
    /// Number of trials
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Solver to run on each graph
    #[arg(long, value_parser = parse_algorithm, default_value = "karp-sipser")]
    algo: Algorithm,
    /// Base seed; trial i uses graph seed (seed + i)
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Window coefficient for the reference density lower bound
    #[arg(long, default_value_t = DEFAULT_Y)]
    y: f64,
    /// Output encoding
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Solve this saved graph (text format) instead of sampling
    #[arg(long)]
    import: Option<PathBuf>,
    /// Save the sampled graphs: PATH for one trial, PATH.<i> for several
    #[arg(long)]
    export: Option<PathBuf>,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Bounds(args) => cmd_bounds(args),
        Command::PhiScan(args) => cmd_phi_scan(args),
        Command::Certify(args) => cmd_certify(args),
        Command::Moments(args) => cmd_moments(args),
        Command::Simulate(args) => cmd_simulate(args),
    }
}

/// Writes `text` to `path` when given, else to standard output.
fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(p) => {
            let mut f = File::create(p).map_err(EngineError::from)?;
            f.write_all(text.as_bytes()).map_err(EngineError::from)?;
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// bounds

fn cmd_bounds(args: BoundsArgs) -> Result<(), CliError> {
    let report = match (args.alpha, args.c) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "pass exactly one of --alpha or --c, not both".to_string(),
            ))
        }
        (None, None) => {
            return Err(CliError::Usage(
                "pass exactly one of --alpha or --c".to_string(),
            ))
        }
        (Some(alpha), None) => {
            if args.force {
                forced_alpha_report(alpha, args.x)?
            } else {
                bounds_report_for_alpha(alpha, args.x)?
            }
        }
        (None, Some(c)) => {
            if args.force {
                forced_c_report(c, args.y)?
            } else {
                bounds_report_for_c(c, args.y)?
            }
        }
    };
    let text = match args.format {
        Format::Json => json_envelope("bounds", &report),
        Format::Csv => bounds_csv(&report),
    };
    print!("{text}");
    Ok(())
}

/// Degree-side report without the window-coefficient gate on `x`.
fn forced_alpha_report(alpha: f64, x: f64) -> Result<BoundsReport, EngineError> {
    let (exact, simple) = c_upper(alpha);
    if exact.is_nan() {
        return Err(EngineError::InvalidParameter {
            name: "alpha",
            value: alpha,
            message: "density must lie strictly inside (0, 1)",
        });
    }
    Ok(BoundsReport {
        alpha: Some(alpha),
        x: Some(x),
        c_upper_exact: Some(exact),
        c_upper_simple: Some(simple),
        c_lower: Some(c_lower_unchecked(alpha, x)),
        c: None,
        alpha_upper: None,
        alpha_lower: None,
        y: None,
        w_value: None,
        expansion_terms: None,
        first_moment_alpha: None,
    })
}

/// Density-side report without the window-coefficient gate on `y`.
/// The average degree must still be at least 2 for the density bounds
/// to land inside (0, 1), so --force does not waive that check.
fn forced_c_report(c: f64, y: f64) -> Result<BoundsReport, EngineError> {
    let (upper, lower) = alpha_bounds_unchecked(c, y)?;
    let expansion = if c > std::f64::consts::E {
        Some(w_expansion(c, 9)?.1)
    } else {
        None
    };
    Ok(BoundsReport {
        c: Some(c),
        y: Some(y),
        alpha_upper: Some(upper),
        alpha_lower: Some(lower),
        w_value: Some(lambert_w(std::f64::consts::E * c / 2.0)),
        expansion_terms: expansion,
        first_moment_alpha: Some(first_moment_alpha(c)?),
        alpha: None,
        x: None,
        c_upper_exact: None,
        c_upper_simple: None,
        c_lower: None,
    })
}

/// One-row CSV of the scalar report fields (the expansion-term vector is
/// carried by the JSON encoding only).
fn bounds_csv(r: &BoundsReport) -> String {
    let mut out = String::from(
        "alpha,c,c_upper_exact,c_upper_simple,c_lower,x,alpha_upper,alpha_lower,y,\
         w_value,first_moment_alpha\n",
    );
    let cells = [
        r.alpha,
        r.c,
        r.c_upper_exact,
        r.c_upper_simple,
        r.c_lower,
        r.x,
        r.alpha_upper,
        r.alpha_lower,
        r.y,
        r.w_value,
        r.first_moment_alpha,
    ]
    .map(fmt_opt);
    out.push_str(&cells.join(","));
    out.push('\n');
    out
}

// ---------------------------------------------------------------------------
// phi-scan

fn cmd_phi_scan(args: PhiScanArgs) -> Result<(), CliError> {
    let params = ModelParams::new(args.alpha, args.c)?;
    let profile = params.scan_profile(args.points)?;
    let text = match args.format {
        Format::Json => json_envelope("phi-scan", &profile),
        Format::Csv => {
            let mut out = String::from("zeta,phi,psi\n");
            for p in &profile.points {
                let _ = writeln!(out, "{},{},{}", fmt_f(p.zeta), fmt_f(p.phi), fmt_f(p.psi));
            }
            out
        }
    };
    emit(args.out.as_deref(), &text)
}

// ---------------------------------------------------------------------------
// certify

/// Everything known about one density of a certify sweep. Rows that fail
/// keep their inputs and carry the failure text instead of results.
#[derive(Serialize)]
struct CertifyRow {
    alpha: f64,
    c: f64,
    stationary: Option<StationaryReport>,
    certificate: Option<MaxCertificate>,
    error: Option<String>,
}

fn cmd_certify(args: CertifyArgs) -> Result<(), CliError> {
    let schedule = match args.c_mode {
        CMode::Lemma2 => Some(LemmaSchedule::Lemma2),
        CMode::Lemma3 => Some(LemmaSchedule::Lemma3),
        CMode::Lemma4 => Some(LemmaSchedule::Lemma4 { x: args.x }),
        CMode::Explicit => None,
    };
    let explicit_c = match (args.c_mode, args.c) {
        (CMode::Explicit, None) => {
            return Err(CliError::Usage(
                "--c-mode explicit needs --c".to_string(),
            ))
        }
        (CMode::Explicit, Some(c)) => Some(c),
        (_, Some(_)) => {
            return Err(CliError::Usage(
                "--c is only meaningful with --c-mode explicit".to_string(),
            ))
        }
        (_, None) => None,
    };

    let mut rows = Vec::with_capacity(args.alpha_grid.0.len());
    let mut first_failure: Option<(u8, String)> = None;
    let mut ok_rows = 0usize;
    for &alpha in &args.alpha_grid.0 {
        let c = match explicit_c {
            Some(c) => c,
            None => schedule_c(schedule.expect("non-explicit mode has a schedule"), alpha),
        };
        let attempt: Result<(StationaryReport, MaxCertificate), EngineError> = (|| {
            let params = ModelParams::new(alpha, c)?;
            let report = stationary_report(&params)?;
            let options = CertifyOptions {
                grid_points: args.grid_points,
                margin: args.margin.unwrap_or_else(|| suggested_margin(alpha)),
            };
            let certificate = certify_global_max_with(&params, options)?;
            Ok((report, certificate))
        })();
        match attempt {
            Ok((report, certificate)) => {
                ok_rows += 1;
                rows.push(CertifyRow {
                    alpha,
                    c,
                    stationary: Some(report),
                    certificate: Some(certificate),
                    error: None,
                });
            }
            Err(e) => {
                if first_failure.is_none() {
                    first_failure = Some((engine_exit_code(&e), e.to_string()));
                }
                rows.push(CertifyRow {
                    alpha,
                    c,
                    stationary: None,
                    certificate: None,
                    error: Some(e.to_string()),
                });
            }
        }
    }

    let text = match args.format {
        Format::Json => json_envelope("certify", &rows),
        Format::Csv => certify_csv(&rows),
    };
    print!("{text}");

    if ok_rows == 0 {
        if let Some((exit, message)) = first_failure {
            return Err(CliError::Sweep {
                exit,
                message: format!("all {} sweep rows failed; first: {message}", rows.len()),
            });
        }
    }
    Ok(())
}

fn certify_csv(rows: &[CertifyRow]) -> String {
    let mut out = String::from(
        "alpha,c,zeta1,zeta2,zeta3,delta2,delta3,psi_at_zeta3,lemma2_ratio,lemma3_ratio,\
         argmax_zeta,phi_max,second_peak_value,margin,verdict,status\n",
    );
    for row in rows {
        let s = row.stationary.as_ref();
        let cert = row.certificate.as_ref();
        let cells = [
            fmt_f(row.alpha),
            fmt_f(row.c),
            fmt_opt(s.and_then(|r| r.zeta1)),
            fmt_opt(s.and_then(|r| r.zeta2)),
            fmt_opt(s.and_then(|r| r.zeta3)),
            fmt_opt(s.and_then(|r| r.delta2)),
            fmt_opt(s.and_then(|r| r.delta3)),
            fmt_opt(s.and_then(|r| r.psi_at_zeta3)),
            fmt_opt(s.and_then(|r| r.lemma2_ratio)),
            fmt_opt(s.and_then(|r| r.lemma3_ratio)),
            fmt_opt(cert.map(|c| c.argmax_zeta)),
            fmt_opt(cert.map(|c| c.phi_max)),
            fmt_opt(cert.map(|c| c.second_peak_value)),
            fmt_opt(cert.map(|c| c.margin)),
            cert.map(|c| c.verdict.to_string()).unwrap_or_default(),
            match &row.error {
                None => "ok".to_string(),
                Some(message) => csv_quote(&format!("failed: {message}")),
            },
        ];
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// moments

fn cmd_moments(args: MomentsArgs) -> Result<(), CliError> {
    let report = moment_report(
        args.n, args.m, args.k, args.mu, args.brute, args.mc, args.seed,
    )?;
    let text = match args.format {
        Format::Json => json_envelope("moments", &report),
        Format::Csv => moments_csv(&report),
    };
    print!("{text}");
    Ok(())
}

fn moments_csv(r: &MomentReport) -> String {
    let mut out = String::from(
        "n,m,k,mu,e_x_formula,e_x2_formula,e_x_brute,e_x2_brute,e_x_mc,se_x,e_x2_mc,se_x2,\
         max_abs_discrepancy\n",
    );
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
        r.n,
        r.m,
        r.k,
        fmt_f(r.mu),
        fmt_f(r.e_x_formula),
        fmt_f(r.e_x2_formula),
        fmt_opt(r.e_x_brute),
        fmt_opt(r.e_x2_brute),
        fmt_opt(r.e_x_mc),
        fmt_opt(r.se_x),
        fmt_opt(r.e_x2_mc),
        fmt_opt(r.se_x2),
        fmt_opt(r.max_abs_discrepancy),
    );
    out
}

// ---------------------------------------------------------------------------
// simulate

/// Analytic density thresholds printed alongside simulation summaries.
#[derive(Serialize)]
struct ReferenceLines {
    c: f64,
    y: f64,
    alpha_upper: f64,
    alpha_lower: f64,
}

/// Quantiles of the size fraction |S| / n, derived from the size quantiles.
#[derive(Serialize)]
struct RatioQuantiles {
    min: f64,
    q25: f64,
    median: f64,
    q75: f64,
    max: f64,
}

#[derive(Serialize)]
struct SimulatePayload {
    trials: Vec<SimResult>,
    summary: Option<TrialSummary>,
    ratio_quantiles: Option<RatioQuantiles>,
    reference: Option<ReferenceLines>,
}

fn ratio_quantiles(summary: &TrialSummary) -> RatioQuantiles {
    let n = summary.n as f64;
    RatioQuantiles {
        min: summary.min_size as f64 / n,
        q25: summary.q25_size as f64 / n,
        median: summary.median_size as f64 / n,
        q75: summary.q75_size as f64 / n,
        max: summary.max_size as f64 / n,
    }
}

/// The thresholds are only defined from average degree 2 upward; below
/// that (or with a window coefficient at its threshold) no reference is
/// printed rather than failing the run.
fn reference_lines(c: f64, y: f64) -> Option<ReferenceLines> {
    alpha_bounds(c, y)
        .ok()
        .map(|(upper, lower)| ReferenceLines {
            c,
            y,
            alpha_upper: upper,
            alpha_lower: lower,
        })
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let results: Vec<SimResult>;
    let reference_c: Option<f64>;
    match &args.import {
        Some(path) => {
            if args.n.is_some() || args.c.is_some() {
                return Err(CliError::Usage(
                    "--import supplies the graph; drop --n and --c".to_string(),
                ));
            }
            if args.export.is_some() {
                return Err(CliError::Usage(
                    "--export only applies to freshly sampled graphs".to_string(),
                ));
            }
            let g = MultiGraph::load(path)?;
            let mut out = Vec::with_capacity(args.trials as usize);
            for i in 0..args.trials {
                let trial_seed = args.seed.wrapping_add(i);
                let t0 = Instant::now();
                let set = solve_one(&g, args.algo, splitmix64(trial_seed))?;
                out.push(SimResult {
                    seed: trial_seed,
                    n: g.n(),
                    m: g.m(),
                    algorithm: args.algo,
                    size: set.size(),
                    ratio: set.size() as f64 / g.n() as f64,
                    wall_time_s: t0.elapsed().as_secs_f64(),
                });
            }
            reference_c = Some(2.0 * g.m() as f64 / g.n() as f64);
            results = out;
        }
        None => {
            let (n, c) = match (args.n, args.c) {
                (Some(n), Some(c)) => (n, c),
                _ => {
                    return Err(CliError::Usage(
                        "--n and --c are required unless --import is given".to_string(),
                    ))
                }
            };
            if let Some(base) = &args.export {
                if !c.is_finite() || c < 0.0 {
                    return Err(EngineError::InvalidParameter {
                        name: "c",
                        value: c,
                        message: "average degree must be finite and non-negative",
                    }
                    .into());
                }
                let m = (c * n as f64 / 2.0).round() as usize;
                for i in 0..args.trials {
                    let g = MultiGraph::sample(n, m, args.seed.wrapping_add(i))?;
                    g.save(export_path(base, i, args.trials))?;
                }
            }
            results = run_trials(n, c, args.trials, args.algo, args.seed)?;
            reference_c = Some(c);
        }
    }

    let summary = summarize(&results);
    let ratios = summary.as_ref().map(ratio_quantiles);
    let reference = reference_c.and_then(|c| reference_lines(c, args.y));
    let text = match args.format {
        Format::Json => json_envelope(
            "simulate",
            &SimulatePayload {
                trials: results,
                summary,
                ratio_quantiles: ratios,
                reference,
            },
        ),
        Format::Csv => simulate_csv(&results, summary.as_ref(), ratios.as_ref(), reference.as_ref()),
    };
    print!("{text}");
    Ok(())
}

/// With several trials each sampled graph gets a numbered file.
fn export_path(base: &Path, i: u64, trials: u64) -> PathBuf {
    if trials <= 1 {
        base.to_path_buf()
    } else {
        let mut name = base.as_os_str().to_owned();
        name.push(format!(".{i}"));
        PathBuf::from(name)
    }
}

/// Per-trial table followed by a `#`-prefixed summary block, so the rows
/// stay machine-readable while the batch statistics remain visible.
fn simulate_csv(
    results: &[SimResult],
    summary: Option<&TrialSummary>,
    ratios: Option<&RatioQuantiles>,
    reference: Option<&ReferenceLines>,
) -> String {
    let mut out = String::from("seed,n,m,algorithm,size,ratio\n");
    for r in results {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.seed,
            r.n,
            r.m,
            r.algorithm,
            r.size,
            fmt_f(r.ratio)
        );
    }
    if let Some(s) = summary {
        let _ = writeln!(
            out,
            "# trials={} n={} m={} algorithm={}",
            s.trials, s.n, s.m, s.algorithm
        );
        let _ = writeln!(
            out,
            "# mean_size={} std_size={} mean_ratio={}",
            fmt_f(s.mean_size),
            fmt_f(s.std_size),
            fmt_f(s.mean_ratio)
        );
        let _ = writeln!(
            out,
            "# size_quantiles min={} q25={} median={} q75={} max={}",
            s.min_size, s.q25_size, s.median_size, s.q75_size, s.max_size
        );
    }
    if let Some(q) = ratios {
        let _ = writeln!(
            out,
            "# ratio_quantiles min={} q25={} median={} q75={} max={}",
            fmt_f(q.min),
            fmt_f(q.q25),
            fmt_f(q.median),
            fmt_f(q.q75),
            fmt_f(q.max)
        );
    }
    if let Some(r) = reference {
        let _ = writeln!(
            out,
            "# reference alpha_upper={} alpha_lower={} c={} y={}",
            fmt_f(r.alpha_upper),
            fmt_f(r.alpha_lower),
            fmt_f(r.c),
            fmt_f(r.y)
        );
    }
    out
}
