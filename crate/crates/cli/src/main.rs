//! Command-line front end: deterministic CSV/JSON emitters for the squeezed
//! vacuum state, quadrature variances, uncertainty products, Wigner grids,
//! the two reference figure datasets, and the cross-backend self check.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 truncation/precision
//! failure, 4 self-check failure. No environment variables are consulted;
//! identical invocations produce byte-identical output.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use trisqueeze::fock::{self, apply_s3_numeric, squeezed_vacuum_analytic, FockCutoff, FockState};
use trisqueeze::generator::GeneratorMatrix;
use trisqueeze::squeezing::{self, variance_fock};
use trisqueeze::wigner::{self, Axis, AxisSpec, GridSpec, PhasePoint};
use trisqueeze::Error;

use trisqueeze_cli::output::{self, g17};
use trisqueeze_cli::{checks, exit_code_for, exit_codes};

#[derive(Parser)]
#[command(
    name = "trisqueeze",
    version,
    about = "Three-mode squeezing: closed forms cross-validated against a Fock-space backend"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the squeezed vacuum S₃|000⟩ as a JSON amplitude dump
    State(StateArgs),
    /// Quadrature variances along all three pathways
    Variance(VarianceArgs),
    /// The uncertainty product ΔX₁·ΔX₂
    Uncertainty(UncertaintyArgs),
    /// Closed-form Wigner function on a point or grid
    Wigner(WignerArgs),
    /// Variances against μ for ν = 0 and ν = 0.5 (CSV)
    Fig1(FigArgs),
    /// Uncertainty product against r for five coupling angles (CSV)
    Fig2(FigArgs),
    /// Run the cross-backend property suite
    Selfcheck(SelfcheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct StateArgs {
    #[arg(long, allow_hyphen_values = true)]
    mu: f64,
    #[arg(long, allow_hyphen_values = true)]
    nu: f64,
    /// Per-mode photon cutoff (default: automatic from the couplings)
    #[arg(long)]
    cutoff: Option<usize>,
    /// Tolerance for the numeric verification backend, in (0, 1e-6]
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Also apply the squeeze numerically and report the fidelity
    #[arg(long)]
    verify: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VarianceArgs {
    #[arg(long, allow_hyphen_values = true)]
    mu: f64,
    #[arg(long, allow_hyphen_values = true)]
    nu: f64,
    /// Cutoff for the Fock pathway (default: automatic)
    #[arg(long)]
    cutoff: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct UncertaintyArgs {
    #[arg(long, allow_hyphen_values = true)]
    mu: f64,
    #[arg(long, allow_hyphen_values = true)]
    nu: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WignerArgs {
    #[arg(long, allow_hyphen_values = true)]
    mu: f64,
    #[arg(long, allow_hyphen_values = true)]
    nu: f64,
    /// Swept axis as AXIS=min:max:count (q1..q3, p1..p3); repeatable, max 2.
    /// Unswept coordinates stay at 0.
    #[arg(long, value_name = "AXIS=MIN:MAX:COUNT")]
    sweep: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FigArgs {
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SelfcheckArgs {
    /// Emit the report as JSON instead of text
    #[arg(long)]
    json: bool,
    /// Override the cutoff of the truncation-sensitive checks
    #[arg(long)]
    cutoff: Option<usize>,
    /// Override μ of the truncation-sensitive checks
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    /// Override ν of the truncation-sensitive checks
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}

fn run(command: Command) -> Result<i32, Error> {
    match command {
        Command::State(args) => cmd_state(args),
        Command::Variance(args) => cmd_variance(args),
        Command::Uncertainty(args) => cmd_uncertainty(args),
        Command::Wigner(args) => cmd_wigner(args),
        Command::Fig1(args) => emit(&args.out, output::fig1_csv(&output::fig1_table()?)),
        Command::Fig2(args) => emit(&args.out, output::fig2_csv(&output::fig2_table()?)),
        Command::Selfcheck(args) => cmd_selfcheck(args),
    }
}

fn emit(out: &Option<PathBuf>, content: String) -> Result<i32, Error> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{content}"),
    }
    Ok(exit_codes::SUCCESS)
}

fn resolve_cutoff(cutoff: Option<usize>, mu: f64, nu: f64) -> Result<FockCutoff, Error> {
    match cutoff {
        Some(n) => FockCutoff::new(n),
        None => FockCutoff::auto_for_squeezing(mu, nu, fock::DEFAULT_TRUNCATION_EPS),
    }
}

fn cmd_state(args: StateArgs) -> Result<i32, Error> {
    let cutoff = resolve_cutoff(args.cutoff, args.mu, args.nu)?;
    let state = squeezed_vacuum_analytic(cutoff, args.mu, args.nu)?;
    let verify_fidelity = if args.verify {
        let numeric = apply_s3_numeric(&FockState::vacuum(cutoff), args.mu, args.nu, args.tol)?;
        Some(state.fidelity(&numeric)?)
    } else {
        None
    };
    let dump = output::StateDump::from_state(&state, verify_fidelity);
    let json = serde_json::to_string(&dump)
        .map_err(|e| Error::InvalidArgument(format!("serialization failed: {e}")))?;
    emit(&args.out, json + "\n")
}

fn cmd_variance(args: VarianceArgs) -> Result<i32, Error> {
    let closed = squeezing::variance_closed_form(args.mu, args.nu)?;
    let matrix = squeezing::variance_matrix_sum(args.mu, args.nu)?;
    let cutoff = resolve_cutoff(args.cutoff, args.mu, args.nu)?;
    let state = squeezed_vacuum_analytic(cutoff, args.mu, args.nu)?;
    let (fock_stats, _means) = variance_fock(&state)?;
    let rows: Vec<output::VarianceRow> = [closed, matrix, fock_stats]
        .iter()
        .map(|s| output::VarianceRow::new(args.mu, args.nu, s))
        .collect();
    let content = match args.format {
        Format::Csv => output::csv_document(
            &output::VARIANCE_HEADER,
            rows.iter().map(|r| r.csv_fields()).collect(),
        ),
        Format::Json => json_line(&rows)?,
    };
    emit(&args.out, content)
}

fn cmd_uncertainty(args: UncertaintyArgs) -> Result<i32, Error> {
    let g = GeneratorMatrix::new(args.mu, args.nu)?;
    let row = output::UncertaintyRow {
        mu: args.mu,
        nu: args.nu,
        r: g.r(),
        theta: g.theta(),
        product: squeezing::uncertainty_product(args.mu, args.nu)?,
    };
    let content = match args.format {
        Format::Csv => output::csv_document(
            &output::UNCERTAINTY_HEADER,
            vec![vec![
                g17(row.mu),
                g17(row.nu),
                g17(row.r),
                g17(row.theta),
                g17(row.product),
            ]],
        ),
        Format::Json => json_line(&row)?,
    };
    emit(&args.out, content)
}

fn parse_sweep(spec: &str) -> Result<AxisSpec, Error> {
    let bad = || {
        Error::InvalidArgument(format!(
            "sweep must look like q1=-2:2:41 (axis q1..q3 or p1..p3), got '{spec}'"
        ))
    };
    let (axis_name, rest) = spec.split_once('=').ok_or_else(bad)?;
    let axis = Axis::parse(axis_name.trim()).ok_or_else(bad)?;
    let parts: Vec<&str> = rest.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let min: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let max: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    Ok(AxisSpec {
        axis,
        min,
        max,
        count,
    })
}

fn cmd_wigner(args: WignerArgs) -> Result<i32, Error> {
    let sweeps = args
        .sweep
        .iter()
        .map(|s| parse_sweep(s))
        .collect::<Result<Vec<_>, _>>()?;
    let spec = GridSpec {
        sweeps,
        fixed: PhasePoint::origin(),
    };
    let grid = wigner::wigner_grid(args.mu, args.nu, spec)?;
    let rows = output::wigner_rows(&grid);
    let content = match args.format {
        Format::Csv => output::csv_document(
            &output::WIGNER_HEADER,
            rows.iter().map(|r| r.csv_fields()).collect(),
        ),
        Format::Json => json_line(&rows)?,
    };
    emit(&args.out, content)
}

fn cmd_selfcheck(args: SelfcheckArgs) -> Result<i32, Error> {
    let injection = checks::Injection {
        cutoff: args.cutoff,
        mu: args.mu,
        nu: args.nu,
    };
    let report = checks::run_selfcheck(&injection);
    let content = if args.json {
        serde_json::to_string_pretty(&report)
            .map_err(|e| Error::InvalidArgument(format!("serialization failed: {e}")))?
            + "\n"
    } else {
        let mut text = String::new();
        for p in &report.properties {
            let status = if p.passed { "PASS" } else { "FAIL" };
            text.push_str(&format!("{status} {:<42} {}\n", p.name, p.detail));
        }
        text.push_str(&format!(
            "{} properties, {} failed, {:.1} s\n",
            report.properties.len(),
            report.properties.iter().filter(|p| !p.passed).count(),
            report.runtime_seconds
        ));
        text
    };
    emit(&args.out, content)?;
    Ok(if report.passed {
        exit_codes::SUCCESS
    } else {
        exit_codes::SELFCHECK_FAILURE
    })
}

fn json_line<T: serde::Serialize>(value: &T) -> Result<String, Error> {
    serde_json::to_string(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::InvalidArgument(format!("serialization failed: {e}")))
}
