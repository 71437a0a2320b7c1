//! `syndromelab` command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input (spec, error string, flags),
//! 2 runtime failure (I/O, refused overwrite, simulation limits).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use syndromelab::device::builtin_ibmqx5;
use syndromelab::error_model::{parse_angle, ErrorSpec};
use syndromelab::protocol::{
    build_circuit, classify, classify_with_baseline, default_theta_grid, run_exact, run_shots,
    run_suite, sweep, sweep_csv, ErrorClass, SuiteRow, SweepAxis, SweepMode, SweepRecord,
    SyndromeDistribution, SyndromeOutcome,
};
use syndromelab::qasm::emit_qasm;
use syndromelab::states::{parity_class, ComplementarySpec, Sign};
use syndromelab::Error;

const DEFAULT_SEED: u64 = 2018;
const ORDER_NOTE: &str = "composite errors apply left to right: \"X:pi/3,Y:pi/3\" is X first, then Y";

#[derive(Parser)]
#[command(name = "syndromelab", version, about = "Two-syndrome error detection on complementarity states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a spec against the complementarity invariants.
    Validate {
        #[arg(long)]
        spec: String,
    },
    /// Run the detection circuit once and classify the modal outcome.
    Run {
        #[command(flatten)]
        common: Common,
        /// Error sequence, e.g. "X:pi" or "X:pi/3,Y:2pi/3".
        #[arg(long)]
        error: Option<String>,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        output: Output,
    },
    /// Sweep a single-axis rotation error over a theta grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_axis)]
        axis: SweepAxis,
        /// Comma-separated angles; default is k*pi/15 for k in -15..=15.
        #[arg(long, allow_hyphen_values = true)]
        theta_grid: Option<String>,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        output: Output,
    },
    /// Run the eight named composite errors.
    Suite {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        output: Output,
    },
    /// Emit OpenQASM 2.0 for the detection circuit.
    EmitQasm {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        error: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
    /// Print the built-in 16-qubit device parameters and coupling map.
    DeviceInfo {
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Args)]
struct Common {
    /// Builtin name (bell, ghz:<2n>, paper13, paper13-mixed) or JSON file.
    #[arg(long, default_value = "paper13")]
    spec: String,
    /// Qubit receiving the error.
    #[arg(long, default_value_t = 0)]
    target: usize,
}

#[derive(Args)]
struct Sampling {
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    #[arg(long, default_value_t = 8192, value_parser = clap::value_parser!(u64).range(1..))]
    shots: u64,
    #[arg(long, env = "SYNDROMELAB_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
}

impl Sampling {
    fn sweep_mode(&self) -> SweepMode {
        match self.mode {
            Mode::Exact => SweepMode::Exact,
            Mode::Shots => SweepMode::Shots { shots: self.shots, seed: self.seed },
        }
    }
}

#[derive(Args)]
struct Output {
    /// Write results here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Format used for --out (CSV or JSON).
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Overwrite an existing --out file.
    #[arg(long)]
    force: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Shots,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn parse_axis(s: &str) -> Result<SweepAxis, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Validation(_) | Error::Parse(_) | Error::Index(_) => Failure::Input(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn load_spec(arg: &str) -> CliResult<ComplementarySpec> {
    match ComplementarySpec::builtin(arg) {
        Ok(s) => Ok(s),
        Err(builtin_err) => {
            let path = Path::new(arg);
            if !path.exists() {
                return Err(Failure::Input(format!(
                    "\"{arg}\" is neither a builtin spec nor a file ({builtin_err})"
                )));
            }
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Runtime(format!("reading {arg}: {e}")))?;
            Ok(ComplementarySpec::from_json(&text)?)
        }
    }
}

fn valid_spec(arg: &str) -> CliResult<ComplementarySpec> {
    let spec = load_spec(arg)?;
    let report = spec.validate();
    if !report.is_valid() {
        return Err(Failure::Input(format!("invalid spec {arg}:\n{report}")));
    }
    Ok(spec)
}

fn check_target(spec: &ComplementarySpec, target: usize) -> CliResult<()> {
    if target > 2 * spec.n {
        return Err(Failure::Input(format!(
            "--target {target} is outside 0..={} for this spec",
            2 * spec.n
        )));
    }
    Ok(())
}

fn parse_grid(text: &str) -> CliResult<Vec<f64>> {
    let grid = text
        .split(',')
        .map(|t| parse_angle(t.trim()))
        .collect::<syndromelab::Result<Vec<_>>>()?;
    if grid.is_empty() {
        return Err(Failure::Input("theta grid is empty".into()));
    }
    Ok(grid)
}

/// Writes to `--out` (refusing to clobber without `--force`) or stdout.
fn emit(out: Option<&Path>, force: bool, text: &str) -> CliResult<()> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            if path.exists() && !force {
                return Err(Failure::Runtime(format!(
                    "{} exists; pass --force to overwrite",
                    path.display()
                )));
            }
            std::fs::write(path, text)
                .map_err(|e| Failure::Runtime(format!("writing {}: {e}", path.display())))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Classifies the modal outcome, relative to the error-free outcome for
/// sign `-` specs.
fn modal_class(spec: &ComplementarySpec, dist: &SyndromeDistribution) -> CliResult<ErrorClass> {
    let modal = dist.modal();
    Ok(match spec.sign {
        Sign::Plus => classify(modal),
        Sign::Minus => classify_with_baseline(modal, run_exact(spec, None)?.modal()),
    })
}

fn outcome_table(dist: &SyndromeDistribution) -> String {
    let mut t = String::from("outcome  label  probability\n");
    for o in SyndromeOutcome::ALL {
        let _ = writeln!(t, "{o}       {}  {:.6}", o.sign_label(), dist.get(o));
    }
    t
}

#[derive(Serialize)]
struct RunRecord {
    spec: ComplementarySpec,
    error: Option<String>,
    target: usize,
    mode: &'static str,
    shots: Option<u64>,
    seed: Option<u64>,
    p00: f64,
    p10: f64,
    p01: f64,
    p11: f64,
    modal: String,
    class_mode: ErrorClass,
}

fn cmd_validate(spec_arg: &str) -> CliResult<()> {
    let spec = load_spec(spec_arg)?;
    let report = spec.validate();
    print!("{report}");
    if !report.is_valid() {
        return Err(Failure::Input(format!("{spec_arg} violates the complementarity invariants")));
    }
    println!("qubits: {}, parity class: {:?}", spec.num_qubits(), parity_class(&spec)?);
    Ok(())
}

fn cmd_run(common: &Common, error: Option<&str>, sampling: &Sampling, output: &Output) -> CliResult<()> {
    let spec = valid_spec(&common.spec)?;
    check_target(&spec, common.target)?;
    let error = error.map(|e| ErrorSpec::parse(e, common.target)).transpose()?;
    let dist = match sampling.mode {
        Mode::Exact => run_exact(&spec, error.as_ref())?,
        Mode::Shots => {
            run_shots(&spec, error.as_ref(), sampling.shots, sampling.seed)?.frequencies()
        }
    };
    let class = modal_class(&spec, &dist)?;
    let modal = dist.modal();
    println!("{ORDER_NOTE}");
    print!("{}", outcome_table(&dist));
    println!("modal outcome {modal}: {class}");

    if let Some(path) = &output.out {
        let shots = matches!(sampling.mode, Mode::Shots);
        let [p00, p10, p01, p11] = dist.probs;
        let record = RunRecord {
            spec: spec.clone(),
            error: error.as_ref().map(|e| e.to_string()),
            target: common.target,
            mode: if shots { "shots" } else { "exact" },
            shots: shots.then_some(sampling.shots),
            seed: shots.then_some(sampling.seed),
            p00,
            p10,
            p01,
            p11,
            modal: modal.to_string(),
            class_mode: class,
        };
        let text = match output.format {
            Format::Json => to_json(&record),
            Format::Csv => format!("p00,p10,p01,p11,class_mode\n{p00},{p10},{p01},{p11},{class}\n"),
        };
        emit(Some(path), output.force, &text)?;
    }
    Ok(())
}

fn cmd_sweep(
    common: &Common,
    axis: SweepAxis,
    grid: Option<&str>,
    sampling: &Sampling,
    output: &Output,
) -> CliResult<()> {
    let spec = valid_spec(&common.spec)?;
    check_target(&spec, common.target)?;
    let grid = match grid {
        Some(g) => parse_grid(g)?,
        None => default_theta_grid(),
    };
    let rows = sweep(&spec, axis, &grid, common.target, sampling.sweep_mode())?;
    let text = match output.format {
        Format::Csv => sweep_csv(&rows),
        Format::Json => to_json(&rows.iter().map(SweepRecord::from).collect::<Vec<_>>()),
    };
    emit(output.out.as_deref(), output.force, &text)
}

#[derive(Serialize)]
struct SuiteRecord {
    error: &'static str,
    sequence: String,
    p00: f64,
    p10: f64,
    p01: f64,
    p11: f64,
    class_mode: ErrorClass,
}

fn cmd_suite(common: &Common, sampling: &Sampling, output: &Output) -> CliResult<()> {
    let spec = valid_spec(&common.spec)?;
    check_target(&spec, common.target)?;
    let rows: Vec<SuiteRow> = run_suite(&spec, common.target, sampling.sweep_mode())?;
    let records = rows
        .iter()
        .map(|r| {
            let [p00, p10, p01, p11] = r.dist.probs;
            Ok(SuiteRecord {
                error: r.name,
                sequence: r.error.to_string(),
                p00,
                p10,
                p01,
                p11,
                class_mode: modal_class(&spec, &r.dist)?,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;

    eprintln!("{ORDER_NOTE}");
    let text = match output.format {
        Format::Csv => {
            let mut t = String::from("error,p00,p10,p01,p11,class_mode\n");
            for r in &records {
                let _ = writeln!(t, "{},{},{},{},{},{}", r.error, r.p00, r.p10, r.p01, r.p11, r.class_mode);
            }
            t
        }
        Format::Json => to_json(&records),
    };
    if output.out.is_some() {
        emit(output.out.as_deref(), output.force, &text)?;
    }
    let mut table = format!("{:<20} {:>8} {:>8} {:>8} {:>8}\n", "error", "{0,+}", "{1,+}", "{0,-}", "{1,-}");
    for r in &records {
        let _ = writeln!(
            table,
            "{:<20} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            r.error, r.p00, r.p10, r.p01, r.p11
        );
    }
    match (&output.out, output.format) {
        (None, Format::Json) => print!("{text}"),
        _ => print!("{table}"),
    }
    Ok(())
}

fn cmd_emit_qasm(common: &Common, error: Option<&str>, out: Option<&Path>, force: bool) -> CliResult<()> {
    let spec = valid_spec(&common.spec)?;
    check_target(&spec, common.target)?;
    let error = error.map(|e| ErrorSpec::parse(e, common.target)).transpose()?;
    let program = emit_qasm(&build_circuit(&spec, error.as_ref())?)?;
    emit(out, force, &program.text)
}

fn cmd_device_info(format: Format) -> CliResult<()> {
    let device = builtin_ibmqx5();
    match format {
        Format::Json => print!("{}", to_json(&device)),
        Format::Csv => {
            println!("# device: {}", device.name);
            print!("{}", device.to_table_text());
        }
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match &cli.command {
        Command::Validate { spec } => cmd_validate(spec),
        Command::Run { common, error, sampling, output } => {
            cmd_run(common, error.as_deref(), sampling, output)
        }
        Command::Sweep { common, axis, theta_grid, sampling, output } => {
            cmd_sweep(common, *axis, theta_grid.as_deref(), sampling, output)
        }
        Command::Suite { common, sampling, output } => cmd_suite(common, sampling, output),
        Command::EmitQasm { common, error, out, force } => {
            cmd_emit_qasm(common, error.as_deref(), out.as_deref(), *force)
        }
        Command::DeviceInfo { format } => cmd_device_info(*format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use syndromelab::error_model::format_angle;

    #[test]
    fn grid_parsing() {
        let g = parse_grid("-pi, 0, 2pi/3").unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(format_angle(g[2]), "2pi/3");
        assert!(parse_grid("pi,,0").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
