//! The `keycomp` command line.
//!
//! Exit codes: 0 success, 1 invalid input or usage, 2 I/O failure, 3 the
//! consistency check failed under `--strict-consistency`, 4 a verification
//! check failed.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use keycomp::io::{
    emit_report_with, parse_comparison, parse_report, parse_sim_spec, ComparisonFormat,
    ReportFormat, SimOverrides, DEFAULT_TABLE_DIGITS,
};
use keycomp::{analyze, run_simulation, verify_model, AnalysisOptions, EffectModel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;
pub const EXIT_VERIFICATION_FAILED: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "keycomp",
    version,
    about = "Key comparison reference values, degrees of equivalence and Monte Carlo model checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the reference value, degrees of equivalence and consistency check
    Analyze(AnalyzeArgs),
    /// Simulate a comparison spec and report the moments of x_K and the deviations
    Simulate(SimulateArgs),
    /// Simulate a spec and check the closed-form predictions against the moments
    Verify(VerifyArgs),
    /// Re-render a JSON report in another format
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
    Md,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => ReportFormat::Json,
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Md => ReportFormat::Markdown,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    None,
    Random,
    Systematic,
}

impl From<ModelArg> for EffectModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::None => EffectModel::NoneEffect,
            ModelArg::Random => EffectModel::RandomEffect,
            ModelArg::Systematic => EffectModel::SystematicEffect,
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; standard output when omitted
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatArg,
    /// Significant digits in CSV and Markdown tables
    #[arg(long, default_value_t = DEFAULT_TABLE_DIGITS)]
    pub digits: usize,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Comparison file (.csv or .json)
    #[arg(long)]
    pub input: PathBuf,
    /// Laboratory-effect model; required for CSV, overrides the model in JSON
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Coverage factor for expanded uncertainties
    #[arg(long, default_value_t = keycomp::DEFAULT_COVERAGE_FACTOR)]
    pub k: f64,
    /// Significance level of the consistency check
    #[arg(long, default_value_t = keycomp::DEFAULT_ALPHA)]
    pub alpha: f64,
    /// Exit with status 3 when the consistency check fails
    #[arg(long)]
    pub strict_consistency: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    /// Simulation spec (JSON)
    #[arg(long)]
    pub input: PathBuf,
    /// Override the spec's laboratory-effect model
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Override the spec's replication count
    #[arg(long)]
    pub n_reps: Option<u64>,
    /// Override the spec's seed; one of the two must be given
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for the simulation
    #[arg(long)]
    pub threads: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub sim: SimArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub sim: SimArgs,
    /// Standard errors allowed per check
    #[arg(long, default_value_t = keycomp::DEFAULT_Z)]
    pub z: f64,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// JSON report written by analyze, simulate or verify
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// A failed command: exit status plus the message for standard error.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn invalid(message: impl ToString) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.to_string(),
        }
    }

    fn io(path: &Path, err: std::io::Error) -> Self {
        Failure {
            code: EXIT_IO,
            message: format!("{}: {err}", path.display()),
        }
    }
}

/// What a successful command produced and the status to exit with.
struct Outcome {
    bytes: Vec<u8>,
    code: i32,
    note: Option<String>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    execute(&cli.command, stdout, stderr)
}

pub fn execute(command: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let (result, output) = match command {
        Command::Analyze(a) => (cmd_analyze(a), &a.output),
        Command::Simulate(a) => (cmd_simulate(a), &a.sim.output),
        Command::Verify(a) => (cmd_verify(a), &a.sim.output),
        Command::Report(a) => (cmd_report(a), &a.output),
    };
    let outcome = match result {
        Ok(outcome) => outcome,
        Err(failure) => {
            let _ = writeln!(stderr, "error: {}", failure.message);
            return failure.code;
        }
    };
    if let Err(failure) = write_output(output.output.as_deref(), &outcome.bytes, stdout) {
        let _ = writeln!(stderr, "error: {}", failure.message);
        return failure.code;
    }
    if let Some(note) = outcome.note {
        let _ = writeln!(stderr, "{note}");
    }
    outcome.code
}

fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::io(path, e))
}

/// Writes to a temporary file beside `path` and renames it into place, so a
/// failed run never leaves partial output.
fn write_output(path: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), Failure> {
    let Some(path) = path else {
        return stdout
            .write_all(bytes)
            .and_then(|_| stdout.flush())
            .map_err(|e| Failure {
                code: EXIT_IO,
                message: format!("stdout: {e}"),
            });
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Failure::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| Failure::io(path, e))?;
    tmp.persist(path).map_err(|e| Failure::io(path, e.error))?;
    Ok(())
}

fn comparison_format(path: &Path, bytes: &[u8]) -> ComparisonFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("json") => ComparisonFormat::Json,
        Some(ext) if ext.eq_ignore_ascii_case("csv") => ComparisonFormat::Csv,
        _ if bytes.iter().find(|b| !b.is_ascii_whitespace()) == Some(&b'{') => {
            ComparisonFormat::Json
        }
        _ => ComparisonFormat::Csv,
    }
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<Outcome, Failure> {
    if !(args.k > 0.0 && args.k.is_finite()) {
        return Err(Failure::invalid(format!(
            "--k must be positive, got {}",
            args.k
        )));
    }
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        return Err(Failure::invalid(format!(
            "--alpha must lie in (0, 1), got {}",
            args.alpha
        )));
    }
    let bytes = read_input(&args.input)?;
    let format = comparison_format(&args.input, &bytes);
    let comparison = parse_comparison(&bytes, format, args.model.map(Into::into))
        .map_err(|e| Failure::invalid(format!("{}: {e}", args.input.display())))?;
    let report = analyze(
        &comparison,
        &AnalysisOptions {
            coverage_factor: args.k,
            alpha: args.alpha,
        },
    )
    .map_err(Failure::invalid)?;

    let inconsistent = report.consistency.as_ref().is_some_and(|c| !c.pass);
    let (code, note) = match (inconsistent, args.strict_consistency) {
        (true, true) => (
            EXIT_INCONSISTENT,
            Some("consistency check failed (--strict-consistency)".to_string()),
        ),
        (true, false) => (
            EXIT_OK,
            Some("warning: consistency check failed".to_string()),
        ),
        _ => (EXIT_OK, None),
    };
    Ok(Outcome {
        bytes: emit_report_with(&report, args.output.format.into(), args.output.digits),
        code,
        note,
    })
}

fn load_spec(args: &SimArgs) -> Result<keycomp::SimSpec, Failure> {
    if args.n_reps == Some(0) {
        return Err(Failure::invalid(
            "--n-reps must be at least 1\n\nUsage: keycomp simulate --input <SPEC> --seed <SEED> [--n-reps <N>]",
        ));
    }
    if args.threads == Some(0) {
        return Err(Failure::invalid("--threads must be at least 1"));
    }
    let bytes = read_input(&args.input)?;
    parse_sim_spec(
        &bytes,
        SimOverrides {
            model: args.model.map(Into::into),
            n_reps: args.n_reps,
            seed: args.seed,
        },
    )
    .map_err(|e| Failure::invalid(format!("{}: {e}", args.input.display())))
}

fn with_threads<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T, Failure> {
    match threads {
        None => Ok(f()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| Failure::invalid(format!("cannot start {n} threads: {e}"))),
    }
}

fn cmd_simulate(args: &SimulateArgs) -> Result<Outcome, Failure> {
    let spec = load_spec(&args.sim)?;
    let outcome =
        with_threads(args.sim.threads, || run_simulation(&spec))?.map_err(Failure::invalid)?;
    Ok(Outcome {
        bytes: emit_report_with(
            &outcome,
            args.sim.output.format.into(),
            args.sim.output.digits,
        ),
        code: EXIT_OK,
        note: None,
    })
}

fn cmd_verify(args: &VerifyArgs) -> Result<Outcome, Failure> {
    if !(args.z > 0.0 && args.z.is_finite()) {
        return Err(Failure::invalid(format!(
            "--z must be positive, got {}",
            args.z
        )));
    }
    let spec = load_spec(&args.sim)?;
    let report = with_threads(args.sim.threads, || verify_model(&spec, args.z))?
        .map_err(Failure::invalid)?;
    let failed = report.failures().count();
    let (code, note) = if failed == 0 {
        (EXIT_OK, None)
    } else {
        (
            EXIT_VERIFICATION_FAILED,
            Some(format!(
                "{failed} of {} checks outside {} standard errors",
                report.checks.len(),
                args.z
            )),
        )
    };
    Ok(Outcome {
        bytes: emit_report_with(
            &report,
            args.sim.output.format.into(),
            args.sim.output.digits,
        ),
        code,
        note,
    })
}

fn cmd_report(args: &ReportArgs) -> Result<Outcome, Failure> {
    let bytes = read_input(&args.input)?;
    let report = parse_report(&bytes)
        .map_err(|e| Failure::invalid(format!("{}: {e}", args.input.display())))?;
    Ok(Outcome {
        bytes: report.emit(args.output.format.into(), args.output.digits),
        code: EXIT_OK,
        note: None,
    })
}
