//! `hmlf`: evaluation, plot grids, zero scans, transforms and self-checks.
//!
//! Exit status is 0 on success, 1 on a usage or input error and 2 on a
//! numerical failure (including a failed `verify`).

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hmlf::analysis::{find_real_zeros, sample_grid, GridSample, ZeroReport};
use hmlf::integrals::{
    cosine_closed_form, cosine_integral_rhs, gaussian_closed_form, gaussian_integral,
    laplace_closed_form, laplace_transform, moment_closed_form, moment_integral, sine_closed_form,
    sine_integral_rhs, sumudu_closed_form, sumudu_transform, ClosedForm,
};
use hmlf::verify::{run_suite, Check, Suite};
use hmlf::{classify, ConvergenceClass, EvalOptions, EvalResult, HmlfError, HmlfSpec};

#[derive(Parser, Debug)]
#[command(name = "hmlf", version, about = "Hypergeometric–Mittag-Leffler functions on the real line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the series at one point.
    Eval {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, allow_hyphen_values = true)]
        u: f64,
        #[command(flatten)]
        eval: EvalArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sample the series on an equally spaced grid.
    Grid {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, default_value_t = 101)]
        n: usize,
        #[command(flatten)]
        eval: EvalArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Locate real zeros by sign-change scan and bracketed refinement.
    Zeros {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        range: RangeArgs,
        /// Number of scan points.
        #[arg(long, default_value_t = 400)]
        n: usize,
        /// Residual tolerance for refined zeros.
        #[arg(long, default_value_t = 1e-12)]
        refine_tol: f64,
        #[command(flatten)]
        eval: EvalArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Laplace transform of t ↦ F(−t) for a 2F1 member.
    Laplace {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        #[command(flatten)]
        eval: EvalArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sumudu transform of t ↦ F(−t) for a 2F1 member.
    Sumudu {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, allow_hyphen_values = true)]
        u: f64,
        #[command(flatten)]
        eval: EvalArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Closed-form integrals of the series.
    Integral {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum)]
        kind: IntegralKind,
        /// Moment exponent or Gaussian weight.
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<f64>,
        /// Upper limit of the moment integral.
        #[arg(long, allow_hyphen_values = true)]
        u: Option<f64>,
        #[command(flatten)]
        eval: EvalArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the built-in oracle comparisons.
    Verify {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args, Debug)]
struct SpecArgs {
    /// Upper parameters, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "spec_file")]
    upper: Vec<f64>,
    /// Lower parameters, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "spec_file")]
    lower: Vec<f64>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "spec_file", required_unless_present = "spec_file")]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "spec_file", required_unless_present = "spec_file")]
    beta: Option<f64>,
    /// JSON file `{"upper":[…],"lower":[…],"alpha":x,"beta":y}`.
    #[arg(long)]
    spec_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long, allow_hyphen_values = true, default_value_t = EvalOptions::default().tol)]
    tol: f64,
    #[arg(long, default_value_t = EvalOptions::default().max_terms)]
    max_terms: usize,
    /// Return optimally truncated sums of divergent series.
    #[arg(long)]
    allow_asymptotic: bool,
}

#[derive(Args, Debug)]
struct RangeArgs {
    #[arg(long, allow_hyphen_values = true)]
    min: f64,
    #[arg(long, allow_hyphen_values = true)]
    max: f64,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum IntegralKind {
    Moment,
    Gaussian,
    Sine,
    Cosine,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: HmlfError| e.to_string())
}

enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<HmlfError> for Failure {
    fn from(e: HmlfError) -> Self {
        match e {
            HmlfError::InvalidArgument(_)
            | HmlfError::InvalidS(_)
            | HmlfError::InvalidDelta(_)
            | HmlfError::InvalidAlphaBeta { .. }
            | HmlfError::NonFiniteParameter { .. }
            | HmlfError::LowerParamPole { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

impl SpecArgs {
    fn build(&self) -> CliResult<HmlfSpec> {
        let invalid = |e: HmlfError| Failure::Usage(format!("invalid spec: {e}"));
        match &self.spec_file {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| Failure::Usage(format!("invalid spec file {}: {e}", path.display())))
            }
            None => HmlfSpec::new(
                self.upper.clone(),
                self.lower.clone(),
                self.alpha.expect("required by clap"),
                self.beta.expect("required by clap"),
            )
            .map_err(invalid),
        }
    }
}

impl EvalArgs {
    fn options(&self) -> CliResult<EvalOptions> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Failure::Usage(format!("--tol must be positive, got {}", self.tol)));
        }
        if self.max_terms == 0 {
            return Err(Failure::Usage("--max-terms must be at least 1".into()));
        }
        Ok(EvalOptions {
            tol: self.tol,
            max_terms: self.max_terms,
            allow_asymptotic: self.allow_asymptotic,
        })
    }
}

impl OutputArgs {
    fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.out {
            Some(path) => fs::write(path, text)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
            None => {
                let mut stdout = io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .map_err(|e| Failure::Numerical(format!("cannot write output: {e}")))
            }
        }
    }

    fn require_json(&self, command: &str) -> CliResult<()> {
        if self.format == Some(Format::Csv) {
            return Err(Failure::Usage(format!("{command} supports only --format json")));
        }
        Ok(())
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output is serializable");
    s.push('\n');
    s
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn threads() -> CliResult<Option<usize>> {
    match std::env::var("HMLF_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("HMLF_THREADS must be a nonnegative integer, got '{v}'"))),
        _ => Ok(None),
    }
}

#[derive(Serialize)]
struct PointReport<'a> {
    spec: &'a HmlfSpec,
    classification: ConvergenceClass,
    #[serde(flatten)]
    point: serde_json::Value,
    #[serde(flatten)]
    result: EvalResult,
}

#[derive(Serialize)]
struct ClosedFormReport<'a> {
    spec: &'a HmlfSpec,
    #[serde(flatten)]
    input: serde_json::Value,
    closed_form: &'a ClosedForm,
    result_classification: ConvergenceClass,
    #[serde(flatten)]
    result: EvalResult,
}

fn closed_form_output(
    spec: &HmlfSpec,
    input: serde_json::Value,
    form: &ClosedForm,
    result: EvalResult,
    output: &OutputArgs,
) -> CliResult<()> {
    output.require_json("this command")?;
    output.emit(&json(&ClosedFormReport {
        spec,
        input,
        closed_form: form,
        result_classification: classify(&form.spec),
        result,
    }))
}

fn grid_csv(samples: &[GridSample]) -> String {
    let mut s = String::from("u,value,status\n");
    for p in samples {
        let _ = writeln!(s, "{},{},{}", float(p.u), float(p.value), p.status);
    }
    s
}

#[derive(Serialize)]
struct GridReport<'a> {
    spec: &'a HmlfSpec,
    samples: &'a [GridSample],
}

fn zeros_csv(report: &ZeroReport) -> String {
    let mut s = String::from("location,bracket_lo,bracket_hi,residual\n");
    for z in &report.zeros {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            float(z.location),
            float(z.bracket.0),
            float(z.bracket.1),
            float(z.residual)
        );
    }
    s
}

#[derive(Serialize)]
struct ZerosOutput<'a> {
    spec: &'a HmlfSpec,
    #[serde(flatten)]
    report: &'a ZeroReport,
}

fn verify_table(checks: &[Check]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<6} {:<11} {:<12} {:<12} name", "result", "suite", "error", "tolerance");
    for c in checks {
        let _ = writeln!(
            s,
            "{:<6} {:<11} {:<12.3e} {:<12.3e} {}{}",
            if c.passed { "PASS" } else { "FAIL" },
            c.suite,
            c.error,
            c.tolerance,
            c.name,
            c.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default()
        );
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    let _ = writeln!(s, "{} checks, {} passed, {} failed", checks.len(), checks.len() - failed, failed);
    s
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Eval { spec, u, eval, output } => {
            output.require_json("eval")?;
            let spec = spec.build()?;
            let result = spec.eval_with(u, &eval.options()?)?;
            output.emit(&json(&PointReport {
                spec: &spec,
                classification: classify(&spec),
                point: serde_json::json!({ "u": u }),
                result,
            }))
        }
        Command::Grid { spec, range, n, eval, output } => {
            let spec = spec.build()?;
            let samples = sample_grid(&spec, range.min, range.max, n, &eval.options()?, threads()?)?;
            let text = match output.format(Format::Csv) {
                Format::Csv => grid_csv(&samples),
                Format::Json => json(&GridReport { spec: &spec, samples: &samples }),
            };
            output.emit(&text)
        }
        Command::Zeros { spec, range, n, refine_tol, eval, output } => {
            let spec = spec.build()?;
            let report = find_real_zeros(&spec, range.min, range.max, n, refine_tol, &eval.options()?)?;
            let text = match output.format(Format::Json) {
                Format::Csv => zeros_csv(&report),
                Format::Json => json(&ZerosOutput { spec: &spec, report: &report }),
            };
            output.emit(&text)
        }
        Command::Laplace { spec, s, eval, output } => {
            let spec = spec.build()?;
            let form = laplace_closed_form(&spec, s)?;
            let result = laplace_transform(&spec, s, &eval.options()?)?;
            closed_form_output(&spec, serde_json::json!({ "s": s }), &form, result, &output)
        }
        Command::Sumudu { spec, u, eval, output } => {
            let spec = spec.build()?;
            let form = sumudu_closed_form(&spec, u)?;
            let result = sumudu_transform(&spec, u, &eval.options()?)?;
            closed_form_output(&spec, serde_json::json!({ "u": u }), &form, result, &output)
        }
        Command::Integral { spec, kind, delta, u, eval, output } => {
            let spec = spec.build()?;
            let opts = eval.options()?;
            let need = |name: &str, v: Option<f64>| {
                v.ok_or_else(|| Failure::Usage(format!("--{name} is required for this integral")))
            };
            let (form, result, input) = match kind {
                IntegralKind::Moment => {
                    let (d, x) = (need("delta", delta)?, need("u", u)?);
                    (
                        moment_closed_form(&spec, d, x)?,
                        moment_integral(&spec, d, x, &opts)?,
                        serde_json::json!({ "kind": kind, "delta": d, "u": x }),
                    )
                }
                IntegralKind::Gaussian => {
                    let d = need("delta", delta)?;
                    (
                        gaussian_closed_form(&spec, d)?,
                        gaussian_integral(&spec, d, &opts)?,
                        serde_json::json!({ "kind": kind, "delta": d }),
                    )
                }
                IntegralKind::Sine => (
                    sine_closed_form(&spec)?,
                    sine_integral_rhs(&spec, &opts)?,
                    serde_json::json!({ "kind": kind }),
                ),
                IntegralKind::Cosine => (
                    cosine_closed_form(&spec)?,
                    cosine_integral_rhs(&spec, &opts)?,
                    serde_json::json!({ "kind": kind }),
                ),
            };
            closed_form_output(&spec, input, &form, result, &output)
        }
        Command::Verify { suite, tol, output } => {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Failure::Usage(format!("--tol must be positive, got {tol}")));
            }
            let checks = run_suite(suite, tol);
            let text = match output.format {
                Some(Format::Json) => json(&checks),
                Some(Format::Csv) => return Err(Failure::Usage("verify supports table or --format json".into())),
                None => verify_table(&checks),
            };
            output.emit(&text)?;
            if checks.iter().all(|c| c.passed) {
                Ok(())
            } else {
                Err(Failure::Numerical(format!(
                    "{} of {} checks failed",
                    checks.iter().filter(|c| !c.passed).count(),
                    checks.len()
                )))
            }
        }
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
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("usage: hmlf <eval|grid|zeros|laplace|sumudu|integral|verify> [OPTIONS]; see hmlf --help");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
