//! `prepsynth` command line: synth, cost, verify, gen and bench.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 not converged (AQCE cap or
//! unreachable ε_T budget), 3 verification failed. Failures print one line
//! `error: <kind>: <message>` on stderr.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::aqce::AqceConfig;
use crate::baselines::{qrom_cost, QromCostModel, DEFAULT_G_T};
use crate::error::{Error, Result};
use crate::gatedecomp::ElementaryCircuit;
use crate::instances::{generate, to_coeff_list, Decay};
use crate::pipeline::{run_pipeline, PipelineConfig, PipelineRun};
use crate::report::{append_csv, to_csv, BenchRow, Method, Status, SynthesisReport};
use crate::terms::{epsilon_budget, load_terms, state_error, CoefficientSet, TermsFormat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

/// Chemical accuracy in Hartree.
pub const DEFAULT_DELTA_E: f64 = 0.0016;

#[derive(Debug, Parser)]
#[command(name = "prepsynth", version, about = "Ancilla-free PREPARE synthesis over Clifford+T")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize a Clifford+T PREPARE circuit.
    Synth(SynthArgs),
    /// QROM-based PREPARE cost model.
    Cost(CostArgs),
    /// Re-simulate a circuit file against a terms file.
    Verify(VerifyArgs),
    /// Write a seeded synthetic coefficient file.
    Gen(GenArgs),
    /// Time each stage of the synth pipeline.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct TermsArgs {
    #[arg(long)]
    pub terms: PathBuf,
    #[arg(long, default_value = "coeff-list", value_parser = parse_format)]
    pub format: TermsFormat,
}

#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    #[arg(long, default_value = "aqce", value_parser = parse_method)]
    pub method: Method,
    /// Energy tolerance used to derive ε when --epsilon is absent.
    #[arg(long, default_value_t = DEFAULT_DELTA_E)]
    pub delta_e: f64,
    /// Max-coefficient budget; overrides --delta-e.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub m0: Option<usize>,
    #[arg(long)]
    pub delta_m: Option<usize>,
    #[arg(long)]
    pub sweeps: Option<usize>,
    #[arg(long)]
    pub m_max: Option<usize>,
    /// Write the lowered circuit here.
    #[arg(long)]
    pub emit_circuit: Option<PathBuf>,
    /// Append a CSV row here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub input: TermsArgs,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CostArgs {
    #[command(flatten)]
    pub input: TermsArgs,
    #[arg(long, default_value_t = DEFAULT_DELTA_E)]
    pub delta_e: f64,
    #[arg(long, default_value_t = DEFAULT_G_T)]
    pub g_t: u64,
    /// Use this keep-register width instead of deriving it from λ and ΔE.
    #[arg(long)]
    pub mu: Option<u64>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    #[command(flatten)]
    pub input: TermsArgs,
    #[arg(long)]
    pub epsilon: f64,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long = "L")]
    pub terms: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "uniform", value_parser = parse_decay)]
    pub decay: Decay,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long, conflicts_with = "terms_count", required_unless_present = "terms_count")]
    pub terms: Option<PathBuf>,
    #[arg(long, default_value = "coeff-list", value_parser = parse_format)]
    pub format: TermsFormat,
    /// Generate an instance of this size instead of reading --terms.
    #[arg(long = "L", id = "terms_count")]
    pub terms_count: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "power:1.5", value_parser = parse_decay)]
    pub decay: Decay,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

fn parse_format(s: &str) -> std::result::Result<TermsFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    match s.parse() {
        Ok(Method::QromModel) => Err("qrom-model is a cost model; use the cost subcommand".into()),
        other => other.map_err(|e: Error| e.to_string()),
    }
}

fn parse_decay(s: &str) -> std::result::Result<Decay, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn fail(e: &Error) -> i32 {
    eprintln!("error: {}: {}", e.kind(), e);
    EXIT_USAGE
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// Parses `args` (program name first) and runs the command, printing
/// results to stdout.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_to(args, &mut std::io::stdout().lock())
}

/// [`run`] with command output sent to `out`; diagnostics still go to stderr.
pub fn run_to<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(&cli.command, out),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}

pub fn dispatch(cmd: &Command, out: &mut dyn Write) -> i32 {
    match cmd {
        Command::Synth(a) => cmd_synth(a, out),
        Command::Cost(a) => cmd_cost(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Gen(a) => cmd_gen(a),
        Command::Bench(a) => cmd_bench(a, out),
    }
}

fn pipeline_config(cs: &CoefficientSet, a: &PipelineArgs) -> Result<PipelineConfig> {
    let epsilon = match a.epsilon {
        Some(e) => e,
        None => epsilon_budget(cs, a.delta_e),
    };
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    let mut cfg = PipelineConfig::new(a.method, epsilon, cs.len());
    let defaults = AqceConfig::for_terms(cs.len());
    cfg.aqce = AqceConfig {
        initial_gates: a.m0.unwrap_or(defaults.initial_gates),
        gates_per_expansion: a.delta_m.unwrap_or(defaults.gates_per_expansion),
        sweeps: a.sweeps.unwrap_or(defaults.sweeps),
        max_gates: a.m_max.or(defaults.max_gates),
        ..defaults
    };
    Ok(cfg)
}

fn exit_for(report: &SynthesisReport) -> i32 {
    match report.status {
        Status::Ok => EXIT_OK,
        Status::NotConverged | Status::BudgetUnreachable => EXIT_NOT_CONVERGED,
    }
}

/// Runs the pipeline and writes the requested artifacts.
fn synth_and_emit(cs: &CoefficientSet, a: &PipelineArgs) -> Result<PipelineRun> {
    let cfg = pipeline_config(cs, a)?;
    let run = run_pipeline(cs, &cfg)?;
    if let Some(path) = &a.emit_circuit {
        write_file(path, &run.circuit.to_text())?;
    }
    if let Some(path) = &a.report {
        append_csv(path, &run.report)?;
    }
    Ok(run)
}

pub fn cmd_synth(a: &SynthArgs, out: &mut dyn Write) -> i32 {
    let result = load_terms(&a.input.terms, a.input.format).and_then(|cs| synth_and_emit(&cs, &a.pipeline));
    match result {
        Ok(run) => {
            let _ = write!(out, "{}", to_csv(&[run.report.clone()]).unwrap_or_default());
            if run.report.status != Status::Ok {
                eprintln!("error: {}: best-effort circuit does not meet the budget", run.report.status);
            }
            exit_for(&run.report)
        }
        Err(e) => fail(&e),
    }
}

pub fn cmd_cost(a: &CostArgs, out: &mut dyn Write) -> i32 {
    let result = load_terms(&a.input.terms, a.input.format).and_then(|cs| {
        let mut model = qrom_cost(&cs, a.delta_e, a.g_t)?;
        if let Some(mu) = a.mu {
            model = QromCostModel { lambda: model.lambda, delta_e: model.delta_e, ..QromCostModel::from_parts(model.terms, model.qubits, mu, a.g_t) };
        }
        if let Some(path) = &a.report {
            let row = SynthesisReport {
                method: Method::QromModel,
                terms: cs.len(),
                qubits: cs.qubits(),
                two_qubit_gates: 0,
                rotation_count: 0,
                t_count: model.t_count,
                ancilla_count: model.ancilla_count,
                achieved_error: epsilon_budget(&cs, a.delta_e),
                epsilon: epsilon_budget(&cs, a.delta_e),
                wall_seconds: 0.0,
                status: Status::Ok,
                eps_t: None,
            };
            append_csv(path, &row)?;
        }
        to_csv(&[model])
    });
    match result {
        Ok(text) => {
            let _ = write!(out, "{text}");
            EXIT_OK
        }
        Err(e) => fail(&e),
    }
}

/// `max |c - c'|` of a circuit file against a terms file.
pub fn verify_error(circuit: &ElementaryCircuit, cs: &CoefficientSet) -> Result<f64> {
    let state = circuit.simulate(cs.qubits())?;
    state_error(&state, cs)
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> i32 {
    let result = (|| {
        let text = fs::read_to_string(&a.circuit).map_err(|source| Error::Io { path: a.circuit.clone(), source })?;
        let circuit = ElementaryCircuit::parse_text(&text)?;
        let cs = load_terms(&a.input.terms, a.input.format)?;
        verify_error(&circuit, &cs)
    })();
    match result {
        Ok(err) => {
            let _ = writeln!(out, "achieved_error {err:e}");
            if err <= a.epsilon {
                EXIT_OK
            } else {
                eprintln!("error: verification-failed: {err:e} exceeds epsilon {:e}", a.epsilon);
                EXIT_VERIFY_FAILED
            }
        }
        Err(e) => fail(&e),
    }
}

pub fn cmd_gen(a: &GenArgs) -> i32 {
    let result = generate(a.terms, a.seed, a.decay).and_then(|values| {
        let header = format!("prepsynth gen --L {} --seed {} --decay {}", a.terms, a.seed, a.decay);
        write_file(&a.out, &to_coeff_list(&values, &header))
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => fail(&e),
    }
}

pub fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> i32 {
    let result = (|| {
        let cs = match (&a.terms, a.terms_count) {
            (Some(path), _) => load_terms(path, a.format)?,
            (None, Some(l)) => CoefficientSet::from_signed(&generate(l, a.seed, a.decay)?)?,
            (None, None) => return Err(Error::InvalidArgument("one of --terms or --L is required".into())),
        };
        let run = synth_and_emit(&cs, &a.pipeline)?;
        Ok((to_csv(&[BenchRow::new(&run.report, &run.timings)])?, run.report))
    })();
    match result {
        Ok((text, report)) => {
            let _ = write!(out, "{text}");
            exit_for(&report)
        }
        Err(e) => fail(&e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["prepsynth"]), EXIT_USAGE);
        assert_eq!(run(["prepsynth", "synth"]), EXIT_USAGE);
        assert_eq!(run(["prepsynth", "synth", "--terms", "x", "--method", "qrom-model"]), EXIT_USAGE);
        assert_eq!(run(["prepsynth", "gen", "--L", "3", "--decay", "power", "--out", "x"]), EXIT_USAGE);
        assert_eq!(run(["prepsynth", "--help"]), EXIT_OK);
    }

    #[test]
    fn missing_file_exits_one() {
        assert_eq!(run(["prepsynth", "cost", "--terms", "/nonexistent/terms.txt"]), EXIT_USAGE);
    }
}
