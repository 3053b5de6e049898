//! The `dftt` command line.
//!
//! Exit codes: 0 on success, 1 for bad input (unknown flags, unreadable or
//! malformed files, invalid configurations), 2 for numeric domain errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use dftt_core::dft_test::{run_test, ThresholdRule, VarianceModel};
use dftt_core::experiments::{self, McConfig};
use dftt_core::spectrum::FftPlan;
use dftt_core::theory::{self, TheoryParams};
use dftt_core::{simplex, Error as CoreError};
use serde::Serialize;

use crate::io::{read_sequence, InputFormat, ReadError};
use crate::parallel::RayonExecutor;
use crate::report::{
    Csv, Envelope, LemmaOut, McConfigOut, McOut, MomentsOut, NormalityOut, OutputFormat,
    SimplexOut, TestOut, TheoryOut, TheoryRow,
};

#[derive(Debug, Parser)]
#[command(
    name = "dftt",
    version,
    about = "Discrete Fourier transform randomness test toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the spectral test on one sequence file.
    Test(TestArgs),
    /// Emit the half-spectrum magnitudes of a sequence file as CSV.
    Spectrum(SpectrumArgs),
    /// Closed-form V[F], C[F_i,F_j], V[N1] and divisor a(m).
    Theory(TheoryArgs),
    /// Compare simplex-sampler statistics with their closed forms.
    Simplex(SimplexArgs),
    /// Estimate the divisor a from MT19937 sequences.
    McVariance(McVarianceArgs),
    /// Estimate the correlation of two line indicators from MT19937 sequences.
    McCorrelation(McCorrelationArgs),
    /// Exact spectral moments by enumerating every sequence of length n.
    Exhaustive(ExhaustiveArgs),
    /// Normality of the sine and cosine coefficients s_r, c_r.
    Normality(NormalityArgs),
    /// Check |ln cos x + x^2/2| < c x^4 on a grid.
    #[command(name = "lemma-a1")]
    LemmaA1(LemmaArgs),
}

#[derive(Debug, Args)]
#[group(id = "output_format", multiple = false)]
pub struct FormatArgs {
    /// Emit a single JSON object.
    #[arg(long, group = "output_format")]
    pub json: bool,
    /// Emit CSV (metadata as leading `#` lines, then a header row).
    #[arg(long, group = "output_format")]
    pub csv: bool,
}

impl FormatArgs {
    fn format(&self) -> OutputFormat {
        if self.json {
            OutputFormat::Json
        } else if self.csv {
            OutputFormat::Csv
        } else {
            OutputFormat::Plain
        }
    }
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "ascii")]
    pub format: InputFormat,
    /// Bit count for packed input.
    #[arg(long)]
    pub bits: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ThresholdArg {
    Sqrt3n,
    Log005,
}

impl From<ThresholdArg> for ThresholdRule {
    fn from(t: ThresholdArg) -> Self {
        match t {
            ThresholdArg::Sqrt3n => ThresholdRule::Sqrt3n,
            ThresholdArg::Log005 => ThresholdRule::Log005,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelArg {
    Original,
    Kim,
    Hamano,
    Pareschi,
    Theoretical,
    Limit,
}

impl From<ModelArg> for VarianceModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Original => VarianceModel::Original,
            ModelArg::Kim => VarianceModel::Kim,
            ModelArg::Hamano => VarianceModel::Hamano,
            ModelArg::Pareschi => VarianceModel::Pareschi,
            ModelArg::Theoretical => VarianceModel::Theoretical,
            ModelArg::Limit => VarianceModel::Limit,
        }
    }
}

#[derive(Debug, Args)]
pub struct TestArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value = "log005")]
    pub threshold: ThresholdArg,
    #[arg(long, value_enum, default_value = "theoretical")]
    pub model: ModelArg,
    #[command(flatten)]
    pub output: FormatArgs,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("size").required(true).args(["m", "m_grid"])))]
pub struct TheoryArgs {
    /// Single model size m = n/2.
    #[arg(long)]
    pub m: Option<u64>,
    /// `START:STOP:log[:PER_DECADE]` (geometric, default 10 per decade) or
    /// `START:STOP:STEP` (linear).
    #[arg(long)]
    pub m_grid: Option<String>,
    #[command(flatten)]
    pub output: FormatArgs,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Master seed; sequence i uses seed + i.
    #[arg(long)]
    pub seed: u32,
    #[arg(long, default_value_t = 10)]
    pub batches: usize,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SimplexArgs {
    #[arg(long, default_value_t = 100)]
    pub m: usize,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub output: FormatArgs,
}

#[derive(Debug, Args)]
pub struct McVarianceArgs {
    #[arg(long, default_value_t = 8192)]
    pub n: usize,
    #[arg(long, default_value_t = 200_000)]
    pub sequences: usize,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub output: FormatArgs,
}

#[derive(Debug, Args)]
pub struct McCorrelationArgs {
    #[arg(long, default_value_t = 8192)]
    pub n: usize,
    #[arg(long, default_value_t = 100_000)]
    pub sequences: usize,
    #[arg(long, default_value_t = 1)]
    pub i: usize,
    #[arg(long, default_value_t = 2)]
    pub j: usize,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub output: FormatArgs,
}

#[derive(Debug, Args)]
pub struct ExhaustiveArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub output: FormatArgs,
}

#[derive(Debug, Args)]
pub struct NormalityArgs {
    #[arg(long, default_value_t = 4096)]
    pub n: usize,
    /// Number of coefficient pairs (s_r, c_r), r = 1..=R.
    #[arg(long, default_value_t = 3)]
    pub r: usize,
    #[arg(long, default_value_t = 100_000)]
    pub sequences: usize,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub output: FormatArgs,
}

#[derive(Debug, Args)]
pub struct LemmaArgs {
    #[arg(long, default_value_t = 0.5)]
    pub x_max: f64,
    #[arg(long, default_value_t = 0.1)]
    pub c: f64,
    #[arg(long, default_value_t = 10_000)]
    pub grid: usize,
    #[command(flatten)]
    pub output: FormatArgs,
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Domain(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Domain(m) => f.write_str(m),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Domain(e.to_string())
        }
    }
}

impl From<ReadError> for CliError {
    fn from(e: ReadError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Parses `argv` (including the program name), runs the subcommand and writes
/// its report to `out`. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok(text) => {
            if out.write_all(text.as_bytes()).is_err() {
                return 2;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Test(a) => cmd_test(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Theory(a) => cmd_theory(a),
        Command::Simplex(a) => cmd_simplex(a),
        Command::McVariance(a) => cmd_mc_variance(a),
        Command::McCorrelation(a) => cmd_mc_correlation(a),
        Command::Exhaustive(a) => cmd_exhaustive(a),
        Command::Normality(a) => cmd_normality(a),
        Command::LemmaA1(a) => cmd_lemma(a),
    }
}

fn executor(run: &RunArgs) -> Result<RayonExecutor, CliError> {
    let workers = run.workers.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    });
    if workers == 0 {
        return Err(CliError::Input("--workers must be at least 1".into()));
    }
    RayonExecutor::new(workers).map_err(|e| CliError::Domain(e.to_string()))
}

#[derive(Serialize)]
struct InputConfig {
    input: String,
    format: &'static str,
    bits: Option<usize>,
}

impl From<&InputArgs> for InputConfig {
    fn from(a: &InputArgs) -> Self {
        Self {
            input: a.input.display().to_string(),
            format: a.format.name(),
            bits: a.bits,
        }
    }
}

fn cmd_test(a: &TestArgs) -> Result<String, CliError> {
    #[derive(Serialize)]
    struct Config {
        #[serde(flatten)]
        input: InputConfig,
        threshold: &'static str,
        model: &'static str,
    }
    let seq = read_sequence(&a.input.input, a.input.format, a.input.bits)?;
    let rule = ThresholdRule::from(a.threshold);
    let model = VarianceModel::from(a.model);
    let outcome = TestOut::from(&run_test(&seq, rule, model)?);
    let config = Config {
        input: InputConfig::from(&a.input),
        threshold: rule.name(),
        model: model.name(),
    };
    let table = outcome.csv();
    Ok(Envelope::new("test", config, outcome).render(a.output.format(), &table))
}

fn cmd_spectrum(a: &SpectrumArgs) -> Result<String, CliError> {
    #[derive(Serialize)]
    struct Empty {}
    let seq = read_sequence(&a.input.input, a.input.format, a.input.bits)?;
    let spec = FftPlan::new(seq.len())?.magnitudes(&seq.signed())?;
    let mut table = Csv::new(&["j", "magnitude"]);
    for (j, m) in spec.half().iter().enumerate() {
        table.row([j.to_string(), m.to_string()]);
    }
    Ok(Envelope::new("spectrum", InputConfig::from(&a.input), Empty {}).to_csv(&table))
}

/// Expands a `--m-grid` specification.
pub fn parse_m_grid(spec: &str) -> Result<Vec<u64>, CliError> {
    let bad = || CliError::Input(format!("invalid --m-grid {spec:?}"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() < 3 || parts.len() > 4 {
        return Err(bad());
    }
    let start: u64 = parts[0].parse().map_err(|_| bad())?;
    let stop: u64 = parts[1].parse().map_err(|_| bad())?;
    if start == 0 || stop < start {
        return Err(bad());
    }
    let mut grid = Vec::new();
    if parts[2] == "log" {
        let per_decade: u32 = match parts.get(3) {
            Some(k) => k.parse().map_err(|_| bad())?,
            None => 10,
        };
        if per_decade == 0 {
            return Err(bad());
        }
        let mut k = 0u32;
        loop {
            let m = (start as f64 * 10f64.powf(k as f64 / per_decade as f64)).round() as u64;
            if m >= stop {
                break;
            }
            if grid.last() != Some(&m) {
                grid.push(m);
            }
            k += 1;
        }
        grid.push(stop);
    } else {
        if parts.len() != 3 {
            return Err(bad());
        }
        let step: u64 = parts[2].parse().map_err(|_| bad())?;
        if step == 0 {
            return Err(bad());
        }
        grid.extend((start..=stop).step_by(step as usize));
    }
    Ok(grid)
}

fn cmd_theory(a: &TheoryArgs) -> Result<String, CliError> {
    #[derive(Serialize)]
    struct Config {
        threshold: &'static str,
        m: Option<u64>,
        m_grid: Option<String>,
    }
    let grid = match (&a.m, &a.m_grid) {
        (Some(m), _) => vec![*m],
        (None, Some(spec)) => parse_m_grid(spec)?,
        (None, None) => unreachable!("clap enforces the size group"),
    };
    let rows = grid
        .iter()
        .map(|&m| {
            let params = TheoryParams::log005(m)?;
            Ok(TheoryRow::new(&theory::quantities(&params)?, params.t2()))
        })
        .collect::<Result<Vec<_>, CoreError>>()?;
    let result = TheoryOut {
        limit_a: theory::limit_a(),
        rows,
    };
    let config = Config {
        threshold: ThresholdRule::Log005.name(),
        m: a.m,
        m_grid: a.m_grid.clone(),
    };
    let table = result.csv();
    Ok(Envelope::new("theory", config, result).render(a.output.format(), &table))
}

fn cmd_simplex(a: &SimplexArgs) -> Result<String, CliError> {
    #[derive(Serialize)]
    struct Config {
        m: usize,
        samples: usize,
        master_seed: u32,
        batches: usize,
        threshold: &'static str,
    }
    let config = McConfig {
        n: 2 * a.m,
        n_sequences: a.samples,
        master_seed: a.run.seed,
        batches: a.run.batches,
    };
    let exec = executor(&a.run)?;
    let report = SimplexOut::from(&simplex::verify_closed_forms(&config, &exec)?);
    let echo = Config {
        m: a.m,
        samples: a.samples,
        master_seed: a.run.seed,
        batches: a.run.batches,
        threshold: ThresholdRule::Log005.name(),
    };
    let table = report.csv();
    Ok(Envelope::new("simplex", echo, report).render(a.output.format(), &table))
}

fn mc_config(n: usize, sequences: usize, run: &RunArgs) -> McConfig {
    McConfig {
        n,
        n_sequences: sequences,
        master_seed: run.seed,
        batches: run.batches,
    }
}

fn cmd_mc_variance(a: &McVarianceArgs) -> Result<String, CliError> {
    let config = mc_config(a.n, a.sequences, &a.run);
    config.validate()?;
    let exec = executor(&a.run)?;
    let report = McOut::from(&experiments::experiment_variance(&config, &exec)?);
    let table = report.csv();
    Ok(
        Envelope::new("mc-variance", McConfigOut::from(&config), report)
            .render(a.output.format(), &table),
    )
}

fn cmd_mc_correlation(a: &McCorrelationArgs) -> Result<String, CliError> {
    #[derive(Serialize)]
    struct Config {
        #[serde(flatten)]
        mc: McConfigOut,
        i: usize,
        j: usize,
    }
    let config = mc_config(a.n, a.sequences, &a.run);
    config.validate()?;
    let exec = executor(&a.run)?;
    let report = McOut::from(&experiments::experiment_correlation(
        &config, a.i, a.j, &exec,
    )?);
    let echo = Config {
        mc: McConfigOut::from(&config),
        i: a.i,
        j: a.j,
    };
    let table = report.csv();
    Ok(Envelope::new("mc-correlation", echo, report).render(a.output.format(), &table))
}

fn cmd_exhaustive(a: &ExhaustiveArgs) -> Result<String, CliError> {
    #[derive(Serialize)]
    struct Config {
        n: usize,
        threshold: &'static str,
    }
    let report = MomentsOut::from(&experiments::exhaustive_moments(a.n)?);
    let config = Config {
        n: a.n,
        threshold: ThresholdRule::Log005.name(),
    };
    let table = report.csv();
    Ok(Envelope::new("exhaustive", config, report).render(a.output.format(), &table))
}

fn cmd_normality(a: &NormalityArgs) -> Result<String, CliError> {
    #[derive(Serialize)]
    struct Config {
        #[serde(flatten)]
        mc: McConfigOut,
        r: usize,
    }
    let config = mc_config(a.n, a.sequences, &a.run);
    config.validate()?;
    let exec = executor(&a.run)?;
    let report = NormalityOut::from(&experiments::normality_check(&config, a.r, &exec)?);
    let echo = Config {
        mc: McConfigOut::from(&config),
        r: a.r,
    };
    let table = report.csv();
    Ok(Envelope::new("normality", echo, report).render(a.output.format(), &table))
}

fn cmd_lemma(a: &LemmaArgs) -> Result<String, CliError> {
    #[derive(Serialize)]
    struct Config {
        x_max: f64,
        c: f64,
        grid: usize,
    }
    let report = LemmaOut::from(&experiments::lemma_a1_check(a.x_max, a.c, a.grid)?);
    let config = Config {
        x_max: a.x_max,
        c: a.c,
        grid: a.grid,
    };
    let table = report.csv();
    Ok(Envelope::new("lemma-a1", config, report).render(a.output.format(), &table))
}
