//! Machine-readable reports.
//!
//! Every report carries the tool name and version, the subcommand and its full
//! configuration (including the master seed for randomized runs). JSON output
//! is one object; CSV output starts with `#` metadata lines followed by the
//! header row; plain output lists `key: value` lines.

use std::fmt::Write as _;

use clap::ValueEnum;
use dftt_core::dft_test::TestOutcome;
use dftt_core::experiments::{LemmaReport, McConfig, McReport, MomentTable, NormalityReport};
use dftt_core::simplex::SimplexReport;
use dftt_core::theory::TheoreticalQuantities;
use serde::Serialize;
use serde_json::Value;

pub const TOOL: &str = "dftt";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Plain,
    Csv,
    Json,
}

#[derive(Debug, Serialize)]
pub struct Envelope<C: Serialize, R: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub config: C,
    #[serde(flatten)]
    pub result: R,
}

impl<C: Serialize, R: Serialize> Envelope<C, R> {
    pub fn new(subcommand: &'static str, config: C, result: R) -> Self {
        Self {
            tool: TOOL,
            version: VERSION,
            subcommand,
            config,
            result,
        }
    }

    fn config_json(&self) -> String {
        serde_json::to_string(&self.config).expect("config serialises")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises") + "\n"
    }

    pub fn to_plain(&self) -> String {
        let value = serde_json::to_value(self).expect("report serialises");
        let mut out = String::new();
        flatten_plain(&mut out, "", &value);
        out
    }

    pub fn to_csv(&self, table: &Csv) -> String {
        let mut out = String::new();
        writeln!(out, "# {TOOL} {VERSION} {}", self.subcommand).unwrap();
        writeln!(out, "# config {}", self.config_json()).unwrap();
        out.push_str(&table.render());
        out
    }

    pub fn render(&self, format: OutputFormat, table: &Csv) -> String {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(table),
            OutputFormat::Plain => self.to_plain(),
        }
    }
}

fn flatten_plain(out: &mut String, prefix: &str, value: &Value) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten_plain(out, &key, v);
            }
        }
        Value::Array(items) if items.iter().any(|v| v.is_object()) => {
            for (i, v) in items.iter().enumerate() {
                flatten_plain(out, &format!("{prefix}[{i}]"), v);
            }
        }
        other => {
            writeln!(out, "{prefix}: {other}").unwrap();
        }
    }
}

/// A CSV table; fields are written verbatim and must not contain commas.
#[derive(Debug, Clone, Default)]
pub struct Csv {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        let row: Vec<String> = fields.into_iter().map(|f| f.to_string()).collect();
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

#[derive(Debug, Clone, Serialize)]
pub struct McConfigOut {
    pub n: usize,
    pub sequences: usize,
    pub master_seed: u32,
    pub batches: usize,
}

impl From<&McConfig> for McConfigOut {
    fn from(c: &McConfig) -> Self {
        Self {
            n: c.n,
            sequences: c.n_sequences,
            master_seed: c.master_seed,
            batches: c.batches,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TestOut {
    pub n: usize,
    pub n1: usize,
    pub d: f64,
    pub p: f64,
    pub threshold: String,
    pub model: String,
    pub a: f64,
}

impl From<&TestOutcome> for TestOut {
    fn from(o: &TestOutcome) -> Self {
        Self {
            n: o.n,
            n1: o.n1,
            d: o.d,
            p: o.p,
            threshold: o.threshold.name().into(),
            model: o.model.name().into(),
            a: o.divisor,
        }
    }
}

impl TestOut {
    pub fn csv(&self) -> Csv {
        let mut t = Csv::new(&["n", "n1", "d", "p", "threshold", "model", "a"]);
        t.row([
            self.n.to_string(),
            self.n1.to_string(),
            self.d.to_string(),
            self.p.to_string(),
            self.threshold.clone(),
            self.model.clone(),
            self.a.to_string(),
        ]);
        t
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoryRow {
    pub m: u64,
    pub t2: f64,
    pub a: f64,
    #[serde(rename = "vF")]
    pub v_f: f64,
    pub corr: f64,
    pub cov: f64,
    #[serde(rename = "varN1")]
    pub var_n1: f64,
}

impl TheoryRow {
    pub fn new(q: &TheoreticalQuantities, t2: f64) -> Self {
        Self {
            m: q.m,
            t2,
            a: q.a,
            v_f: q.v_f,
            corr: q.corr_ff,
            cov: q.cov_ff,
            var_n1: q.var_n1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoryOut {
    pub limit_a: f64,
    pub rows: Vec<TheoryRow>,
}

impl TheoryOut {
    pub fn csv(&self) -> Csv {
        let mut t = Csv::new(&["m", "a", "vF", "corr", "varN1"]);
        for r in &self.rows {
            t.row([
                r.m.to_string(),
                r.a.to_string(),
                r.v_f.to_string(),
                r.corr.to_string(),
                r.var_n1.to_string(),
            ]);
        }
        t
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct McOut {
    pub estimate: f64,
    pub stderr: f64,
    pub reference: Option<f64>,
    pub z_score: Option<f64>,
    pub per_batch: Vec<f64>,
    pub warnings: Vec<String>,
}

impl From<&McReport> for McOut {
    fn from(r: &McReport) -> Self {
        Self {
            estimate: r.estimate,
            stderr: r.stderr,
            reference: r.reference,
            z_score: r.z_score(),
            per_batch: r.per_batch.clone(),
            warnings: r.warnings.clone(),
        }
    }
}

impl McOut {
    pub fn csv(&self) -> Csv {
        let mut t = Csv::new(&["batch", "value"]);
        for (b, v) in self.per_batch.iter().enumerate() {
            t.row([b.to_string(), v.to_string()]);
        }
        t.row(["estimate".to_string(), self.estimate.to_string()]);
        t.row(["stderr".to_string(), self.stderr.to_string()]);
        t.row(["reference".to_string(), opt(self.reference)]);
        t
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QuantityRow {
    pub quantity: &'static str,
    pub empirical: f64,
    pub stderr: f64,
    pub closed_form: f64,
    pub z_score: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimplexOut {
    pub m: usize,
    pub t2: f64,
    pub pooled_mean: f64,
    pub pooled_covariance: f64,
    pub rows: Vec<QuantityRow>,
}

impl From<&SimplexReport> for SimplexOut {
    fn from(r: &SimplexReport) -> Self {
        let row = |quantity, m: &McReport| QuantityRow {
            quantity,
            empirical: m.estimate,
            stderr: m.stderr,
            closed_form: m.reference.unwrap_or(f64::NAN),
            z_score: m.z_score().unwrap_or(f64::NAN),
        };
        Self {
            m: r.m,
            t2: r.t2,
            pooled_mean: r.pooled.mean,
            pooled_covariance: r.pooled.covariance,
            rows: vec![
                row("vF", &r.variance),
                row("corr", &r.correlation),
                row("varN1", &r.n1_variance),
            ],
        }
    }
}

impl SimplexOut {
    pub fn csv(&self) -> Csv {
        let mut t = Csv::new(&["quantity", "empirical", "stderr", "closed_form", "z_score"]);
        for r in &self.rows {
            t.row([
                r.quantity.to_string(),
                r.empirical.to_string(),
                r.stderr.to_string(),
                r.closed_form.to_string(),
                r.z_score.to_string(),
            ]);
        }
        t
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LineOut {
    pub j: usize,
    pub mean: f64,
    pub variance: f64,
    /// `2n^2 - 2n` for `j = 0`, `n^2 - 2n` otherwise.
    pub predicted_variance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentsOut {
    pub sequences: u64,
    pub lines: Vec<LineOut>,
    pub n1_mean: f64,
    pub n1_variance: f64,
    pub half_energy_mean: f64,
    pub half_energy_variance: f64,
    pub half_energy_variance_bound: f64,
    pub identity_max_error: f64,
    pub parseval_max_error: f64,
}

impl From<&MomentTable> for MomentsOut {
    fn from(t: &MomentTable) -> Self {
        Self {
            sequences: 1u64 << t.n,
            lines: t
                .lines
                .iter()
                .map(|l| LineOut {
                    j: l.j,
                    mean: l.mean,
                    variance: l.variance,
                    predicted_variance: if l.j == 0 || 2 * l.j == t.n {
                        t.dc_variance()
                    } else {
                        t.interior_line_variance()
                    },
                })
                .collect(),
            n1_mean: t.n1_mean,
            n1_variance: t.n1_variance,
            half_energy_mean: t.half_energy_mean,
            half_energy_variance: t.half_energy_variance,
            half_energy_variance_bound: t.dc_variance(),
            identity_max_error: t.identity_max_error,
            parseval_max_error: t.parseval_max_error,
        }
    }
}

impl MomentsOut {
    pub fn csv(&self) -> Csv {
        let mut t = Csv::new(&["quantity", "j", "mean", "variance", "reference"]);
        for l in &self.lines {
            t.row([
                "line".to_string(),
                l.j.to_string(),
                l.mean.to_string(),
                l.variance.to_string(),
                l.predicted_variance.to_string(),
            ]);
        }
        t.row([
            "n1".to_string(),
            String::new(),
            self.n1_mean.to_string(),
            self.n1_variance.to_string(),
            String::new(),
        ]);
        t.row([
            "half_energy".to_string(),
            String::new(),
            self.half_energy_mean.to_string(),
            self.half_energy_variance.to_string(),
            self.half_energy_variance_bound.to_string(),
        ]);
        t
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CoefficientOut {
    pub name: String,
    pub mean: f64,
    pub variance: f64,
    pub excess_kurtosis: f64,
    pub ks: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairOut {
    pub pair: String,
    pub correlation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalityOut {
    pub coefficients: Vec<CoefficientOut>,
    pub correlations: Vec<PairOut>,
}

impl From<&NormalityReport> for NormalityOut {
    fn from(r: &NormalityReport) -> Self {
        let names: Vec<String> = r.coefficients.iter().map(|c| c.to_string()).collect();
        Self {
            coefficients: (0..names.len())
                .map(|i| CoefficientOut {
                    name: names[i].clone(),
                    mean: r.means[i],
                    variance: r.variances[i],
                    excess_kurtosis: r.excess_kurtoses[i],
                    ks: r.ks_statistics[i],
                })
                .collect(),
            correlations: r
                .correlations
                .iter()
                .map(|&(a, b, c)| PairOut {
                    pair: format!("{}~{}", names[a], names[b]),
                    correlation: c,
                })
                .collect(),
        }
    }
}

impl NormalityOut {
    pub fn csv(&self) -> Csv {
        let mut t = Csv::new(&[
            "name",
            "mean",
            "variance",
            "excess_kurtosis",
            "ks",
            "correlation",
        ]);
        for c in &self.coefficients {
            t.row([
                c.name.clone(),
                c.mean.to_string(),
                c.variance.to_string(),
                c.excess_kurtosis.to_string(),
                c.ks.to_string(),
                String::new(),
            ]);
        }
        for p in &self.correlations {
            t.row([
                p.pair.clone(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                p.correlation.to_string(),
            ]);
        }
        t
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaOut {
    pub pass: bool,
    pub max_ratio: f64,
    pub argmax: f64,
    pub ratio_at_min: f64,
    pub leading_coefficient: f64,
}

impl From<&LemmaReport> for LemmaOut {
    fn from(r: &LemmaReport) -> Self {
        Self {
            pass: r.pass,
            max_ratio: r.max_ratio,
            argmax: r.argmax,
            ratio_at_min: r.ratio_at_min,
            leading_coefficient: 1.0 / 12.0,
        }
    }
}

impl LemmaOut {
    pub fn csv(&self) -> Csv {
        let mut t = Csv::new(&["pass", "max_ratio", "argmax", "ratio_at_min"]);
        t.row([
            self.pass.to_string(),
            self.max_ratio.to_string(),
            self.argmax.to_string(),
            self.ratio_at_min.to_string(),
        ]);
        t
    }
}
