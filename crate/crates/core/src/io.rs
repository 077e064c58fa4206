//! File formats: comparison input (CSV and JSON, schema version 1), simulation
//! specs, and report rendering to JSON, CSV and Markdown.
//!
//! CSV comparison files carry a header row naming `lab_id,x,u_x` and any of
//! the budget columns `s_Y,u_e,s_b,b`. A row has a budget when any budget cell
//! is non-empty; empty `s_Y` or `u_e` cells in such a row read as zero. CSV
//! has no place for the model, so callers supply it.
//!
//! JSON documents are wrapped as `{"schema_version": 1, ...}`; reports add a
//! `kind` tag and put the payload under `report`.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::doe::{AnalysisReport, DoeReport};
use crate::error::ValidationIssue;
use crate::model::{Comparison, EffectModel, LabResult, UncertaintyBudget};
use crate::simulate::{Distribution, SimLab, SimOutcome, SimSpec, VerificationReport};

pub const SCHEMA_VERSION: u64 = 1;
/// Significant digits of numbers in CSV and Markdown tables.
pub const DEFAULT_TABLE_DIGITS: usize = 6;

const REQUIRED_COLUMNS: [&str; 3] = ["lab_id", "x", "u_x"];
const BUDGET_COLUMNS: [&str; 4] = ["s_Y", "u_e", "s_b", "b"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComparisonFormat {
    Csv,
    Json,
}

/// Format and schema version of a comparison file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComparisonFile {
    pub format: ComparisonFormat,
    pub schema_version: u64,
}

impl ComparisonFile {
    pub fn new(format: ComparisonFormat, schema_version: u64) -> Result<Self, ParseError> {
        if schema_version != SCHEMA_VERSION {
            return Err(ParseError::SchemaVersionUnknown(schema_version));
        }
        Ok(ComparisonFile {
            format,
            schema_version,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
    Markdown,
}

/// A validation issue with the 1-based data row it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct RowIssue {
    pub row: Option<usize>,
    pub issue: ValidationIssue,
}

impl std::fmt::Display for RowIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.row {
            Some(row) => write!(f, "row {row}: {}", self.issue),
            None => write!(f, "{}", self.issue),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("input is not valid UTF-8")]
    InvalidUtf8,
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("row {row}, column {column}: cannot parse {value:?} as a number")]
    BadNumber {
        row: usize,
        column: String,
        value: String,
    },
    #[error("row {row}: {message}")]
    MalformedRow { row: usize, message: String },
    #[error("unknown schema_version {0} (supported: 1)")]
    SchemaVersionUnknown(u64),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("CSV input needs an explicit model (none, random or systematic)")]
    MissingModel,
    #[error("{}", format_issues(.0))]
    Validation(Vec<RowIssue>),
    #[error("unknown report kind {0:?}")]
    UnknownReportKind(String),
    #[error("a seed is required")]
    SeedRequired,
    #[error("n_reps is required")]
    RepsRequired,
    #[error(transparent)]
    Spec(#[from] crate::Error),
}

fn format_issues(issues: &[RowIssue]) -> String {
    let mut s = format!("{} validation error(s)", issues.len());
    for issue in issues {
        s.push_str("\n  - ");
        s.push_str(&issue.to_string());
    }
    s
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        ParseError::Json(e.to_string())
    }
}

#[derive(Deserialize)]
struct VersionProbe {
    schema_version: Option<u64>,
}

fn check_version(bytes: &[u8]) -> Result<(), ParseError> {
    let probe: VersionProbe = serde_json::from_slice(bytes)?;
    match probe.schema_version {
        Some(SCHEMA_VERSION) => Ok(()),
        Some(other) => Err(ParseError::SchemaVersionUnknown(other)),
        None => Err(ParseError::Json("missing field `schema_version`".into())),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComparisonDocument {
    schema_version: u64,
    model: EffectModel,
    #[serde(rename = "Y", default, skip_serializing_if = "Option::is_none")]
    true_value: Option<f64>,
    results: Vec<LabResult>,
}

/// Parses and validates a comparison. `model` is required for CSV and, for
/// JSON, overrides the model stored in the file.
pub fn parse_comparison(
    bytes: &[u8],
    format: ComparisonFormat,
    model: Option<EffectModel>,
) -> Result<Comparison, ParseError> {
    let comparison = match format {
        ComparisonFormat::Csv => {
            let model = model.ok_or(ParseError::MissingModel)?;
            Comparison::new(parse_csv_results(bytes)?, model)
        }
        ComparisonFormat::Json => {
            check_version(bytes)?;
            let doc: ComparisonDocument = serde_json::from_slice(bytes)?;
            Comparison {
                results: doc.results,
                model: model.unwrap_or(doc.model),
                true_value: doc.true_value,
            }
        }
    };
    comparison.validate().map_err(|errors| {
        ParseError::Validation(
            errors
                .0
                .into_iter()
                .map(|issue| RowIssue {
                    row: issue.index().map(|i| i + 1),
                    issue,
                })
                .collect(),
        )
    })
}

fn parse_csv_results(bytes: &[u8]) -> Result<Vec<LabResult>, ParseError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let header = reader.headers().map_err(csv_error)?.clone();
    let columns = header_columns(&header)?;

    let mut results = Vec::new();
    for (index, record) in reader.records().enumerate() {
        let row = index + 1;
        let record = record.map_err(csv_error)?;
        let cell = |c: Option<usize>| c.and_then(|c| record.get(c)).unwrap_or("");
        let number = |name: &str, c: Option<usize>| -> Result<Option<f64>, ParseError> {
            let text = cell(c);
            if text.is_empty() {
                return Ok(None);
            }
            text.parse::<f64>()
                .map(Some)
                .map_err(|_| ParseError::BadNumber {
                    row,
                    column: name.to_string(),
                    value: text.to_string(),
                })
        };
        let required = |name: &str, c: Option<usize>| -> Result<f64, ParseError> {
            number(name, c)?.ok_or_else(|| ParseError::BadNumber {
                row,
                column: name.to_string(),
                value: String::new(),
            })
        };

        let value = required("x", columns.x)?;
        let uncertainty = required("u_x", columns.u_x)?;
        let budget_cells = [
            number("s_Y", columns.budget[0])?,
            number("u_e", columns.budget[1])?,
            number("s_b", columns.budget[2])?,
            number("b", columns.budget[3])?,
        ];
        let budget = budget_cells
            .iter()
            .any(Option::is_some)
            .then(|| UncertaintyBudget {
                true_value_sd: budget_cells[0].unwrap_or(0.0),
                error_u: budget_cells[1].unwrap_or(0.0),
                lab_effect_sd: budget_cells[2],
                lab_effect: budget_cells[3],
            });
        results.push(LabResult {
            lab_id: cell(columns.lab_id).to_string(),
            value,
            uncertainty,
            budget,
        });
    }
    Ok(results)
}

struct CsvColumns {
    lab_id: Option<usize>,
    x: Option<usize>,
    u_x: Option<usize>,
    budget: [Option<usize>; 4],
}

fn header_columns(header: &csv::StringRecord) -> Result<CsvColumns, ParseError> {
    let mut columns = CsvColumns {
        lab_id: None,
        x: None,
        u_x: None,
        budget: [None; 4],
    };
    for (i, name) in header.iter().enumerate() {
        let slot = match name {
            "lab_id" => &mut columns.lab_id,
            "x" => &mut columns.x,
            "u_x" => &mut columns.u_x,
            other => match BUDGET_COLUMNS.iter().position(|c| *c == other) {
                Some(p) => &mut columns.budget[p],
                None => {
                    return Err(ParseError::MalformedHeader(format!(
                        "unknown column {other:?}"
                    )))
                }
            },
        };
        if slot.replace(i).is_some() {
            return Err(ParseError::MalformedHeader(format!(
                "duplicate column {name:?}"
            )));
        }
    }
    for (name, slot) in REQUIRED_COLUMNS
        .iter()
        .zip([columns.lab_id, columns.x, columns.u_x])
    {
        if slot.is_none() {
            return Err(ParseError::MalformedHeader(format!(
                "missing required column {name:?}"
            )));
        }
    }
    Ok(columns)
}

fn csv_error(e: csv::Error) -> ParseError {
    let row = e
        .position()
        .map(|p| p.line().saturating_sub(1) as usize)
        .unwrap_or(0);
    match e.kind() {
        csv::ErrorKind::Utf8 { .. } => ParseError::InvalidUtf8,
        csv::ErrorKind::UnequalLengths { .. } if row == 0 => {
            ParseError::MalformedHeader(e.to_string())
        }
        _ => ParseError::MalformedRow {
            row,
            message: e.to_string(),
        },
    }
}

/// Canonical serialization of a comparison. CSV drops the model and `Y`;
/// the budget columns appear only when some laboratory has a budget.
pub fn emit_comparison(comparison: &Comparison, format: ComparisonFormat) -> Vec<u8> {
    match format {
        ComparisonFormat::Json => {
            let doc = ComparisonDocument {
                schema_version: SCHEMA_VERSION,
                model: comparison.model,
                true_value: comparison.true_value,
                results: comparison.results.clone(),
            };
            pretty_json(&doc)
        }
        ComparisonFormat::Csv => {
            let with_budget = comparison.results.iter().any(|r| r.budget.is_some());
            let mut writer = csv::Writer::from_writer(Vec::new());
            let mut header: Vec<&str> = REQUIRED_COLUMNS.to_vec();
            if with_budget {
                header.extend(BUDGET_COLUMNS);
            }
            writer.write_record(&header).expect("write to Vec");
            for r in &comparison.results {
                let mut row = vec![
                    r.lab_id.clone(),
                    r.value.to_string(),
                    r.uncertainty.to_string(),
                ];
                if with_budget {
                    let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
                    match &r.budget {
                        Some(b) => row.extend([
                            b.true_value_sd.to_string(),
                            b.error_u.to_string(),
                            opt(b.lab_effect_sd),
                            opt(b.lab_effect),
                        ]),
                        None => row.extend(std::iter::repeat_n(String::new(), 4)),
                    }
                }
                writer.write_record(&row).expect("write to Vec");
            }
            writer.into_inner().expect("flush to Vec")
        }
    }
}

fn pretty_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("report types serialize");
    out.push(b'\n');
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SimSpecDocument {
    #[serde(rename = "schema_version")]
    _schema_version: u64,
    #[serde(rename = "Y")]
    true_value: f64,
    model: EffectModel,
    #[serde(default)]
    shared_true_value: Option<bool>,
    #[serde(default)]
    n_reps: Option<u64>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    distribution: Distribution,
    labs: Vec<SimLab>,
}

#[derive(Serialize)]
struct SimSpecOut<'a> {
    schema_version: u64,
    #[serde(flatten)]
    spec: &'a SimSpec,
}

/// Command-line values that take precedence over a spec file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SimOverrides {
    pub model: Option<EffectModel>,
    pub n_reps: Option<u64>,
    pub seed: Option<u64>,
}

/// Parses a simulation spec. `seed` and `n_reps` may be left out of the file
/// when given in `overrides`; `shared_true_value` defaults to true.
pub fn parse_sim_spec(bytes: &[u8], overrides: SimOverrides) -> Result<SimSpec, ParseError> {
    check_version(bytes)?;
    let doc: SimSpecDocument = serde_json::from_slice(bytes)?;
    let spec = SimSpec {
        true_value: doc.true_value,
        labs: doc.labs,
        model: overrides.model.unwrap_or(doc.model),
        shared_true_value: doc.shared_true_value.unwrap_or(true),
        n_reps: overrides
            .n_reps
            .or(doc.n_reps)
            .ok_or(ParseError::RepsRequired)?,
        seed: overrides
            .seed
            .or(doc.seed)
            .ok_or(ParseError::SeedRequired)?,
        distribution: doc.distribution,
    };
    spec.validate()?;
    Ok(spec)
}

pub fn emit_sim_spec(spec: &SimSpec) -> Vec<u8> {
    pretty_json(&SimSpecOut {
        schema_version: SCHEMA_VERSION,
        spec,
    })
}

/// A rendered table: header row plus formatted cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// A report that can be written as JSON and as tables.
pub trait Report: Serialize + DeserializeOwned {
    const KIND: &'static str;

    fn tables(&self, digits: usize) -> Vec<Table>;
}

/// Formats `value` with `digits` significant digits, in the style of C's
/// `%g`.
pub fn format_significant(value: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if value == 0.0 {
        return "0".into();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let exponent = value.abs().log10().floor() as i32;
    // Rounding to `digits` can carry into the next power of ten.
    let rounded: f64 = format!("{:.*e}", digits - 1, value)
        .parse()
        .unwrap_or(value);
    let exponent = if rounded != 0.0 {
        rounded.abs().log10().floor() as i32
    } else {
        exponent
    };
    if exponent < -4 || exponent >= digits as i32 {
        let s = format!("{:.*e}", digits - 1, value);
        let (mantissa, exp) = s.split_once('e').expect("exponent form");
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        trim_zeros(&format!("{value:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn square_table(title: &str, ids: &[String], cell: impl Fn(usize, usize) -> String) -> Table {
    let mut header = vec!["lab".to_string()];
    header.extend(ids.iter().cloned());
    Table {
        title: title.into(),
        header,
        rows: ids
            .iter()
            .enumerate()
            .map(|(i, id)| {
                let mut row = vec![id.clone()];
                row.extend((0..ids.len()).map(|j| cell(i, j)));
                row
            })
            .collect(),
    }
}

fn key_value_table(title: &str, rows: Vec<(&str, String)>) -> Table {
    Table {
        title: title.into(),
        header: vec!["quantity".into(), "value".into()],
        rows: rows
            .into_iter()
            .map(|(k, v)| vec![k.to_string(), v])
            .collect(),
    }
}

fn doe_tables(doe: &DoeReport, digits: usize) -> Vec<Table> {
    let f = |v: f64| format_significant(v, digits);
    let ids: Vec<String> = doe.unilateral.iter().map(|d| d.lab_id.clone()).collect();
    vec![
        Table {
            title: "unilateral degrees of equivalence".into(),
            header: ["lab_id", "d", "u_d", "U_d", "equivalent"]
                .map(String::from)
                .to_vec(),
            rows: doe
                .unilateral
                .iter()
                .map(|d| {
                    vec![
                        d.lab_id.clone(),
                        f(d.deviation),
                        f(d.uncertainty),
                        f(d.expanded),
                        d.equivalent.to_string(),
                    ]
                })
                .collect(),
        },
        square_table("bilateral d_ij", &ids, |i, j| {
            f(doe.bilateral[i][j].deviation)
        }),
        square_table("bilateral u(d_ij)", &ids, |i, j| {
            f(doe.bilateral[i][j].uncertainty)
        }),
    ]
}

fn kcrv_rows(doe: &DoeReport, digits: usize) -> Vec<(&'static str, String)> {
    let f = |v: f64| format_significant(v, digits);
    let k = doe.unilateral.first().map(|d| d.coverage_factor);
    let mut rows = vec![
        ("model", doe.kcrv.model.to_string()),
        ("x_K", f(doe.kcrv.value)),
        ("u_xK", f(doe.kcrv.uncertainty)),
    ];
    if let Some(k) = k {
        rows.push(("k", f(k)));
    }
    rows
}

impl Report for DoeReport {
    const KIND: &'static str = "doe";

    fn tables(&self, digits: usize) -> Vec<Table> {
        let mut tables = vec![key_value_table("reference value", kcrv_rows(self, digits))];
        tables.extend(doe_tables(self, digits));
        tables
    }
}

impl Report for AnalysisReport {
    const KIND: &'static str = "analysis";

    fn tables(&self, digits: usize) -> Vec<Table> {
        let f = |v: f64| format_significant(v, digits);
        let mut rows = kcrv_rows(&self.doe, digits);
        if let Some(c) = &self.consistency {
            rows.extend([
                ("chi2_obs", f(c.chi2_obs)),
                ("dof", c.dof.to_string()),
                ("p_value", f(c.p_value)),
                ("alpha", f(c.alpha)),
                ("consistent", c.pass.to_string()),
            ]);
        }
        let mut tables = vec![key_value_table("reference value", rows)];
        tables.extend(doe_tables(&self.doe, digits));
        tables
    }
}

impl Report for SimOutcome {
    const KIND: &'static str = "simulation";

    fn tables(&self, digits: usize) -> Vec<Table> {
        let f = |v: f64| format_significant(v, digits);
        let ids = self.lab_ids();
        vec![
            key_value_table(
                "simulation",
                vec![
                    ("model", self.model.to_string()),
                    ("shared_true_value", self.shared_true_value.to_string()),
                    ("n_reps", self.n_reps.to_string()),
                    ("seed", self.seed.to_string()),
                    ("mean_xK", f(self.mean_kcrv)),
                    ("se_mean_xK", f(self.se_mean_kcrv)),
                    ("var_xK", f(self.var_kcrv)),
                    ("se_var_xK", f(self.se_var_kcrv)),
                ],
            ),
            Table {
                title: "per-laboratory moments".into(),
                header: [
                    "lab_id",
                    "mean_d",
                    "se_mean_d",
                    "var_d",
                    "se_var_d",
                    "cov_x_xK",
                    "se_cov_x_xK",
                ]
                .map(String::from)
                .to_vec(),
                rows: self
                    .labs
                    .iter()
                    .map(|l| {
                        vec![
                            l.lab_id.clone(),
                            f(l.mean_d),
                            f(l.se_mean_d),
                            f(l.var_d),
                            f(l.se_var_d),
                            f(l.cov_x_kcrv),
                            f(l.se_cov_x_kcrv),
                        ]
                    })
                    .collect(),
            },
            square_table("mean d_ij", &ids, |i, j| f(self.mean_dij[i][j])),
        ]
    }
}

impl Report for VerificationReport {
    const KIND: &'static str = "verification";

    fn tables(&self, digits: usize) -> Vec<Table> {
        let f = |v: f64| format_significant(v, digits);
        vec![
            key_value_table(
                "verification",
                vec![
                    ("model", self.model.to_string()),
                    ("shared_true_value", self.shared_true_value.to_string()),
                    ("n_reps", self.n_reps.to_string()),
                    ("seed", self.seed.to_string()),
                    ("z", f(self.z)),
                    ("all_pass", self.all_pass.to_string()),
                ],
            ),
            Table {
                title: "checks".into(),
                header: [
                    "check",
                    "lab_i",
                    "lab_j",
                    "observed",
                    "predicted",
                    "std_error",
                    "tolerance",
                    "pass",
                ]
                .map(String::from)
                .to_vec(),
                rows: self
                    .checks
                    .iter()
                    .map(|c| {
                        vec![
                            c.kind.as_str().to_string(),
                            c.lab_i.clone().unwrap_or_default(),
                            c.lab_j.clone().unwrap_or_default(),
                            f(c.observed),
                            f(c.predicted),
                            f(c.std_error),
                            f(c.tolerance),
                            c.pass.to_string(),
                        ]
                    })
                    .collect(),
            },
        ]
    }
}

#[derive(Serialize)]
struct EnvelopeOut<'a, R> {
    schema_version: u64,
    kind: &'a str,
    report: &'a R,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EnvelopeIn {
    schema_version: u64,
    kind: String,
    report: serde_json::Value,
}

pub fn emit_report<R: Report>(report: &R, format: ReportFormat) -> Vec<u8> {
    emit_report_with(report, format, DEFAULT_TABLE_DIGITS)
}

/// Renders `report`. JSON is lossless; CSV writes each table as a block
/// headed by a `# title` line, blocks separated by a blank line.
pub fn emit_report_with<R: Report>(report: &R, format: ReportFormat, digits: usize) -> Vec<u8> {
    match format {
        ReportFormat::Json => pretty_json(&EnvelopeOut {
            schema_version: SCHEMA_VERSION,
            kind: R::KIND,
            report,
        }),
        ReportFormat::Csv => render_csv(&report.tables(digits)),
        ReportFormat::Markdown => render_markdown(&report.tables(digits)).into_bytes(),
    }
}

fn render_csv(tables: &[Table]) -> Vec<u8> {
    let mut out = Vec::new();
    for (i, table) in tables.iter().enumerate() {
        if i > 0 {
            out.push(b'\n');
        }
        out.extend_from_slice(format!("# {}\n", table.title).as_bytes());
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&table.header).expect("write to Vec");
        for row in &table.rows {
            writer.write_record(row).expect("write to Vec");
        }
        out.extend(writer.into_inner().expect("flush to Vec"));
    }
    out
}

fn render_markdown(tables: &[Table]) -> String {
    let escape = |s: &str| s.replace('|', "\\|");
    let mut out = String::new();
    for (i, table) in tables.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("### {}\n\n", table.title));
        let line = |cells: &[String]| {
            let cells: Vec<String> = cells.iter().map(|c| escape(c)).collect();
            format!("| {} |\n", cells.join(" | "))
        };
        out.push_str(&line(&table.header));
        out.push_str(&format!("|{}\n", "---|".repeat(table.header.len())));
        for row in &table.rows {
            out.push_str(&line(row));
        }
    }
    out
}

/// Any report read back from its JSON envelope.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyReport {
    Doe(DoeReport),
    Analysis(AnalysisReport),
    Simulation(SimOutcome),
    Verification(VerificationReport),
}

impl AnyReport {
    pub fn emit(&self, format: ReportFormat, digits: usize) -> Vec<u8> {
        match self {
            AnyReport::Doe(r) => emit_report_with(r, format, digits),
            AnyReport::Analysis(r) => emit_report_with(r, format, digits),
            AnyReport::Simulation(r) => emit_report_with(r, format, digits),
            AnyReport::Verification(r) => emit_report_with(r, format, digits),
        }
    }
}

pub fn parse_report(bytes: &[u8]) -> Result<AnyReport, ParseError> {
    check_version(bytes)?;
    let envelope: EnvelopeIn = serde_json::from_slice(bytes)?;
    if envelope.schema_version != SCHEMA_VERSION {
        return Err(ParseError::SchemaVersionUnknown(envelope.schema_version));
    }
    fn body<R: Report>(value: serde_json::Value) -> Result<R, ParseError> {
        Ok(serde_json::from_value(value)?)
    }
    Ok(match envelope.kind.as_str() {
        DoeReport::KIND => AnyReport::Doe(body(envelope.report)?),
        AnalysisReport::KIND => AnyReport::Analysis(body(envelope.report)?),
        SimOutcome::KIND => AnyReport::Simulation(body(envelope.report)?),
        VerificationReport::KIND => AnyReport::Verification(body(envelope.report)?),
        other => return Err(ParseError::UnknownReportKind(other.to_string())),
    })
}
