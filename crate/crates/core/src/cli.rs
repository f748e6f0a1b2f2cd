//! Batch front-end: reads a setting document, evaluates the bound for one
//! prime or a sweep of primes, and renders the records as JSON or CSV.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::BigRational;
use crate::bounds::{final_bound, BoundError, BoundReport};
use crate::groups::levi_order;
use crate::numberfield::{is_prime, validate_setting, FieldSpec, Place, QuaternionData, RamifiedPrime, SettingError, ShimuraSetting};
use crate::oracle::{enumerate_group, GroupDescriptor, LeviInstance};

/// Largest `|I(p)|` the inline oracle check will enumerate.
pub const ORACLE_ORDER_LIMIT: u64 = 100_000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ALL_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_FAULT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "hecke-bound", version, about = "Exact bounds on mod-p Hecke eigensystems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the bound for the setting described by a JSON document
    Run(RunArgs),
    /// Enumerate a small matrix group and print its invariants
    #[command(hide = true)]
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, clap::Args)]
pub struct RunArgs {
    /// Input document; `-` reads standard input
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Cross-check irr_count and dim_bound against an enumeration of I(p)
    #[arg(long)]
    pub oracle_check: bool,
    /// Write records here instead of standard output
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(short, long, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GroupKind {
    Gl,
    Sl,
    Sp,
    U,
    GspMod,
}

#[derive(Debug, clap::Args)]
pub struct OracleArgs {
    #[arg(long, value_enum)]
    pub group: GroupKind,
    #[arg(long)]
    pub m: u32,
    /// Field order, or the modulus for `gsp-mod`
    #[arg(long)]
    pub q: u64,
    /// Prime for p-regular classes and the Sylow order
    #[arg(long)]
    pub p: Option<u64>,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid input at `{path}`: {message}")]
    Parse { path: String, message: String },
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// Base field as written in the input document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldInput {
    Rational,
    RealQuadratic { disc: u64 },
    /// Accepted only so that higher degrees can be refused by name.
    TotallyReal { degree: u32 },
}

impl FieldInput {
    pub fn to_field(self) -> Result<FieldSpec, SettingError> {
        match self {
            FieldInput::Rational | FieldInput::TotallyReal { degree: 1 } => Ok(FieldSpec::Rational),
            FieldInput::RealQuadratic { disc } => FieldSpec::real_quadratic(disc),
            FieldInput::TotallyReal { degree } => Err(SettingError::UnsupportedFieldDegree(degree)),
        }
    }
}

impl From<FieldSpec> for FieldInput {
    fn from(f: FieldSpec) -> Self {
        match f {
            FieldSpec::Rational => FieldInput::Rational,
            FieldSpec::RealQuadratic { disc } => FieldInput::RealQuadratic { disc },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub from: u64,
    pub to: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub field: FieldInput,
    #[serde(default)]
    pub quaternion_ramification: Vec<RamifiedPrime>,
    pub m: u32,
    #[serde(rename = "N")]
    pub level: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_sweep: Option<Sweep>,
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let doc: InputDocument = serde_path_to_error::deserialize(de).map_err(|e| ConfigError::Parse {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
        doc.check()?;
        Ok(doc)
    }

    fn check(&self) -> Result<(), ConfigError> {
        match (self.p, self.p_sweep) {
            (Some(_), Some(_)) => Err(ConfigError::Invalid("give exactly one of `p` and `p_sweep`, not both".into())),
            (None, None) => Err(ConfigError::Invalid("one of `p` or `p_sweep` is required".into())),
            (None, Some(s)) if s.from < 2 || s.to < 2 => {
                Err(ConfigError::Invalid("`p_sweep` endpoints must be >= 2".into()))
            }
            (None, Some(s)) if s.from > s.to => Err(ConfigError::Invalid("`p_sweep` range is empty".into())),
            _ => Ok(()),
        }
    }

    /// The primes this document asks for, ascending. A single `p` is passed
    /// through even if it is not prime, so validation can report it.
    pub fn primes(&self) -> Vec<u64> {
        match (self.p, self.p_sweep) {
            (Some(p), _) => vec![p],
            (None, Some(s)) => (s.from..=s.to).filter(|&n| is_prime(n)).collect(),
            (None, None) => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub input: InputDocument,
    pub format: OutputFormat,
    pub verbosity: u8,
    pub oracle_check: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Error,
    Fault,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputEcho {
    pub field: FieldInput,
    pub quaternion_ramification: Vec<RamifiedPrime>,
    pub m: u32,
    #[serde(rename = "N")]
    pub level: u64,
    pub p: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaPrime {
    pub at_p: Vec<Place>,
    pub away: Vec<Place>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[allow(non_snake_case)]
pub struct ReportFields {
    pub zeta_F: Vec<String>,
    pub C_B: String,
    pub level_group_order: String,
    pub mass: String,
    pub irr_count: String,
    pub dim_bound: String,
    pub final_bound: String,
    pub asymptotic_exponent: u32,
    pub delta_prime: DeltaPrime,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleOutcome {
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Record {
    pub input: InputEcho,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(flatten)]
    pub report: Option<ReportFields>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleOutcome>,
}

#[derive(Debug, Serialize)]
struct Document<'a> {
    records: &'a [Record],
}

/// `num/den`, always with an explicit positive denominator.
pub fn render_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl ReportFields {
    fn from_report(report: &BoundReport) -> Self {
        let s = &report.setting;
        ReportFields {
            zeta_F: report.zeta_values.iter().map(render_rational).collect(),
            C_B: render_rational(&report.c_b),
            level_group_order: report.level_group_order.to_string(),
            mass: report.mass.to_string(),
            irr_count: report.irr_count.to_string(),
            dim_bound: report.dim_bound.to_string(),
            final_bound: report.final_bound.to_string(),
            asymptotic_exponent: report.asymptotic_exponent,
            delta_prime: DeltaPrime { at_p: s.delta_prime_at_p.clone(), away: s.delta_prime_away.clone() },
        }
    }
}

/// Enumerates `I(p)` when it is small enough and compares its `p`-regular
/// class count and `p`-Sylow order with the closed forms in `report`.
pub fn oracle_check(setting: &ShimuraSetting, report: &BoundReport) -> OracleOutcome {
    let order = levi_order(setting);
    if order > BigUint::from(ORACLE_ORDER_LIMIT) {
        return OracleOutcome {
            verified: false,
            skipped: Some(format!("|I(p)| = {order} exceeds {ORACLE_ORDER_LIMIT}")),
        };
    }
    let group = match enumerate_group(&GroupDescriptor::Levi(LeviInstance::from_setting(setting))) {
        Ok(g) => g,
        Err(e) => return OracleOutcome { verified: false, skipped: Some(e.to_string()) },
    };
    let p = setting.p;
    let verified = BigUint::from(group.order()) == order
        && BigUint::from(group.p_regular_class_count(p)) == report.irr_count
        && BigUint::from(group.sylow_p_order(p)) == report.dim_bound;
    OracleOutcome { verified, skipped: None }
}

fn evaluate(input: &InputDocument, p: u64, with_oracle: bool) -> Record {
    let echo = InputEcho {
        field: input.field,
        quaternion_ramification: input.quaternion_ramification.clone(),
        m: input.m,
        level: input.level,
        p,
    };
    let failed = |status, message: String| Record {
        input: echo.clone(),
        status,
        error: Some(message),
        report: None,
        oracle: None,
    };
    let setting = input
        .field
        .to_field()
        .and_then(|f| QuaternionData::new(f, &input.quaternion_ramification, input.m))
        .and_then(|q| validate_setting(q, input.level, p));
    let setting = match setting {
        Ok(s) => s,
        Err(e) => return failed(Status::Error, e.to_string()),
    };
    let report = match final_bound(&setting) {
        Ok(r) => r,
        Err(e @ BoundError::ImplementationFault(_)) => return failed(Status::Fault, e.to_string()),
        Err(e) => return failed(Status::Error, e.to_string()),
    };
    let oracle = with_oracle.then(|| oracle_check(&setting, &report));
    Record {
        input: echo,
        status: Status::Ok,
        error: None,
        report: Some(ReportFields::from_report(&report)),
        oracle,
    }
}

/// Evaluates every prime in scope, in ascending order of `p`.
pub fn run(config: &RunConfig) -> (Vec<Record>, i32) {
    let primes = config.input.primes();
    let records: Vec<Record> = primes
        .par_iter()
        .map(|&p| evaluate(&config.input, p, config.oracle_check))
        .collect();
    if config.verbosity > 0 {
        for r in &records {
            match &r.error {
                None => eprintln!("p = {}: ok", r.input.p),
                Some(e) => eprintln!("p = {}: {e}", r.input.p),
            }
        }
    }
    (records.clone(), exit_status(&records))
}

pub fn exit_status(records: &[Record]) -> i32 {
    if records.iter().any(|r| r.status == Status::Fault) {
        EXIT_FAULT
    } else if records.iter().any(|r| r.status == Status::Ok) {
        EXIT_OK
    } else {
        EXIT_ALL_FAILED
    }
}

pub fn render(records: &[Record], format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&Document { records }).expect("records serialize");
            s.push('\n');
            s
        }
        OutputFormat::Csv => render_csv(records),
    }
}

pub const CSV_HEADER: [&str; 19] = [
    "p",
    "status",
    "error",
    "field",
    "disc",
    "quaternion_ramification",
    "m",
    "N",
    "zeta_F",
    "C_B",
    "level_group_order",
    "mass",
    "irr_count",
    "dim_bound",
    "final_bound",
    "asymptotic_exponent",
    "delta_prime_at_p",
    "delta_prime_away",
    "oracle",
];

fn places_cell(places: &[Place]) -> String {
    let mut s = String::new();
    for (i, v) in places.iter().enumerate() {
        if i > 0 {
            s.push(';');
        }
        let _ = write!(s, "{}:{}:{}", v.residue_prime, v.residue_degree, v.index);
    }
    s
}

fn render_csv(records: &[Record]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in records {
        let (field, disc) = match r.input.field {
            FieldInput::Rational => ("rational".to_string(), String::new()),
            FieldInput::RealQuadratic { disc } => ("real_quadratic".to_string(), disc.to_string()),
            FieldInput::TotallyReal { degree } => (format!("totally_real_{degree}"), String::new()),
        };
        let ramification = r
            .input
            .quaternion_ramification
            .iter()
            .map(|x| format!("{}:{}", x.prime, x.residue_degree))
            .collect::<Vec<_>>()
            .join(";");
        let status = match r.status {
            Status::Ok => "ok",
            Status::Error => "error",
            Status::Fault => "fault",
        };
        let oracle = match &r.oracle {
            None => String::new(),
            Some(OracleOutcome { skipped: Some(reason), .. }) => format!("skipped: {reason}"),
            Some(OracleOutcome { verified, .. }) => verified.to_string(),
        };
        let mut row = vec![
            r.input.p.to_string(),
            status.to_string(),
            r.error.clone().unwrap_or_default(),
            field,
            disc,
            ramification,
            r.input.m.to_string(),
            r.input.level.to_string(),
        ];
        match &r.report {
            Some(f) => row.extend([
                f.zeta_F.join(";"),
                f.C_B.clone(),
                f.level_group_order.clone(),
                f.mass.clone(),
                f.irr_count.clone(),
                f.dim_bound.clone(),
                f.final_bound.clone(),
                f.asymptotic_exponent.to_string(),
                places_cell(&f.delta_prime.at_p),
                places_cell(&f.delta_prime.away),
            ]),
            None => row.extend(std::iter::repeat_n(String::new(), 10)),
        }
        row.push(oracle);
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn read_input(path: &PathBuf) -> Result<String, ConfigError> {
    let io = |source| ConfigError::Io { path: path.display().to_string(), source };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

fn run_command(args: &RunArgs) -> i32 {
    let input = match read_input(&args.input).and_then(|text| InputDocument::parse(&text)) {
        Ok(doc) => doc,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let config = RunConfig { input, format: args.format, verbosity: args.verbose, oracle_check: args.oracle_check };
    let (records, status) = run(&config);
    let text = render(&records, config.format);
    match &args.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_CONFIG;
            }
        }
        None => print!("{text}"),
    }
    status
}

fn oracle_command(args: &OracleArgs) -> i32 {
    let descriptor = match args.group {
        GroupKind::Gl => GroupDescriptor::General { m: args.m, q: args.q },
        GroupKind::Sl => GroupDescriptor::Special { m: args.m, q: args.q },
        GroupKind::Sp => GroupDescriptor::Symplectic { m: args.m, q: args.q },
        GroupKind::U => GroupDescriptor::Unitary { m: args.m, q: args.q },
        GroupKind::GspMod => GroupDescriptor::SymplecticSimilitudeMod { m: args.m, n: args.q },
    };
    let group = match enumerate_group(&descriptor) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ALL_FAILED;
        }
    };
    println!("group: {descriptor:?}");
    println!("order: {}", group.order());
    println!("classes: {}", group.conjugacy_classes().len());
    if let Some(p) = args.p {
        println!("p-regular classes: {}", group.p_regular_class_count(p));
        println!("p-Sylow order: {}", group.sylow_p_order(p));
    }
    EXIT_OK
}

/// Entry point for the binary; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match &cli.command {
        Command::Run(args) => run_command(args),
        Command::Oracle(args) => oracle_command(args),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(text: &str) -> InputDocument {
        InputDocument::parse(text).unwrap()
    }

    #[test]
    fn parse_errors_name_the_field() {
        let e = InputDocument::parse(r#"{"field":{"kind":"rational"},"m":"two","N":3,"p":5}"#).unwrap_err();
        assert!(e.to_string().contains("`m`"), "{e}");
        let e = InputDocument::parse(r#"{"field":{"kind":"rational"},"m":1,"p":5}"#).unwrap_err();
        assert!(e.to_string().contains("N"), "{e}");
        let e = InputDocument::parse(r#"{"field":{"kind":"cubic"},"m":1,"N":3,"p":5}"#).unwrap_err();
        assert!(e.to_string().contains("field"), "{e}");
        let e = InputDocument::parse(r#"{"field":{"kind":"rational"},"m":1,"N":3}"#).unwrap_err();
        assert!(matches!(e, ConfigError::Invalid(_)));
        let e = InputDocument::parse(r#"{"field":{"kind":"rational"},"m":1,"N":3,"p":5,"p_sweep":{"from":2,"to":9}}"#)
            .unwrap_err();
        assert!(matches!(e, ConfigError::Invalid(_)));
        let e = InputDocument::parse(r#"{"field":{"kind":"rational"},"m":1,"N":3,"p_sweep":{"from":9,"to":2}}"#)
            .unwrap_err();
        assert!(matches!(e, ConfigError::Invalid(_)));
        let e = InputDocument::parse(r#"{"field":{"kind":"rational"},"m":1,"N":3,"p_sweep":{"from":1,"to":2}}"#)
            .unwrap_err();
        assert!(matches!(e, ConfigError::Invalid(_)));
    }

    #[test]
    fn single_prime_record() {
        let config = RunConfig {
            input: doc(r#"{"field":{"kind":"rational"},"quaternion_ramification":[],"m":1,"N":3,"p":5}"#),
            format: OutputFormat::Json,
            verbosity: 0,
            oracle_check: true,
        };
        let (records, status) = run(&config);
        assert_eq!(status, EXIT_OK);
        let f = records[0].report.as_ref().unwrap();
        assert_eq!(f.final_bound, "192");
        assert_eq!(f.C_B, "1/24");
        assert_eq!(f.zeta_F, vec!["-1/12"]);
        assert_eq!(records[0].oracle, Some(OracleOutcome { verified: true, skipped: None }));
    }

    #[test]
    fn sweep_reports_invalid_primes_per_record() {
        let config = RunConfig {
            input: doc(r#"{"field":{"kind":"rational"},"m":1,"N":3,"p_sweep":{"from":2,"to":20}}"#),
            format: OutputFormat::Json,
            verbosity: 0,
            oracle_check: false,
        };
        let (records, status) = run(&config);
        assert_eq!(status, EXIT_OK);
        let ps: Vec<u64> = records.iter().map(|r| r.input.p).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19]);
        let ok: Vec<u64> = records.iter().filter(|r| r.status == Status::Ok).map(|r| r.input.p).collect();
        assert_eq!(ok, vec![2, 5, 7, 11, 13, 17, 19]);
        assert!(records[1].error.as_ref().unwrap().contains("divides"));
    }

    #[test]
    fn all_failed_and_unsupported_degree() {
        let config = RunConfig {
            input: doc(r#"{"field":{"kind":"totally_real","degree":3},"m":1,"N":3,"p":5}"#),
            format: OutputFormat::Csv,
            verbosity: 0,
            oracle_check: false,
        };
        let (records, status) = run(&config);
        assert_eq!(status, EXIT_ALL_FAILED);
        assert!(records[0].error.as_ref().unwrap().contains("Siegel-Klingen"));
    }

    #[test]
    fn rationals_render_with_explicit_denominator() {
        let r = BigRational::new((-6).into(), 4.into());
        assert_eq!(render_rational(&r), "-3/2");
        assert_eq!(render_rational(&BigRational::from_integer(5.into())), "5/1");
    }
}
