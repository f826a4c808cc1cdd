//! `dv5`: analysis, enumeration, classification and hull certification of
//! binary `[n, 5]` codes given by defining vectors.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 budget exhausted or
//! search inconclusive, 3 fatal disagreement with the table fixtures.

mod config;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use config::FileConfig;
use dv5_core::analysis::{d_a, d_l, CodeProfile};
use dv5_core::certify::{certify_no_lcd, search_lcd_witness, CertifyOptions, WitnessLimits};
use dv5_core::defining::{DefiningVector, TypeSignature};
use dv5_core::enumeration::{
    entry_bounds, enumerate_with_budget, Budget, EnumerationError, SearchSpec,
};
use dv5_core::equivalence::{
    classification_csv, classify_by_residuals, ClassifyError, EquivalenceClass,
};
use dv5_core::tables::{reproduce_table, Fixtures, ReproduceError, Reproduction};

pub const FIXTURE_ENV: &str = "DV5_FIXTURE_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "dv5",
    version,
    about = "Defining-vector toolkit for binary [n,5] codes"
)]
struct Cli {
    /// key = value settings file (seed, max_nodes, max_time, fixtures, format, restarts, steps)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// seed for the witness search
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// search node limit per enumeration
    #[arg(long, global = true)]
    max_nodes: Option<u64>,
    /// wall-clock limit per enumeration, in seconds
    #[arg(long, global = true)]
    max_time: Option<f64>,
    /// directory holding tables.csv, table_types.csv and table1.csv
    #[arg(long, global = true)]
    fixtures: Option<PathBuf>,
    /// write the report here instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Markdown,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parameters, hull dimension and weight enumerator of one code
    Analyze {
        /// digit string or comma-separated multiplicities
        vector: String,
        /// dimension, when the entry count alone is not enough
        #[arg(long)]
        k: Option<usize>,
    },
    /// List every defining vector meeting a search spec
    Enumerate(SpecArgs),
    /// Classify the solutions of a search spec up to GL(k,2)
    Classify(SpecArgs),
    /// Decide whether an LCD [n,5,>=d] code can exist
    Certify {
        #[arg(long)]
        n: u64,
        /// defaults to the optimal distance for n
        #[arg(long)]
        d: Option<u64>,
        /// skip the LCD search at distance d - 1
        #[arg(long)]
        no_witness: bool,
        /// also enumerate the strata settled by the reduction argument
        #[arg(long)]
        cross_check: bool,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Recompute a printed table and compare it with the fixtures
    Table {
        /// 1-7, t13 or t17
        #[arg(long)]
        id: String,
        /// single value, comma list or range such as 0..2
        #[arg(long, default_value = "1")]
        s: String,
    },
    /// Search for an LCD [n,5,>=d] code
    Witness {
        #[arg(long)]
        n: u64,
        /// defaults to the largest distance of an LCD code of length n
        #[arg(long)]
        d: Option<u64>,
        #[command(flatten)]
        limits: LimitArgs,
    },
}

#[derive(Debug, Args)]
struct SpecArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    d: u64,
    #[arg(long, default_value_t = 5)]
    k: usize,
    /// largest multiplicity; defaults to the bound implied by n and d
    #[arg(long)]
    max_entry: Option<u32>,
    /// require a zero multiplicity
    #[arg(long)]
    zero_entry: bool,
    /// accept minimum distance above d
    #[arg(long)]
    at_least: bool,
}

#[derive(Debug, Args)]
struct LimitArgs {
    #[arg(long)]
    restarts: Option<u32>,
    #[arg(long)]
    steps: Option<u32>,
}

#[derive(Debug, Error)]
enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Fatal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Budget(_) => 2,
            Failure::Fatal(_) => 3,
        }
    }
}

/// Flags merged over the environment and the settings file.
struct Settings {
    format: Option<Format>,
    seed: u64,
    budget: Budget,
    fixtures: Option<PathBuf>,
    output: Option<PathBuf>,
    restarts: Option<u32>,
    steps: Option<u32>,
}

impl Settings {
    fn resolve(cli: &Cli) -> Result<Self, Failure> {
        let file = match &cli.config {
            Some(path) => FileConfig::load(path).map_err(|e| Failure::Usage(e.to_string()))?,
            None => FileConfig::default(),
        };
        let file_format = file
            .format
            .as_deref()
            .map(|f| {
                Format::from_str(f, true)
                    .map_err(|_| Failure::Usage(format!("unknown format {f:?}")))
            })
            .transpose()?;
        let max_time = match cli.max_time {
            Some(secs) if !secs.is_finite() || secs < 0.0 => {
                return Err(Failure::Usage(format!("invalid --max-time {secs}")))
            }
            Some(secs) => Some(Duration::from_secs_f64(secs)),
            None => file.max_time,
        };
        let env_fixtures = std::env::var_os(FIXTURE_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from);
        Ok(Self {
            format: cli.format.or(file_format),
            seed: cli.seed.or(file.seed).unwrap_or(0),
            budget: Budget {
                max_nodes: cli.max_nodes.or(file.max_nodes),
                max_time,
            },
            fixtures: cli.fixtures.clone().or(env_fixtures).or(file.fixtures),
            output: cli.output.clone(),
            restarts: file.restarts,
            steps: file.steps,
        })
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn limits(&self, args: &LimitArgs) -> WitnessLimits {
        let base = WitnessLimits::default();
        WitnessLimits {
            restarts: args.restarts.or(self.restarts).unwrap_or(base.restarts),
            steps: args.steps.or(self.steps).unwrap_or(base.steps),
        }
    }

    fn fixtures(&self) -> Result<Fixtures, Failure> {
        match &self.fixtures {
            Some(dir) => Fixtures::from_dir(dir).map_err(|e| Failure::Fatal(e.to_string())),
            None => Ok(Fixtures::builtin()),
        }
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.output {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report serializes");
    out.push('\n');
    out
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dv5: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let settings = Settings::resolve(cli)?;
    match &cli.command {
        Command::Analyze { vector, k } => cmd_analyze(&settings, vector, *k),
        Command::Enumerate(spec) => cmd_enumerate(&settings, spec),
        Command::Classify(spec) => cmd_classify(&settings, spec),
        Command::Certify {
            n,
            d,
            no_witness,
            cross_check,
            limits,
        } => cmd_certify(&settings, *n, *d, *no_witness, *cross_check, limits),
        Command::Table { id, s } => cmd_table(&settings, id, s),
        Command::Witness { n, d, limits } => cmd_witness(&settings, *n, *d, limits),
    }
}

#[derive(Serialize)]
struct AnalyzeReport {
    defining_vector: String,
    type_signature: String,
    #[serde(flatten)]
    profile: CodeProfile,
    weight_polynomial: String,
}

fn cmd_analyze(settings: &Settings, text: &str, k: Option<usize>) -> Result<(), Failure> {
    let parsed = match k {
        Some(k) => DefiningVector::parse_with_k(text, k),
        None => DefiningVector::parse(text),
    };
    let l = parsed.map_err(|e| Failure::Usage(format!("cannot parse {text:?}: {e}")))?;
    let profile = CodeProfile::of(&l);
    let report = AnalyzeReport {
        defining_vector: l.to_text(),
        type_signature: TypeSignature::of(&l).to_string(),
        weight_polynomial: profile.weight_enumerator.to_polynomial(),
        profile,
    };
    let p = &report.profile;
    let out = match settings.format_or(Format::Markdown) {
        Format::Json => json(&report),
        Format::Csv => format!(
            "defining_vector,n,k,d,h,is_lcd,is_so,degenerate,weight_enumerator\n{},{},{},{},{},{},{},{},{}\n",
            report.defining_vector,
            p.n,
            p.k,
            p.d,
            p.h,
            p.is_lcd,
            p.is_so,
            p.degenerate,
            p.weight_enumerator.to_compact()
        ),
        Format::Markdown => {
            let mut out = String::from("| field | value |\n|---|---|\n");
            let rows = [
                ("defining vector", report.defining_vector.clone()),
                ("type", report.type_signature.clone()),
                ("parameters", p.parameters()),
                ("n", p.n.to_string()),
                ("k", p.k.to_string()),
                ("d", p.d.to_string()),
                ("h", p.h.to_string()),
                ("LCD", p.is_lcd.to_string()),
                ("self-orthogonal", p.is_so.to_string()),
                ("degenerate", p.degenerate.to_string()),
                ("weight enumerator", report.weight_polynomial.clone()),
            ];
            for (name, value) in rows {
                let _ = writeln!(out, "| {name} | {value} |");
            }
            out
        }
    };
    settings.emit(&out)
}

fn build_spec(args: &SpecArgs) -> Result<SearchSpec, Failure> {
    let max_entry = args
        .max_entry
        .unwrap_or_else(|| entry_bounds(args.n, args.k, args.d));
    let spec = SearchSpec::new(args.n, args.k, args.d, max_entry)
        .with_zero_entry(args.zero_entry)
        .with_exact_distance(!args.at_least);
    spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(spec)
}

fn enumeration_failure(e: EnumerationError) -> Failure {
    match e {
        EnumerationError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
        other => Failure::Usage(other.to_string()),
    }
}

#[derive(Serialize)]
struct EnumerationReport {
    spec: SearchSpec,
    total: u64,
    by_type: Vec<(String, u64)>,
    vectors: Vec<String>,
}

fn cmd_enumerate(settings: &Settings, args: &SpecArgs) -> Result<(), Failure> {
    let spec = build_spec(args)?;
    let set = enumerate_with_budget(&spec, settings.budget).map_err(enumeration_failure)?;
    let report = EnumerationReport {
        spec,
        total: set.total(),
        by_type: set
            .by_type
            .iter()
            .map(|(t, c)| (t.to_string(), *c))
            .collect(),
        vectors: set.iter().map(|l| l.to_text()).collect(),
    };
    let out = match settings.format_or(Format::Markdown) {
        Format::Json => json(&report),
        Format::Csv => {
            let mut out = String::from("defining_vector,type_signature\n");
            for l in set.iter() {
                let _ = writeln!(out, "{},{}", l.to_text(), TypeSignature::of(&l));
            }
            out
        }
        Format::Markdown => {
            let mut out = format!(
                "{}\n\ntotal: {}\n\n| type | count |\n|---|---|\n",
                spec, report.total
            );
            for (t, c) in &report.by_type {
                let _ = writeln!(out, "| {t} | {c} |");
            }
            out
        }
    };
    settings.emit(&out)
}

#[derive(Serialize)]
struct ClassRow {
    representative: String,
    type_signature: String,
    h: usize,
    weight_enumerator: String,
    orbit_size: u64,
    stabilizer_order: u64,
}

impl From<&EquivalenceClass> for ClassRow {
    fn from(c: &EquivalenceClass) -> Self {
        Self {
            representative: c.representative.to_text(),
            type_signature: c.type_signature.to_string(),
            h: c.profile.h,
            weight_enumerator: c.profile.weight_enumerator.to_compact(),
            orbit_size: c.orbit_size,
            stabilizer_order: c.stabilizer_order,
        }
    }
}

#[derive(Serialize)]
struct ClassificationReport {
    spec: SearchSpec,
    class_count: usize,
    labeled_total: u64,
    classes: Vec<ClassRow>,
}

fn cmd_classify(settings: &Settings, args: &SpecArgs) -> Result<(), Failure> {
    let spec = build_spec(args)?;
    let result = classify_by_residuals(&spec, settings.budget).map_err(|e| match e {
        ClassifyError::Enumeration(inner) => enumeration_failure(inner),
        other => Failure::Usage(other.to_string()),
    })?;
    let out = match settings.format_or(Format::Markdown) {
        Format::Json => json(&ClassificationReport {
            spec,
            class_count: result.classes.len(),
            labeled_total: result.labeled_total(),
            classes: result.classes.iter().map(ClassRow::from).collect(),
        }),
        Format::Csv => classification_csv(&result.classes),
        Format::Markdown => {
            let mut out = format!(
                "{}\n\n{} classes, {} labeled solutions\n\n| # | type | representative | h | weight enumerator | orbit |\n|---|---|---|---|---|---|\n",
                spec,
                result.classes.len(),
                result.labeled_total()
            );
            for (i, c) in result.classes.iter().enumerate() {
                let row = ClassRow::from(c);
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} | {} |",
                    i + 1,
                    row.type_signature,
                    row.representative,
                    row.h,
                    row.weight_enumerator,
                    row.orbit_size
                );
            }
            out
        }
    };
    settings.emit(&out)
}

fn cmd_certify(
    settings: &Settings,
    n: u64,
    d: Option<u64>,
    no_witness: bool,
    cross_check: bool,
    limits: &LimitArgs,
) -> Result<(), Failure> {
    let d = match d {
        Some(d) => d,
        None => d_a(n).ok_or_else(|| Failure::Usage(format!("no default distance for n = {n}")))?,
    };
    if d == 0 || d > n {
        return Err(Failure::Usage(format!(
            "distance {d} out of range for n = {n}"
        )));
    }
    let options = CertifyOptions {
        budget: settings.budget,
        witness_seed: (!no_witness).then_some(settings.seed),
        witness_limits: settings.limits(limits),
        cross_check_reductions: cross_check,
    };
    let cert = certify_no_lcd(n, d, &options).map_err(|e| Failure::Usage(e.to_string()))?;
    let out = match settings.format_or(Format::Json) {
        Format::Json => {
            let mut out = cert.to_json();
            out.push('\n');
            out
        }
        Format::Markdown => cert.to_markdown(),
        Format::Csv => {
            let mut out = String::from("stratum,method,min_h,classes,complete\n");
            for st in cert.all_strata() {
                let _ = writeln!(
                    out,
                    "\"{}\",{},{},{},{}",
                    st.description.replace('"', "\"\""),
                    st.method,
                    st.min_h.map_or(String::new(), |h| h.to_string()),
                    st.classes.len(),
                    st.complete
                );
            }
            out
        }
    };
    settings.emit(&out)?;
    if cert.complete {
        Ok(())
    } else {
        Err(Failure::Budget(format!(
            "certificate for [{n},5,{d}] is incomplete: budget exhausted"
        )))
    }
}

/// `1`, `0,2`, `0..2` or `0-2`.
fn parse_s_values(text: &str) -> Result<Vec<u64>, Failure> {
    let bad = || Failure::Usage(format!("invalid s value {text:?}"));
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        let range = part.split_once("..").or_else(|| part.split_once('-'));
        match range {
            Some((a, b)) => {
                let a: u64 = a.trim().parse().map_err(|_| bad())?;
                let b: u64 = b
                    .trim_start_matches('=')
                    .trim()
                    .parse()
                    .map_err(|_| bad())?;
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}

fn cmd_table(settings: &Settings, id: &str, s_text: &str) -> Result<(), Failure> {
    let values = parse_s_values(s_text)?;
    let fixtures = settings.fixtures()?;
    let mut reports = Vec::new();
    for s in values {
        let report = reproduce_table(id, s, &fixtures, settings.budget).map_err(|e| match e {
            ReproduceError::UnknownTable(_) => Failure::Usage(e.to_string()),
            ReproduceError::Fixture(_) => Failure::Fatal(e.to_string()),
            ReproduceError::Classify(ClassifyError::Enumeration(inner)) => {
                enumeration_failure(inner)
            }
            ReproduceError::Classify(_) => Failure::Usage(e.to_string()),
        })?;
        reports.push(report);
    }
    let out = match settings.format_or(Format::Markdown) {
        Format::Json => json(&reports),
        Format::Csv => reports
            .iter()
            .map(Reproduction::to_csv)
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Markdown => reports
            .iter()
            .map(Reproduction::to_markdown)
            .collect::<Vec<_>>()
            .join("\n"),
    };
    settings.emit(&out)?;
    let fatal = reports.iter().filter(|r| r.is_fatal()).count();
    if fatal > 0 {
        return Err(Failure::Fatal(format!(
            "table {id}: {fatal} of {} reproductions disagree with the fixtures",
            reports.len()
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct WitnessReport {
    n: u64,
    d: u64,
    seed: u64,
    found: bool,
    defining_vector: Option<String>,
    profile: Option<CodeProfile>,
}

fn cmd_witness(
    settings: &Settings,
    n: u64,
    d: Option<u64>,
    limits: &LimitArgs,
) -> Result<(), Failure> {
    let d = match d {
        Some(d) => d,
        None => d_l(n).ok_or_else(|| Failure::Usage(format!("no default distance for n = {n}")))?,
    };
    if n < 5 || d == 0 || d > n {
        return Err(Failure::Usage(format!(
            "no [n,5,>=d] code with n = {n}, d = {d}"
        )));
    }
    let found = search_lcd_witness(n, d, settings.seed, settings.limits(limits));
    let report = WitnessReport {
        n,
        d,
        seed: settings.seed,
        found: found.is_some(),
        defining_vector: found.as_ref().map(DefiningVector::to_text),
        profile: found.as_ref().map(CodeProfile::of),
    };
    let out = match settings.format_or(Format::Markdown) {
        Format::Json => json(&report),
        Format::Csv => format!(
            "n,d,seed,found,defining_vector,min_distance,h\n{},{},{},{},{},{},{}\n",
            n,
            d,
            report.seed,
            report.found,
            report.defining_vector.clone().unwrap_or_default(),
            report
                .profile
                .as_ref()
                .map_or(String::new(), |p| p.d.to_string()),
            report
                .profile
                .as_ref()
                .map_or(String::new(), |p| p.h.to_string())
        ),
        Format::Markdown => match (&report.defining_vector, &report.profile) {
            (Some(v), Some(p)) => format!(
                "LCD {} code found (seed {}): {}\n\nweight enumerator: {}\n",
                p.parameters(),
                report.seed,
                v,
                p.weight_enumerator.to_polynomial()
            ),
            _ => format!(
                "no LCD [{n},5,>={d}] code found (seed {}); this is not a proof of nonexistence\n",
                report.seed
            ),
        },
    };
    settings.emit(&out)?;
    if report.found {
        Ok(())
    } else {
        Err(Failure::Budget(format!(
            "no witness found for [{n},5,>={d}]"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn s_values() {
        assert_eq!(parse_s_values("1").unwrap(), vec![1]);
        assert_eq!(parse_s_values("0..2").unwrap(), vec![0, 1, 2]);
        assert_eq!(parse_s_values("0-1,3").unwrap(), vec![0, 1, 3]);
        assert!(parse_s_values("2..1").is_err());
        assert!(parse_s_values("x").is_err());
    }
}
