//! Command-line front end. The binary is a thin wrapper around [`run`].

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::cartan::{CartanError, CartanMatrix, Epsilon};
use crate::coefficients::{self, Family, Source};
use crate::error::Error;
use crate::homotopy::{bg_homotopy_type, homotopy_dimensions, hopf_description, rationally_equivalent};
use crate::json::{to_canonical_string, SCHEMA};
use crate::poincare::{bg_series, SeriesName, SeriesRequest};
use crate::series::TruncatedSeries;
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "kmhomotopy", version, about = "Rational cohomology and homotopy of Kac-Moody groups")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Genericity, symmetrizability and ε of a Cartan matrix.
    Classify(MatrixArgs),
    /// Coefficients of a named Poincaré series.
    Series {
        #[arg(value_parser = parse_series_name)]
        name: SeriesName,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 40)]
        order: usize,
    },
    /// Generator counts from every available source, plus the identity check.
    Coefficients {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 19)]
        max_i: usize,
        #[arg(long, default_value_t = 40)]
        order: usize,
        /// Restrict to one source; all three by default.
        #[arg(long, value_parser = parse_source)]
        source: Option<Source>,
    },
    /// Rational homotopy type of BG(A), homotopy dimensions and the Hopf algebra.
    Homotopy {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 40)]
        max_degree: usize,
    },
    /// Decides whether two Kac-Moody groups are rationally equivalent.
    Compare {
        #[arg(long, conflicts_with = "left_file", required_unless_present = "left_file")]
        left: Option<String>,
        #[arg(long)]
        left_file: Option<PathBuf>,
        #[arg(long, conflicts_with = "right_file", required_unless_present = "right_file")]
        right: Option<String>,
        #[arg(long)]
        right_file: Option<PathBuf>,
        #[arg(long, default_value_t = 40)]
        order: usize,
    },
    /// Runs every identity check.
    VerifyAll {
        #[arg(long, default_value_t = 40)]
        order: usize,
    },
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    /// Inline JSON `{"n": .., "entries": [[..], ..]}`.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    pub matrix: Option<String>,
    #[arg(long)]
    pub file: Option<PathBuf>,
}

/// Either a matrix or an explicit `(n, ε)` pair.
#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long, conflicts_with_all = ["file", "n", "epsilon"])]
    pub matrix: Option<String>,
    #[arg(long, conflicts_with_all = ["n", "epsilon"])]
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=1))]
    pub epsilon: Option<u32>,
}

fn parse_series_name(s: &str) -> Result<SeriesName, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_source(s: &str) -> Result<Source, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Parse(String),
    Domain(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Parse(_) => EXIT_PARSE,
            Failure::Domain(_) => EXIT_DOMAIN,
            Failure::Verification(_) => EXIT_VERIFICATION,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Domain(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Cartan(c) => c.into(),
            Error::IdentityViolated { .. } => Failure::Verification(e.to_string()),
            Error::Series(_) | Error::Domain(_) => Failure::Domain(e.to_string()),
        }
    }
}

impl From<CartanError> for Failure {
    fn from(e: CartanError) -> Self {
        match e {
            CartanError::RankTooSmall { .. }
            | CartanError::EmptyIndexSet
            | CartanError::IndexOutOfRange { .. }
            | CartanError::DuplicateIndex { .. } => Failure::Domain(e.to_string()),
            _ => Failure::Parse(format!("invalid matrix: {e}")),
        }
    }
}

type Outcome = Result<Report, Failure>;

/// What a command produced: text lines, a JSON body, and whether any
/// verification inside it failed.
struct Report {
    text: String,
    json: Map<String, Value>,
    verified: bool,
}

impl Report {
    fn new(command: &str) -> Self {
        let mut json = Map::new();
        json.insert("schema".into(), json!(SCHEMA));
        json.insert("command".into(), json!(command));
        Report {
            text: String::new(),
            json,
            verified: true,
        }
    }

    fn set(&mut self, key: &str, value: Value) {
        self.json.insert(key.into(), value);
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }
}

fn read_matrix(inline: Option<&str>, file: Option<&PathBuf>) -> Result<CartanMatrix, Failure> {
    let text = match (inline, file) {
        (Some(s), _) => s.to_owned(),
        (None, Some(p)) => std::fs::read_to_string(p)
            .map_err(|e| Failure::Parse(format!("cannot read {}: {e}", p.display())))?,
        (None, None) => return Err(Failure::Parse("no matrix given".into())),
    };
    Ok(CartanMatrix::from_json_str(&text)?)
}

/// Resolved `(n, ε)` and the matrix it came from, if any.
struct Resolved {
    n: usize,
    epsilon: Option<Epsilon>,
    matrix: Option<CartanMatrix>,
}

impl Resolved {
    fn epsilon(&self) -> Result<Epsilon, Failure> {
        self.epsilon.ok_or_else(|| match &self.matrix {
            Some(m) if !m.is_generic() => Failure::Domain(format!("matrix {m} is not generic")),
            Some(m) => Failure::Domain(format!("epsilon is undefined for rank {}", m.rank())),
            None => Failure::Parse("--epsilon is required with --n".into()),
        })
    }

    fn annotate(&self, r: &mut Report) {
        r.set("n", json!(self.n));
        r.set(
            "epsilon",
            self.epsilon.map_or(Value::Null, |e| json!(e.value())),
        );
        if let Some(m) = &self.matrix {
            r.set("matrix", m.to_json());
        }
    }

    fn header(&self) -> String {
        let eps = self.epsilon.map_or("undefined".to_string(), |e| e.to_string());
        match &self.matrix {
            Some(m) => format!("# A = {m}: n = {}, epsilon = {eps}", self.n),
            None => format!("# n = {}, epsilon = {eps}", self.n),
        }
    }
}

fn resolve(input: &InputArgs) -> Result<Resolved, Failure> {
    if input.matrix.is_some() || input.file.is_some() {
        let m = read_matrix(input.matrix.as_deref(), input.file.as_ref())?;
        return Ok(Resolved {
            n: m.rank(),
            epsilon: m.epsilon(),
            matrix: Some(m),
        });
    }
    let n = input
        .n
        .ok_or_else(|| Failure::Parse("give --matrix, --file or --n".into()))?;
    Ok(Resolved {
        n,
        epsilon: input.epsilon.map(|v| Epsilon::from_value(v).expect("range-checked")),
        matrix: None,
    })
}

fn series_rows(s: &TruncatedSeries) -> Vec<String> {
    s.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| format!("{k:>4}  {c}"))
        .collect()
}

fn cmd_classify(args: &MatrixArgs) -> Outcome {
    let m = read_matrix(args.matrix.as_deref(), args.file.as_ref())?;
    let report = m.classify();
    let mut r = Report::new("classify");
    r.set("matrix", m.to_json());
    r.set("classification", report.to_json());
    r.line(format!("# A = {m}"));
    r.line(report.to_string());
    Ok(r)
}

fn cmd_series(name: SeriesName, input: &InputArgs, order: usize) -> Outcome {
    let res = resolve(input)?;
    let eps = if name.needs_epsilon() {
        Some(res.epsilon()?)
    } else {
        res.epsilon
    };
    let s = name.compute(res.n, eps, order)?;
    let mut r = Report::new("series");
    res.annotate(&mut r);
    r.set("name", json!(name.as_str()));
    r.set("order", json!(order));
    r.set("coefficients", s.to_json());
    r.line(res.header());
    r.line(format!("# {name} = {s}"));
    r.line(format!("{:>4}  coefficient", "deg"));
    for row in series_rows(&s) {
        r.line(row);
    }
    Ok(r)
}

fn cmd_coefficients(input: &InputArgs, max_i: usize, order: usize, only: Option<Source>) -> Outcome {
    let res = resolve(input)?;
    let eps = res.epsilon()?;
    SeriesRequest::new(res.n, eps, order)?;
    let (counts, bg) = match eps {
        Epsilon::Zero => (Family::A, Family::Alpha),
        Epsilon::One => (Family::B, Family::Beta),
    };
    let sources: Vec<Source> = match only {
        Some(s) => vec![s],
        None => Source::ALL.to_vec(),
    };
    let mut r = Report::new("coefficients");
    res.annotate(&mut r);
    r.set("max_i", json!(max_i));
    r.set("order", json!(order));
    r.line(res.header());
    let mut tables = Vec::new();
    for source in sources {
        let family = if source == Source::BgExtraction { bg } else { counts };
        let t = coefficients::table(family, source, res.n, max_i, order)?;
        r.line(t.to_string());
        tables.push(t.to_json());
    }
    r.set("tables", Value::Array(tables));
    let check = coefficients::verify_identity(res.n, eps, max_i, order)?;
    r.line(format!("# identity: {check}"));
    r.set("identity", json!({"verified": check.is_verified(), "detail": check.to_string()}));
    r.verified = check.is_verified();
    Ok(r)
}

fn cmd_homotopy(input: &InputArgs, max_degree: usize) -> Outcome {
    let res = resolve(input)?;
    let eps = res.epsilon()?;
    let t = bg_homotopy_type(res.n, eps, max_degree)?;
    let dims = homotopy_dimensions(res.n, eps, max_degree)?;
    let hopf = hopf_description(res.n, eps, max_degree)?;
    let mut r = Report::new("homotopy");
    res.annotate(&mut r);
    r.set("max_degree", json!(max_degree));
    r.set("homotopy_type", t.to_json());
    r.set("homotopy_dimensions", dims.to_json());
    r.set("hopf_algebra", hopf.to_json());
    r.line(res.header());
    r.line(format!("BG(A) ~_Q {t}"));
    r.line(format!("H_*(Omega G(A); Q) = {hopf}"));
    r.line(dims.to_string());
    Ok(r)
}

fn cmd_compare(
    left: (Option<&str>, Option<&PathBuf>),
    right: (Option<&str>, Option<&PathBuf>),
    order: usize,
) -> Outcome {
    let a = read_matrix(left.0, left.1)?;
    let b = read_matrix(right.0, right.1)?;
    let equivalent = rationally_equivalent(&a, &b)?;
    let (ea, eb) = (a.epsilon().expect("checked"), b.epsilon().expect("checked"));
    let sa = bg_series(a.rank(), ea, order)?;
    let sb = bg_series(b.rank(), eb, order)?;
    let first_difference = sa.first_difference(&sb);
    let mut r = Report::new("compare");
    let side = |m: &CartanMatrix, e: Epsilon| json!({"matrix": m.to_json(), "n": m.rank(), "epsilon": e.value()});
    r.set("left", side(&a, ea));
    r.set("right", side(&b, eb));
    r.set("equivalent", json!(equivalent));
    r.set("order", json!(order));
    r.set("first_difference", first_difference.map_or(Value::Null, |k| json!(k)));
    r.line(format!("left:  {a} (n = {}, epsilon = {ea})", a.rank()));
    r.line(format!("right: {b} (n = {}, epsilon = {eb})", b.rank()));
    r.line(format!(
        "rationally equivalent: {}",
        if equivalent { "yes" } else { "no" }
    ));
    match first_difference {
        Some(k) => r.line(format!("bg series first differ at degree {k}")),
        None => r.line(format!("bg series agree to order {order}")),
    }
    if equivalent == first_difference.is_some() {
        r.verified = false;
        r.line("# classifier and bg series disagree");
    }
    Ok(r)
}

fn cmd_verify_all(order: usize) -> Outcome {
    let results = verify::run_all(order);
    let mut r = Report::new("verify-all");
    r.set("order", json!(order));
    for c in &results {
        r.line(c.to_string());
    }
    r.verified = results.iter().all(|c| c.passed);
    r.set("checks", Value::Array(results.iter().map(|c| c.to_json()).collect()));
    r.set("passed", json!(r.verified));
    Ok(r)
}

fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Classify(m) => cmd_classify(m),
        Command::Series { name, input, order } => cmd_series(*name, input, *order),
        Command::Coefficients {
            input,
            max_i,
            order,
            source,
        } => cmd_coefficients(input, *max_i, *order, *source),
        Command::Homotopy { input, max_degree } => cmd_homotopy(input, *max_degree),
        Command::Compare {
            left,
            left_file,
            right,
            right_file,
            order,
        } => cmd_compare(
            (left.as_deref(), left_file.as_ref()),
            (right.as_deref(), right_file.as_ref()),
            *order,
        ),
        Command::VerifyAll { order } => cmd_verify_all(*order),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return if code == EXIT_OK { EXIT_OK } else { EXIT_PARSE };
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            let printed = match cli.format {
                Format::Json => writeln!(out, "{}", to_canonical_string(&Value::Object(report.json))),
                Format::Text => write!(out, "{}", report.text),
            };
            if printed.is_err() {
                return EXIT_DOMAIN;
            }
            if report.verified {
                EXIT_OK
            } else {
                EXIT_VERIFICATION
            }
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["kmhomotopy"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn classify_text() {
        let (code, out, _) = run_capture(&["classify", "--matrix", r#"{"n":2,"entries":[[2,-1],[-4,2]]}"#]);
        assert_eq!(code, 0);
        assert!(out.contains("epsilon:        1"), "{out}");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_capture(&["classify", "--matrix", "{"]).0, EXIT_PARSE);
        assert_eq!(run_capture(&["classify", "--matrix", r#"{"n":1,"entries":[[3]]}"#]).0, EXIT_PARSE);
        assert_eq!(run_capture(&["nope"]).0, EXIT_PARSE);
        assert_eq!(run_capture(&["series", "bg", "--n", "2", "--epsilon", "0"]).0, EXIT_DOMAIN);
        let finite = r#"{"n":2,"entries":[[2,-1],[-1,2]]}"#;
        assert_eq!(run_capture(&["series", "bg", "--matrix", finite]).0, EXIT_DOMAIN);
        assert_eq!(run_capture(&["series", "bg", "--n", "3"]).0, EXIT_PARSE);
        assert_eq!(
            run_capture(&["series", "bg", "--n", "3", "--epsilon", "0", "--matrix", finite]).0,
            EXIT_PARSE
        );
    }

    #[test]
    fn json_has_schema() {
        let (code, out, _) = run_capture(&["--format", "json", "series", "flag", "--n", "3", "--order", "6"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["coefficients"], json!(["1", "0", "3", "0", "6", "0", "12"]));
    }

    #[test]
    fn compare_reports_difference() {
        let a = r#"{"n":3,"entries":[[2,-2,-2],[-2,2,-2],[-2,-2,2]]}"#;
        let b = r#"{"n":2,"entries":[[2,-1],[-4,2]]}"#;
        let (code, out, _) = run_capture(&["compare", "--left", a, "--right", b]);
        assert_eq!(code, 0);
        assert!(out.contains("rationally equivalent: no"));
        assert!(out.contains("degree 5"), "{out}");
    }
}
