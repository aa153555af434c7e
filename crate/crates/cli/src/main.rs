//! Command-line front end.
//!
//! Exit codes: 0 = pass, 1 = predicate or relation fails, 2 = parse error,
//! 3 = shape/model error, 4 = usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use amou::element::SelfAdjoint;
use amou::isometry::{self, ElementClass};
use amou::linalg::TolerancePolicy;
use amou::{compare, matrix};
use clap::{Args, Parser, Subcommand};

use amou_cli::document::{AbsDocument, ElementDocument, WitnessDocument};
use amou_cli::suites::{self, SuiteConfig, SUITES};

#[derive(Parser)]
#[command(
    name = "amou",
    about = "Operator-order toolkit: absolute values, projections, partial isometries, comparison suites",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute |v| and |v^*| of an element document.
    Abs {
        /// Input element document (JSON).
        input: PathBuf,
        #[command(flatten)]
        tol: TolArgs,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify an element and test a predicate.
    Check {
        /// Predicate: normal | unitary | symmetry | order-projection |
        /// partial-unitary | partial-symmetry | partial-isometry | isometry |
        /// co-isometry | orthogonal (needs a second document).
        predicate: String,
        /// Input element document (JSON).
        input: PathBuf,
        /// Second document for binary predicates.
        second: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Decide an equivalence relation between two projection documents and
    /// write the witness.
    Equiv {
        /// Projection document p.
        p: PathBuf,
        /// Projection document q.
        q: PathBuf,
        /// Relation: mvn | sub | unitary.
        #[arg(long, default_value = "mvn")]
        relation: String,
        #[command(flatten)]
        tol: TolArgs,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named verification suite.
    Suite {
        /// Suite id (see `coverage`).
        id: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
        /// Amplification levels, comma-separated.
        #[arg(long, default_value = "1,2,3")]
        dims: String,
        /// Block dimension lists, semicolon-separated groups of
        /// comma-separated sizes, e.g. "2;3;1,2".
        #[arg(long, default_value = "2;3;1,2")]
        blocks: String,
        #[command(flatten)]
        tol: TolArgs,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the JSON report to stdout instead of the human summary.
        #[arg(long)]
        json: bool,
        /// Run cases sequentially (the report must not change).
        #[arg(long)]
        serial: bool,
    },
    /// Print the suite id -> verified statement mapping.
    Coverage,
}

#[derive(Args)]
struct TolArgs {
    #[arg(long = "eps-eq", default_value_t = 1e-9)]
    eps_eq: f64,
    #[arg(long = "eps-psd", default_value_t = 1e-8)]
    eps_psd: f64,
}

impl TolArgs {
    fn policy(&self) -> TolerancePolicy {
        TolerancePolicy {
            eps_eq: self.eps_eq,
            eps_psd: self.eps_psd,
            ..TolerancePolicy::default()
        }
    }
}

const EXIT_FAIL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_SHAPE: u8 = 3;
const EXIT_USAGE: u8 = 4;

struct CliFailure {
    code: u8,
    message: String,
}

impl CliFailure {
    fn parse(msg: impl Into<String>) -> CliFailure {
        CliFailure {
            code: EXIT_PARSE,
            message: msg.into(),
        }
    }

    fn shape(msg: impl Into<String>) -> CliFailure {
        CliFailure {
            code: EXIT_SHAPE,
            message: msg.into(),
        }
    }

    fn usage(msg: impl Into<String>) -> CliFailure {
        CliFailure {
            code: EXIT_USAGE,
            message: msg.into(),
        }
    }
}

fn read_document(path: &Path) -> Result<ElementDocument, CliFailure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliFailure::parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliFailure::parse(format!("cannot parse {}: {e}", path.display())))
}

fn load_element(path: &Path, tol: TolerancePolicy) -> Result<amou::Element, CliFailure> {
    read_document(path)?
        .to_element(tol)
        .map_err(|e| CliFailure::shape(format!("{}: {e}", path.display())))
}

fn load_projection(path: &Path, tol: TolerancePolicy) -> Result<isometry::Projection, CliFailure> {
    let e = load_element(path, tol)?;
    let sa =
        SelfAdjoint::new(e).map_err(|e| CliFailure::shape(format!("{}: {e}", path.display())))?;
    isometry::is_order_projection(&sa)
        .map_err(|e| CliFailure::shape(format!("{}: not a projection: {e}", path.display())))
}

fn write_output(out: &Option<PathBuf>, json: &str) -> Result<(), CliFailure> {
    match out {
        Some(path) => std::fs::write(path, json)
            .map_err(|e| CliFailure::shape(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn run_abs(input: &Path, tol: TolerancePolicy, out: &Option<PathBuf>) -> Result<u8, CliFailure> {
    let v = load_element(input, tol)?;
    let doc = AbsDocument {
        abs: ElementDocument::from_element(
            matrix::abs_rect(&v)
                .map_err(|e| CliFailure::shape(e.to_string()))?
                .element(),
        ),
        abs_star: ElementDocument::from_element(
            matrix::abs_rect_star(&v)
                .map_err(|e| CliFailure::shape(e.to_string()))?
                .element(),
        ),
    };
    let json = serde_json::to_string_pretty(&doc).expect("document serializes");
    write_output(out, &json)?;
    Ok(0)
}

fn run_check(
    predicate: &str,
    input: &Path,
    second: &Option<PathBuf>,
    tol: TolerancePolicy,
) -> Result<u8, CliFailure> {
    if predicate == "orthogonal" {
        let second = second
            .as_ref()
            .ok_or_else(|| CliFailure::usage("orthogonal needs two documents"))?;
        let u = load_element(input, tol)?;
        let v = load_element(second, tol)?;
        let holds = matrix::ortho_rect(&u, &v).map_err(|e| CliFailure::shape(e.to_string()))?;
        println!("orthogonal: {holds}");
        return Ok(if holds { 0 } else { EXIT_FAIL });
    }

    let wanted = ElementClass::from_label(predicate)
        .ok_or_else(|| CliFailure::usage(format!("unknown predicate: {predicate}")))?;
    let v = load_element(input, tol)?;
    let classes = isometry::classify(&v).map_err(|e| CliFailure::shape(e.to_string()))?;
    for class in &classes {
        match class {
            ElementClass::OrderProjection => {
                let residual = SelfAdjoint::new(v.clone())
                    .ok()
                    .and_then(|sa| isometry::is_order_projection(&sa).ok())
                    .map(|p| p.residual())
                    .unwrap_or(f64::NAN);
                println!("{}, residual {residual:.3e}", class.label());
            }
            ElementClass::PartialIsometry => {
                let residual = isometry::certify_partial_isometry(&v)
                    .map(|pi| pi.residual())
                    .unwrap_or(f64::NAN);
                println!("{}, residual {residual:.3e}", class.label());
            }
            _ => println!("{}", class.label()),
        }
    }
    if classes.is_empty() {
        println!("no classes apply");
    }
    Ok(if classes.contains(&wanted) {
        0
    } else {
        EXIT_FAIL
    })
}

fn run_equiv(
    p_path: &Path,
    q_path: &Path,
    relation: &str,
    tol: TolerancePolicy,
    out: &Option<PathBuf>,
) -> Result<u8, CliFailure> {
    let p = load_projection(p_path, tol)?;
    let q = load_projection(q_path, tol)?;
    let doc = match relation {
        "mvn" => match compare::equivalent(&p, &q) {
            Ok(w) => WitnessDocument {
                relation: relation.to_string(),
                holds: true,
                witness: Some(ElementDocument::from_element(w.witness().element())),
                dominated: None,
                complement: None,
                unitary: None,
                detail: None,
            },
            Err(amou::Error::NotEquivalent { p_ranks, q_ranks }) => WitnessDocument {
                relation: relation.to_string(),
                holds: false,
                witness: None,
                dominated: None,
                complement: None,
                unitary: None,
                detail: Some(format!("block ranks {p_ranks:?} vs {q_ranks:?}")),
            },
            Err(e) => return Err(CliFailure::shape(e.to_string())),
        },
        "sub" => match compare::subequivalent(&p, &q) {
            Ok(s) => WitnessDocument {
                relation: relation.to_string(),
                holds: true,
                witness: Some(ElementDocument::from_element(s.inner.witness().element())),
                dominated: Some(ElementDocument::from_element(s.r.element().element())),
                complement: Some(ElementDocument::from_element(
                    s.complement.element().element(),
                )),
                unitary: None,
                detail: None,
            },
            Err(amou::Error::NotSubEquivalent { p_ranks, q_ranks }) => WitnessDocument {
                relation: relation.to_string(),
                holds: false,
                witness: None,
                dominated: None,
                complement: None,
                unitary: None,
                detail: Some(format!("block ranks {p_ranks:?} vs {q_ranks:?}")),
            },
            Err(e) => return Err(CliFailure::shape(e.to_string())),
        },
        "unitary" => match compare::unitarily_equivalent(&p, &q) {
            Ok(u) => WitnessDocument {
                relation: relation.to_string(),
                holds: true,
                witness: Some(ElementDocument::from_element(
                    u.component.witness().element(),
                )),
                dominated: None,
                complement: None,
                unitary: Some(ElementDocument::from_element(&u.unitary)),
                detail: None,
            },
            Err(amou::Error::NotUnitarilyEquivalent) => WitnessDocument {
                relation: relation.to_string(),
                holds: false,
                witness: None,
                dominated: None,
                complement: None,
                unitary: None,
                detail: Some("rank conditions fail".to_string()),
            },
            Err(e) => return Err(CliFailure::shape(e.to_string())),
        },
        other => return Err(CliFailure::usage(format!("unknown relation: {other}"))),
    };
    let holds = doc.holds;
    let json = serde_json::to_string_pretty(&doc).expect("document serializes");
    write_output(out, &json)?;
    Ok(if holds { 0 } else { EXIT_FAIL })
}

fn parse_dims(s: &str) -> Result<Vec<usize>, CliFailure> {
    let dims: Result<Vec<usize>, _> = s.split(',').map(|t| t.trim().parse()).collect();
    let dims = dims.map_err(|_| CliFailure::usage(format!("bad dims: {s}")))?;
    if dims.is_empty() || dims.contains(&0) {
        return Err(CliFailure::usage("dims must be positive"));
    }
    Ok(dims)
}

fn parse_blocks(s: &str) -> Result<Vec<Vec<usize>>, CliFailure> {
    let mut out = Vec::new();
    for group in s.split(';') {
        let dims: Result<Vec<usize>, _> = group.split(',').map(|t| t.trim().parse()).collect();
        let dims = dims.map_err(|_| CliFailure::usage(format!("bad blocks: {s}")))?;
        if dims.is_empty() || dims.contains(&0) {
            return Err(CliFailure::usage("block dims must be positive"));
        }
        out.push(dims);
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn run_suite_cmd(
    id: &str,
    seed: u64,
    cases: usize,
    dims: &str,
    blocks: &str,
    tol: &TolArgs,
    out: &Option<PathBuf>,
    json: bool,
    serial: bool,
) -> Result<u8, CliFailure> {
    let cfg = SuiteConfig {
        suite: id.to_string(),
        seed,
        cases,
        dims: parse_dims(dims)?,
        blocks: parse_blocks(blocks)?,
        eps_eq: tol.eps_eq,
        eps_psd: tol.eps_psd,
        serial,
    };
    let report = suites::run_suite(&cfg).map_err(CliFailure::usage)?;
    if let Some(path) = out {
        std::fs::write(path, serde_json::to_string_pretty(&report).unwrap())
            .map_err(|e| CliFailure::shape(format!("cannot write {}: {e}", path.display())))?;
    }
    if json {
        println!("{}", serde_json::to_string(&report).unwrap());
    } else {
        println!("{}", report.human_summary());
    }
    Ok(if report.passed() { 0 } else { EXIT_FAIL })
}

fn dispatch(cli: Cli) -> Result<u8, CliFailure> {
    match cli.command {
        Command::Abs { input, tol, out } => run_abs(&input, tol.policy(), &out),
        Command::Check {
            predicate,
            input,
            second,
            tol,
        } => run_check(&predicate, &input, &second, tol.policy()),
        Command::Equiv {
            p,
            q,
            relation,
            tol,
            out,
        } => run_equiv(&p, &q, &relation, tol.policy(), &out),
        Command::Suite {
            id,
            seed,
            cases,
            dims,
            blocks,
            tol,
            out,
            json,
            serial,
        } => run_suite_cmd(&id, seed, cases, &dims, &blocks, &tol, &out, json, serial),
        Command::Coverage => {
            for (id, description) in SUITES {
                println!("{id}\t{description}");
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
