use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pareto_core::economy::{build_dc_utility_set, second_welfare_prices, Economy};
use pareto_core::io::{
    self, parse_certificate, parse_economy, parse_normals, parse_point, parse_set, vector_to_value, SetDescription,
};
use pareto_core::pareto::{
    audit_bargaining, bargaining_plan, build_welfare, classify, construct_certificate, search_partition_certificate,
    verify_certificate, verify_partition_certificate, PartitionOptions, PartitionSearch, Strategy,
    DEFAULT_EXPONENT_CAP, DEFAULT_PATTERN_CAP,
};
use pareto_core::polyhedron::{enumerate_faces, DEFAULT_FACE_CAP};
use pareto_core::report;
use pareto_core::{Error, IndexSet, Polyhedron, Vector};

#[derive(Parser)]
#[command(
    name = "paretocert",
    version,
    about = "Exact Pareto optimality certificates for polyhedral utility sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Also print a human-readable report on standard error.
    #[arg(long, global = true)]
    report: bool,
}

#[derive(Args)]
struct SetPoint {
    /// Polyhedron as JSON: `{"dim", "ineqs", "eqs"}` or `{"dim", "vertices", "rays"}`.
    #[arg(long)]
    set: PathBuf,
    /// Point as an inline JSON array, or a path to a file holding one.
    #[arg(long)]
    point: String,
}

#[derive(Args)]
struct NormalsSource {
    /// Normals as an inline JSON array of vectors.
    #[arg(long, conflicts_with = "certificate")]
    normals: Option<String>,
    /// Certificate JSON file; only its normals are used.
    #[arg(long)]
    certificate: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Direct,
    Flag,
    Chain,
    Partition,
}

#[derive(Subcommand)]
enum Command {
    /// Pareto optimality and supporting-normal classification of a point.
    Classify {
        #[command(flatten)]
        target: SetPoint,
        #[command(flatten)]
        common: Common,
    },
    /// Construct a certificate for a Pareto optimal point.
    Certify {
        #[command(flatten)]
        target: SetPoint,
        #[arg(long, value_enum, default_value = "flag")]
        strategy: StrategyArg,
        /// For `--strategy chain`: JSON list of active sets against the
        /// canonical inequalities of the downward closure (0-based).
        #[arg(long)]
        chain: Option<String>,
        /// For `--strategy partition`: largest number of steps.
        #[arg(long)]
        bound_t: Option<usize>,
        /// For `--strategy partition`: largest number of pattern steps examined.
        #[arg(long, default_value_t = DEFAULT_PATTERN_CAP)]
        cap: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Replay given normals and accept or reject them.
    Verify {
        #[command(flatten)]
        target: SetPoint,
        #[command(flatten)]
        source: NormalsSource,
        /// Require disjoint supports covering every coordinate instead of a
        /// strictly positive last normal.
        #[arg(long)]
        partition: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Downward closure of a set, or the utility set of an economy.
    Dc {
        #[arg(long, required_unless_present = "economy", conflicts_with = "economy")]
        set: Option<PathBuf>,
        #[arg(long)]
        economy: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// The welfare function of a certificate, evaluated at the set's vertices.
    Welfare {
        #[command(flatten)]
        target: SetPoint,
        #[command(flatten)]
        source: NormalsSource,
        #[command(flatten)]
        common: Common,
    },
    /// The sequential Nash bargaining plan of a certificate, with its audit.
    Bargain {
        #[command(flatten)]
        target: SetPoint,
        #[command(flatten)]
        source: NormalsSource,
        #[arg(long, default_value_t = DEFAULT_EXPONENT_CAP)]
        cap: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Supporting prices for a Pareto optimal endowment.
    Swt {
        #[arg(long)]
        economy: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Faces of a polyhedron.
    Faces {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        max_dim: Option<isize>,
        #[arg(long, default_value_t = DEFAULT_FACE_CAP)]
        cap: usize,
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Domain(Value),
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match e {
            Error::Parse(_) | Error::DimensionMismatch { .. } | Error::IndexOutOfRange { .. } | Error::ZeroNormal => {
                Failure::Input(message)
            }
            Error::Internal(_) => Failure::Internal(message),
            Error::NotMaximal { dominator } => Failure::Domain(json!({
                "error": "not_pareto_optimal",
                "message": message,
                "dominator": tuple_to_value(&dominator),
            })),
            Error::NotMinimal { witness } => Failure::Domain(json!({
                "error": "endowment_not_minimal",
                "message": message,
                "witness": tuple_to_value(&witness),
            })),
            Error::Rejected { step, reason } => Failure::Domain(json!({
                "error": "rejected",
                "verified": false,
                "step": step,
                "reason": reason,
                "message": message,
            })),
            Error::InvalidChain { link, reason } => Failure::Domain(json!({
                "error": "invalid_chain",
                "link": link,
                "reason": reason,
                "message": message,
            })),
            other => Failure::Domain(json!({
                "error": kind(&other),
                "message": message,
            })),
        }
    }
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::NotInSet(_) => "not_in_set",
        Error::Empty => "empty_set",
        Error::Unbounded => "unbounded",
        Error::NoMaximalPoints => "no_maximal_points",
        Error::ResourceCap(_) => "resource_cap",
        Error::Precondition(_) => "precondition",
        Error::NoPositiveNormal(_) => "no_positive_normal",
        _ => "error",
    }
}

/// `"(a,b)"` back to `["a","b"]`.
fn tuple_to_value(s: &str) -> Value {
    let inner = s.trim_start_matches('(').trim_end_matches(')');
    Value::Array(inner.split(',').map(|x| Value::String(x.to_string())).collect())
}

type Outcome = Result<(Value, String), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_set(path: &Path) -> Result<Arc<Polyhedron>, Failure> {
    let p = match parse_set(&read(path)?)? {
        SetDescription::H(h) => Polyhedron::from_hrep(&h)?,
        SetDescription::V(v) => Polyhedron::from_vrep(&v)?,
    };
    Ok(p.into_arc())
}

fn load_point(arg: &str) -> Result<Vector, Failure> {
    let text = if arg.trim_start().starts_with('[') {
        arg.to_string()
    } else {
        read(Path::new(arg))?
    };
    Ok(parse_point(&text)?)
}

fn load_target(t: &SetPoint) -> Result<(Arc<Polyhedron>, Vector), Failure> {
    let p = load_set(&t.set)?;
    let u = load_point(&t.point)?;
    if u.len() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: u.len(),
        }
        .into());
    }
    Ok((p, u))
}

fn load_normals(source: &NormalsSource) -> Result<Option<Vec<Vector>>, Failure> {
    if let Some(text) = &source.normals {
        return Ok(Some(parse_normals(text)?));
    }
    if let Some(path) = &source.certificate {
        return Ok(Some(parse_certificate(&read(path)?)?.normals));
    }
    Ok(None)
}

fn load_economy(path: &Path) -> Result<Economy, Failure> {
    Ok(Economy::from_doc(&parse_economy(&read(path)?)?)?)
}

fn certificate_for(
    p: &Arc<Polyhedron>,
    u: &[pareto_core::Rational],
    source: &NormalsSource,
) -> Result<pareto_core::Certificate, Failure> {
    Ok(match load_normals(source)? {
        Some(normals) => verify_certificate(p, u, &normals)?,
        None => construct_certificate(p, u, &Strategy::Flag)?,
    })
}

fn run(command: &Command) -> Outcome {
    match command {
        Command::Classify { target, .. } => {
            let (p, u) = load_target(target)?;
            let c = classify(&p, &u)?;
            Ok((report::classification_json(&c), report::render_classification(&c)))
        }
        Command::Certify {
            target,
            strategy,
            chain,
            bound_t,
            cap,
            ..
        } => {
            let (p, u) = load_target(target)?;
            let strategy = match strategy {
                StrategyArg::Direct => Strategy::Direct,
                StrategyArg::Flag => Strategy::Flag,
                StrategyArg::Chain => {
                    let text = chain
                        .as_deref()
                        .ok_or_else(|| Failure::Input("--strategy chain needs --chain".into()))?;
                    let sets: Vec<IndexSet> =
                        serde_json::from_str(text).map_err(|e| Failure::Input(format!("chain: {e}")))?;
                    Strategy::GivenChain(sets)
                }
                StrategyArg::Partition => {
                    let options = PartitionOptions {
                        bound_t: bound_t.unwrap_or(p.dim()),
                        cap: *cap,
                    };
                    return match search_partition_certificate(&p, &u, &options)? {
                        PartitionSearch::Found(cert) => {
                            let mut doc = report::certificate_json(&cert);
                            doc["found"] = json!(true);
                            Ok((doc, report::render_certificate(&cert)))
                        }
                        PartitionSearch::Infeasible(r) => Err(Failure::Domain({
                            let mut v = report::infeasibility_json(&r);
                            v["error"] = json!("no_partition_certificate");
                            v
                        })),
                    };
                }
            };
            let cert = construct_certificate(&p, &u, &strategy)?;
            Ok((report::certificate_json(&cert), report::render_certificate(&cert)))
        }
        Command::Verify {
            target,
            source,
            partition,
            ..
        } => {
            let (p, u) = load_target(target)?;
            let normals = load_normals(source)?
                .ok_or_else(|| Failure::Input("verify needs --normals or --certificate".into()))?;
            let cert = if *partition {
                verify_partition_certificate(&p, &u, &normals)?
            } else {
                verify_certificate(&p, &u, &normals)?
            };
            Ok((report::certificate_json(&cert), report::render_certificate(&cert)))
        }
        Command::Dc { set, economy, .. } => {
            let h = match (set, economy) {
                (Some(path), _) => load_set(path)?.downward_closure()?.hrep().clone(),
                (None, Some(path)) => build_dc_utility_set(&load_economy(path)?)?,
                (None, None) => return Err(Failure::Input("dc needs --set or --economy".into())),
            };
            let value = serde_json::to_value(&h).map_err(|e| Failure::Internal(e.to_string()))?;
            Ok((value, report::render_hrep(&h)))
        }
        Command::Welfare { target, source, .. } => {
            let (p, u) = load_target(target)?;
            let cert = certificate_for(&p, &u, source)?;
            let w = build_welfare(&cert, &u)?;
            let mut values = Vec::new();
            for v in &p.vrep().vertices {
                values.push(json!({"point": vector_to_value(v), "value": io::rational_to_value(&w.evaluate(v)?)}));
            }
            let mut doc = serde_json::to_value(&w).map_err(|e| Failure::Internal(e.to_string()))?;
            doc["vertex_values"] = Value::Array(values);
            Ok((doc, report::render_welfare(&w)))
        }
        Command::Bargain {
            target, source, cap, ..
        } => {
            let (p, u) = load_target(target)?;
            let cert = certificate_for(&p, &u, source)?;
            let plan = bargaining_plan(&cert, &u)?;
            let audit = audit_bargaining(&p, &plan, *cap)?;
            let mut doc = report::bargaining_json(&plan);
            doc["verified"] = json!(true);
            doc["products_compared"] = json!(audit.products_compared);
            Ok((doc, report::render_bargaining(&plan)))
        }
        Command::Swt { economy, .. } => {
            let result = second_welfare_prices(&load_economy(economy)?)?;
            let value = serde_json::to_value(&result).map_err(|e| Failure::Internal(e.to_string()))?;
            if !result.verified {
                return Err(Failure::Domain(json!({"error": "not_walrasian", "result": value})));
            }
            Ok((value, report::render_walrasian(&result)))
        }
        Command::Faces { set, max_dim, cap, .. } => {
            let p = load_set(set)?;
            let faces = enumerate_faces(&p, *max_dim, *cap)?;
            let mut text = String::new();
            let list: Vec<Value> = faces
                .iter()
                .map(|f| {
                    let vertices: Vec<Value> = f.vertices().into_iter().map(|v| vector_to_value(v)).collect();
                    text.push_str(&format!("dim {} active {:?}\n", f.dim(), f.active()));
                    json!({"active": f.active(), "dim": f.dim(), "vertices": vertices})
                })
                .collect();
            Ok((json!({"count": list.len(), "faces": list}), text))
        }
    }
}

fn common(command: &Command) -> &Common {
    match command {
        Command::Classify { common, .. }
        | Command::Certify { common, .. }
        | Command::Verify { common, .. }
        | Command::Dc { common, .. }
        | Command::Welfare { common, .. }
        | Command::Bargain { common, .. }
        | Command::Swt { common, .. }
        | Command::Faces { common, .. } => common,
    }
}

fn emit(value: &Value, output: Option<&Path>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    match output {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| format!("{}: {e}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = common(&cli.command);
    match run(&cli.command) {
        Ok((value, text)) => {
            if opts.report {
                eprint!("{text}");
            }
            match emit(&value, opts.output.as_deref()) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Err(Failure::Domain(value)) => {
            if let Some(m) = value.get("message").and_then(Value::as_str) {
                eprintln!("rejected: {m}");
            }
            let _ = emit(&value, opts.output.as_deref());
            ExitCode::from(1)
        }
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(message)) => {
            eprintln!("internal error: {message}");
            ExitCode::from(3)
        }
    }
}
