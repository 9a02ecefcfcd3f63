//! Command-line front end. Every command prints one JSON report.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::classify::{anticode_report, classify};
use crate::code::ConvolutionalCode;
use crate::codefile::{load_code, CodeFile};
use crate::error::{Error, Result};
use crate::genweights::{code_weight, generalized_hamming_weight, generalized_weight, weight_hierarchy, SearchBudget, WeightResult};
use crate::metrics::{column_distances, free_distance};
use crate::oracle::{oracle_block_ghw, oracle_code_weight, oracle_dfree, oracle_generalized_weight, oracle_ghw, OracleConfig};
use crate::polymat::PolyVector;

#[derive(Debug, Parser)]
#[command(name = "convw", version, about = "Weights, distances and anticode classification of convolutional codes")]
pub struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Worker threads for the searches.
    #[arg(long, global = true, env = "CONVW_THREADS")]
    pub threads: Option<usize>,
    /// Exit with status 1 when a result is only an upper bound or undecided.
    #[arg(long, global = true)]
    pub require_exact: bool,
    /// Add the wall time to the report.
    #[arg(long, global = true)]
    pub timing: bool,
    /// Degree cap on searched codewords.
    #[arg(long, global = true)]
    pub max_degree: Option<usize>,
    /// Abort searches after this many nodes.
    #[arg(long, global = true)]
    pub node_cap: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parameters, row degrees and catastrophicity.
    Info { file: PathBuf },
    /// Free distance with a minimum-weight codeword.
    Dfree { file: PathBuf },
    /// Column distances d_0..d_J.
    Coldist {
        file: PathBuf,
        #[arg(long)]
        max_j: Option<usize>,
    },
    /// Generalized weights d_r.
    Weights {
        file: PathBuf,
        #[arg(long, conflicts_with = "all")]
        r: Option<usize>,
        #[arg(long)]
        all: bool,
    },
    /// Generalized Hamming weights d'_r.
    Ghw {
        file: PathBuf,
        #[arg(long, conflicts_with = "all")]
        r: Option<usize>,
        #[arg(long)]
        all: bool,
    },
    /// Weight of the code.
    Codeweight { file: PathBuf },
    /// Dual code.
    Dual {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reverse code.
    Reverse {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// MDS, MDP and sMDS status with the implied weight bounds.
    Classify { file: PathBuf },
    /// Optimal-anticode classification.
    Anticode { file: PathBuf },
    /// Membership of a word given as JSON coefficient lists, e.g. [[1,1],[0,1]].
    Member {
        file: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Frozen brute-force reference values.
    #[command(hide = true)]
    Oracle {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: OracleKind,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, default_value_t = 50_000_000)]
        cap: u128,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Dfree,
    Weight,
    Ghw,
    Codeweight,
    BlockGhw,
}

struct Output {
    report: Value,
    pretty: String,
}

fn params(code: &ConvolutionalCode) -> Value {
    json!({
        "q": code.field().order(),
        "n": code.n(),
        "k": code.k(),
        "delta": code.delta(),
        "row_degrees": code.row_degrees(),
    })
}

fn triple(code: &ConvolutionalCode) -> String {
    format!("({},{},{})", code.n(), code.k(), code.delta())
}

fn budget_for(cli: &Cli, code: &ConvolutionalCode) -> SearchBudget {
    let mut b = cli.max_degree.map_or_else(|| SearchBudget::default_for(code), SearchBudget::new);
    if let Some(cap) = cli.node_cap {
        b = b.with_node_cap(cap);
    }
    b
}

fn weight_json(r: usize, w: &WeightResult) -> Value {
    let mut v = serde_json::to_value(w).expect("weight results serialize");
    v.as_object_mut().unwrap().insert("r".into(), json!(r));
    v
}

/// `key: value` lines for every leaf of a JSON value.
fn flatten_lines(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten_lines(&p, x, out);
            }
        }
        Value::Array(a) if a.iter().all(Value::is_object) && !a.is_empty() => {
            for (i, x) in a.iter().enumerate() {
                flatten_lines(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => out.push(format!("{prefix}: {v}")),
    }
}

fn generic_pretty(code: &ConvolutionalCode, result: &Value) -> String {
    let mut lines = vec![format!("{} code over F_{}", triple(code), code.field().order())];
    flatten_lines("", result, &mut lines);
    lines.join("\n")
}

fn has_inexact(v: &Value) -> bool {
    match v {
        Value::Object(m) => m.get("exact") == Some(&Value::Bool(false)) || m.values().any(has_inexact),
        Value::Array(a) => a.iter().any(has_inexact),
        Value::String(s) => s == "undecided",
        _ => false,
    }
}

fn write_code(path: &Path, code: &ConvolutionalCode) -> Result<()> {
    std::fs::write(path, CodeFile::of(code).to_json() + "\n").map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn ranks(code: &ConvolutionalCode, r: Option<usize>, all: bool) -> Result<Vec<usize>> {
    match (r, all) {
        (_, true) => Ok((1..=code.k()).collect()),
        (Some(r), false) => Ok(vec![r]),
        (None, false) => Err(Error::Parse("one of --r or --all is required".into())),
    }
}

fn execute(cli: &Cli) -> Result<Output> {
    let (name, file) = match &cli.command {
        Command::Info { file } => ("info", file),
        Command::Dfree { file } => ("dfree", file),
        Command::Coldist { file, .. } => ("coldist", file),
        Command::Weights { file, .. } => ("weights", file),
        Command::Ghw { file, .. } => ("ghw", file),
        Command::Codeweight { file } => ("codeweight", file),
        Command::Dual { file, .. } => ("dual", file),
        Command::Reverse { file, .. } => ("reverse", file),
        Command::Classify { file } => ("classify", file),
        Command::Anticode { file } => ("anticode", file),
        Command::Member { file, .. } => ("member", file),
        Command::Oracle { file, .. } => ("oracle", file),
    };
    let code = load_code(file)?;
    let mut report = Map::new();
    report.insert("command".into(), json!(name));
    report.insert("code".into(), params(&code));
    let mut pretty = None;
    let result = match &cli.command {
        Command::Info { .. } => {
            let nc = code.is_noncatastrophic();
            let dim = code.czero().dim();
            pretty = Some(format!(
                "{}, noncatastrophic: {nc}\nrow degrees: {:?}\nC[0] dimension: {dim}",
                triple(&code),
                code.row_degrees()
            ));
            json!({ "noncatastrophic": nc, "czero_dimension": dim })
        }
        Command::Dfree { .. } => {
            let fd = free_distance(&code);
            json!({
                "value": fd.value,
                "exact": true,
                "certificate": "FreeDistance",
                "witness": fd.codeword.to_coeff_lists(),
                "input": fd.input.to_coeff_lists(),
            })
        }
        Command::Coldist { max_j, .. } => {
            let j = max_j.unwrap_or_else(|| classify(&code).l.unwrap_or(code.delta1()));
            let values = column_distances(&code, j)?;
            json!({ "max_j": j, "values": values, "exact": true })
        }
        Command::Weights { r, all, .. } => {
            let budget = budget_for(cli, &code);
            report.insert("budget".into(), serde_json::to_value(budget).unwrap());
            let rs = ranks(&code, *r, *all)?;
            let ws = if *all { weight_hierarchy(&code, &budget)? } else { vec![generalized_weight(&code, rs[0], &budget)?] };
            json!({ "weights": rs.iter().zip(&ws).map(|(&r, w)| weight_json(r, w)).collect::<Vec<_>>() })
        }
        Command::Ghw { r, all, .. } => {
            let budget = budget_for(cli, &code);
            report.insert("budget".into(), serde_json::to_value(budget).unwrap());
            let mut out = Vec::new();
            for r in ranks(&code, *r, *all)? {
                out.push(weight_json(r, &generalized_hamming_weight(&code, r, &budget)?));
            }
            json!({ "weights": out })
        }
        Command::Codeweight { .. } => {
            let budget = budget_for(cli, &code);
            report.insert("budget".into(), serde_json::to_value(budget).unwrap());
            serde_json::to_value(code_weight(&code, &budget)?).unwrap()
        }
        Command::Dual { out, .. } | Command::Reverse { out, .. } => {
            let image = if name == "dual" { code.dual()? } else { code.reverse_code()? };
            if let Some(path) = out {
                write_code(path, &image)?;
            }
            json!({ "code": CodeFile::of(&image), "parameters": params(&image), "noncatastrophic": image.is_noncatastrophic() })
        }
        Command::Classify { .. } => serde_json::to_value(classify(&code)).unwrap(),
        Command::Anticode { .. } => {
            let budget = budget_for(cli, &code);
            report.insert("budget".into(), serde_json::to_value(budget).unwrap());
            let mut rep = anticode_report(&code, &budget)?;
            for p in rep.monomial_positions.iter_mut() {
                *p += 1;
            }
            if let Some(w) = rep.elementary_witness.as_mut() {
                for p in w.positions.iter_mut() {
                    *p += 1;
                }
            }
            serde_json::to_value(rep).unwrap()
        }
        Command::Member { word, .. } => {
            let lists: Vec<Vec<u64>> = serde_json::from_str(word).map_err(|e| Error::Parse(format!("--word: {e}")))?;
            let w = PolyVector::from_coeffs(code.field(), &lists);
            let coords = code.coordinates(&w)?;
            json!({ "member": coords.is_some(), "coordinates": coords.map(|u| u.to_coeff_lists()) })
        }
        Command::Oracle { kind, r, cap, .. } => {
            let d = cli.max_degree.unwrap_or_else(|| code.delta1() + 1);
            let cfg = OracleConfig { max_degree: d, cap: *cap };
            report.insert("budget".into(), json!({ "max_degree": d, "cap": cap.to_string() }));
            let value = match kind {
                OracleKind::Dfree => Some(oracle_dfree(&code, &cfg)?),
                OracleKind::Weight => oracle_generalized_weight(&code, *r, &cfg)?,
                OracleKind::Ghw => oracle_ghw(&code, *r, &cfg)?,
                OracleKind::Codeweight => oracle_code_weight(&code, &cfg)?,
                OracleKind::BlockGhw => oracle_block_ghw(&code.czero(), *r, *cap)?,
            };
            json!({ "kind": format!("{kind:?}").to_lowercase(), "r": r, "value": value })
        }
    };
    let pretty = pretty.unwrap_or_else(|| generic_pretty(&code, &result));
    report.insert("result".into(), result);
    Ok(Output { report: Value::Object(report), pretty })
}

/// Runs one command and returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return if code == 0 { 0 } else { 2 };
        }
    };
    let start = Instant::now();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "{}", json!({ "error": "ThreadPool", "message": e.to_string() }));
            return 2;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok(mut o) => {
            if cli.timing {
                o.report.as_object_mut().unwrap().insert("wall_time_ms".into(), json!(start.elapsed().as_millis() as u64));
            }
            let inexact = has_inexact(&o.report["result"]);
            let text = if cli.pretty { o.pretty } else { o.report.to_string() };
            let _ = writeln!(out, "{text}");
            if cli.require_exact && inexact {
                1
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(err, "{}", json!({ "error": e.code(), "message": e.to_string() }));
            2
        }
    }
}
