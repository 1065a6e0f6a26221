//! `cmr`: check, extract, run and realise proofs; ordinal utilities.
//!
//! Exit codes: 0 success or Yes, 1 reject or No, 2 input error, 3 Unknown.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use cmr_core::extractor::{self, ExtractError, ExtractOptions, Extraction};
use cmr_core::kernel::{self, check_proof, parse_proof, Proof, Theory, Verdict};
use cmr_core::ordinals::{self, FinTree};
use cmr_core::pca::{self, CombTerm, Outcome};
use cmr_core::realcheck::{self, Bounds, Env, Found, Report, Verdict3};
use num_bigint::BigUint;

#[derive(Parser)]
#[command(name = "cmr", version, about = "Proof kernel and realiser extractor for third-order arithmetic")]
struct Cli {
    /// Axiom system: `cm`, or `cm-gwo` for the global well-ordering schemes.
    #[arg(long, global = true, default_value = "cm", value_parser = ["cm", "cm-gwo"])]
    theory: String,
    /// Reduction budget shared by one evaluation.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    fuel: u64,
    /// Bound for first-sort quantifiers and searches.
    #[arg(long, global = true, default_value_t = 50)]
    bound: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a proof file.
    Check { file: PathBuf },
    /// Print the realiser of the last line.
    Extract {
        file: PathBuf,
        /// Print the S/K form instead of the λ-form.
        #[arg(long)]
        compiled: bool,
        /// Print the per-line trace (always JSON).
        #[arg(long)]
        trace: bool,
    },
    /// Apply the realiser to its parameters and normalise the result.
    Run {
        file: PathBuf,
        /// Value of a free number variable, as NAME=NUM.
        #[arg(long = "param", value_name = "NAME=NUM")]
        params: Vec<String>,
    },
    /// Check on bounded instances that the extracted term realises the theorem.
    Realize {
        file: PathBuf,
        #[arg(long = "param", value_name = "NAME=NUM")]
        params: Vec<String>,
        /// Combinator term deciding `≺`, applied to the pair of the two objects.
        #[arg(long)]
        prec: Option<String>,
    },
    /// Print the formula an axiom instance stands for, e.g. `(axiom k (= 0 0) (= 1 1))`.
    Instance { text: Vec<String> },
    /// Ordinal notations.
    Ord {
        #[command(subcommand)]
        op: OrdCmd,
    },
    /// Sort the nodes of a finite tree in Kleene–Brouwer order.
    Kb { file: PathBuf },
    /// Check, extract and realise every `.proof` file in a directory.
    Corpus {
        /// Defaults to $CMR_CORPUS, then `corpus`.
        dir: Option<PathBuf>,
        /// Rewrite the `.expected.json` goldens instead of comparing.
        #[arg(long)]
        bless: bool,
    },
}

#[derive(Subcommand)]
enum OrdCmd {
    /// Print `<`, `=` or `>`.
    Cmp { a: String, b: String },
    /// Print the normal form.
    Norm { a: String },
    /// Print the notation for the proof-theoretic ordinal of CM.
    Cm,
}

/// Failure before any verdict: bad input, unreadable file.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Res = Result<ExitCode, InputError>;

const YES: u8 = 0;
const NO: u8 = 1;
const UNKNOWN: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(c) => c,
        Err(InputError(msg)) => {
            match cli.format {
                Format::Json => println!("{}", json!({"schema": 1, "status": "error", "message": msg})),
                Format::Text => eprintln!("cmr: {msg}"),
            }
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Res {
    let theory = Theory::parse(&cli.theory).expect("clap restricts the values");
    match &cli.cmd {
        Cmd::Check { file } => {
            let p = load(file)?;
            let v = check_proof(&p, theory);
            emit(cli, &v.to_json(), &verdict_text(&v));
            Ok(ExitCode::from(if v.is_accept() { YES } else { NO }))
        }
        Cmd::Extract { file, compiled, trace } => {
            let p = load(file)?;
            let ex = match extract(&p, theory, &Env::default())? {
                Ok(ex) => ex,
                Err(code) => return Ok(rejected(cli, code)),
            };
            let term = if *compiled { ex.compiled() } else { ex.term.clone() };
            if *trace {
                println!("{}", serde_json::to_string_pretty(&ex.trace_json())?);
            } else {
                let j = json!({
                    "schema": 1,
                    "term": term.to_string(),
                    "layout": ex.layout.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
                    "placeholder": ex.placeholder,
                });
                emit(cli, &j, &term.to_string());
            }
            Ok(ExitCode::from(YES))
        }
        Cmd::Run { file, params } => {
            let p = load(file)?;
            let nums = parse_params(params)?;
            let ex = match extract(&p, theory, &Env::default())? {
                Ok(ex) => ex,
                Err(code) => return Ok(rejected(cli, code)),
            };
            let args = extractor::params_tuple(&ex.layout, |name, s| match nums.get(name) {
                Some(k) => CombTerm::Num(k.clone()),
                None => extractor::default_value(s),
            });
            let (status, text, code) = match pca::normalize(&ex.applied(args), cli.fuel) {
                Outcome::Converged(v, used) => ("converged", format!("{v}\n; {used} steps"), YES),
                Outcome::OutOfFuel => ("out-of-fuel", "out of fuel".to_string(), UNKNOWN),
                Outcome::Stuck(s) => ("stuck", format!("stuck: {s}"), NO),
            };
            let value = text.lines().next().unwrap_or_default().to_string();
            emit(cli, &json!({"schema": 1, "status": status, "value": value}), &text);
            Ok(ExitCode::from(code))
        }
        Cmd::Realize { file, params, prec } => {
            let p = load(file)?;
            let mut env = Env::default();
            env.numbers = parse_params(params)?;
            if let Some(src) = prec {
                env.prec_interp = pca::compile(&pca::parse_term(src)?)?;
            }
            let b = Bounds::new(cli.bound, cli.fuel);
            let ex = match extract(&p, theory, &env)? {
                Ok(ex) => ex,
                Err(code) => return Ok(rejected(cli, code)),
            };
            let r = realcheck::check_extraction(&p, &ex, &env, &b);
            emit(cli, &r.to_json(), &report_text(&r));
            Ok(ExitCode::from(verdict_code(&r.verdict)))
        }
        Cmd::Instance { text } => {
            let (scheme, f) = kernel::parse_instance(&text.join(" "))?;
            emit(cli, &json!({"schema": 1, "scheme": scheme.id(), "formula": f.to_string()}), &f.to_string());
            Ok(ExitCode::from(YES))
        }
        Cmd::Ord { op } => ord(cli, op),
        Cmd::Kb { file } => {
            let src = fs::read_to_string(file).map_err(|e| InputError(format!("{}: {e}", file.display())))?;
            let t = FinTree::parse(&src)?;
            let sorted: Vec<String> = ordinals::kb_sort(&t).iter().map(|s| ordinals::format_seq(s)).collect();
            emit(cli, &json!({"schema": 1, "order": sorted}), &sorted.join("\n"));
            Ok(ExitCode::from(YES))
        }
        Cmd::Corpus { dir, bless } => {
            let dir = dir
                .clone()
                .or_else(|| std::env::var_os("CMR_CORPUS").map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("corpus"));
            corpus(cli, theory, &dir, *bless)
        }
    }
}

fn ord(cli: &Cli, op: &OrdCmd) -> Res {
    let (j, text) = match op {
        OrdCmd::Cmp { a, b } => {
            let (x, y) = (ordinals::parse_ord(a)?, ordinals::parse_ord(b)?);
            let sym = match ordinals::ord_cmp(&x, &y)? {
                std::cmp::Ordering::Less => "<",
                std::cmp::Ordering::Equal => "=",
                std::cmp::Ordering::Greater => ">",
            };
            (json!({"schema": 1, "result": sym}), sym.to_string())
        }
        OrdCmd::Norm { a } => {
            let x = ordinals::parse_ord(a)?;
            (json!({"schema": 1, "normal": x.to_string()}), x.to_string())
        }
        OrdCmd::Cm => {
            let x = ordinals::Ord::cm();
            (json!({"schema": 1, "normal": x.to_string()}), x.to_string())
        }
    };
    emit(cli, &j, &text);
    Ok(ExitCode::from(YES))
}

fn load(file: &Path) -> Result<Proof, InputError> {
    let src = fs::read_to_string(file).map_err(|e| InputError(format!("{}: {e}", file.display())))?;
    parse_proof(&src).map_err(|e| InputError(format!("{}: {e}", file.display())))
}

fn parse_params(xs: &[String]) -> Result<HashMap<String, BigUint>, InputError> {
    let mut out = HashMap::new();
    for x in xs {
        let (k, v) = x
            .split_once('=')
            .ok_or_else(|| InputError(format!("expected NAME=NUM, got {x}")))?;
        let n: BigUint = v.parse().map_err(|_| InputError(format!("not a number: {v}")))?;
        out.insert(k.to_string(), n);
    }
    Ok(out)
}

/// `Ok(Err(v))` is a rejected proof, reported with exit code 1.
fn extract(p: &Proof, th: Theory, env: &Env) -> Result<Result<Extraction, Verdict>, InputError> {
    let opts = ExtractOptions {
        prec_interp: env.prec_interp.clone(),
    };
    match extractor::extract(p, th, &opts) {
        Ok(ex) => Ok(Ok(ex)),
        Err(ExtractError::Rejected(v)) => Ok(Err(v)),
        Err(e @ ExtractError::Empty) => Err(InputError(e.to_string())),
    }
}

fn rejected(cli: &Cli, v: Verdict) -> ExitCode {
    emit(cli, &v.to_json(), &verdict_text(&v));
    ExitCode::from(NO)
}

fn emit(cli: &Cli, j: &Json, text: &str) {
    match cli.format {
        Format::Json => println!("{j}"),
        Format::Text => println!("{text}"),
    }
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Accept => "accept".into(),
        Verdict::Reject { line, reason, detail } => format!("reject line {line}: {reason}: {detail}"),
    }
}

fn verdict_code(v: &Verdict3) -> u8 {
    match v {
        Verdict3::Yes => YES,
        Verdict3::No(_) => NO,
        Verdict3::Unknown(_) => UNKNOWN,
    }
}

fn found_text(w: &Found) -> String {
    match w {
        Found::Exists { var, value, .. } => format!("{var} := {value}"),
        Found::Or { tag } => format!("or-tag {tag}"),
    }
}

fn report_text(r: &Report) -> String {
    let mut s = r.verdict.to_string();
    for w in &r.witnesses {
        s.push_str(&format!("\n  {}", found_text(w)));
    }
    s.push_str(&format!(
        "\n; N={} fuel={} used={} assignments={}",
        r.n, r.fuel, r.fuel_used, r.assignments
    ));
    s
}

/// The part of a report a golden pins down.
fn golden_of(r: &Report) -> Json {
    json!({
        "verdict": r.verdict.word(),
        "witnesses": r.to_json()["witnesses"].clone(),
    })
}

fn corpus(cli: &Cli, theory: Theory, dir: &Path, bless: bool) -> Res {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| InputError(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "proof"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(InputError(format!("{}: no .proof files", dir.display())));
    }
    let b = Bounds::new(cli.bound, cli.fuel);
    let env = Env::default();
    let mut rows = Vec::new();
    let mut worst = YES;
    for f in &files {
        let name = f.file_stem().unwrap().to_string_lossy().to_string();
        let (status, detail) = match corpus_one(f, theory, &env, &b, bless) {
            Ok((r, golden_ok)) => {
                let code = verdict_code(&r.verdict);
                let status = match (code, golden_ok) {
                    (YES, true) => "ok",
                    (YES, false) => "golden-mismatch",
                    (UNKNOWN, _) => "unknown",
                    _ => "fail",
                };
                (status, report_text(&r).replace('\n', " "))
            }
            Err(e) => ("error", e),
        };
        if status != "ok" {
            worst = NO;
        }
        rows.push((name, status, detail));
    }
    match cli.format {
        Format::Json => {
            let j: Vec<Json> = rows
                .iter()
                .map(|(n, s, d)| json!({"name": n, "status": s, "detail": d}))
                .collect();
            println!("{}", json!({"schema": 1, "results": j}));
        }
        Format::Text => {
            for (n, s, d) in &rows {
                println!("{s:<16} {n:<24} {d}");
            }
        }
    }
    Ok(ExitCode::from(worst))
}

fn corpus_one(f: &Path, theory: Theory, env: &Env, b: &Bounds, bless: bool) -> Result<(Report, bool), String> {
    let p = load(f).map_err(|e| e.0)?;
    let v = check_proof(&p, theory);
    if !v.is_accept() {
        return Err(verdict_text(&v));
    }
    let ex = match extract(&p, theory, env).map_err(|e| e.0)? {
        Ok(ex) => ex,
        Err(v) => return Err(verdict_text(&v)),
    };
    let r = realcheck::check_extraction(&p, &ex, env, b);
    let golden_path = f.with_extension("expected.json");
    let got = golden_of(&r);
    if bless {
        let text = serde_json::to_string_pretty(&got).map_err(|e| e.to_string())?;
        fs::write(&golden_path, text + "\n").map_err(|e| e.to_string())?;
        return Ok((r, true));
    }
    let ok = match fs::read_to_string(&golden_path) {
        Ok(s) => serde_json::from_str::<Json>(&s).map_err(|e| format!("{}: {e}", golden_path.display()))? == got,
        Err(_) => false,
    };
    Ok((r, ok))
}
