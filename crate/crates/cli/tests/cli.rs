use std::path::PathBuf;
use std::process::{Command, Output};

use cmr_core::pca::{self, CombTerm};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn corpus(name: &str) -> String {
    root().join("corpus").join(name).to_string_lossy().into_owned()
}

fn cmr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmr"))
        .args(args)
        .env_remove("CMR_CORPUS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn check_exit_codes() {
    let ok = cmr(&["check", &corpus("pa_chain.proof")]);
    assert_eq!(code(&ok), 0);
    assert_eq!(stdout(&ok), "accept");

    let bad = cmr(&["check", "--format", "json", &data("bad_mp.proof")]);
    assert_eq!(code(&bad), 1);
    let j = json(&bad);
    assert_eq!(j["schema"], 1);
    assert_eq!(j["status"], "reject");
    assert_eq!(j["bad_line"], 2);
    assert_eq!(j["reason"], "mp-not-implication");

    assert_eq!(code(&cmr(&["check", &data("no_such_file.proof")])), 2);
    assert_eq!(code(&cmr(&["check", &data("malformed.proof")])), 2);
    let err = cmr(&["check", "--format", "json", &data("malformed.proof")]);
    assert_eq!(json(&err)["status"], "error");
}

#[test]
fn theory_flag_gates_gwo() {
    assert_eq!(code(&cmr(&["check", &data("w1_irrefl.proof")])), 1);
    assert_eq!(code(&cmr(&["check", "--theory", "cm-gwo", &data("w1_irrefl.proof")])), 0);
    assert_eq!(code(&cmr(&["check", "--theory", "zf", &data("w1_irrefl.proof")])), 2);
}

#[test]
fn extract_k_axiom() {
    let o = cmr(&["extract", &data("k_axiom.proof")]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "(lam p (lam e (lam f e)))");

    let c = cmr(&["extract", "--compiled", &data("k_axiom.proof")]);
    assert_eq!(code(&c), 0);
    let term = pca::parse_term(&stdout(&c)).unwrap();
    assert!(term.is_compiled());
    // applied to parameters and two arguments it returns the first
    let applied = CombTerm::apps(term, [CombTerm::num(0), CombTerm::num(3), CombTerm::num(4)]);
    let v = pca::reduce(&applied, 10_000);
    assert_eq!(v.value().and_then(pca::num_value), Some(3));

    let t = cmr(&["extract", "--trace", &data("k_axiom.proof")]);
    let j = json(&t);
    assert_eq!(j["lines"].as_array().unwrap().len(), 1);
}

#[test]
fn extract_rejected_proof() {
    let o = cmr(&["extract", &data("bad_mp.proof")]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("reject line 2"));
}

#[test]
fn realize_exit_codes() {
    let o = cmr(&["realize", "--format", "json", &corpus("exists_sum.proof")]);
    assert_eq!(code(&o), 0);
    let j = json(&o);
    assert_eq!(j["verdict"], "yes");
    assert_eq!(j["witnesses"][0]["value"], "5");
    assert_eq!(j["bounds"]["n"], 50);
    assert_eq!(j["bounds"]["fuel"], 1_000_000);

    let w = cmr(&["realize", "--theory", "cm-gwo", &data("w1_irrefl.proof")]);
    assert_eq!(code(&w), 3);

    let f = cmr(&["realize", "--fuel", "1", "--format", "json", &corpus("exists_sum.proof")]);
    assert_eq!(code(&f), 3);
    assert_eq!(json(&f)["reason"], "out of fuel");
}

#[test]
fn realize_with_params_and_prec() {
    let o = cmr(&["realize", "--param", "n=7", &corpus("forall_exists_succ.proof")]);
    assert_eq!(code(&o), 0);
    let p = cmr(&["realize", "--prec", "(K (num 1))", &corpus("prec_decidable.proof")]);
    assert_eq!(code(&p), 0);
    assert_eq!(code(&cmr(&["realize", "--param", "n", &corpus("eq_refl.proof")])), 2);
}

#[test]
fn run_applies_realiser() {
    let o = cmr(&["run", "--format", "json", &corpus("exists_product.proof")]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["value"], "(P (num 12) (num 0))");
}

#[test]
fn instance_prints_formula() {
    let o = cmr(&["instance", "(axiom pa-add-zero 3)"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "(= (+ (s (s (s 0))) 0) (s (s (s 0))))");
    assert_eq!(code(&cmr(&["instance", "(axiom nope)"])), 2);
}

#[test]
fn ordinal_commands() {
    let o = cmr(&["ord", "cmp", "(phi 0 0)", "(phi 1 0)"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "<");
    assert_eq!(stdout(&cmr(&["ord", "cmp", "(phi 1 0)", "(phi 0 (phi 1 0))"])), "=");
    assert_eq!(stdout(&cmr(&["ord", "norm", "(sum (phi 0 1) (phi 0 2))"])), "(phi 0 (n 2))");
    assert_eq!(stdout(&cmr(&["ord", "cm"])), "(phi (phi (n 1) 0) 0)");
    assert_eq!(code(&cmr(&["ord", "cmp", "(phi 0", "0"])), 2);
    assert_eq!(code(&cmr(&["ord", "norm", "(psi 0 0)"])), 2);
}

#[test]
fn kb_sorts_tree() {
    let o = cmr(&["kb", &data("tree4.tree")]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "(0 0)\n(0)\n(1)\n()");
    let j = json(&cmr(&["kb", "--format", "json", &data("tree4.tree")]));
    assert_eq!(j["order"][0], "(0 0)");
    assert_eq!(code(&cmr(&["kb", &data("bad_mp.proof")])), 2);
}

#[test]
fn corpus_gate() {
    let dir = root().join("corpus");
    let o = Command::new(env!("CARGO_BIN_EXE_cmr"))
        .args(["corpus", "--format", "json"])
        .env("CMR_CORPUS", &dir)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let j = json(&o);
    let rows = j["results"].as_array().unwrap();
    assert!(rows.len() >= 10);
    assert!(rows.iter().all(|r| r["status"] == "ok"));

    assert_eq!(code(&cmr(&["corpus", &data("")])), 1);
}
