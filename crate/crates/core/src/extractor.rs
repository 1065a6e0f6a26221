//! Realiser extraction: every accepted proof line becomes a λ-term that,
//! applied to a tuple of values for the free variables of the line, realises
//! the line's formula.
//!
//! Parameter tuples follow [`parameter_layout`]: first-sort variables in
//! order of first occurrence, then second-sort, then third-sort. One
//! variable is passed as itself, several as right-nested pairs
//! `⟨a, ⟨b, c⟩⟩`, and a closed formula receives `0`.

use std::collections::HashMap;

use serde_json::json;
use thiserror::Error;

use crate::kernel::{check_proof, instantiate, AxiomScheme, Justification, Param, Proof, Theory, Verdict};
use crate::pca::{self, CombTerm};
use crate::syntax::{FoTerm, Formula, Sort, Var};

type T = CombTerm;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractError {
    #[error("proof not accepted: {0:?}")]
    Rejected(Verdict),
    #[error("empty proof")]
    Empty,
}

#[derive(Debug, Clone)]
pub struct ExtractOptions {
    /// Interpretation of `≺` used by the decidability axiom for the order;
    /// maps a pair of sets to 0 or 1.
    pub prec_interp: CombTerm,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            prec_interp: T::app(T::K, T::num(0)),
        }
    }
}

/// Free variables of `f` in tuple order.
pub fn parameter_layout(f: &Formula) -> Vec<Var> {
    let fv = f.free_vars_ordered();
    let mut out = Vec::with_capacity(fv.len());
    for s in [Sort::First, Sort::Second, Sort::Third] {
        out.extend(fv.iter().filter(|(_, t)| *t == s).cloned());
    }
    out
}

/// The value assumed for a parameter that a cited line needs but the
/// current line does not bind: `0` for numbers, the empty set (constant
/// `0` function) for sets and classes.
pub fn default_value(s: Sort) -> CombTerm {
    match s {
        Sort::First => T::num(0),
        _ => T::app(T::K, T::num(0)),
    }
}

/// Component `i` of a tuple of `len` values held in `p`.
fn project(p: &CombTerm, i: usize, len: usize) -> CombTerm {
    let mut t = p.clone();
    if len == 1 {
        return t;
    }
    for _ in 0..i {
        t = T::app(T::Proj1, t);
    }
    if i + 1 < len {
        T::app(T::Proj0, t)
    } else {
        t
    }
}

/// Right-nested tuple of `xs`; `0` when empty.
pub fn tuple(xs: Vec<CombTerm>) -> CombTerm {
    let mut it = xs.into_iter().rev();
    match it.next() {
        None => T::num(0),
        Some(last) => it.fold(last, |acc, x| T::pair(x, acc)),
    }
}

/// How to read each variable of a layout out of the parameter variable.
struct Params {
    p: CombTerm,
    layout: Vec<Var>,
}

impl Params {
    fn new(p: &str, layout: Vec<Var>) -> Self {
        Params {
            p: T::var(p),
            layout,
        }
    }

    fn get(&self, name: &str, sort: Sort) -> CombTerm {
        match self.layout.iter().position(|(n, s)| n == name && *s == sort) {
            Some(i) => project(&self.p, i, self.layout.len()),
            None => default_value(sort),
        }
    }

    /// A tuple for `target` built from this one, with `extra` overriding.
    fn adapt(&self, target: &[Var], extra: Option<(&Var, CombTerm)>) -> CombTerm {
        if target == self.layout.as_slice() && extra.is_none() {
            return self.p.clone();
        }
        tuple(
            target
                .iter()
                .map(|v| match &extra {
                    Some((x, t)) if *x == v => t.clone(),
                    _ => self.get(&v.0, v.1),
                })
                .collect(),
        )
    }

    fn term(&self, t: &FoTerm) -> CombTerm {
        if let Some(n) = t.eval_closed() {
            return T::Num(n);
        }
        match t {
            FoTerm::Var(v) => self.get(v, Sort::First),
            FoTerm::Zero => T::num(0),
            FoTerm::Succ(a) => T::app(T::Succ, self.term(a)),
            FoTerm::Add(a, b) => T::apps(add(), [self.term(a), self.term(b)]),
            FoTerm::Mul(a, b) => T::apps(mul(), [self.term(a), self.term(b)]),
        }
    }
}

fn v(x: &str) -> CombTerm {
    T::var(x)
}

fn lam(x: &str, b: CombTerm) -> CombTerm {
    T::lam(x, b)
}

fn lams(xs: &[&str], b: CombTerm) -> CombTerm {
    xs.iter().rev().fold(b, |acc, x| T::lam(x, acc))
}

fn ap(f: CombTerm, xs: impl IntoIterator<Item = CombTerm>) -> CombTerm {
    T::apps(f, xs)
}

fn p0(t: CombTerm) -> CombTerm {
    T::app(T::Proj0, t)
}

fn p1(t: CombTerm) -> CombTerm {
    T::app(T::Proj1, t)
}

fn n(k: u64) -> CombTerm {
    T::num(k)
}

/// `1 − b` for a bit `b`.
fn one_minus(b: CombTerm) -> CombTerm {
    ap(T::Cases, [n(1), n(0), b, n(0)])
}

/// Addition by recursion on the second argument.
pub fn add() -> CombTerm {
    let body = lams(
        &["add", "x", "y"],
        ap(
            T::Cases,
            [
                v("x"),
                T::app(T::Succ, ap(v("add"), [v("x"), T::app(T::Pred, v("y"))])),
                v("y"),
                n(0),
            ],
        ),
    );
    T::app(T::Fix, pca::compile_open(&body))
}

/// Multiplication by recursion on the second argument.
pub fn mul() -> CombTerm {
    let body = lams(
        &["mul", "x", "y"],
        ap(
            T::Cases,
            [
                n(0),
                ap(add(), [ap(v("mul"), [v("x"), T::app(T::Pred, v("y"))]), v("x")]),
                v("y"),
                n(0),
            ],
        ),
    );
    T::app(T::Fix, pca::compile_open(&body))
}

/// A fixed realiser of the right shape for a formula whose realisability
/// does not depend on the realiser once it is true: atoms and negations
/// get `0`, conjunctions pairs, implications and universal quantifiers
/// constant functions. Disjunctions and existentials, which only occur in
/// the placeholder realisers, pick the left disjunct and witness `0`.
pub fn canonical(f: &Formula) -> CombTerm {
    match f {
        Formula::Eq(..) | Formula::In1(..) | Formula::In2(..) | Formula::Prec(..) | Formula::Not(_) => {
            n(0)
        }
        Formula::And(a, b) => T::pair(canonical(a), canonical(b)),
        Formula::Or(a, _) => T::pair(n(0), canonical(a)),
        Formula::Implies(_, b) => T::app(T::K, canonical(b)),
        Formula::ForAll(_, _, b) => T::app(T::K, canonical(b)),
        Formula::Exists(s, _, b) => T::pair(default_value(*s), canonical(b)),
    }
}

/// The λ-form realiser of one axiom instance. `formula` is the proof line,
/// whose free variables fix the parameter layout. Returns the term and
/// whether it is a stand-in for a realiser that is not computable.
pub fn realiser_for_axiom(
    scheme: AxiomScheme,
    params: &[Param],
    formula: &Formula,
    opts: &ExtractOptions,
) -> (CombTerm, bool) {
    let ps = Params::new("p", parameter_layout(formula));
    let tm = |i: usize| match &params[i] {
        Param::Term(t) => ps.term(t),
        Param::Var(x, s) if *s == Sort::First => ps.get(x, Sort::First),
        _ => unreachable!(),
    };
    let var = |i: usize| match &params[i] {
        Param::Var(x, s) => ps.get(x, *s),
        _ => unreachable!(),
    };
    let witness = |i: usize| match &params[i] {
        Param::Term(t) => ps.term(t),
        Param::Var(x, s) => ps.get(x, *s),
        _ => unreachable!(),
    };
    let with_p = |b: CombTerm| lam("p", b);
    let t = match scheme {
        AxiomScheme::K => with_p(lams(&["e", "f"], v("e"))),
        AxiomScheme::S => with_p(lams(
            &["f", "g", "e"],
            ap(v("g"), [v("e"), T::app(v("f"), v("e"))]),
        )),
        AxiomScheme::AndI => with_p(lams(&["e", "f"], T::pair(v("e"), v("f")))),
        AxiomScheme::AndL => with_p(lam("e", p0(v("e")))),
        AxiomScheme::AndR => with_p(lam("e", p1(v("e")))),
        AxiomScheme::OrIL => with_p(lam("e", T::pair(n(0), v("e")))),
        AxiomScheme::OrIR => with_p(lam("e", T::pair(n(1), v("e")))),
        AxiomScheme::OrE => with_p(lams(
            &["f", "g", "n"],
            ap(
                T::Cases,
                [
                    T::app(v("f"), p1(v("n"))),
                    T::app(v("g"), p1(v("n"))),
                    p0(v("n")),
                    n(0),
                ],
            ),
        )),
        AxiomScheme::NegI => with_p(lams(&["f", "g"], n(0))),
        AxiomScheme::ExFalso => with_p(lams(&["e", "f"], n(0))),
        AxiomScheme::ExI => with_p(lam("e", T::pair(witness(3), v("e")))),
        AxiomScheme::AllE => with_p(lam("f", T::app(v("f"), witness(3)))),
        AxiomScheme::EqRefl => with_p(n(0)),
        AxiomScheme::EqSubst => with_p(lam("e", p1(v("e")))),
        AxiomScheme::PaSuccNeZero
        | AxiomScheme::PaSuccInj
        | AxiomScheme::PaAddZero
        | AxiomScheme::PaAddSucc
        | AxiomScheme::PaMulZero
        | AxiomScheme::PaMulSucc
        | AxiomScheme::ExtIn2
        | AxiomScheme::ExtPrec => with_p(canonical(formula)),
        AxiomScheme::Ind => {
            // g 0 = d, g (m+1) = f m (g m) with e = ⟨d, f⟩
            let step = ap(
                p1(v("e")),
                [T::app(T::Pred, v("m")), T::app(v("g"), T::app(T::Pred, v("m")))],
            );
            let g = T::app(
                T::Fix,
                lams(&["g", "m"], ap(T::Cases, [p0(v("e")), step, v("m"), n(0)])),
            );
            with_p(lam("e", g))
        }
        AxiomScheme::Rec => {
            let inst = instantiate(scheme, params).expect("accepted instance");
            return (with_p(rec_realiser(&inst)), false);
        }
        AxiomScheme::Comp1 | AxiomScheme::Comp2 => {
            let x = lam("a", one_minus(p0(T::app(v("f"), v("a")))));
            let spec = lam(
                "a",
                T::pair(
                    lam("b", p1(T::app(v("f"), v("a")))),
                    lam("b", n(0)),
                ),
            );
            with_p(lam("f", T::pair(x, spec)))
        }
        AxiomScheme::DecEq => with_p(ap(
            T::Cases,
            [T::pair(n(0), n(0)), T::pair(n(1), n(0)), tm(0), tm(1)],
        )),
        AxiomScheme::DecIn1 => with_p(T::pair(one_minus(T::app(var(1), tm(0))), n(0))),
        AxiomScheme::DecIn2 => with_p(T::pair(one_minus(T::app(var(1), var(0))), n(0))),
        AxiomScheme::PrecDec => with_p(lams(
            &["e", "f"],
            T::pair(
                one_minus(T::app(opts.prec_interp.clone(), T::pair(v("e"), v("f")))),
                n(0),
            ),
        )),
        AxiomScheme::Lpo => {
            // h = least n with (f n)₀ = 1; a bounded search may stop
            // without a hit, and then the left disjunct is returned
            let fh = T::app(v("f"), v("h"));
            let body = ap(
                T::Cases,
                [
                    T::pair(n(1), T::pair(v("h"), p1(fh.clone()))),
                    T::pair(n(0), lam("a", p1(T::app(v("f"), v("a"))))),
                    p0(fh),
                    n(1),
                ],
            );
            let search = T::app(T::Mu, lam("a", p0(T::app(v("f"), v("a")))));
            with_p(lam("f", T::app(lam("h", body), search)))
        }
        AxiomScheme::W1Irrefl
        | AxiomScheme::W1Trans
        | AxiomScheme::W1Total
        | AxiomScheme::W2
        | AxiomScheme::W2Prime
        | AxiomScheme::W3 => return (with_p(canonical(formula)), true),
    };
    (t, false)
}

/// Realiser body (under `λp`) for a dependent-choice instance
/// `∀n∀X∃Yφ → ∀X∃Z(A ∧ ∀n∃U(B ∧ ∃V(C ∧ φ′)))`.
fn rec_realiser(inst: &Formula) -> CombTerm {
    let parts = (|| {
        let Formula::Implies(_, c) = inst else { return None };
        let Formula::ForAll(_, _, c) = &**c else { return None };
        let Formula::Exists(_, _, c) = &**c else { return None };
        let Formula::And(a, c) = &**c else { return None };
        let Formula::ForAll(_, _, c) = &**c else { return None };
        let Formula::Exists(_, _, c) = &**c else { return None };
        let Formula::And(b, c) = &**c else { return None };
        let Formula::Exists(_, _, c) = &**c else { return None };
        let Formula::And(cc, _) = &**c else { return None };
        Some((canonical(a), canonical(b), canonical(cc)))
    })();
    let (star0, star1, star2) = parts.expect("shape fixed by instantiate");
    // g 0 = x, g (m+1) = (f m (g m))₀
    let step = p0(ap(
        v("f"),
        [T::app(T::Pred, v("m")), T::app(v("g"), T::app(T::Pred, v("m")))],
    ));
    let g = T::app(
        T::Fix,
        lams(&["g", "m"], ap(T::Cases, [v("x"), step, v("m"), n(0)])),
    );
    let z = lam("c", ap(v("g"), [p0(v("c")), p1(v("c"))]));
    let slice = lam(
        "n",
        T::pair(
            T::app(v("g"), v("n")),
            T::pair(
                star1,
                T::pair(
                    T::app(v("g"), T::app(T::Succ, v("n"))),
                    T::pair(star2, p1(ap(v("f"), [v("n"), T::app(v("g"), v("n"))]))),
                ),
            ),
        ),
    );
    let body = T::pair(z, T::pair(star0, slice));
    lams(&["f", "x"], T::app(lam("g", body), g))
}

/// The three rule templates, with the premise realisers as free variables
/// `e` (minor premise) and `f`. Layouts are those of the premises and the
/// conclusion.
pub fn mp_template(
    e: CombTerm,
    e_layout: &[Var],
    f: CombTerm,
    f_layout: &[Var],
    concl: &[Var],
) -> CombTerm {
    let ps = Params::new("p", concl.to_vec());
    lam(
        "p",
        T::app(
            T::app(f, ps.adapt(f_layout, None)),
            T::app(e, ps.adapt(e_layout, None)),
        ),
    )
}

pub fn all_gen_template(f: CombTerm, f_layout: &[Var], x: &Var, concl: &[Var]) -> CombTerm {
    let ps = Params::new("p", concl.to_vec());
    lams(
        &["p", "d", "n"],
        T::app(T::app(f, ps.adapt(f_layout, Some((x, v("n"))))), v("d")),
    )
}

pub fn ex_gen_template(f: CombTerm, f_layout: &[Var], x: &Var, concl: &[Var]) -> CombTerm {
    let ps = Params::new("p", concl.to_vec());
    lams(
        &["p", "d"],
        T::app(
            T::app(f, ps.adapt(f_layout, Some((x, p0(v("d")))))),
            p1(v("d")),
        ),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceLine {
    pub line: usize,
    pub layout: Vec<Var>,
    /// Realiser of the line, with cited lines as free variables `r<j>`.
    pub term: CombTerm,
    pub cites: Vec<usize>,
    /// The line, or a line it depends on, uses a stand-in realiser.
    pub placeholder: bool,
}

#[derive(Debug, Clone)]
pub struct Extraction {
    /// Closed λ-form realiser of the last line.
    pub term: CombTerm,
    pub layout: Vec<Var>,
    pub trace: Vec<TraceLine>,
    pub placeholder: bool,
}

impl Extraction {
    pub fn compiled(&self) -> CombTerm {
        pca::compile_open(&self.term)
    }

    /// The realiser applied to a parameter tuple.
    pub fn applied(&self, params: CombTerm) -> CombTerm {
        T::app(self.compiled(), params)
    }

    pub fn trace_json(&self) -> serde_json::Value {
        json!({
            "schema": 1,
            "layout": self.layout.iter().map(|(n, s)| json!({"name": n, "sort": s.letter()})).collect::<Vec<_>>(),
            "placeholder": self.placeholder,
            "lines": self.trace.iter().map(|l| json!({
                "line": l.line,
                "layout": l.layout.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
                "cites": l.cites,
                "placeholder": l.placeholder,
                "term": l.term.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn line_var(j: usize) -> String {
    format!("r{j}")
}

/// Extracts a realiser for the last line of an accepted proof.
pub fn extract(p: &Proof, th: Theory, opts: &ExtractOptions) -> Result<Extraction, ExtractError> {
    let verdict = check_proof(p, th);
    if !verdict.is_accept() {
        return Err(ExtractError::Rejected(verdict));
    }
    if p.lines.is_empty() {
        return Err(ExtractError::Empty);
    }
    let mut trace: Vec<TraceLine> = Vec::with_capacity(p.lines.len());
    for (i, line) in p.lines.iter().enumerate() {
        let layout = parameter_layout(&line.formula);
        let lay = |j: usize| trace[j].layout.clone();
        let (term, cites, own_placeholder) = match &line.just {
            Justification::Axiom(scheme, Ok(params)) => {
                let (t, ph) = realiser_for_axiom(*scheme, params, &line.formula, opts);
                (t, vec![], ph)
            }
            Justification::Axiom(_, Err(_)) => unreachable!("accepted"),
            Justification::Mp(a, b) => (
                mp_template(v(&line_var(*a)), &lay(*a), v(&line_var(*b)), &lay(*b), &layout),
                vec![*a, *b],
                false,
            ),
            Justification::AllGen(a, sort, Ok(x)) => (
                all_gen_template(v(&line_var(*a)), &lay(*a), &(x.clone(), *sort), &layout),
                vec![*a],
                false,
            ),
            Justification::ExGen(a, sort, Ok(x)) => (
                ex_gen_template(v(&line_var(*a)), &lay(*a), &(x.clone(), *sort), &layout),
                vec![*a],
                false,
            ),
            _ => unreachable!("accepted"),
        };
        let placeholder = own_placeholder || cites.iter().any(|&j| trace[j].placeholder);
        trace.push(TraceLine {
            line: i,
            layout,
            term,
            cites,
            placeholder,
        });
    }
    let last = trace.len() - 1;
    let term = assemble(&trace, last);
    Ok(Extraction {
        term,
        layout: trace[last].layout.clone(),
        placeholder: trace[last].placeholder,
        trace,
    })
}

/// Closes the template of line `last` over its dependencies: lines cited
/// once are inlined, lines cited more often are shared through a
/// `(λr. body) R` binding.
fn assemble(trace: &[TraceLine], last: usize) -> CombTerm {
    let mut needed = vec![false; trace.len()];
    let mut stack = vec![last];
    while let Some(i) = stack.pop() {
        if !needed[i] {
            needed[i] = true;
            stack.extend(trace[i].cites.iter().copied());
        }
    }
    let mut uses = vec![0usize; trace.len()];
    for (i, l) in trace.iter().enumerate() {
        if needed[i] {
            for &j in &l.cites {
                uses[j] += 1;
            }
        }
    }
    let shared = |j: usize| uses[j] > 1;
    let mut expanded: HashMap<usize, CombTerm> = HashMap::new();
    for i in 0..=last {
        if !needed[i] {
            continue;
        }
        let mut t = trace[i].term.clone();
        for &j in &trace[i].cites {
            if !shared(j) {
                // `expanded[j]` may mention shared `r<k>`, which templates never bind
                t = t.subst_closed(&line_var(j), &expanded[&j]);
            }
        }
        expanded.insert(i, t);
    }
    let mut body = expanded[&last].clone();
    for j in (0..last).rev() {
        if needed[j] && shared(j) {
            body = T::app(lam(&line_var(j), body), expanded[&j].clone());
        }
    }
    body
}

/// Parameter tuple for `layout` from concrete values.
pub fn params_tuple(layout: &[Var], value: impl Fn(&str, Sort) -> CombTerm) -> CombTerm {
    tuple(layout.iter().map(|(n, s)| value(n, *s)).collect())
}

#[cfg(test)]
mod tests;
