//! The three-sorted language: first-order terms, formulas over `=`, `∈₁`,
//! `∈₂`, `≺`, and the operations every other module needs (free variables,
//! substitution, α-equivalence, syntactic classes).

mod parse;
pub mod sexpr;
mod surface;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parse::{parse_formula, parse_formula_with, parse_surface, parse_surface_with, parse_term, SortCtx};
pub use sexpr::Pos;
pub use surface::{expand, Bound, SetTerm, Surface};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sort {
    First,
    Second,
    Third,
}

impl Sort {
    /// Suffix used in binder keywords and proof justifications.
    pub fn letter(self) -> &'static str {
        match self {
            Sort::First => "n",
            Sort::Second => "s",
            Sort::Third => "t",
        }
    }

    pub fn from_word(w: &str) -> Option<Sort> {
        match w {
            "n" | "first" => Some(Sort::First),
            "s" | "second" => Some(Sort::Second),
            "t" | "third" => Some(Sort::Third),
            _ => None,
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::First => "first",
            Sort::Second => "second",
            Sort::Third => "third",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FoTerm {
    Var(String),
    Zero,
    Succ(Box<FoTerm>),
    Add(Box<FoTerm>, Box<FoTerm>),
    Mul(Box<FoTerm>, Box<FoTerm>),
}

impl FoTerm {
    pub fn var(n: &str) -> FoTerm {
        FoTerm::Var(n.to_string())
    }

    pub fn succ(t: FoTerm) -> FoTerm {
        FoTerm::Succ(Box::new(t))
    }

    pub fn add(a: FoTerm, b: FoTerm) -> FoTerm {
        FoTerm::Add(Box::new(a), Box::new(b))
    }

    pub fn mul(a: FoTerm, b: FoTerm) -> FoTerm {
        FoTerm::Mul(Box::new(a), Box::new(b))
    }

    pub fn numeral(k: u64) -> FoTerm {
        (0..k).fold(FoTerm::Zero, |t, _| FoTerm::succ(t))
    }

    pub fn vars_into(&self, out: &mut Vec<String>) {
        match self {
            FoTerm::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone())
                }
            }
            FoTerm::Zero => {}
            FoTerm::Succ(t) => t.vars_into(out),
            FoTerm::Add(a, b) | FoTerm::Mul(a, b) => {
                a.vars_into(out);
                b.vars_into(out);
            }
        }
    }

    pub fn vars(&self) -> Vec<String> {
        let mut v = Vec::new();
        self.vars_into(&mut v);
        v
    }

    pub fn has_var(&self, name: &str) -> bool {
        match self {
            FoTerm::Var(v) => v == name,
            FoTerm::Zero => false,
            FoTerm::Succ(t) => t.has_var(name),
            FoTerm::Add(a, b) | FoTerm::Mul(a, b) => a.has_var(name) || b.has_var(name),
        }
    }

    pub fn subst(&self, name: &str, by: &FoTerm) -> FoTerm {
        match self {
            FoTerm::Var(v) if v == name => by.clone(),
            FoTerm::Var(_) | FoTerm::Zero => self.clone(),
            FoTerm::Succ(t) => FoTerm::succ(t.subst(name, by)),
            FoTerm::Add(a, b) => FoTerm::add(a.subst(name, by), b.subst(name, by)),
            FoTerm::Mul(a, b) => FoTerm::mul(a.subst(name, by), b.subst(name, by)),
        }
    }

    /// Evaluates under an assignment; `None` if a variable is unassigned.
    pub fn eval(&self, env: &dyn Fn(&str) -> Option<BigUint>) -> Option<BigUint> {
        Some(match self {
            FoTerm::Var(v) => env(v)?,
            FoTerm::Zero => BigUint::zero(),
            FoTerm::Succ(t) => t.eval(env)? + 1u32,
            FoTerm::Add(a, b) => a.eval(env)? + b.eval(env)?,
            FoTerm::Mul(a, b) => a.eval(env)? * b.eval(env)?,
        })
    }

    pub fn eval_closed(&self) -> Option<BigUint> {
        self.eval(&|_| None)
    }
}

impl fmt::Display for FoTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FoTerm::Var(v) => f.write_str(v),
            FoTerm::Zero => f.write_str("0"),
            FoTerm::Succ(t) => write!(f, "(s {t})"),
            FoTerm::Add(a, b) => write!(f, "(+ {a} {b})"),
            FoTerm::Mul(a, b) => write!(f, "(* {a} {b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(FoTerm, FoTerm),
    In1(FoTerm, String),
    In2(String, String),
    Prec(String, String),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    ForAll(Sort, String, Box<Formula>),
    Exists(Sort, String, Box<Formula>),
}

/// A free or bound variable together with its sort.
pub type Var = (String, Sort);

/// What may replace a variable: a first-order term, or another variable of
/// the same higher sort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subst {
    Term(FoTerm),
    Var(String),
}

impl Subst {
    fn names(&self) -> Vec<String> {
        match self {
            Subst::Term(t) => t.vars(),
            Subst::Var(v) => vec![v.clone()],
        }
    }
}

impl fmt::Display for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subst::Term(t) => write!(f, "{t}"),
            Subst::Var(v) => f.write_str(v),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("{pos}: lexical error: {msg}")]
    Lexical { msg: String, pos: Pos },
    #[error("{pos}: arity error: {msg}")]
    Arity { msg: String, pos: Pos },
    #[error("{pos}: unknown head symbol `{head}`")]
    UnknownHead { head: String, pos: Pos },
    #[error("{pos}: sort error: {msg}")]
    Sort { msg: String, pos: Pos },
    #[error("{pos}: {msg}")]
    Malformed { msg: String, pos: Pos },
    #[error("sort mismatch: {0}")]
    SubstSort(String),
    #[error("formula is not strictly positive in {0}")]
    NotStrictlyPositive(String),
}

impl SyntaxError {
    pub fn pos(&self) -> Option<Pos> {
        match self {
            SyntaxError::Lexical { pos, .. }
            | SyntaxError::Arity { pos, .. }
            | SyntaxError::UnknownHead { pos, .. }
            | SyntaxError::Sort { pos, .. }
            | SyntaxError::Malformed { pos, .. } => Some(*pos),
            _ => None,
        }
    }
}

impl Formula {
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }
    pub fn forall(s: Sort, v: &str, body: Formula) -> Formula {
        Formula::ForAll(s, v.to_string(), Box::new(body))
    }
    pub fn exists(s: Sort, v: &str, body: Formula) -> Formula {
        Formula::Exists(s, v.to_string(), Box::new(body))
    }
    pub fn in1(t: FoTerm, x: &str) -> Formula {
        Formula::In1(t, x.to_string())
    }

    /// Free variables in first-occurrence order (left to right).
    pub fn free_vars_ordered(&self) -> Vec<Var> {
        let mut out = Vec::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        self.free_vars_ordered().into_iter().collect()
    }

    pub fn is_free(&self, v: &str, s: Sort) -> bool {
        match self {
            Formula::Eq(a, b) => s == Sort::First && (a.has_var(v) || b.has_var(v)),
            Formula::In1(t, x) => {
                (s == Sort::First && t.has_var(v)) || (s == Sort::Second && x == v)
            }
            Formula::In2(x, c) => {
                (s == Sort::Second && x == v) || (s == Sort::Third && c == v)
            }
            Formula::Prec(x, y) => s == Sort::Second && (x == v || y == v),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_free(v, s) || b.is_free(v, s)
            }
            Formula::Not(a) => a.is_free(v, s),
            Formula::ForAll(bs, bv, body) | Formula::Exists(bs, bv, body) => {
                !(*bs == s && bv == v) && body.is_free(v, s)
            }
        }
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut Vec<Var>) {
        let mut add = |n: &str, s: Sort, bound: &Vec<Var>| {
            let key = (n.to_string(), s);
            if !bound.contains(&key) && !out.contains(&key) {
                out.push(key);
            }
        };
        match self {
            Formula::Eq(a, b) => {
                for v in a.vars().into_iter().chain(b.vars()) {
                    add(&v, Sort::First, bound);
                }
            }
            Formula::In1(t, x) => {
                for v in t.vars() {
                    add(&v, Sort::First, bound);
                }
                add(x, Sort::Second, bound);
            }
            Formula::In2(x, c) => {
                add(x, Sort::Second, bound);
                add(c, Sort::Third, bound);
            }
            Formula::Prec(x, y) => {
                add(x, Sort::Second, bound);
                add(y, Sort::Second, bound);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::ForAll(s, v, body) | Formula::Exists(s, v, body) => {
                bound.push((v.clone(), *s));
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_names(&self) -> HashSet<String> {
        let mut out = HashSet::new();
        self.names_into(&mut out);
        out
    }

    pub(crate) fn names_into(&self, out: &mut HashSet<String>) {
        match self {
            Formula::Eq(a, b) => {
                out.extend(a.vars());
                out.extend(b.vars());
            }
            Formula::In1(t, x) => {
                out.extend(t.vars());
                out.insert(x.clone());
            }
            Formula::In2(x, y) | Formula::Prec(x, y) => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.names_into(out);
                b.names_into(out);
            }
            Formula::Not(a) => a.names_into(out),
            Formula::ForAll(_, v, b) | Formula::Exists(_, v, b) => {
                out.insert(v.clone());
                b.names_into(out);
            }
        }
    }

    /// Capture-avoiding substitution of `by` for the free variable `(v, s)`.
    pub fn substitute(&self, v: &str, s: Sort, by: &Subst) -> Result<Formula, SyntaxError> {
        match (s, by) {
            (Sort::First, Subst::Term(_)) | (Sort::Second | Sort::Third, Subst::Var(_)) => {}
            (Sort::First, Subst::Var(name)) => {
                return self.substitute(v, s, &Subst::Term(FoTerm::Var(name.clone())))
            }
            (_, Subst::Term(t)) => {
                // a bare variable written as a term is fine for higher sorts
                if let FoTerm::Var(name) = t {
                    return self.substitute(v, s, &Subst::Var(name.clone()));
                }
                return Err(SyntaxError::SubstSort(format!(
                    "cannot substitute the term {t} for {s}-sort variable {v}"
                )));
            }
        }
        let by_names = by.names();
        Ok(self.subst_inner(v, s, by, &by_names))
    }

    fn subst_inner(&self, v: &str, s: Sort, by: &Subst, by_names: &[String]) -> Formula {
        let term = |t: &FoTerm| match (s, by) {
            (Sort::First, Subst::Term(b)) => t.subst(v, b),
            _ => t.clone(),
        };
        let name2 = |x: &String, want: Sort| match by {
            Subst::Var(b) if want == s && x == v => b.clone(),
            _ => x.clone(),
        };
        match self {
            Formula::Eq(a, b) => Formula::Eq(term(a), term(b)),
            Formula::In1(t, x) => Formula::In1(term(t), name2(x, Sort::Second)),
            Formula::In2(x, c) => Formula::In2(name2(x, Sort::Second), name2(c, Sort::Third)),
            Formula::Prec(x, y) => Formula::Prec(name2(x, Sort::Second), name2(y, Sort::Second)),
            Formula::And(a, b) => Formula::and(
                a.subst_inner(v, s, by, by_names),
                b.subst_inner(v, s, by, by_names),
            ),
            Formula::Or(a, b) => Formula::or(
                a.subst_inner(v, s, by, by_names),
                b.subst_inner(v, s, by, by_names),
            ),
            Formula::Implies(a, b) => Formula::implies(
                a.subst_inner(v, s, by, by_names),
                b.subst_inner(v, s, by, by_names),
            ),
            Formula::Not(a) => Formula::not(a.subst_inner(v, s, by, by_names)),
            Formula::ForAll(bs, bv, body) | Formula::Exists(bs, bv, body) => {
                let is_all = matches!(self, Formula::ForAll(..));
                let rebuild = |bv: String, body: Formula| {
                    if is_all {
                        Formula::ForAll(*bs, bv, Box::new(body))
                    } else {
                        Formula::Exists(*bs, bv, Box::new(body))
                    }
                };
                if (*bs == s && bv == v) || !body.is_free(v, s) {
                    return self.clone();
                }
                let captures = by_names.contains(bv) && by_binds(by, s, bv, *bs);
                if captures {
                    let mut avoid = body.all_names();
                    avoid.extend(by_names.iter().cloned());
                    avoid.insert(v.to_string());
                    let fresh = fresh_name(bv, &avoid);
                    let renamed = body.rename_free(bv, *bs, &fresh);
                    rebuild(fresh, renamed.subst_inner(v, s, by, by_names))
                } else {
                    rebuild(bv.clone(), body.subst_inner(v, s, by, by_names))
                }
            }
        }
    }

    /// Renames free occurrences of `(from, s)` to `to`; `to` must be fresh.
    pub fn rename_free(&self, from: &str, s: Sort, to: &str) -> Formula {
        let by = match s {
            Sort::First => Subst::Term(FoTerm::var(to)),
            _ => Subst::Var(to.to_string()),
        };
        self.subst_inner(from, s, &by, &[to.to_string()])
    }

    /// α-equivalence: equal up to consistent renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        alpha(self, other, &mut Vec::new(), &mut Vec::new())
    }

    /// No second- or third-sort quantifier occurs.
    pub fn is_arithmetic(&self) -> bool {
        match self {
            Formula::Eq(..) | Formula::In1(..) | Formula::In2(..) | Formula::Prec(..) => true,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_arithmetic() && b.is_arithmetic()
            }
            Formula::Not(a) => a.is_arithmetic(),
            Formula::ForAll(s, _, b) | Formula::Exists(s, _, b) => {
                *s == Sort::First && b.is_arithmetic()
            }
        }
    }

    /// Built from arithmetic atoms and `t ∈₁ x`, with `∧`, `∨`, `→` (x never
    /// in an antecedent), `¬` (as `→ ⊥`) and first-sort quantifiers.
    pub fn is_strictly_positive(&self, x: &str) -> bool {
        match self {
            Formula::Eq(..) => true,
            Formula::In1(_, y) => y == x,
            Formula::In2(..) | Formula::Prec(..) => false,
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.is_strictly_positive(x) && b.is_strictly_positive(x)
            }
            Formula::Implies(a, b) => {
                !a.is_free(x, Sort::Second)
                    && a.is_strictly_positive(x)
                    && b.is_strictly_positive(x)
            }
            Formula::Not(a) => !a.is_free(x, Sort::Second) && a.is_strictly_positive(x),
            Formula::ForAll(s, _, b) | Formula::Exists(s, _, b) => {
                *s == Sort::First && b.is_strictly_positive(x)
            }
        }
    }

    /// Replaces every `t ∈₁ x` by `θ(t)`, where `θ` has the first-sort hole
    /// `hole`. Binders of `self` that would capture a free variable of `θ`
    /// are renamed first.
    pub fn positive_substitute(
        &self,
        x: &str,
        theta: &Formula,
        hole: &str,
    ) -> Result<Formula, SyntaxError> {
        if !self.is_strictly_positive(x) {
            return Err(SyntaxError::NotStrictlyPositive(x.to_string()));
        }
        let theta_free: Vec<String> = theta
            .free_vars_ordered()
            .into_iter()
            .filter(|(n, s)| !(n == hole && *s == Sort::First))
            .map(|(n, _)| n)
            .collect();
        Ok(self.pos_subst(x, theta, hole, &theta_free))
    }

    fn pos_subst(&self, x: &str, theta: &Formula, hole: &str, theta_free: &[String]) -> Formula {
        let rec = |f: &Formula| f.pos_subst(x, theta, hole, theta_free);
        match self {
            Formula::In1(t, y) if y == x => theta
                .substitute(hole, Sort::First, &Subst::Term(t.clone()))
                .expect("first-sort term"),
            Formula::Eq(..) | Formula::In1(..) | Formula::In2(..) | Formula::Prec(..) => {
                self.clone()
            }
            Formula::And(a, b) => Formula::and(rec(a), rec(b)),
            Formula::Or(a, b) => Formula::or(rec(a), rec(b)),
            Formula::Implies(a, b) => Formula::implies(rec(a), rec(b)),
            Formula::Not(a) => Formula::not(rec(a)),
            Formula::ForAll(s, v, b) | Formula::Exists(s, v, b) => {
                let (v, b) = if theta_free.contains(v) {
                    let mut avoid = b.all_names();
                    avoid.extend(theta.all_names());
                    avoid.insert(x.to_string());
                    let fresh = fresh_name(v, &avoid);
                    let nb = b.rename_free(v, *s, &fresh);
                    (fresh, nb)
                } else {
                    (v.clone(), (**b).clone())
                };
                let nb = Box::new(b.pos_subst(x, theta, hole, theta_free));
                if matches!(self, Formula::ForAll(..)) {
                    Formula::ForAll(*s, v, nb)
                } else {
                    Formula::Exists(*s, v, nb)
                }
            }
        }
    }

    /// Structural size, used to bound search heuristics.
    pub fn size(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::In1(..) | Formula::In2(..) | Formula::Prec(..) => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.size() + b.size()
            }
            Formula::Not(a) => 1 + a.size(),
            Formula::ForAll(_, _, b) | Formula::Exists(_, _, b) => 1 + b.size(),
        }
    }
}

fn by_binds(by: &Subst, s: Sort, bv: &str, bs: Sort) -> bool {
    // would `bv` (of sort `bs`) capture a variable of `by`?
    match by {
        Subst::Term(t) => bs == Sort::First && t.has_var(bv),
        Subst::Var(name) => bs == s && name == bv,
    }
}

/// `base`, or `base_1`, `base_2`, … whichever is first not in `avoid`.
pub fn fresh_name(base: &str, avoid: &HashSet<String>) -> String {
    let stem = match base.rfind('_') {
        Some(i) if base[i + 1..].chars().all(|c| c.is_ascii_digit()) && i + 1 < base.len() => {
            &base[..i]
        }
        _ => base,
    };
    if !avoid.contains(stem) {
        return stem.to_string();
    }
    (1..)
        .map(|i| format!("{stem}_{i}"))
        .find(|c| !avoid.contains(c))
        .unwrap()
}

fn alpha(a: &Formula, b: &Formula, ea: &mut Vec<Var>, eb: &mut Vec<Var>) -> bool {
    // bound variables are compared by binder depth, free ones by name
    fn idx(env: &[Var], n: &str, s: Sort) -> Option<usize> {
        env.iter().rposition(|(m, t)| m == n && *t == s)
    }
    fn same_var(n1: &str, n2: &str, s: Sort, ea: &[Var], eb: &[Var]) -> bool {
        match (idx(ea, n1, s), idx(eb, n2, s)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => n1 == n2,
            _ => false,
        }
    }
    fn same_term(t: &FoTerm, u: &FoTerm, ea: &[Var], eb: &[Var]) -> bool {
        match (t, u) {
            (FoTerm::Var(x), FoTerm::Var(y)) => same_var(x, y, Sort::First, ea, eb),
            (FoTerm::Zero, FoTerm::Zero) => true,
            (FoTerm::Succ(x), FoTerm::Succ(y)) => same_term(x, y, ea, eb),
            (FoTerm::Add(a, b), FoTerm::Add(c, d)) | (FoTerm::Mul(a, b), FoTerm::Mul(c, d)) => {
                same_term(a, c, ea, eb) && same_term(b, d, ea, eb)
            }
            _ => false,
        }
    }
    match (a, b) {
        (Formula::Eq(t1, s1), Formula::Eq(t2, s2)) => {
            same_term(t1, t2, ea, eb) && same_term(s1, s2, ea, eb)
        }
        (Formula::In1(t1, x1), Formula::In1(t2, x2)) => {
            same_term(t1, t2, ea, eb) && same_var(x1, x2, Sort::Second, ea, eb)
        }
        (Formula::In2(x1, c1), Formula::In2(x2, c2)) => {
            same_var(x1, x2, Sort::Second, ea, eb) && same_var(c1, c2, Sort::Third, ea, eb)
        }
        (Formula::Prec(x1, y1), Formula::Prec(x2, y2)) => {
            same_var(x1, x2, Sort::Second, ea, eb) && same_var(y1, y2, Sort::Second, ea, eb)
        }
        (Formula::And(a1, b1), Formula::And(a2, b2))
        | (Formula::Or(a1, b1), Formula::Or(a2, b2))
        | (Formula::Implies(a1, b1), Formula::Implies(a2, b2)) => {
            alpha(a1, a2, ea, eb) && alpha(b1, b2, ea, eb)
        }
        (Formula::Not(a1), Formula::Not(a2)) => alpha(a1, a2, ea, eb),
        (Formula::ForAll(s1, v1, b1), Formula::ForAll(s2, v2, b2))
        | (Formula::Exists(s1, v1, b1), Formula::Exists(s2, v2, b2)) => {
            if s1 != s2 {
                return false;
            }
            ea.push((v1.clone(), *s1));
            eb.push((v2.clone(), *s2));
            let r = alpha(b1, b2, ea, eb);
            ea.pop();
            eb.pop();
            r
        }
        _ => false,
    }
}

fn binder_word(all: bool, s: Sort) -> &'static str {
    match (all, s) {
        (true, Sort::First) => "forall-n",
        (true, Sort::Second) => "forall-s",
        (true, Sort::Third) => "forall-t",
        (false, Sort::First) => "exists-n",
        (false, Sort::Second) => "exists-s",
        (false, Sort::Third) => "exists-t",
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(a, b) => write!(f, "(= {a} {b})"),
            Formula::In1(t, x) => write!(f, "(in1 {t} {x})"),
            Formula::In2(x, c) => write!(f, "(in2 {x} {c})"),
            Formula::Prec(x, y) => write!(f, "(prec {x} {y})"),
            Formula::And(a, b) => write!(f, "(and {a} {b})"),
            Formula::Or(a, b) => write!(f, "(or {a} {b})"),
            Formula::Not(a) => write!(f, "(not {a})"),
            Formula::Implies(a, b) => write!(f, "(-> {a} {b})"),
            Formula::ForAll(s, v, b) => write!(f, "({} {v} {b})", binder_word(true, *s)),
            Formula::Exists(s, v, b) => write!(f, "({} {v} {b})", binder_word(false, *s)),
        }
    }
}

/// Header lines `(declare v sort)` needed so that the printed form of a
/// formula re-parses with the same sorts.
pub fn declarations_for(f: &Formula) -> String {
    let mut out = String::new();
    for (n, s) in f.free_vars_ordered() {
        out.push_str(&format!("(declare {n} {})\n", s.letter()));
    }
    out
}

/// Sorts of the free variables, keyed by name.
pub fn sort_map(f: &Formula) -> HashMap<String, Sort> {
    f.free_vars_ordered().into_iter().collect()
}
