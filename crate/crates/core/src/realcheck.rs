//! Bounded checking of the realisability relation `d ⊩ φ`.
//!
//! ```text
//! d ⊩ t = s      ⇔ t = s
//! d ⊩ t ∈₁ X     ⇔ X t = 1               (likewise ∈₂ and ≺ through r)
//! d ⊩ φ ∧ ψ      ⇔ d₀ ⊩ φ and d₁ ⊩ ψ
//! d ⊩ φ ∨ ψ      ⇔ d₀ = 0 and d₁ ⊩ φ, or d₀ = 1 and d₁ ⊩ ψ
//! d ⊩ ¬φ         ⇔ nothing realises φ
//! d ⊩ φ → ψ      ⇔ d e ⊩ ψ for every e ⊩ φ
//! d ⊩ ∀x φ(x)    ⇔ d a ⊩ φ(a) for every a
//! d ⊩ ∃x φ(x)    ⇔ d₁ ⊩ φ(d₀)
//! ```
//!
//! Unbounded parts are cut off: first-sort `∀` is tested below `N`, set
//! and class quantifiers over sample values, `→` over a pool of candidate
//! realisers of the antecedent. Truncation can only turn an answer into
//! `Unknown` or a bounded `Yes`; `No` is reported only for failures that
//! no larger bound could repair.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde_json::json;

use crate::extractor::{self, parameter_layout, ExtractError, ExtractOptions, Extraction};
use crate::kernel::{Proof, Theory};
use crate::pca::{self, CombTerm, EvalError, Machine, NodeId};
use crate::syntax::{FoTerm, Formula, Sort, Var};

type T = CombTerm;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict3 {
    Yes,
    No(String),
    Unknown(String),
}

impl Verdict3 {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict3::Yes)
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict3::No(_))
    }

    pub fn word(&self) -> &'static str {
        match self {
            Verdict3::Yes => "yes",
            Verdict3::No(_) => "no",
            Verdict3::Unknown(_) => "unknown",
        }
    }

    pub fn reason(&self) -> Option<&str> {
        match self {
            Verdict3::Yes => None,
            Verdict3::No(r) | Verdict3::Unknown(r) => Some(r),
        }
    }

    fn and(self, other: impl FnOnce() -> Verdict3) -> Verdict3 {
        match self {
            Verdict3::No(_) => self,
            Verdict3::Yes => other(),
            Verdict3::Unknown(r) => match other() {
                n @ Verdict3::No(_) => n,
                _ => Verdict3::Unknown(r),
            },
        }
    }

    fn or(self, other: impl FnOnce() -> Verdict3) -> Verdict3 {
        match self {
            Verdict3::Yes => self,
            Verdict3::No(_) => other(),
            Verdict3::Unknown(r) => match other() {
                Verdict3::Yes => Verdict3::Yes,
                _ => Verdict3::Unknown(r),
            },
        }
    }

    fn negate(self, why: &str) -> Verdict3 {
        match self {
            Verdict3::Yes => Verdict3::No(why.to_string()),
            Verdict3::No(_) => Verdict3::Yes,
            u => u,
        }
    }
}

impl fmt::Display for Verdict3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict3::Yes => f.write_str("Yes"),
            Verdict3::No(r) => write!(f, "No ({r})"),
            Verdict3::Unknown(r) => write!(f, "Unknown ({r})"),
        }
    }
}

fn unknown(e: EvalError) -> Verdict3 {
    match e {
        EvalError::OutOfFuel => Verdict3::Unknown("out of fuel".into()),
        // an application that gets stuck is undefined, so nothing is realised
        EvalError::Stuck(s) => Verdict3::No(format!("undefined: {s}")),
    }
}

/// Sample sets: empty, everything, `{0}`, `{1}`, the even numbers.
pub fn default_set_samples() -> Vec<CombTerm> {
    let singleton = |k: u64| {
        pca::compile(&T::lam("n", T::apps(T::Cases, [T::num(1), T::num(0), T::var("n"), T::num(k)])))
            .unwrap()
    };
    let evens = T::app(
        T::Fix,
        pca::compile_open(&T::lam(
            "e",
            T::lam(
                "n",
                T::apps(
                    T::Cases,
                    [
                        T::num(1),
                        T::apps(
                            T::Cases,
                            [
                                T::num(0),
                                T::app(T::var("e"), T::app(T::Pred, T::app(T::Pred, T::var("n")))),
                                T::var("n"),
                                T::num(1),
                            ],
                        ),
                        T::var("n"),
                        T::num(0),
                    ],
                ),
            ),
        )),
    );
    vec![
        T::app(T::K, T::num(0)),
        T::app(T::K, T::num(1)),
        singleton(0),
        evens,
        singleton(1),
    ]
}

/// Sample classes: empty, everything, the sets containing 0.
pub fn default_class_samples() -> Vec<CombTerm> {
    vec![
        T::app(T::K, T::num(0)),
        T::app(T::K, T::num(1)),
        pca::compile(&T::lam("x", T::app(T::var("x"), T::num(0)))).unwrap(),
    ]
}

#[derive(Debug, Clone)]
pub struct Bounds {
    /// First-sort quantifier and search bound.
    pub n: u64,
    pub fuel: u64,
    pub set_samples: Vec<CombTerm>,
    pub class_samples: Vec<CombTerm>,
    /// How many values each free first-sort variable of a theorem takes.
    pub free_range: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds::new(50, 1_000_000)
    }
}

impl Bounds {
    pub fn new(n: u64, fuel: u64) -> Self {
        Bounds {
            n: n.max(1),
            fuel: fuel.max(1),
            set_samples: default_set_samples(),
            class_samples: default_class_samples(),
            free_range: n.clamp(1, 4),
        }
    }
}

/// Values for free variables and the interpretation of `≺`.
#[derive(Debug, Clone)]
pub struct Env {
    pub numbers: HashMap<String, BigUint>,
    pub sets: HashMap<String, CombTerm>,
    pub classes: HashMap<String, CombTerm>,
    pub prec_interp: CombTerm,
}

impl Default for Env {
    fn default() -> Self {
        Env {
            numbers: HashMap::new(),
            sets: HashMap::new(),
            classes: HashMap::new(),
            prec_interp: T::app(T::K, T::num(0)),
        }
    }
}

#[derive(Clone)]
enum Binding {
    Num(BigUint),
    Obj(NodeId),
}

/// Variable assignments in scope, innermost last.
#[derive(Clone, Default)]
struct Scope(Vec<(String, Sort, Binding)>);

impl Scope {
    fn num(&self, x: &str) -> Option<BigUint> {
        self.0.iter().rev().find_map(|(n, s, b)| match b {
            Binding::Num(k) if n == x && *s == Sort::First => Some(k.clone()),
            _ => None,
        })
    }

    fn obj(&self, x: &str, sort: Sort) -> Option<NodeId> {
        self.0.iter().rev().find_map(|(n, s, b)| match b {
            Binding::Obj(id) if n == x && *s == sort => Some(*id),
            _ => None,
        })
    }

    fn with(&self, x: &str, sort: Sort, b: Binding) -> Scope {
        let mut s = self.clone();
        s.0.push((x.to_string(), sort, b));
        s
    }
}

/// Most candidates tried for one antecedent.
const MAX_CANDIDATES: usize = 24;

struct Checker<'a> {
    m: Machine,
    bounds: &'a Bounds,
    prec: NodeId,
    set_samples: Vec<NodeId>,
    class_samples: Vec<NodeId>,
    /// Realisers known for closed formulas, tried as candidates.
    extra: Vec<(Formula, NodeId)>,
}

impl<'a> Checker<'a> {
    fn new(bounds: &'a Bounds, prec: &CombTerm) -> Result<Self, String> {
        let mut m = Machine::new(bounds.fuel);
        m.search_bound = Some(BigUint::from(bounds.n));
        let load = |m: &mut Machine, t: &CombTerm| {
            m.load(&pca::compile_open(t)).map_err(|e| e.to_string())
        };
        let prec = load(&mut m, prec)?;
        let set_samples = bounds
            .set_samples
            .iter()
            .map(|t| load(&mut m, t))
            .collect::<Result<_, _>>()?;
        let class_samples = bounds
            .class_samples
            .iter()
            .map(|t| load(&mut m, t))
            .collect::<Result<_, _>>()?;
        Ok(Checker {
            m,
            bounds,
            prec,
            set_samples,
            class_samples,
            extra: Vec::new(),
        })
    }

    fn load(&mut self, t: &CombTerm) -> Result<NodeId, Verdict3> {
        self.m
            .load(&pca::compile_open(t))
            .map_err(|e| Verdict3::Unknown(e.to_string()))
    }

    fn samples(&self, s: Sort) -> Vec<NodeId> {
        match s {
            Sort::Second => self.set_samples.clone(),
            _ => self.class_samples.clone(),
        }
    }

    fn term(&self, t: &FoTerm, sc: &Scope) -> Result<BigUint, Verdict3> {
        t.eval(&|x| sc.num(x))
            .ok_or_else(|| Verdict3::Unknown(format!("unassigned variable in {t}")))
    }

    fn obj(&self, x: &str, s: Sort, sc: &Scope) -> Result<NodeId, Verdict3> {
        sc.obj(x, s)
            .ok_or_else(|| Verdict3::Unknown(format!("unassigned {s}-sort variable {x}")))
    }

    /// `f a` evaluated to 0 or 1.
    fn bit(&mut self, f: NodeId, a: NodeId) -> Result<bool, Verdict3> {
        let x = self.m.app(f, a);
        match self.m.force_num(x).map_err(unknown)? {
            Some(k) if k.is_zero() => Ok(false),
            Some(k) if k == BigUint::from(1u32) => Ok(true),
            _ => Err(Verdict3::Unknown("membership value outside {0, 1}".into())),
        }
    }

    /// Truth of an atomic formula.
    fn atom(&mut self, f: &Formula, sc: &Scope) -> Result<bool, Verdict3> {
        Ok(match f {
            Formula::Eq(a, b) => self.term(a, sc)? == self.term(b, sc)?,
            Formula::In1(t, x) => {
                let k = self.term(t, sc)?;
                let k = self.m.num(k);
                let xs = self.obj(x, Sort::Second, sc)?;
                self.bit(xs, k)?
            }
            Formula::In2(x, c) => {
                let xs = self.obj(x, Sort::Second, sc)?;
                let cs = self.obj(c, Sort::Third, sc)?;
                self.bit(cs, xs)?
            }
            Formula::Prec(x, y) => {
                let xs = self.obj(x, Sort::Second, sc)?;
                let ys = self.obj(y, Sort::Second, sc)?;
                let pr = self.m.pair(xs, ys);
                let r = self.prec;
                self.bit(r, pr)?
            }
            _ => unreachable!("not atomic"),
        })
    }

    fn realizes(&mut self, d: NodeId, f: &Formula, sc: &Scope) -> Verdict3 {
        match self.realizes_inner(d, f, sc) {
            Ok(v) | Err(v) => v,
        }
    }

    fn realizes_inner(&mut self, d: NodeId, f: &Formula, sc: &Scope) -> Result<Verdict3, Verdict3> {
        Ok(match f {
            Formula::Eq(..) | Formula::In1(..) | Formula::In2(..) | Formula::Prec(..) => {
                if self.atom(f, sc)? {
                    Verdict3::Yes
                } else {
                    Verdict3::No(format!("{f} is false"))
                }
            }
            Formula::And(a, b) => {
                let Some((d0, d1)) = self.m.force_pair(d).map_err(unknown)? else {
                    return Ok(Verdict3::No("conjunction realiser is not a pair".into()));
                };
                self.realizes(d0, a, sc).and(|| self.realizes(d1, b, sc))
            }
            Formula::Or(a, b) => {
                let Some((d0, d1)) = self.m.force_pair(d).map_err(unknown)? else {
                    return Ok(Verdict3::No("disjunction realiser is not a pair".into()));
                };
                match self.m.force_num(d0).map_err(unknown)?.and_then(|k| k.to_u64()) {
                    Some(0) => self.realizes(d1, a, sc),
                    Some(1) => self.realizes(d1, b, sc),
                    _ => Verdict3::No("disjunction tag outside {0, 1}".into()),
                }
            }
            Formula::Not(a) => self.inhabited(a, sc).negate("the negated formula is realised"),
            Formula::Implies(a, b) => self.implication(d, a, b, sc)?,
            Formula::ForAll(Sort::First, x, body) => {
                let mut acc = Verdict3::Yes;
                for k in 0..self.bounds.n {
                    let kn = self.m.num_u64(k);
                    let dk = self.m.app(d, kn);
                    let inner = sc.with(x, Sort::First, Binding::Num(BigUint::from(k)));
                    let v = self.realizes(dk, body, &inner);
                    acc = acc.and(|| v);
                    if acc.is_no() {
                        break;
                    }
                }
                acc
            }
            Formula::ForAll(s, x, body) => {
                let mut acc = Verdict3::Yes;
                for smp in self.samples(*s) {
                    let ds = self.m.app(d, smp);
                    let inner = sc.with(x, *s, Binding::Obj(smp));
                    let v = self.realizes(ds, body, &inner);
                    acc = acc.and(|| v);
                    if acc.is_no() {
                        break;
                    }
                }
                acc
            }
            Formula::Exists(s, x, body) => {
                let Some((d0, d1)) = self.m.force_pair(d).map_err(unknown)? else {
                    return Ok(Verdict3::No("existential realiser is not a pair".into()));
                };
                let b = if *s == Sort::First {
                    match self.m.force_num(d0).map_err(unknown)? {
                        Some(k) => Binding::Num(k),
                        None => return Ok(Verdict3::No("first-sort witness is not a numeral".into())),
                    }
                } else {
                    if let Some(v) = self.member_check(d0, *s)? {
                        return Ok(v);
                    }
                    Binding::Obj(d0)
                };
                self.realizes(d1, body, &sc.with(x, *s, b))
            }
        })
    }

    /// A set witness must map the tested numerals into {0, 1}; a class
    /// witness must do the same on the sample sets.
    fn member_check(&mut self, w: NodeId, s: Sort) -> Result<Option<Verdict3>, Verdict3> {
        let probes: Vec<NodeId> = if s == Sort::Second {
            (0..self.bounds.n.min(16)).map(|k| self.m.num_u64(k)).collect()
        } else {
            self.set_samples.clone()
        };
        for a in probes {
            match self.bit(w, a) {
                Ok(_) => {}
                Err(Verdict3::Unknown(r)) if r.starts_with("membership") => {
                    return Ok(Some(Verdict3::No(format!("witness is not a {s}-sort object"))))
                }
                Err(e) => return Err(e),
            }
        }
        Ok(None)
    }

    fn implication(&mut self, d: NodeId, a: &Formula, b: &Formula, sc: &Scope) -> Result<Verdict3, Verdict3> {
        if self.inhabited(a, sc).is_no() {
            return Ok(Verdict3::Yes);
        }
        let mut cands = Vec::new();
        for (g, id) in &self.extra {
            if g.alpha_eq(a) {
                cands.push(*id);
            }
        }
        for t in self.candidates(a) {
            cands.push(self.load(&t)?);
        }
        let exact = exact_shape(a);
        let mut tested = 0;
        let mut acc = Verdict3::Yes;
        for e in cands.into_iter().take(MAX_CANDIDATES) {
            if !self.realizes(e, a, sc).is_yes() {
                continue;
            }
            tested += 1;
            let de = self.m.app(d, e);
            let v = match self.realizes(de, b, sc) {
                Verdict3::No(r) if !exact => Verdict3::Unknown(format!("bounded antecedent: {r}")),
                v => v,
            };
            acc = acc.and(|| v);
            if acc.is_no() {
                return Ok(acc);
            }
        }
        if tested == 0 {
            return Ok(Verdict3::Unknown(format!("no candidate realiser for {a}")));
        }
        Ok(acc)
    }

    /// Whether some realiser of `f` exists: Yes when one is found, No when
    /// none can exist, Unknown otherwise.
    fn inhabited(&mut self, f: &Formula, sc: &Scope) -> Verdict3 {
        match f {
            Formula::Eq(..) | Formula::In1(..) | Formula::In2(..) | Formula::Prec(..) => {
                match self.atom(f, sc) {
                    Ok(true) => Verdict3::Yes,
                    Ok(false) => Verdict3::No(format!("{f} is false")),
                    Err(v) => v,
                }
            }
            Formula::And(a, b) => self.inhabited(a, sc).and(|| self.inhabited(b, sc)),
            Formula::Or(a, b) => self.inhabited(a, sc).or(|| self.inhabited(b, sc)),
            Formula::Not(a) => self.inhabited(a, sc).negate("the negated formula is realised"),
            Formula::Implies(a, b) => match self.inhabited(b, sc) {
                Verdict3::Yes => Verdict3::Yes,
                vb => match self.inhabited(a, sc) {
                    Verdict3::No(_) => Verdict3::Yes,
                    Verdict3::Yes if vb.is_no() => vb,
                    _ => Verdict3::Unknown(format!("cannot decide whether {f} is realised")),
                },
            },
            Formula::ForAll(Sort::First, x, body) => {
                for k in 0..self.bounds.n {
                    let inner = sc.with(x, Sort::First, Binding::Num(BigUint::from(k)));
                    if let v @ Verdict3::No(_) = self.inhabited(body, &inner) {
                        return v;
                    }
                }
                Verdict3::Unknown(format!("{f} checked only below {}", self.bounds.n))
            }
            Formula::Exists(Sort::First, x, body) => {
                for k in 0..self.bounds.n {
                    let inner = sc.with(x, Sort::First, Binding::Num(BigUint::from(k)));
                    if self.inhabited(body, &inner).is_yes() {
                        return Verdict3::Yes;
                    }
                }
                Verdict3::Unknown(format!("no witness for {f} below {}", self.bounds.n))
            }
            Formula::ForAll(s, x, body) => {
                for smp in self.samples(*s) {
                    if let v @ Verdict3::No(_) = self.inhabited(body, &sc.with(x, *s, Binding::Obj(smp))) {
                        return v;
                    }
                }
                Verdict3::Unknown(format!("{f} checked only on samples"))
            }
            Formula::Exists(s, x, body) => {
                for smp in self.samples(*s) {
                    if self.inhabited(body, &sc.with(x, *s, Binding::Obj(smp))).is_yes() {
                        return Verdict3::Yes;
                    }
                }
                Verdict3::Unknown(format!("no sample witness for {f}"))
            }
        }
    }

    /// Candidate realisers for `f`, built from its shape.
    fn candidates(&self, f: &Formula) -> Vec<CombTerm> {
        let mut out = self.shape_candidates(f, 2);
        out.truncate(MAX_CANDIDATES);
        out
    }

    fn shape_candidates(&self, f: &Formula, depth: usize) -> Vec<CombTerm> {
        let zero = T::num(0);
        let cap = |mut v: Vec<CombTerm>| {
            v.truncate(8);
            v
        };
        match f {
            Formula::Eq(..) | Formula::In1(..) | Formula::In2(..) | Formula::Prec(..) | Formula::Not(_) => {
                vec![zero]
            }
            Formula::And(a, b) => {
                let (ca, cb) = (self.shape_candidates(a, depth), self.shape_candidates(b, depth));
                let mut out = Vec::new();
                for x in &ca {
                    for y in &cb {
                        out.push(T::pair(x.clone(), y.clone()));
                    }
                }
                cap(out)
            }
            Formula::Or(a, b) => {
                let mut out: Vec<CombTerm> = self
                    .shape_candidates(a, depth)
                    .into_iter()
                    .take(4)
                    .map(|c| T::pair(T::num(0), c))
                    .collect();
                out.extend(
                    self.shape_candidates(b, depth)
                        .into_iter()
                        .take(4)
                        .map(|c| T::pair(T::num(1), c)),
                );
                out
            }
            Formula::Implies(_, b) | Formula::ForAll(_, _, b) => cap(self
                .shape_candidates(b, depth)
                .into_iter()
                .map(|c| T::app(T::K, c))
                .collect()),
            Formula::Exists(s, _, b) => {
                let inner = if depth == 0 {
                    vec![zero]
                } else {
                    self.shape_candidates(b, depth - 1)
                };
                let witnesses: Vec<CombTerm> = match s {
                    Sort::First => (0..self.bounds.n.min(4)).map(T::num).collect(),
                    Sort::Second => self.bounds.set_samples.clone(),
                    Sort::Third => self.bounds.class_samples.clone(),
                };
                let mut out = Vec::new();
                for w in witnesses {
                    for c in inner.iter().take(2) {
                        out.push(T::pair(w.clone(), c.clone()));
                    }
                }
                out
            }
        }
    }
}

/// Formulas whose bounded `Yes` is exact: no universal quantifier or
/// implication that could have been truncated.
fn exact_shape(f: &Formula) -> bool {
    match f {
        Formula::Eq(..) | Formula::In1(..) | Formula::In2(..) | Formula::Prec(..) => true,
        Formula::And(a, b) | Formula::Or(a, b) => exact_shape(a) && exact_shape(b),
        Formula::Not(_) => true,
        Formula::Exists(_, _, b) => exact_shape(b),
        Formula::Implies(..) | Formula::ForAll(..) => false,
    }
}

fn scope_of(env: &Env, m: &mut Machine) -> Result<Scope, Verdict3> {
    let mut sc = Scope::default();
    for (n, k) in &env.numbers {
        sc.0.push((n.clone(), Sort::First, Binding::Num(k.clone())));
    }
    for (map, s) in [(&env.sets, Sort::Second), (&env.classes, Sort::Third)] {
        for (n, t) in map {
            let id = m
                .load(&pca::compile_open(t))
                .map_err(|e| Verdict3::Unknown(e.to_string()))?;
            sc.0.push((n.clone(), s, Binding::Obj(id)));
        }
    }
    Ok(sc)
}

fn finish(v: Verdict3, m: &Machine) -> Verdict3 {
    if v.is_yes() && m.exhausted_searches > 0 {
        Verdict3::Unknown("search stopped at the bound without a hit".into())
    } else {
        v
    }
}

/// Checks `d ⊩ φ` with free variables assigned by `env`.
pub fn realizes(d: &CombTerm, f: &Formula, env: &Env, b: &Bounds) -> Verdict3 {
    let mut ck = match Checker::new(b, &env.prec_interp) {
        Ok(c) => c,
        Err(e) => return Verdict3::Unknown(e),
    };
    let sc = match scope_of(env, &mut ck.m) {
        Ok(s) => s,
        Err(v) => return v,
    };
    let d = match ck.load(d) {
        Ok(d) => d,
        Err(v) => return v,
    };
    let v = ck.realizes(d, f, &sc);
    finish(v, &ck.m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Number(BigUint),
    Object(CombTerm),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Number(n) => write!(f, "{n}"),
            Witness::Object(t) => write!(f, "{t}"),
        }
    }
}

/// The witness component `d₀` of a realiser of an existential formula.
pub fn witness(d: &CombTerm, f: &Formula, fuel: u64) -> Result<Witness, String> {
    let Formula::Exists(s, _, _) = f else {
        return Err("formula is not existential".into());
    };
    let mut m = Machine::new(fuel);
    let id = m.load(&pca::compile_open(d)).map_err(|e| e.to_string())?;
    let (d0, _) = m
        .force_pair(id)
        .map_err(|e| e.to_string())?
        .ok_or("realiser is not a pair")?;
    if *s == Sort::First {
        match m.force_num(d0).map_err(|e| e.to_string())? {
            Some(k) => Ok(Witness::Number(k)),
            None => Err("first-sort witness is not a numeral".into()),
        }
    } else {
        let v = m.whnf(d0).map_err(|e| e.to_string())?;
        Ok(Witness::Object(m.readback(v)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Found {
    Exists { var: String, sort: Sort, value: Witness },
    Or { tag: u64 },
}

#[derive(Debug, Clone)]
pub struct Report {
    pub verdict: Verdict3,
    pub witnesses: Vec<Found>,
    pub fuel_used: u64,
    pub n: u64,
    pub fuel: u64,
    pub assignments: usize,
}

impl Report {
    pub fn to_json(&self) -> serde_json::Value {
        let ws: Vec<_> = self
            .witnesses
            .iter()
            .map(|w| match w {
                Found::Exists { var, sort, value } => json!({
                    "kind": "exists", "var": var, "sort": sort.letter(), "value": value.to_string(),
                }),
                Found::Or { tag } => json!({"kind": "or", "tag": tag}),
            })
            .collect();
        let mut j = json!({
            "schema": 1,
            "verdict": self.verdict.word(),
            "witnesses": ws,
            "fuel_used": self.fuel_used,
            "bounds": {"n": self.n, "fuel": self.fuel},
            "assignments": self.assignments,
        });
        if let Some(r) = self.verdict.reason() {
            j["reason"] = json!(r);
        }
        j
    }
}

/// Walks top-level `∃`, `∨` and `∧`, recording witnesses and tags.
fn collect_witnesses(ck: &mut Checker, d: NodeId, f: &Formula, out: &mut Vec<Found>) -> Result<(), EvalError> {
    match f {
        Formula::Exists(s, x, body) => {
            let Some((d0, d1)) = ck.m.force_pair(d)? else { return Ok(()) };
            let value = if *s == Sort::First {
                match ck.m.force_num(d0)? {
                    Some(k) => Witness::Number(k),
                    None => return Ok(()),
                }
            } else {
                let v = ck.m.whnf(d0)?;
                Witness::Object(ck.m.readback(v))
            };
            out.push(Found::Exists {
                var: x.clone(),
                sort: *s,
                value,
            });
            collect_witnesses(ck, d1, body, out)
        }
        Formula::Or(a, b) => {
            let Some((d0, d1)) = ck.m.force_pair(d)? else { return Ok(()) };
            let Some(tag) = ck.m.force_num(d0)?.and_then(|k| k.to_u64()) else { return Ok(()) };
            out.push(Found::Or { tag });
            match tag {
                0 => collect_witnesses(ck, d1, a, out),
                1 => collect_witnesses(ck, d1, b, out),
                _ => Ok(()),
            }
        }
        Formula::And(a, b) => {
            let Some((d0, d1)) = ck.m.force_pair(d)? else { return Ok(()) };
            collect_witnesses(ck, d0, a, out)?;
            collect_witnesses(ck, d1, b, out)
        }
        _ => Ok(()),
    }
}

/// Assignments for the free variables of a theorem: values from `env`
/// where given, otherwise every combination of small numerals and
/// samples, capped.
fn assignments(layout: &[Var], env: &Env, b: &Bounds) -> Vec<Vec<(Var, T)>> {
    const CAP: usize = 64;
    let mut out: Vec<Vec<(Var, T)>> = vec![vec![]];
    for v in layout {
        let (name, s) = v;
        let choices: Vec<T> = match s {
            Sort::First => match env.numbers.get(name) {
                Some(k) => vec![T::Num(k.clone())],
                None => (0..b.free_range).map(T::num).collect(),
            },
            Sort::Second => match env.sets.get(name) {
                Some(t) => vec![t.clone()],
                None => b.set_samples.clone(),
            },
            Sort::Third => match env.classes.get(name) {
                Some(t) => vec![t.clone()],
                None => b.class_samples.clone(),
            },
        };
        let mut next = Vec::new();
        'outer: for a in &out {
            for c in &choices {
                let mut a2 = a.clone();
                a2.push((v.clone(), c.clone()));
                next.push(a2);
                if next.len() >= CAP {
                    break 'outer;
                }
            }
        }
        out = next;
    }
    out
}

/// Extracts a realiser for the theorem of `p` and checks it.
pub fn check_theorem(p: &Proof, th: Theory, env: &Env, b: &Bounds) -> Result<Report, ExtractError> {
    let opts = ExtractOptions {
        prec_interp: env.prec_interp.clone(),
    };
    let ex = extractor::extract(p, th, &opts)?;
    Ok(check_extraction(p, &ex, env, b))
}

pub fn check_extraction(p: &Proof, ex: &Extraction, env: &Env, b: &Bounds) -> Report {
    let report = |verdict, witnesses, fuel_used, assignments| Report {
        verdict,
        witnesses,
        fuel_used,
        n: b.n,
        fuel: b.fuel,
        assignments,
    };
    if ex.placeholder {
        return report(Verdict3::Unknown("nonconstructive stand-in".into()), vec![], 0, 0);
    }
    let theorem = &p.lines.last().expect("extraction needs a line").formula;
    let mut ck = match Checker::new(b, &env.prec_interp) {
        Ok(c) => c,
        Err(e) => return report(Verdict3::Unknown(e), vec![], 0, 0),
    };
    let compiled = ex.compiled();
    let realiser = match ck.load(&compiled) {
        Ok(r) => r,
        Err(v) => return report(v, vec![], 0, 0),
    };
    // realisers of closed lines join the candidate pool for implications
    for (i, line) in p.lines.iter().enumerate() {
        if line.formula.free_vars().is_empty() && i + 1 < p.lines.len() {
            let sub = extractor::extract(&p.prefix(i + 1), Theory::CmGwo, &ExtractOptions {
                prec_interp: env.prec_interp.clone(),
            });
            if let Ok(sub) = sub {
                if !sub.placeholder {
                    if let Ok(id) = ck.load(&T::app(sub.compiled(), T::num(0))) {
                        ck.extra.push((line.formula.clone(), id));
                    }
                }
            }
        }
    }
    let base = match scope_of(env, &mut ck.m) {
        Ok(s) => s,
        Err(v) => return report(v, vec![], ck.m.fuel_used(), 0),
    };
    let layout = parameter_layout(theorem);
    debug_assert_eq!(layout, ex.layout);
    let all = assignments(&layout, env, b);
    let mut verdict = Verdict3::Yes;
    let mut witnesses = Vec::new();
    for (k, asg) in all.iter().enumerate() {
        let mut sc = base.clone();
        let mut vals = Vec::new();
        for ((name, s), t) in asg {
            let binding = match (s, t) {
                (Sort::First, T::Num(n)) => Binding::Num(n.clone()),
                _ => match ck.load(t) {
                    Ok(id) => Binding::Obj(id),
                    Err(v) => return report(v, witnesses, ck.m.fuel_used(), all.len()),
                },
            };
            vals.push(t.clone());
            sc.0.push((name.clone(), *s, binding));
        }
        let params = match ck.load(&extractor::tuple(vals)) {
            Ok(id) => id,
            Err(v) => return report(v, witnesses, ck.m.fuel_used(), all.len()),
        };
        let d = ck.m.app(realiser, params);
        let v = ck.realizes(d, theorem, &sc);
        if k == 0 && v.is_yes() {
            let _ = collect_witnesses(&mut ck, d, theorem, &mut witnesses);
        }
        verdict = verdict.and(|| v);
        if verdict.is_no() {
            break;
        }
    }
    let verdict = finish(verdict, &ck.m);
    report(verdict, witnesses, ck.m.fuel_used(), all.len())
}

#[cfg(test)]
mod tests;
