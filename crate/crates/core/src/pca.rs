//! Combinatory logic with arithmetic: `K`, `S`, numerals, successor,
//! predecessor, definition by cases, pairing, a fixpoint and an unbounded
//! search operator, evaluated by a fueled call-by-need graph reducer.
//!
//! Reduction rules (one unit of fuel each):
//!
//! ```text
//! K a b           → a
//! S a b c         → a c (b c)
//! SUCC n          → n+1
//! PRED n          → max(n-1, 0)
//! CASES a b m n   → a if m = n, else b
//! P0 (P a b)      → a            P0 k → (unpair k).0
//! P1 (P a b)      → b            P1 k → (unpair k).1
//! FIX f x         → f (FIX f) x
//! MU f            → least n with f n = 1
//! ```
//!
//! Arguments in numeric positions (`SUCC`, `PRED`, the last two of `CASES`)
//! are forced to weak head normal form and must be numerals; `P0`/`P1`
//! force their argument to a pair or a numeral. `P a b` is a constructor.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::coding;
use crate::syntax::sexpr::{self, Sexp};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CombTerm {
    K,
    S,
    Num(BigUint),
    Succ,
    Pred,
    Cases,
    Pair,
    Proj0,
    Proj1,
    Fix,
    Mu,
    App(Rc<CombTerm>, Rc<CombTerm>),
    Lam(String, Rc<CombTerm>),
    Var(String),
}

use CombTerm as T;

impl CombTerm {
    pub fn num(n: u64) -> CombTerm {
        T::Num(BigUint::from(n))
    }

    pub fn var(v: &str) -> CombTerm {
        T::Var(v.to_string())
    }

    pub fn lam(v: &str, body: CombTerm) -> CombTerm {
        T::Lam(v.to_string(), Rc::new(body))
    }

    pub fn app(f: CombTerm, x: CombTerm) -> CombTerm {
        T::App(Rc::new(f), Rc::new(x))
    }

    /// Left-associated application `f a₁ … aₙ`.
    pub fn apps(f: CombTerm, args: impl IntoIterator<Item = CombTerm>) -> CombTerm {
        args.into_iter().fold(f, CombTerm::app)
    }

    pub fn pair(a: CombTerm, b: CombTerm) -> CombTerm {
        CombTerm::apps(T::Pair, [a, b])
    }

    /// `S K K`
    pub fn identity() -> CombTerm {
        CombTerm::apps(T::S, [T::K, T::K])
    }

    pub fn is_compiled(&self) -> bool {
        match self {
            T::Lam(..) | T::Var(_) => false,
            T::App(f, x) => f.is_compiled() && x.is_compiled(),
            _ => true,
        }
    }

    pub fn has_free(&self, v: &str) -> bool {
        match self {
            T::Var(x) => x == v,
            T::Lam(x, b) => x != v && b.has_free(v),
            T::App(f, x) => f.has_free(v) || x.has_free(v),
            _ => false,
        }
    }

    pub fn free_vars(&self) -> Vec<String> {
        fn go(t: &CombTerm, bound: &mut Vec<String>, out: &mut Vec<String>) {
            match t {
                T::Var(x) => {
                    if !bound.contains(x) && !out.contains(x) {
                        out.push(x.clone())
                    }
                }
                T::Lam(x, b) => {
                    bound.push(x.clone());
                    go(b, bound, out);
                    bound.pop();
                }
                T::App(f, x) => {
                    go(f, bound, out);
                    go(x, bound, out);
                }
                _ => {}
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Substitutes a closed term for a free variable. `by` must be closed,
    /// so no capture can occur.
    pub fn subst_closed(&self, v: &str, by: &CombTerm) -> CombTerm {
        match self {
            T::Var(x) if x == v => by.clone(),
            T::Lam(x, _) if x == v => self.clone(),
            T::Lam(x, b) => T::Lam(x.clone(), Rc::new(b.subst_closed(v, by))),
            T::App(f, x) => T::App(Rc::new(f.subst_closed(v, by)), Rc::new(x.subst_closed(v, by))),
            _ => self.clone(),
        }
    }

    /// Number of constructor nodes (shared subterms counted each time).
    pub fn size(&self) -> usize {
        match self {
            T::App(f, x) => 1 + f.size() + x.size(),
            T::Lam(_, b) => 1 + b.size(),
            _ => 1,
        }
    }

    fn spine(&self) -> (&CombTerm, Vec<&CombTerm>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let T::App(f, x) = cur {
            args.push(&**x);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }
}

impl fmt::Display for CombTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            T::K => f.write_str("K"),
            T::S => f.write_str("S"),
            T::Num(n) => write!(f, "(num {n})"),
            T::Succ => f.write_str("SUCC"),
            T::Pred => f.write_str("PRED"),
            T::Cases => f.write_str("CASES"),
            T::Pair => f.write_str("P"),
            T::Proj0 => f.write_str("P0"),
            T::Proj1 => f.write_str("P1"),
            T::Fix => f.write_str("FIX"),
            T::Mu => f.write_str("MU"),
            T::Var(v) => f.write_str(v),
            T::Lam(v, b) => write!(f, "(lam {v} {b})"),
            T::App(..) => {
                let (head, args) = self.spine();
                write!(f, "({head}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PcaError {
    #[error("{0}")]
    Parse(String),
    #[error("free variable `{0}` in a term that must be closed")]
    FreeVariable(String),
}

/// Parses the textual syntax: `K S SUCC PRED CASES P P0 P1 FIX MU`,
/// `(num n)` or a bare decimal, `(lam x t)`, `(app t u)` and juxtaposition
/// `(t u v …)`. Other identifiers are variables.
pub fn parse_term(src: &str) -> Result<CombTerm, PcaError> {
    let s = sexpr::read_one(src).map_err(|e| PcaError::Parse(format!("{}: {}", e.pos, e.msg)))?;
    from_sexp(&s)
}

pub fn from_sexp(s: &Sexp) -> Result<CombTerm, PcaError> {
    let err = |msg: String| PcaError::Parse(format!("{}: {msg}", s.pos()));
    match s {
        Sexp::Atom(a, _) => Ok(match a.as_str() {
            "K" => T::K,
            "S" => T::S,
            "SUCC" => T::Succ,
            "PRED" => T::Pred,
            "CASES" => T::Cases,
            "P" => T::Pair,
            "P0" => T::Proj0,
            "P1" => T::Proj1,
            "FIX" => T::Fix,
            "MU" => T::Mu,
            _ if a.chars().all(|c| c.is_ascii_digit()) => {
                T::Num(a.parse().map_err(|_| err(format!("bad numeral {a}")))?)
            }
            _ if a.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) => T::Var(a.clone()),
            _ => return Err(err(format!("unexpected atom `{a}`"))),
        }),
        Sexp::List(xs, _) => match xs.first().and_then(Sexp::as_atom) {
            Some("num") => {
                let [_, n] = xs.as_slice() else {
                    return Err(err("num takes one argument".into()));
                };
                let n = n
                    .as_atom()
                    .and_then(|a| a.parse::<BigUint>().ok())
                    .ok_or_else(|| err("num takes a decimal literal".into()))?;
                Ok(T::Num(n))
            }
            Some("lam") => {
                let [_, v, b] = xs.as_slice() else {
                    return Err(err("lam takes a variable and a body".into()));
                };
                let v = v.as_atom().ok_or_else(|| err("lam variable must be a name".into()))?;
                Ok(CombTerm::lam(v, from_sexp(b)?))
            }
            Some("app") => {
                let [_, f, x] = xs.as_slice() else {
                    return Err(err("app takes two arguments".into()));
                };
                Ok(CombTerm::app(from_sexp(f)?, from_sexp(x)?))
            }
            _ => {
                if xs.len() < 2 {
                    return Err(err("application needs a function and an argument".into()));
                }
                let mut it = xs.iter().map(from_sexp);
                let head = it.next().unwrap()?;
                it.try_fold(head, |acc, x| Ok(CombTerm::app(acc, x?)))
            }
        },
    }
}

/// `λ*v.t` by the three standard rules: `λ*v.v = S K K`, `λ*v.M = K M`
/// when `v` is not free in `M`, `λ*v.(M N) = S (λ*v.M) (λ*v.N)`.
/// Inner abstractions in `t` are compiled first.
pub fn bracket_abstract(v: &str, t: &CombTerm) -> CombTerm {
    let t = compile_open(t);
    abstract_compiled(v, &t)
}

fn abstract_compiled(v: &str, t: &CombTerm) -> CombTerm {
    match t {
        T::Var(x) if x == v => CombTerm::identity(),
        _ if !t.has_free(v) => CombTerm::app(T::K, t.clone()),
        T::App(m, n) => CombTerm::apps(T::S, [abstract_compiled(v, m), abstract_compiled(v, n)]),
        _ => unreachable!("λ-free term with free {v} is a variable or an application"),
    }
}

/// Eliminates every `Lam`, innermost first, leaving free variables in place.
pub fn compile_open(t: &CombTerm) -> CombTerm {
    match t {
        T::Lam(v, b) => abstract_compiled(v, &compile_open(b)),
        T::App(f, x) => {
            let (cf, cx) = (compile_open(f), compile_open(x));
            T::App(Rc::new(cf), Rc::new(cx))
        }
        _ => t.clone(),
    }
}

/// Compiles a closed λ-term to pure combinators.
pub fn compile(t: &CombTerm) -> Result<CombTerm, PcaError> {
    if let Some(v) = t.free_vars().into_iter().next() {
        return Err(PcaError::FreeVariable(v));
    }
    Ok(compile_open(t))
}

/// A term in weak head normal form, read back from the reducer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Value(pub CombTerm);

impl Value {
    pub fn as_num(&self) -> Option<&BigUint> {
        match &self.0 {
            T::Num(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_pair(&self) -> Option<(&CombTerm, &CombTerm)> {
        match &self.0 {
            T::App(f, b) => match &**f {
                T::App(p, a) if **p == T::Pair => Some((a, b)),
                _ => None,
            },
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Converged(Value, u64),
    OutOfFuel,
    Stuck(String),
}

impl Outcome {
    pub fn value(&self) -> Option<&Value> {
        match self {
            Outcome::Converged(v, _) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("out of fuel")]
    OutOfFuel,
    #[error("stuck: {0}")]
    Stuck(String),
}

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prim {
    K,
    S,
    Succ,
    Pred,
    Cases,
    Pair,
    Proj0,
    Proj1,
    Fix,
    Mu,
}

impl Prim {
    fn arity(self) -> usize {
        match self {
            Prim::Succ | Prim::Pred | Prim::Proj0 | Prim::Proj1 | Prim::Mu => 1,
            Prim::K | Prim::Pair | Prim::Fix => 2,
            Prim::S => 3,
            Prim::Cases => 4,
        }
    }

    fn strict(self) -> &'static [usize] {
        match self {
            Prim::Succ | Prim::Pred | Prim::Proj0 | Prim::Proj1 => &[0],
            Prim::Cases => &[2, 3],
            _ => &[],
        }
    }

    fn term(self) -> CombTerm {
        match self {
            Prim::K => T::K,
            Prim::S => T::S,
            Prim::Succ => T::Succ,
            Prim::Pred => T::Pred,
            Prim::Cases => T::Cases,
            Prim::Pair => T::Pair,
            Prim::Proj0 => T::Proj0,
            Prim::Proj1 => T::Proj1,
            Prim::Fix => T::Fix,
            Prim::Mu => T::Mu,
        }
    }
}

#[derive(Debug, Clone)]
enum Node {
    Prim(Prim),
    Num(BigUint),
    App(NodeId, NodeId),
    Ind(NodeId),
    /// search for the least n ≥ k with f n = 1
    MuAt(NodeId, BigUint),
}

/// Graph reducer. Nodes are never freed; a machine is meant for one
/// bounded job. Fuel is a budget shared by every evaluation on the machine.
pub struct Machine {
    nodes: Vec<Node>,
    whnf: Vec<bool>,
    fuel_left: u64,
    fuel_used: u64,
    /// When set, a search reaching this index returns it instead of
    /// continuing.
    pub search_bound: Option<BigUint>,
    /// How many searches hit `search_bound`.
    pub exhausted_searches: u64,
    prims: HashMap<u8, NodeId>,
}

impl Machine {
    pub fn new(fuel: u64) -> Self {
        Machine {
            nodes: Vec::new(),
            whnf: Vec::new(),
            fuel_left: fuel,
            fuel_used: 0,
            search_bound: None,
            exhausted_searches: 0,
            prims: HashMap::new(),
        }
    }

    pub fn fuel_used(&self) -> u64 {
        self.fuel_used
    }

    pub fn fuel_left(&self) -> u64 {
        self.fuel_left
    }

    fn push(&mut self, n: Node) -> NodeId {
        let value = matches!(n, Node::Num(_) | Node::Prim(_));
        self.nodes.push(n);
        self.whnf.push(value);
        self.nodes.len() - 1
    }

    pub fn prim(&mut self, p: Prim) -> NodeId {
        if let Some(&id) = self.prims.get(&(p as u8)) {
            return id;
        }
        let id = self.push(Node::Prim(p));
        self.prims.insert(p as u8, id);
        id
    }

    pub fn num(&mut self, n: BigUint) -> NodeId {
        self.push(Node::Num(n))
    }

    pub fn num_u64(&mut self, n: u64) -> NodeId {
        self.num(BigUint::from(n))
    }

    pub fn app(&mut self, f: NodeId, x: NodeId) -> NodeId {
        self.push(Node::App(f, x))
    }

    pub fn apps(&mut self, f: NodeId, xs: &[NodeId]) -> NodeId {
        xs.iter().fold(f, |acc, &x| self.app(acc, x))
    }

    pub fn pair(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let p = self.prim(Prim::Pair);
        self.apps(p, &[a, b])
    }

    /// Builds the graph of a compiled term, preserving `Rc` sharing.
    pub fn load(&mut self, t: &CombTerm) -> Result<NodeId, PcaError> {
        let mut memo = HashMap::new();
        self.load_memo(t, &mut memo)
    }

    fn load_memo(
        &mut self,
        t: &CombTerm,
        memo: &mut HashMap<*const CombTerm, NodeId>,
    ) -> Result<NodeId, PcaError> {
        Ok(match t {
            T::K => self.prim(Prim::K),
            T::S => self.prim(Prim::S),
            T::Succ => self.prim(Prim::Succ),
            T::Pred => self.prim(Prim::Pred),
            T::Cases => self.prim(Prim::Cases),
            T::Pair => self.prim(Prim::Pair),
            T::Proj0 => self.prim(Prim::Proj0),
            T::Proj1 => self.prim(Prim::Proj1),
            T::Fix => self.prim(Prim::Fix),
            T::Mu => self.prim(Prim::Mu),
            T::Num(n) => self.num(n.clone()),
            T::Var(v) => return Err(PcaError::FreeVariable(v.clone())),
            T::Lam(v, _) => return Err(PcaError::FreeVariable(format!("λ{v} (uncompiled)"))),
            T::App(f, x) => {
                let key_f = Rc::as_ptr(f);
                let key_x = Rc::as_ptr(x);
                let fid = match memo.get(&key_f) {
                    Some(&id) => id,
                    None => {
                        let id = self.load_memo(f, memo)?;
                        memo.insert(key_f, id);
                        id
                    }
                };
                let xid = match memo.get(&key_x) {
                    Some(&id) => id,
                    None => {
                        let id = self.load_memo(x, memo)?;
                        memo.insert(key_x, id);
                        id
                    }
                };
                self.app(fid, xid)
            }
        })
    }

    fn follow(&mut self, mut id: NodeId) -> NodeId {
        let start = id;
        while let Node::Ind(next) = self.nodes[id] {
            id = next;
        }
        // path compression
        let mut cur = start;
        while let Node::Ind(next) = self.nodes[cur] {
            self.nodes[cur] = Node::Ind(id);
            cur = next;
        }
        id
    }

    fn charge(&mut self) -> Result<(), EvalError> {
        if self.fuel_left == 0 {
            return Err(EvalError::OutOfFuel);
        }
        self.fuel_left -= 1;
        self.fuel_used += 1;
        Ok(())
    }

    fn arg(&self, spine: &[NodeId], i: usize) -> NodeId {
        match self.nodes[spine[spine.len() - 1 - i]] {
            Node::App(_, x) => x,
            _ => unreachable!("spine holds application nodes"),
        }
    }

    /// Reduces `root` to weak head normal form and returns the node holding
    /// the value.
    pub fn whnf(&mut self, root: NodeId) -> Result<NodeId, EvalError> {
        // (evaluation root, node to restart unwinding from)
        let mut dump: Vec<(NodeId, NodeId)> = Vec::new();
        let mut eval_root = root;
        let mut spine: Vec<NodeId> = Vec::new();
        let mut cur = root;
        loop {
            cur = self.follow(cur);
            match &self.nodes[cur] {
                Node::Ind(_) => unreachable!(),
                Node::App(f, _) => {
                    let f = *f;
                    spine.push(cur);
                    cur = f;
                    continue;
                }
                Node::Num(_) => {
                    if !spine.is_empty() {
                        return Err(EvalError::Stuck("numeral applied to an argument".into()));
                    }
                }
                Node::MuAt(f, k) => {
                    let (f, k) = (*f, k.clone());
                    self.charge()?;
                    let new = match &self.search_bound {
                        Some(b) if k >= *b => {
                            self.exhausted_searches += 1;
                            Node::Num(k)
                        }
                        _ => {
                            let kn = self.num(k.clone());
                            let next = self.push(Node::MuAt(f, k + 1u32));
                            let probe = self.app(f, kn);
                            let one = self.num(BigUint::one());
                            let cases = self.prim(Prim::Cases);
                            Node::Ind(self.apps(cases, &[kn, next, probe, one]))
                        }
                    };
                    let new = match new {
                        Node::Ind(id) => id,
                        n => self.push(n),
                    };
                    self.nodes[cur] = Node::Ind(new);
                    cur = new;
                    continue;
                }
                Node::Prim(p) => {
                    let p = *p;
                    let a = p.arity();
                    if spine.len() >= a {
                        if p == Prim::Pair {
                            if spine.len() > 2 {
                                return Err(EvalError::Stuck("pair applied to an argument".into()));
                            }
                        } else {
                            // force strict arguments first
                            let mut pending = None;
                            for &i in p.strict() {
                                let x = self.arg(&spine, i);
                                let x = self.follow(x);
                                if !self.whnf[x] {
                                    pending = Some(x);
                                    break;
                                }
                            }
                            if let Some(x) = pending {
                                dump.push((eval_root, spine[0]));
                                eval_root = x;
                                spine.clear();
                                cur = x;
                                continue;
                            }
                            let redex = spine[spine.len() - a];
                            let result = self.rule(p, &spine)?;
                            self.nodes[redex] = Node::Ind(result);
                            spine.truncate(spine.len() - a);
                            cur = result;
                            continue;
                        }
                    }
                }
            }
            // `cur` heads a value
            let v = self.follow(eval_root);
            self.whnf[v] = true;
            match dump.pop() {
                None => return Ok(v),
                Some((r, restart)) => {
                    eval_root = r;
                    spine.clear();
                    cur = restart;
                }
            }
        }
    }

    fn num_of(&self, id: NodeId) -> Option<&BigUint> {
        match &self.nodes[id] {
            Node::Num(n) => Some(n),
            _ => None,
        }
    }

    fn rule(&mut self, p: Prim, spine: &[NodeId]) -> Result<NodeId, EvalError> {
        let arg = |m: &mut Self, i: usize| {
            let x = m.arg(spine, i);
            m.follow(x)
        };
        let need_num = |m: &Self, id: NodeId, what: &str| -> Result<BigUint, EvalError> {
            m.num_of(id)
                .cloned()
                .ok_or_else(|| EvalError::Stuck(format!("{what} expects a numeral")))
        };
        self.charge()?;
        Ok(match p {
            Prim::K => arg(self, 0),
            Prim::S => {
                let (a, b, c) = (arg(self, 0), arg(self, 1), arg(self, 2));
                let ac = self.app(a, c);
                let bc = self.app(b, c);
                self.app(ac, bc)
            }
            Prim::Succ => {
                let x = arg(self, 0);
                let n = need_num(self, x, "SUCC")?;
                self.num(n + 1u32)
            }
            Prim::Pred => {
                let x = arg(self, 0);
                let n = need_num(self, x, "PRED")?;
                self.num(if n.is_zero() { n } else { n - 1u32 })
            }
            Prim::Cases => {
                let (m, n) = (arg(self, 2), arg(self, 3));
                let m = need_num(self, m, "CASES")?;
                let n = need_num(self, n, "CASES")?;
                if m == n {
                    arg(self, 0)
                } else {
                    arg(self, 1)
                }
            }
            Prim::Proj0 | Prim::Proj1 => {
                let x = arg(self, 0);
                if let Some(k) = self.num_of(x).cloned() {
                    let (a, b) = coding::unpair(&k);
                    self.num(if p == Prim::Proj0 { a } else { b })
                } else if let Some((a, b)) = self.pair_parts(x) {
                    if p == Prim::Proj0 {
                        a
                    } else {
                        b
                    }
                } else {
                    return Err(EvalError::Stuck("projection of a non-pair".into()));
                }
            }
            Prim::Fix => {
                let fix_f = spine[spine.len() - 1];
                let (f, x) = (arg(self, 0), arg(self, 1));
                let inner = self.app(f, fix_f);
                self.app(inner, x)
            }
            Prim::Mu => {
                let f = arg(self, 0);
                self.push(Node::MuAt(f, BigUint::zero()))
            }
            Prim::Pair => unreachable!("constructor"),
        })
    }

    /// Components of a value of the form `P a b`.
    pub fn pair_parts(&mut self, id: NodeId) -> Option<(NodeId, NodeId)> {
        let id = self.follow(id);
        let Node::App(fa, b) = self.nodes[id] else { return None };
        let fa = self.follow(fa);
        let Node::App(p, a) = self.nodes[fa] else { return None };
        let p = self.follow(p);
        matches!(self.nodes[p], Node::Prim(Prim::Pair)).then_some((a, b))
    }

    /// Forces `id` and returns its numeral, `None` if the value is not one.
    pub fn force_num(&mut self, id: NodeId) -> Result<Option<BigUint>, EvalError> {
        let v = self.whnf(id)?;
        Ok(self.num_of(v).cloned())
    }

    /// Forces `id` to a pair (numerals decode through `unpair`).
    pub fn force_pair(&mut self, id: NodeId) -> Result<Option<(NodeId, NodeId)>, EvalError> {
        let v = self.whnf(id)?;
        if let Some(k) = self.num_of(v).cloned() {
            let (a, b) = coding::unpair(&k);
            let (a, b) = (self.num(a), self.num(b));
            return Ok(Some((a, b)));
        }
        Ok(self.pair_parts(v))
    }

    /// Deep normal form: the weak head normal form with every argument of
    /// the head normalised in turn.
    pub fn normalize(&mut self, id: NodeId) -> Result<CombTerm, EvalError> {
        let v = self.whnf(id)?;
        if let Some(n) = self.num_of(v) {
            return Ok(T::Num(n.clone()));
        }
        let (head, args) = self.spine_of(v);
        let mut t = self.readback(head);
        for a in args {
            t = CombTerm::app(t, self.normalize(a)?);
        }
        Ok(t)
    }

    fn spine_of(&mut self, id: NodeId) -> (NodeId, Vec<NodeId>) {
        let mut args = Vec::new();
        let mut cur = self.follow(id);
        while let Node::App(f, x) = self.nodes[cur] {
            args.push(x);
            cur = self.follow(f);
        }
        args.reverse();
        (cur, args)
    }

    /// The term a node currently stands for (no evaluation).
    pub fn readback(&self, id: NodeId) -> CombTerm {
        let mut id = id;
        while let Node::Ind(n) = self.nodes[id] {
            id = n;
        }
        match &self.nodes[id] {
            Node::Prim(p) => p.term(),
            Node::Num(n) => T::Num(n.clone()),
            Node::App(f, x) => CombTerm::app(self.readback(*f), self.readback(*x)),
            Node::MuAt(f, k) => {
                let f = self.readback(*f);
                if k.is_zero() {
                    CombTerm::app(T::Mu, f)
                } else {
                    CombTerm::apps(mu_from(), [f, T::Num(k.clone())])
                }
            }
            Node::Ind(_) => unreachable!(),
        }
    }
}

/// `λf.λk.` least `n ≥ k` with `f n = 1`, as an ordinary combinator term.
fn mu_from() -> CombTerm {
    let body = CombTerm::lam(
        "self",
        CombTerm::lam(
            "f",
            CombTerm::lam(
                "k",
                CombTerm::apps(
                    T::Cases,
                    [
                        T::var("k"),
                        CombTerm::apps(T::var("self"), [T::var("f"), CombTerm::app(T::Succ, T::var("k"))]),
                        CombTerm::app(T::var("f"), T::var("k")),
                        CombTerm::num(1),
                    ],
                ),
            ),
        ),
    );
    CombTerm::app(T::Fix, compile_open(&body))
}

/// Reduces a compiled term to weak head normal form within `fuel` rule
/// applications.
pub fn reduce(t: &CombTerm, fuel: u64) -> Outcome {
    let mut m = Machine::new(fuel);
    let root = match m.load(t) {
        Ok(r) => r,
        Err(e) => return Outcome::Stuck(e.to_string()),
    };
    match m.whnf(root) {
        Ok(v) => Outcome::Converged(Value(m.readback(v)), m.fuel_used()),
        Err(EvalError::OutOfFuel) => Outcome::OutOfFuel,
        Err(EvalError::Stuck(s)) => Outcome::Stuck(s),
    }
}

/// Like [`reduce`] but normalises under the head as well.
pub fn normalize(t: &CombTerm, fuel: u64) -> Outcome {
    let mut m = Machine::new(fuel);
    let root = match m.load(t) {
        Ok(r) => r,
        Err(e) => return Outcome::Stuck(e.to_string()),
    };
    match m.normalize(root) {
        Ok(v) => Outcome::Converged(Value(v), m.fuel_used()),
        Err(EvalError::OutOfFuel) => Outcome::OutOfFuel,
        Err(EvalError::Stuck(s)) => Outcome::Stuck(s),
    }
}

/// Least `n` with `f n = 1`.
pub fn mu_search(f: &Value, fuel: u64) -> Outcome {
    reduce(&CombTerm::app(T::Mu, f.0.clone()), fuel)
}

/// Convenience for small numerals in tests and tools.
pub fn num_value(v: &Value) -> Option<u64> {
    v.as_num().and_then(|n| n.to_u64())
}

#[cfg(test)]
mod tests;
