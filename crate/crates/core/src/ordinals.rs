//! Ordinal notations in two-argument Veblen normal form, Kleene–Brouwer
//! orderings of finite trees, and finite explicit order indices.
//!
//! `φ(0, b) = ω^b`, and `φ(a+1, ·)` enumerates the common fixed points of
//! the `φ(a', ·)` below. A notation is `0` or a sum of principal terms
//! `φ(a, b)·k` with strictly decreasing terms. Since `φ(a, φ(c, d)) =
//! φ(c, d)` when `a < c`, a term `φ(a, b)` is normal only if `b < φ(a, b)`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::syntax::sexpr::{self, Sexp};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ord {
    Zero,
    Sum(Vec<VTerm>),
}

/// `φ(a, b)` repeated `count` times.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VTerm {
    pub a: Ord,
    pub b: Ord,
    pub count: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrdError {
    #[error("not in normal form: {0}")]
    NotNormal(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Ord {
    pub fn phi(a: Ord, b: Ord) -> Ord {
        Ord::Sum(vec![VTerm { a, b, count: 1 }])
    }

    pub fn finite(k: u64) -> Ord {
        if k == 0 {
            Ord::Zero
        } else {
            Ord::Sum(vec![VTerm {
                a: Ord::Zero,
                b: Ord::Zero,
                count: k,
            }])
        }
    }

    pub fn one() -> Ord {
        Ord::finite(1)
    }

    /// `ω = φ(0, 1)`
    pub fn omega() -> Ord {
        Ord::phi(Ord::Zero, Ord::one())
    }

    /// `ε₀ = φ(1, 0)`
    pub fn epsilon0() -> Ord {
        Ord::phi(Ord::one(), Ord::Zero)
    }

    /// `φ(ε₀, 0)`, the proof-theoretic ordinal of the base theory.
    pub fn cm() -> Ord {
        Ord::phi(Ord::epsilon0(), Ord::Zero)
    }

    fn terms(&self) -> &[VTerm] {
        match self {
            Ord::Zero => &[],
            Ord::Sum(ts) => ts,
        }
    }

    /// The single principal term of `self`, if it is one.
    fn as_principal(&self) -> Option<(&Ord, &Ord)> {
        match self.terms() {
            [t] if t.count == 1 => Some((&t.a, &t.b)),
            _ => None,
        }
    }

    pub fn is_normal(&self) -> bool {
        let ts = self.terms();
        if matches!(self, Ord::Sum(v) if v.is_empty()) {
            return false;
        }
        for t in ts {
            if t.count == 0 || !t.a.is_normal() || !t.b.is_normal() {
                return false;
            }
            if let Some((c, _)) = t.b.as_principal() {
                if cmp_raw(&t.a, c) == Ordering::Less {
                    return false;
                }
            }
        }
        ts.windows(2)
            .all(|w| cmp_principal(&w[0].a, &w[0].b, &w[1].a, &w[1].b) == Ordering::Greater)
    }
}

/// Principal `φ(a, b)` against principal `φ(c, d)`.
fn cmp_principal(a: &Ord, b: &Ord, c: &Ord, d: &Ord) -> Ordering {
    match cmp_raw(a, c) {
        Ordering::Equal => cmp_raw(b, d),
        // φ(a, b) < φ(c, d) iff b < φ(c, d)
        Ordering::Less => cmp_with_principal(b, c, d),
        // φ(a, b) < φ(c, d) iff φ(a, b) < d
        Ordering::Greater => cmp_with_principal(d, a, b).reverse(),
    }
}

/// A sum `x` against the principal `φ(c, d)`.
fn cmp_with_principal(x: &Ord, c: &Ord, d: &Ord) -> Ordering {
    match x.terms() {
        [] => Ordering::Less,
        [first, rest @ ..] => match cmp_principal(&first.a, &first.b, c, d) {
            Ordering::Equal if first.count == 1 && rest.is_empty() => Ordering::Equal,
            Ordering::Equal => Ordering::Greater,
            o => o,
        },
    }
}

fn cmp_raw(x: &Ord, y: &Ord) -> Ordering {
    let (xs, ys) = (x.terms(), y.terms());
    for (s, t) in xs.iter().zip(ys) {
        match cmp_principal(&s.a, &s.b, &t.a, &t.b) {
            Ordering::Equal => {}
            o => return o,
        }
        match s.count.cmp(&t.count) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    xs.len().cmp(&ys.len())
}

/// Compares two normal-form notations.
pub fn ord_cmp(x: &Ord, y: &Ord) -> Result<Ordering, OrdError> {
    for o in [x, y] {
        if !o.is_normal() {
            return Err(OrdError::NotNormal(o.to_string()));
        }
    }
    Ok(cmp_raw(x, y))
}

/// Unnormalised ordinal expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawOrd {
    Zero,
    Nat(u64),
    Phi(Box<RawOrd>, Box<RawOrd>),
    Sum(Vec<RawOrd>),
}

impl From<&Ord> for RawOrd {
    fn from(o: &Ord) -> RawOrd {
        match o {
            Ord::Zero => RawOrd::Zero,
            Ord::Sum(ts) => RawOrd::Sum(
                ts.iter()
                    .flat_map(|t| {
                        let p = RawOrd::Phi(Box::new((&t.a).into()), Box::new((&t.b).into()));
                        std::iter::repeat_n(p, t.count as usize)
                    })
                    .collect(),
            ),
        }
    }
}

/// Ordinal sum `x + y`: terms of `x` below the leading term of `y` are
/// absorbed.
pub fn add(x: &Ord, y: &Ord) -> Ord {
    let mut stack: Vec<VTerm> = x.terms().to_vec();
    for t in y.terms() {
        while let Some(top) = stack.last() {
            if cmp_principal(&top.a, &top.b, &t.a, &t.b) == Ordering::Less {
                stack.pop();
            } else {
                break;
            }
        }
        match stack.last_mut() {
            Some(top) if cmp_principal(&top.a, &top.b, &t.a, &t.b) == Ordering::Equal => {
                top.count += t.count
            }
            _ => stack.push(t.clone()),
        }
    }
    if stack.is_empty() {
        Ord::Zero
    } else {
        Ord::Sum(stack)
    }
}

pub fn normalize(e: &RawOrd) -> Ord {
    match e {
        RawOrd::Zero => Ord::Zero,
        RawOrd::Nat(k) => Ord::finite(*k),
        RawOrd::Phi(a, b) => {
            let (a, b) = (normalize(a), normalize(b));
            if let Some((c, _)) = b.as_principal() {
                if cmp_raw(&a, c) == Ordering::Less {
                    return b;
                }
            }
            Ord::phi(a, b)
        }
        RawOrd::Sum(xs) => xs.iter().fold(Ord::Zero, |acc, x| add(&acc, &normalize(x))),
    }
}

impl fmt::Display for RawOrd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RawOrd::Zero => f.write_str("0"),
            RawOrd::Nat(k) => write!(f, "(n {k})"),
            RawOrd::Phi(a, b) => write!(f, "(phi {a} {b})"),
            RawOrd::Sum(xs) => {
                f.write_str("(sum")?;
                for x in xs {
                    write!(f, " {x}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Ord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ts = self.terms();
        let mut parts = Vec::new();
        for t in ts {
            if t.a == Ord::Zero && t.b == Ord::Zero {
                parts.push(format!("(n {})", t.count));
            } else {
                for _ in 0..t.count {
                    parts.push(format!("(phi {} {})", t.a, t.b));
                }
            }
        }
        match parts.len() {
            0 => f.write_str("0"),
            1 => f.write_str(&parts[0]),
            _ => write!(f, "(sum {})", parts.join(" ")),
        }
    }
}

pub fn parse_raw(src: &str) -> Result<RawOrd, OrdError> {
    let s = sexpr::read_one(src).map_err(|e| OrdError::Parse(format!("{}: {}", e.pos, e.msg)))?;
    raw_of(&s)
}

/// Parses and normalises.
pub fn parse_ord(src: &str) -> Result<Ord, OrdError> {
    Ok(normalize(&parse_raw(src)?))
}

fn raw_of(s: &Sexp) -> Result<RawOrd, OrdError> {
    let bad = |m: &str| OrdError::Parse(format!("{}: {m}", s.pos()));
    if let Some(a) = s.as_atom() {
        return match a {
            "0" => Ok(RawOrd::Zero),
            "omega" | "w" => Ok(RawOrd::Phi(Box::new(RawOrd::Zero), Box::new(RawOrd::Nat(1)))),
            _ => a.parse().map(RawOrd::Nat).map_err(|_| bad("expected an ordinal")),
        };
    }
    let xs = s.as_list().unwrap();
    match (s.head(), xs.len()) {
        (Some("phi"), 3) => Ok(RawOrd::Phi(Box::new(raw_of(&xs[1])?), Box::new(raw_of(&xs[2])?))),
        (Some("n"), 2) => xs[1]
            .as_atom()
            .and_then(|a| a.parse().ok())
            .map(RawOrd::Nat)
            .ok_or_else(|| bad("(n k) needs a natural number")),
        (Some("sum"), _) => Ok(RawOrd::Sum(xs[1..].iter().map(raw_of).collect::<Result<_, _>>()?)),
        _ => Err(bad("expected 0, (phi a b), (sum …) or (n k)")),
    }
}

/// `σ <_KB τ`: σ properly extends τ, or σ is smaller at the first place
/// they differ.
pub fn kb_less(s: &[u64], t: &[u64]) -> bool {
    for (x, y) in s.iter().zip(t) {
        if x != y {
            return x < y;
        }
    }
    s.len() > t.len()
}

pub fn kb_cmp(s: &[u64], t: &[u64]) -> Ordering {
    if s == t {
        Ordering::Equal
    } else if kb_less(s, t) {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// A finite tree: a prefix-closed set of sequences.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FinTree {
    nodes: BTreeSet<Vec<u64>>,
}

impl FinTree {
    pub fn new(nodes: impl IntoIterator<Item = Vec<u64>>) -> Result<FinTree, String> {
        let nodes: BTreeSet<Vec<u64>> = nodes.into_iter().collect();
        for n in &nodes {
            if !n.is_empty() && !nodes.contains(&n[..n.len() - 1]) {
                return Err(format!("{n:?} is present but its parent is not"));
            }
        }
        Ok(FinTree { nodes })
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Vec<u64>> {
        self.nodes.iter()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Reads a list of nodes such as `() (0) (0 1)`, optionally wrapped in
    /// one outer list. `()` is the root.
    pub fn parse(src: &str) -> Result<FinTree, String> {
        let items = sexpr::read_all(src).map_err(|e| format!("{}: {}", e.pos, e.msg))?;
        let items: &[Sexp] = match items.as_slice() {
            [Sexp::List(xs, _)] if !xs.is_empty() && xs.iter().all(|x| x.as_list().is_some()) => xs,
            xs => xs,
        };
        let mut nodes = Vec::new();
        for it in items {
            let xs = it.as_list().ok_or_else(|| format!("{}: expected a sequence", it.pos()))?;
            let seq = xs
                .iter()
                .map(|x| {
                    x.as_atom()
                        .and_then(|a| a.parse().ok())
                        .ok_or_else(|| format!("{}: bad label", x.pos()))
                })
                .collect::<Result<_, _>>()?;
            nodes.push(seq);
        }
        FinTree::new(nodes)
    }
}

/// Nodes of `t` in ascending Kleene–Brouwer order.
pub fn kb_sort(t: &FinTree) -> Vec<Vec<u64>> {
    let mut v: Vec<Vec<u64>> = t.nodes.iter().cloned().collect();
    v.sort_by(|a, b| kb_cmp(a, b));
    v
}

pub fn format_seq(s: &[u64]) -> String {
    let inner: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("({})", inner.join(" "))
}

/// A point of an explicitly given finite linear order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinOrderIndex {
    pub field: BTreeSet<u64>,
    /// pairs `(x, y)` with `x` below `y`
    pub rel: BTreeSet<(u64, u64)>,
    pub point: u64,
}

impl FinOrderIndex {
    pub fn new(field: impl IntoIterator<Item = u64>, rel: impl IntoIterator<Item = (u64, u64)>, point: u64) -> Self {
        FinOrderIndex {
            field: field.into_iter().collect(),
            rel: rel.into_iter().collect(),
            point,
        }
    }

    /// The chain `xs[0] < xs[1] < …`.
    pub fn chain(xs: &[u64], point: u64) -> Self {
        let mut rel = BTreeSet::new();
        for (i, &x) in xs.iter().enumerate() {
            for &y in &xs[i + 1..] {
                rel.insert((x, y));
            }
        }
        FinOrderIndex {
            field: xs.iter().copied().collect(),
            rel,
            point,
        }
    }

    fn below(&self, x: u64) -> impl Iterator<Item = u64> + '_ {
        self.rel.iter().filter(move |(_, y)| *y == x).map(|(a, _)| *a)
    }
}

/// The relation is a strict linear order on the field and the point lies
/// in the field.
pub fn validate_index(ix: &FinOrderIndex) -> bool {
    let f = &ix.field;
    if !f.contains(&ix.point) {
        return false;
    }
    if ix.rel.iter().any(|(x, y)| x == y || !f.contains(x) || !f.contains(y)) {
        return false;
    }
    for &x in f {
        for &y in f {
            if x != y && ix.rel.contains(&(x, y)) == ix.rel.contains(&(y, x)) {
                return false;
            }
        }
    }
    for &(x, y) in &ix.rel {
        for (_, z) in ix.rel.iter().filter(|(a, _)| *a == y) {
            if !ix.rel.contains(&(x, *z)) {
                return false;
            }
        }
    }
    true
}

/// `ix < jx`: same underlying order, and the points are related by it.
pub fn index_less(ix: &FinOrderIndex, jx: &FinOrderIndex) -> bool {
    validate_index(ix)
        && validate_index(jx)
        && ix.field == jx.field
        && ix.rel == jx.rel
        && ix.rel.contains(&(ix.point, jx.point))
}

/// Order type of the initial segment below the point.
pub fn index_rank(ix: &FinOrderIndex) -> usize {
    ix.below(ix.point).count()
}

/// Finite stage of the `α + ω` construction: the elements `2β + 2` for
/// `β` in the field of `alpha`, ordered as in `alpha`, then the odd
/// numbers `1, 3, …, 2k − 1`, then `0`. The point is `0`, whose initial
/// segment has `|alpha| + k` elements.
pub fn alpha_plus_omega(alpha: &FinOrderIndex, k: u64) -> FinOrderIndex {
    let mut order: Vec<u64> = alpha.field.iter().copied().collect();
    order.sort_by_key(|&x| alpha.below(x).count());
    let mut seq: Vec<u64> = order.iter().map(|b| 2 * b + 2).collect();
    seq.extend((0..k).map(|i| 2 * i + 1));
    seq.push(0);
    FinOrderIndex::chain(&seq, 0)
}

#[cfg(test)]
mod tests;
