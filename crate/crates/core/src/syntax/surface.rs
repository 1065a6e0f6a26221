//! Surface formulas: the core language plus abbreviations (higher-sort
//! equality, slices, the bracket coding of countable families, `∈*`, `⊆*`,
//! `=*`, bounded quantifiers and set-builder terms), and their expansion.

use std::collections::HashSet;
use std::fmt;

use super::{binder_word, fresh_name, FoTerm, Formula, Sort, Subst};

/// A second-sort position: a variable or a definable set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetTerm {
    Var(String),
    /// `(Z)ₙ = {m : ⟨n, m⟩ ∈₁ Z}`
    Slice(String, FoTerm),
    /// `[X]ₙ = {m : ⟨n, 0⟩ ∈₁ X ∧ ⟨n, m + 1⟩ ∈₁ X}`
    Bracket(String, FoTerm),
    /// `{v : φ(v)}`
    Builder(String, Box<Surface>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Prec,
    InStar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Surface {
    Eq(FoTerm, FoTerm),
    In1(FoTerm, SetTerm),
    In2(SetTerm, String),
    Prec(SetTerm, SetTerm),
    And(Box<Surface>, Box<Surface>),
    Or(Box<Surface>, Box<Surface>),
    Not(Box<Surface>),
    Implies(Box<Surface>, Box<Surface>),
    Iff(Box<Surface>, Box<Surface>),
    ForAll(Sort, String, Box<Surface>),
    Exists(Sort, String, Box<Surface>),
    Eq2(SetTerm, SetTerm),
    Eq3(String, String),
    InStar(SetTerm, String),
    /// `X ⊆* Y` (second sort) or `X ⊆* 𝐗` (third sort) by the sort flag.
    SubStar(String, String, Sort),
    EqStar(String, String),
    BoundedAll(Bound, String, String, Box<Surface>),
    BoundedEx(Bound, String, String, Box<Surface>),
}

impl From<&Formula> for Surface {
    fn from(f: &Formula) -> Surface {
        let b = |x: &Formula| Box::new(Surface::from(x));
        match f {
            Formula::Eq(a, c) => Surface::Eq(a.clone(), c.clone()),
            Formula::In1(t, x) => Surface::In1(t.clone(), SetTerm::Var(x.clone())),
            Formula::In2(x, c) => Surface::In2(SetTerm::Var(x.clone()), c.clone()),
            Formula::Prec(x, y) => Surface::Prec(SetTerm::Var(x.clone()), SetTerm::Var(y.clone())),
            Formula::And(x, y) => Surface::And(b(x), b(y)),
            Formula::Or(x, y) => Surface::Or(b(x), b(y)),
            Formula::Not(x) => Surface::Not(b(x)),
            Formula::Implies(x, y) => Surface::Implies(b(x), b(y)),
            Formula::ForAll(s, v, x) => Surface::ForAll(*s, v.clone(), b(x)),
            Formula::Exists(s, v, x) => Surface::Exists(*s, v.clone(), b(x)),
        }
    }
}

impl From<Formula> for Surface {
    fn from(f: Formula) -> Surface {
        Surface::from(&f)
    }
}

impl Surface {
    fn names_into(&self, out: &mut HashSet<String>) {
        match self {
            Surface::Eq(a, b) => {
                out.extend(a.vars());
                out.extend(b.vars());
            }
            Surface::In1(t, x) => {
                out.extend(t.vars());
                x.names_into(out);
            }
            Surface::In2(x, c) | Surface::InStar(x, c) => {
                x.names_into(out);
                out.insert(c.clone());
            }
            Surface::Prec(x, y) | Surface::Eq2(x, y) => {
                x.names_into(out);
                y.names_into(out);
            }
            Surface::Eq3(a, b) | Surface::SubStar(a, b, _) | Surface::EqStar(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            Surface::And(a, b)
            | Surface::Or(a, b)
            | Surface::Implies(a, b)
            | Surface::Iff(a, b) => {
                a.names_into(out);
                b.names_into(out);
            }
            Surface::Not(a) => a.names_into(out),
            Surface::ForAll(_, v, b) | Surface::Exists(_, v, b) => {
                out.insert(v.clone());
                b.names_into(out);
            }
            Surface::BoundedAll(_, v, x, b) | Surface::BoundedEx(_, v, x, b) => {
                out.insert(v.clone());
                out.insert(x.clone());
                b.names_into(out);
            }
        }
    }
}

impl SetTerm {
    fn names_into(&self, out: &mut HashSet<String>) {
        match self {
            SetTerm::Var(v) => {
                out.insert(v.clone());
            }
            SetTerm::Slice(z, t) | SetTerm::Bracket(z, t) => {
                out.insert(z.clone());
                out.extend(t.vars());
            }
            SetTerm::Builder(v, body) => {
                out.insert(v.clone());
                body.names_into(out);
            }
        }
    }
}

/// Eliminates all sugar. On core formulas (`Surface::from(φ)`) this is the
/// identity, so `expand` is idempotent.
pub fn expand(s: &Surface) -> Formula {
    let mut avoid = HashSet::new();
    s.names_into(&mut avoid);
    Expander { avoid }.go(s)
}

struct Expander {
    avoid: HashSet<String>,
}

impl Expander {
    fn fresh(&mut self, base: &str) -> String {
        let n = fresh_name(base, &self.avoid);
        self.avoid.insert(n.clone());
        n
    }

    fn go(&mut self, s: &Surface) -> Formula {
        match s {
            Surface::Eq(a, b) => Formula::Eq(a.clone(), b.clone()),
            Surface::In1(t, x) => self.member(t, x),
            Surface::In2(SetTerm::Var(x), c) => Formula::In2(x.clone(), c.clone()),
            Surface::In2(x, c) => {
                let c = c.clone();
                self.via_var(x, move |y| Formula::In2(y, c))
            }
            Surface::Prec(SetTerm::Var(x), SetTerm::Var(y)) => Formula::Prec(x.clone(), y.clone()),
            Surface::Prec(x, SetTerm::Var(y)) => {
                let y = y.clone();
                self.via_var(x, move |v| Formula::Prec(v, y))
            }
            Surface::Prec(x, y) => {
                let y = y.clone();
                let yname = self.fresh("Y");
                let inner = match x {
                    SetTerm::Var(x) => Formula::Prec(x.clone(), yname.clone()),
                    _ => {
                        let yn = yname.clone();
                        self.via_var(x, move |v| Formula::Prec(v, yn))
                    }
                };
                let eq = self.eq2(&SetTerm::Var(yname.clone()), &y);
                Formula::exists(Sort::Second, &yname, Formula::and(eq, inner))
            }
            Surface::And(a, b) => Formula::and(self.go(a), self.go(b)),
            Surface::Or(a, b) => Formula::or(self.go(a), self.go(b)),
            Surface::Not(a) => Formula::not(self.go(a)),
            Surface::Implies(a, b) => Formula::implies(self.go(a), self.go(b)),
            Surface::Iff(a, b) => Formula::iff(self.go(a), self.go(b)),
            Surface::ForAll(s, v, b) => Formula::forall(*s, v, self.go(b)),
            Surface::Exists(s, v, b) => Formula::exists(*s, v, self.go(b)),
            Surface::Eq2(x, y) => self.eq2(x, y),
            Surface::Eq3(a, b) => {
                let x = self.fresh("X");
                Formula::forall(
                    Sort::Second,
                    &x,
                    Formula::iff(Formula::In2(x.clone(), a.clone()), Formula::In2(x.clone(), b.clone())),
                )
            }
            Surface::InStar(y, x) => self.in_star(y, x),
            Surface::SubStar(a, b, sort) => self.sub_star(a, b, *sort),
            Surface::EqStar(a, b) => Formula::and(
                self.sub_star(a, b, Sort::Second),
                self.sub_star(b, a, Sort::Second),
            ),
            Surface::BoundedAll(bd, v, x, body) => {
                let guard = self.bound_guard(*bd, v, x);
                Formula::forall(Sort::Second, v, Formula::implies(guard, self.go(body)))
            }
            Surface::BoundedEx(bd, v, x, body) => {
                let guard = self.bound_guard(*bd, v, x);
                Formula::exists(Sort::Second, v, Formula::and(guard, self.go(body)))
            }
        }
    }

    fn bound_guard(&mut self, bd: Bound, v: &str, x: &str) -> Formula {
        match bd {
            Bound::Prec => Formula::Prec(v.to_string(), x.to_string()),
            Bound::InStar => self.in_star(&SetTerm::Var(v.to_string()), x),
        }
    }

    /// `∃Y (Y = T ∧ A[Y])` for a non-variable set term `T`.
    fn via_var(&mut self, x: &SetTerm, k: impl FnOnce(String) -> Formula) -> Formula {
        if let SetTerm::Var(v) = x {
            return k(v.clone());
        }
        let y = self.fresh("Y");
        let eq = self.eq2(&SetTerm::Var(y.clone()), x);
        Formula::exists(Sort::Second, &y, Formula::and(eq, k(y.clone())))
    }

    fn eq2(&mut self, x: &SetTerm, y: &SetTerm) -> Formula {
        let m = self.fresh("m");
        let mv = FoTerm::var(&m);
        let a = self.member(&mv, x);
        let b = self.member(&mv, y);
        Formula::forall(Sort::First, &m, Formula::iff(a, b))
    }

    /// `⟨a, b⟩ ∈₁ z` written as `∀k (k + k = (a + b)·(a + b + 1) + a + a → k ∈₁ z)`.
    fn pair_in(&mut self, a: &FoTerm, b: &FoTerm, z: &str) -> Formula {
        let k = self.fresh("k");
        let kv = FoTerm::var(&k);
        let sum = FoTerm::add(a.clone(), b.clone());
        let rhs = FoTerm::add(
            FoTerm::mul(sum.clone(), FoTerm::succ(sum)),
            FoTerm::add(a.clone(), a.clone()),
        );
        Formula::forall(
            Sort::First,
            &k,
            Formula::implies(Formula::Eq(FoTerm::add(kv.clone(), kv.clone()), rhs), Formula::In1(kv, z.to_string())),
        )
    }

    fn member(&mut self, t: &FoTerm, x: &SetTerm) -> Formula {
        match x {
            SetTerm::Var(v) => Formula::In1(t.clone(), v.clone()),
            SetTerm::Slice(z, n) => self.pair_in(n, t, z),
            SetTerm::Bracket(z, n) => {
                let head = self.pair_in(n, &FoTerm::Zero, z);
                let body = self.pair_in(n, &FoTerm::succ(t.clone()), z);
                Formula::and(head, body)
            }
            SetTerm::Builder(v, body) => {
                let f = self.go(body);
                f.substitute(v, Sort::First, &Subst::Term(t.clone()))
                    .expect("first-sort substitution")
            }
        }
    }

    fn in_star(&mut self, y: &SetTerm, x: &str) -> Formula {
        let n = self.fresh("n");
        let nv = FoTerm::var(&n);
        let head = self.pair_in(&nv, &FoTerm::Zero, x);
        let eq = self.eq2(y, &SetTerm::Bracket(x.to_string(), nv));
        Formula::exists(Sort::First, &n, Formula::and(head, eq))
    }

    fn sub_star(&mut self, a: &str, b: &str, sort: Sort) -> Formula {
        let z = self.fresh("Z");
        let lhs = self.in_star(&SetTerm::Var(z.clone()), a);
        let rhs = match sort {
            Sort::Third => Formula::In2(z.clone(), b.to_string()),
            _ => self.in_star(&SetTerm::Var(z.clone()), b),
        };
        Formula::forall(Sort::Second, &z, Formula::implies(lhs, rhs))
    }
}

impl fmt::Display for SetTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetTerm::Var(v) => f.write_str(v),
            SetTerm::Slice(z, t) => write!(f, "(slice {z} {t})"),
            SetTerm::Bracket(x, t) => write!(f, "(bracket {x} {t})"),
            SetTerm::Builder(v, b) => write!(f, "(set {v} {b})"),
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bword = |all: bool, b: Bound| match (all, b) {
            (true, Bound::Prec) => "forall-prec",
            (false, Bound::Prec) => "exists-prec",
            (true, Bound::InStar) => "forall-in*",
            (false, Bound::InStar) => "exists-in*",
        };
        match self {
            Surface::Eq(a, b) => write!(f, "(= {a} {b})"),
            Surface::In1(t, x) => write!(f, "(in1 {t} {x})"),
            Surface::In2(x, c) => write!(f, "(in2 {x} {c})"),
            Surface::Prec(x, y) => write!(f, "(prec {x} {y})"),
            Surface::And(a, b) => write!(f, "(and {a} {b})"),
            Surface::Or(a, b) => write!(f, "(or {a} {b})"),
            Surface::Not(a) => write!(f, "(not {a})"),
            Surface::Implies(a, b) => write!(f, "(-> {a} {b})"),
            Surface::Iff(a, b) => write!(f, "(iff {a} {b})"),
            Surface::ForAll(s, v, b) => write!(f, "({} {v} {b})", binder_word(true, *s)),
            Surface::Exists(s, v, b) => write!(f, "({} {v} {b})", binder_word(false, *s)),
            Surface::Eq2(x, y) => write!(f, "(eq2 {x} {y})"),
            Surface::Eq3(x, y) => write!(f, "(eq3 {x} {y})"),
            Surface::InStar(y, x) => write!(f, "(in* {y} {x})"),
            Surface::SubStar(a, b, _) => write!(f, "(sub* {a} {b})"),
            Surface::EqStar(a, b) => write!(f, "(eq* {a} {b})"),
            Surface::BoundedAll(bd, v, x, b) => write!(f, "({} {v} {x} {b})", bword(true, *bd)),
            Surface::BoundedEx(bd, v, x, b) => write!(f, "({} {v} {x} {b})", bword(false, *bd)),
        }
    }
}
