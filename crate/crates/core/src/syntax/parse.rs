//! S-expression to AST, with sort inference and α-renaming of shadowing
//! binders.
//!
//! Sort of a variable: its binder if bound, else its `(declare v sort)`
//! header, else lowercase-initial names are first-sort and uppercase-initial
//! names take the sort of the first position they occur in.

use std::collections::{HashMap, HashSet};

use super::sexpr::{self, Pos, Sexp};
use super::{fresh_name, Bound, FoTerm, Formula, SetTerm, Sort, Surface, SyntaxError};

/// Largest decimal numeral accepted as sugar for `(s (s … 0))`.
const MAX_NUMERAL: u64 = 100_000;

#[derive(Debug, Clone, Default)]
pub struct SortCtx {
    declared: HashMap<String, Sort>,
    inferred: HashMap<String, Sort>,
    /// (written name, internal name, sort)
    bound: Vec<(String, String, Sort)>,
    names: HashSet<String>,
}

impl SortCtx {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare(&mut self, name: &str, sort: Sort) {
        self.declared.insert(name.to_string(), sort);
        self.names.insert(name.to_string());
    }

    /// Marks every atom in `s` as taken so renamed binders never collide
    /// with a name the user wrote.
    pub fn reserve(&mut self, s: &Sexp) {
        match s {
            Sexp::Atom(a, _) => {
                self.names.insert(a.clone());
            }
            Sexp::List(xs, _) => xs.iter().for_each(|x| self.reserve(x)),
        }
    }

    /// The sort a free name currently resolves to, if known.
    pub fn known_sort(&self, name: &str) -> Option<Sort> {
        if let Some((_, _, s)) = self.bound.iter().rev().find(|(n, _, _)| n == name) {
            return Some(*s);
        }
        self.declared
            .get(name)
            .or_else(|| self.inferred.get(name))
            .copied()
            .or_else(|| starts_lower(name).then_some(Sort::First))
    }

    /// Handles a `(declare v sort)` form; returns false if `s` is not one.
    pub fn try_declaration(&mut self, s: &Sexp) -> Result<bool, SyntaxError> {
        if s.head() != Some("declare") {
            return Ok(false);
        }
        let xs = s.as_list().unwrap();
        if xs.len() != 3 {
            return Err(arity("declare takes a name and a sort", s.pos()));
        }
        let name = ident(&xs[1])?;
        let sort = xs[2]
            .as_atom()
            .and_then(Sort::from_word)
            .ok_or_else(|| SyntaxError::Sort {
                msg: format!("unknown sort `{}`", xs[2]),
                pos: xs[2].pos(),
            })?;
        self.declare(&name, sort);
        Ok(true)
    }

    /// Resolves a variable occurrence that must have sort `want`.
    pub fn resolve(&mut self, s: &Sexp, want: Sort) -> Result<String, SyntaxError> {
        let name = ident(s)?;
        let pos = s.pos();
        let mismatch = |have: Sort| SyntaxError::Sort {
            msg: format!("`{name}` is {have}-sort but a {want}-sort variable is required here"),
            pos,
        };
        if let Some((_, internal, sort)) = self.bound.iter().rev().find(|(n, _, _)| *n == name) {
            return if *sort == want {
                Ok(internal.clone())
            } else {
                Err(mismatch(*sort))
            };
        }
        if let Some(&sort) = self.declared.get(&name).or_else(|| self.inferred.get(&name)) {
            return if sort == want { Ok(name) } else { Err(mismatch(sort)) };
        }
        if starts_lower(&name) {
            return if want == Sort::First {
                Ok(name)
            } else {
                Err(mismatch(Sort::First))
            };
        }
        self.inferred.insert(name.clone(), want);
        Ok(name)
    }

    fn bind<T>(
        &mut self,
        v: &Sexp,
        sort: Sort,
        k: impl FnOnce(&mut Self, String) -> Result<T, SyntaxError>,
    ) -> Result<T, SyntaxError> {
        let name = ident(v)?;
        let shadows = self.bound.iter().any(|(n, _, _)| *n == name);
        let internal = if shadows {
            let mut avoid = self.names.clone();
            avoid.extend(self.bound.iter().map(|(_, i, _)| i.clone()));
            fresh_name(&name, &avoid)
        } else {
            name.clone()
        };
        self.names.insert(internal.clone());
        self.bound.push((name, internal.clone(), sort));
        let r = k(self, internal);
        self.bound.pop();
        r
    }

    pub fn term(&mut self, s: &Sexp) -> Result<FoTerm, SyntaxError> {
        match s {
            Sexp::Atom(a, pos) => {
                if a.chars().all(|c| c.is_ascii_digit()) {
                    let k: u64 = a.parse().ok().filter(|k| *k <= MAX_NUMERAL).ok_or_else(|| {
                        SyntaxError::Malformed {
                            msg: format!("numeral {a} exceeds {MAX_NUMERAL}"),
                            pos: *pos,
                        }
                    })?;
                    return Ok(FoTerm::numeral(k));
                }
                Ok(FoTerm::Var(self.resolve(s, Sort::First)?))
            }
            Sexp::List(xs, pos) => {
                let head = head_of(xs, *pos)?;
                match head {
                    "s" => {
                        expect_args(xs, 1, "s", *pos)?;
                        Ok(FoTerm::succ(self.term(&xs[1])?))
                    }
                    "+" | "*" => {
                        expect_args(xs, 2, head, *pos)?;
                        let a = self.term(&xs[1])?;
                        let b = self.term(&xs[2])?;
                        Ok(if head == "+" { FoTerm::add(a, b) } else { FoTerm::mul(a, b) })
                    }
                    _ => Err(SyntaxError::UnknownHead {
                        head: head.to_string(),
                        pos: *pos,
                    }),
                }
            }
        }
    }

    pub fn set_term(&mut self, s: &Sexp) -> Result<SetTerm, SyntaxError> {
        match s {
            Sexp::Atom(..) => Ok(SetTerm::Var(self.resolve(s, Sort::Second)?)),
            Sexp::List(xs, pos) => {
                let head = head_of(xs, *pos)?;
                match head {
                    "slice" | "bracket" => {
                        expect_args(xs, 2, head, *pos)?;
                        let z = self.resolve(&xs[1], Sort::Second)?;
                        let t = self.term(&xs[2])?;
                        Ok(if head == "slice" {
                            SetTerm::Slice(z, t)
                        } else {
                            SetTerm::Bracket(z, t)
                        })
                    }
                    "set" => {
                        expect_args(xs, 2, head, *pos)?;
                        let body = &xs[2];
                        self.bind(&xs[1], Sort::First, |ctx, v| {
                            Ok(SetTerm::Builder(v, Box::new(ctx.surface(body)?)))
                        })
                    }
                    _ => Err(SyntaxError::UnknownHead {
                        head: head.to_string(),
                        pos: *pos,
                    }),
                }
            }
        }
    }

    pub fn surface(&mut self, s: &Sexp) -> Result<Surface, SyntaxError> {
        let (xs, pos) = match s {
            Sexp::List(xs, pos) => (xs, *pos),
            Sexp::Atom(a, pos) => {
                return Err(SyntaxError::Malformed {
                    msg: format!("expected a formula, found atom `{a}`"),
                    pos: *pos,
                })
            }
        };
        let head = head_of(xs, pos)?;
        let bx = Box::new;
        match head {
            "=" => {
                expect_args(xs, 2, head, pos)?;
                Ok(Surface::Eq(self.term(&xs[1])?, self.term(&xs[2])?))
            }
            "in1" => {
                expect_args(xs, 2, head, pos)?;
                Ok(Surface::In1(self.term(&xs[1])?, self.set_term(&xs[2])?))
            }
            "in2" => {
                expect_args(xs, 2, head, pos)?;
                let x = self.set_term(&xs[1])?;
                Ok(Surface::In2(x, self.resolve(&xs[2], Sort::Third)?))
            }
            "prec" => {
                expect_args(xs, 2, head, pos)?;
                Ok(Surface::Prec(self.set_term(&xs[1])?, self.set_term(&xs[2])?))
            }
            "and" | "or" => {
                if xs.len() < 3 {
                    return Err(arity(&format!("{head} takes at least 2 arguments"), pos));
                }
                let mut parts = xs[1..]
                    .iter()
                    .map(|x| self.surface(x))
                    .collect::<Result<Vec<_>, _>>()?;
                let mut acc = parts.pop().unwrap();
                while let Some(p) = parts.pop() {
                    acc = if head == "and" {
                        Surface::And(bx(p), bx(acc))
                    } else {
                        Surface::Or(bx(p), bx(acc))
                    };
                }
                Ok(acc)
            }
            "not" => {
                expect_args(xs, 1, head, pos)?;
                Ok(Surface::Not(bx(self.surface(&xs[1])?)))
            }
            "->" | "iff" => {
                expect_args(xs, 2, head, pos)?;
                let a = self.surface(&xs[1])?;
                let b = self.surface(&xs[2])?;
                Ok(if head == "->" {
                    Surface::Implies(bx(a), bx(b))
                } else {
                    Surface::Iff(bx(a), bx(b))
                })
            }
            "forall-n" | "exists-n" | "forall-s" | "exists-s" | "forall-t" | "exists-t" => {
                expect_args(xs, 2, head, pos)?;
                let sort = Sort::from_word(&head[head.len() - 1..]).unwrap();
                let all = head.starts_with("forall");
                let body = &xs[2];
                self.bind(&xs[1], sort, |ctx, v| {
                    let b = bx(ctx.surface(body)?);
                    Ok(if all {
                        Surface::ForAll(sort, v, b)
                    } else {
                        Surface::Exists(sort, v, b)
                    })
                })
            }
            "eq2" => {
                expect_args(xs, 2, head, pos)?;
                Ok(Surface::Eq2(self.set_term(&xs[1])?, self.set_term(&xs[2])?))
            }
            "eq3" => {
                expect_args(xs, 2, head, pos)?;
                Ok(Surface::Eq3(
                    self.resolve(&xs[1], Sort::Third)?,
                    self.resolve(&xs[2], Sort::Third)?,
                ))
            }
            "in*" => {
                expect_args(xs, 2, head, pos)?;
                let y = self.set_term(&xs[1])?;
                Ok(Surface::InStar(y, self.resolve(&xs[2], Sort::Second)?))
            }
            "sub*" => {
                expect_args(xs, 2, head, pos)?;
                let a = self.resolve(&xs[1], Sort::Second)?;
                let target = xs[2]
                    .as_atom()
                    .and_then(|n| self.known_sort(n))
                    .unwrap_or(Sort::Second);
                if target == Sort::First {
                    return Err(SyntaxError::Sort {
                        msg: "sub* needs a set or class on the right".into(),
                        pos: xs[2].pos(),
                    });
                }
                let b = self.resolve(&xs[2], target)?;
                Ok(Surface::SubStar(a, b, target))
            }
            "eq*" => {
                expect_args(xs, 2, head, pos)?;
                Ok(Surface::EqStar(
                    self.resolve(&xs[1], Sort::Second)?,
                    self.resolve(&xs[2], Sort::Second)?,
                ))
            }
            "forall-prec" | "exists-prec" | "forall-in*" | "exists-in*" => {
                expect_args(xs, 3, head, pos)?;
                let bound = if head.ends_with("prec") { Bound::Prec } else { Bound::InStar };
                let x = self.resolve(&xs[2], Sort::Second)?;
                let all = head.starts_with("forall");
                let body = &xs[3];
                self.bind(&xs[1], Sort::Second, |ctx, v| {
                    let b = bx(ctx.surface(body)?);
                    Ok(if all {
                        Surface::BoundedAll(bound, v, x, b)
                    } else {
                        Surface::BoundedEx(bound, v, x, b)
                    })
                })
            }
            _ => Err(SyntaxError::UnknownHead {
                head: head.to_string(),
                pos,
            }),
        }
    }

    pub fn formula(&mut self, s: &Sexp) -> Result<Formula, SyntaxError> {
        Ok(super::expand(&self.surface(s)?))
    }
}

fn starts_lower(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_lowercase())
}

fn ident(s: &Sexp) -> Result<String, SyntaxError> {
    match s {
        Sexp::Atom(a, pos) => {
            let ok = a.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && a.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
            if ok {
                Ok(a.clone())
            } else {
                Err(SyntaxError::Malformed {
                    msg: format!("`{a}` is not a variable name"),
                    pos: *pos,
                })
            }
        }
        Sexp::List(_, pos) => Err(SyntaxError::Malformed {
            msg: "expected a variable name".into(),
            pos: *pos,
        }),
    }
}

fn head_of(xs: &[Sexp], pos: Pos) -> Result<&str, SyntaxError> {
    match xs.first() {
        None => Err(SyntaxError::Malformed {
            msg: "empty list".into(),
            pos,
        }),
        Some(Sexp::Atom(a, _)) => Ok(a),
        Some(other) => Err(SyntaxError::Malformed {
            msg: "list head must be a symbol".into(),
            pos: other.pos(),
        }),
    }
}

fn arity(msg: &str, pos: Pos) -> SyntaxError {
    SyntaxError::Arity {
        msg: msg.to_string(),
        pos,
    }
}

fn expect_args(xs: &[Sexp], n: usize, head: &str, pos: Pos) -> Result<(), SyntaxError> {
    if xs.len() == n + 1 {
        Ok(())
    } else {
        Err(arity(
            &format!("{head} takes {n} argument{}, got {}", if n == 1 { "" } else { "s" }, xs.len() - 1),
            pos,
        ))
    }
}

pub(crate) fn lex(src: &str) -> Result<Vec<Sexp>, SyntaxError> {
    sexpr::read_all(src).map_err(|e| SyntaxError::Lexical { msg: e.msg, pos: e.pos })
}

/// Parses optional `(declare …)` headers followed by one formula.
pub fn parse_surface(src: &str) -> Result<Surface, SyntaxError> {
    parse_surface_with(&mut SortCtx::new(), src)
}

pub fn parse_surface_with(ctx: &mut SortCtx, src: &str) -> Result<Surface, SyntaxError> {
    let items = lex(src)?;
    let mut body = None;
    for it in &items {
        ctx.reserve(it);
    }
    for it in &items {
        if ctx.try_declaration(it)? {
            continue;
        }
        if body.is_some() {
            return Err(SyntaxError::Malformed {
                msg: "more than one formula".into(),
                pos: it.pos(),
            });
        }
        body = Some(it);
    }
    let body = body.ok_or_else(|| SyntaxError::Malformed {
        msg: "no formula".into(),
        pos: Pos { line: 1, col: 1 },
    })?;
    ctx.surface(body)
}

pub fn parse_formula(src: &str) -> Result<Formula, SyntaxError> {
    Ok(super::expand(&parse_surface(src)?))
}

pub fn parse_formula_with(ctx: &mut SortCtx, src: &str) -> Result<Formula, SyntaxError> {
    Ok(super::expand(&parse_surface_with(ctx, src)?))
}

pub fn parse_term(src: &str) -> Result<FoTerm, SyntaxError> {
    let s = sexpr::read_one(src).map_err(|e| SyntaxError::Lexical { msg: e.msg, pos: e.pos })?;
    SortCtx::new().term(&s)
}
