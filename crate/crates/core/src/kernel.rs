//! Axiom schemes, proof files and the Hilbert-style checker.
//!
//! A proof is a list of lines, each a formula with a justification: an
//! axiom-scheme instance, modus ponens, or one of the two generalisation
//! rules
//!
//! ```text
//!   φ → ψ   (x not free in φ)          φ → ψ   (x not free in ψ)
//!   ─────────────────────── ∀-Gen      ─────────────────────── ∃-Gen
//!        φ → ∀x ψ                           ∃x φ → ψ
//! ```
//!
//! Lines are compared with the instance or rule conclusion up to
//! α-equivalence, after all abbreviations are expanded.

use std::collections::HashSet;
use std::fmt;

use serde_json::json;
use thiserror::Error;

use crate::syntax::sexpr::{Pos, Sexp};
use crate::syntax::{
    self, fresh_name, Bound, FoTerm, Formula, SetTerm, Sort, SortCtx, Subst, Surface, SyntaxError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theory {
    Cm,
    CmGwo,
}

impl Theory {
    pub fn parse(s: &str) -> Option<Theory> {
        match s {
            "cm" | "CM" => Some(Theory::Cm),
            "cm-gwo" | "CM+GWO" | "cm+gwo" => Some(Theory::CmGwo),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomScheme {
    // logic
    K,
    S,
    AndI,
    AndL,
    AndR,
    OrIL,
    OrIR,
    OrE,
    NegI,
    ExFalso,
    ExI,
    AllE,
    EqRefl,
    EqSubst,
    // number axioms
    PaSuccNeZero,
    PaSuccInj,
    PaAddZero,
    PaAddSucc,
    PaMulZero,
    PaMulSucc,
    // induction, dependent choice, comprehension
    Ind,
    Rec,
    Comp1,
    Comp2,
    // atomic decidability and omniscience
    DecEq,
    DecIn1,
    DecIn2,
    Lpo,
    // the order relation
    PrecDec,
    ExtIn2,
    ExtPrec,
    // global well-ordering
    W1Irrefl,
    W1Trans,
    W1Total,
    W2,
    W2Prime,
    W3,
}

/// One parameter position of a scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Formula,
    Term,
    Var(Sort),
    /// a sort letter `n`, `s` or `t`
    SortTag,
    /// a variable whose sort is given by the preceding `SortTag`
    TaggedVar,
    /// a term or variable of the tagged sort
    Witness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Param {
    Formula(Formula),
    Term(FoTerm),
    Var(String, Sort),
    Sort(Sort),
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Formula(x) => write!(f, "{x}"),
            Param::Term(t) => write!(f, "{t}"),
            Param::Var(v, _) => f.write_str(v),
            Param::Sort(s) => f.write_str(s.letter()),
        }
    }
}

use AxiomScheme as A;

impl AxiomScheme {
    pub const ALL: [AxiomScheme; 37] = [
        A::K,
        A::S,
        A::AndI,
        A::AndL,
        A::AndR,
        A::OrIL,
        A::OrIR,
        A::OrE,
        A::NegI,
        A::ExFalso,
        A::ExI,
        A::AllE,
        A::EqRefl,
        A::EqSubst,
        A::PaSuccNeZero,
        A::PaSuccInj,
        A::PaAddZero,
        A::PaAddSucc,
        A::PaMulZero,
        A::PaMulSucc,
        A::Ind,
        A::Rec,
        A::Comp1,
        A::Comp2,
        A::DecEq,
        A::DecIn1,
        A::DecIn2,
        A::Lpo,
        A::PrecDec,
        A::ExtIn2,
        A::ExtPrec,
        A::W1Irrefl,
        A::W1Trans,
        A::W1Total,
        A::W2,
        A::W2Prime,
        A::W3,
    ];

    pub fn id(self) -> &'static str {
        match self {
            A::K => "k",
            A::S => "s",
            A::AndI => "and-i",
            A::AndL => "and-l",
            A::AndR => "and-r",
            A::OrIL => "or-il",
            A::OrIR => "or-ir",
            A::OrE => "or-e",
            A::NegI => "neg-i",
            A::ExFalso => "ex-falso",
            A::ExI => "ex-i",
            A::AllE => "all-e",
            A::EqRefl => "eq-refl",
            A::EqSubst => "eq-subst",
            A::PaSuccNeZero => "pa-succ-ne-zero",
            A::PaSuccInj => "pa-succ-inj",
            A::PaAddZero => "pa-add-zero",
            A::PaAddSucc => "pa-add-succ",
            A::PaMulZero => "pa-mul-zero",
            A::PaMulSucc => "pa-mul-succ",
            A::Ind => "ind",
            A::Rec => "rec",
            A::Comp1 => "comp1",
            A::Comp2 => "comp2",
            A::DecEq => "dec-eq",
            A::DecIn1 => "dec-in1",
            A::DecIn2 => "dec-in2",
            A::Lpo => "lpo",
            A::PrecDec => "prec-dec",
            A::ExtIn2 => "ext-in2",
            A::ExtPrec => "ext-prec",
            A::W1Irrefl => "w1-irrefl",
            A::W1Trans => "w1-trans",
            A::W1Total => "w1-total",
            A::W2 => "w2",
            A::W2Prime => "w2p",
            A::W3 => "w3",
        }
    }

    pub fn from_id(s: &str) -> Option<AxiomScheme> {
        AxiomScheme::ALL.into_iter().find(|a| a.id() == s)
    }

    pub fn signature(self) -> &'static [Slot] {
        use Slot::*;
        match self {
            A::K | A::AndI | A::AndL | A::AndR | A::OrIL | A::OrIR | A::NegI | A::ExFalso => {
                &[Formula, Formula]
            }
            A::S | A::OrE => &[Formula, Formula, Formula],
            A::ExI | A::AllE => &[SortTag, TaggedVar, Formula, Witness],
            A::EqRefl | A::PaSuccNeZero | A::PaAddZero | A::PaMulZero => &[Term],
            A::EqSubst => &[Var(Sort::First), Formula, Term, Term],
            A::PaSuccInj | A::PaAddSucc | A::PaMulSucc | A::DecEq => &[Term, Term],
            A::Ind | A::Comp1 => &[Var(Sort::First), Formula],
            A::Rec => &[Var(Sort::First), Var(Sort::Second), Var(Sort::Second), Formula],
            A::Comp2 | A::W2 => &[Var(Sort::Second), Formula],
            A::DecIn1 => &[Term, Var(Sort::Second)],
            A::DecIn2 => &[Var(Sort::Second), Var(Sort::Third)],
            A::Lpo => &[Var(Sort::First), Formula, Formula],
            A::ExtIn2 => &[Var(Sort::Second), Var(Sort::Second), Var(Sort::Third)],
            A::ExtPrec => &[Var(Sort::Second); 4],
            A::W2Prime => &[Var(Sort::Third)],
            A::PrecDec | A::W1Irrefl | A::W1Trans | A::W1Total | A::W3 => &[],
        }
    }

    pub fn is_logical(self) -> bool {
        (self as usize) <= (A::EqSubst as usize)
    }

    pub fn is_gwo(self) -> bool {
        matches!(
            self,
            A::W1Irrefl | A::W1Trans | A::W1Total | A::W2 | A::W2Prime | A::W3
        )
    }

    /// Ex falso is not among the listed logical axioms; it is added so the
    /// logic is intuitionistic rather than minimal.
    pub fn is_supplement(self) -> bool {
        self == A::ExFalso
    }

    pub fn in_theory(self, th: Theory) -> bool {
        th == Theory::CmGwo || !self.is_gwo()
    }
}

impl fmt::Display for AxiomScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    #[error("scheme {scheme} takes {want} parameters, got {got}")]
    Arity {
        scheme: AxiomScheme,
        want: usize,
        got: usize,
    },
    #[error("parameter {index} of {scheme}: {msg}")]
    ParamSort {
        scheme: AxiomScheme,
        index: usize,
        msg: String,
    },
    #[error("empty proof has no theorem")]
    EmptyProof,
    #[error("proof rejected at line {line}: {reason}")]
    Unchecked { line: usize, reason: String },
    #[error("{pos}: {msg}")]
    Format { msg: String, pos: Pos },
}

fn param_err(scheme: AxiomScheme, index: usize, msg: impl Into<String>) -> KernelError {
    KernelError::ParamSort {
        scheme,
        index,
        msg: msg.into(),
    }
}

/// Checks that `params` fit the scheme signature, including sorts.
pub fn check_params(scheme: AxiomScheme, params: &[Param]) -> Result<(), KernelError> {
    let sig = scheme.signature();
    if sig.len() != params.len() {
        return Err(KernelError::Arity {
            scheme,
            want: sig.len(),
            got: params.len(),
        });
    }
    let mut tag = None;
    for (i, (slot, p)) in sig.iter().zip(params).enumerate() {
        let ok = match (slot, p) {
            (Slot::Formula, Param::Formula(_)) | (Slot::Term, Param::Term(_)) => true,
            (Slot::Var(s), Param::Var(_, t)) => s == t,
            (Slot::SortTag, Param::Sort(s)) => {
                tag = Some(*s);
                true
            }
            (Slot::TaggedVar, Param::Var(_, s)) => Some(*s) == tag,
            (Slot::Witness, Param::Term(_)) => tag == Some(Sort::First),
            (Slot::Witness, Param::Var(_, s)) => Some(*s) == tag,
            _ => false,
        };
        if !ok {
            return Err(param_err(scheme, i, format!("expected {slot:?}, got `{p}`")));
        }
    }
    Ok(())
}

fn subst_for(sort: Sort, p: &Param) -> Subst {
    match p {
        Param::Term(t) => Subst::Term(t.clone()),
        Param::Var(v, _) if sort == Sort::First => Subst::Term(FoTerm::var(v)),
        Param::Var(v, _) => Subst::Var(v.clone()),
        _ => unreachable!("checked by signature"),
    }
}

struct Names(HashSet<String>);

impl Names {
    fn of(params: &[Param]) -> Names {
        let mut s = HashSet::new();
        for p in params {
            match p {
                Param::Formula(f) => s.extend(f.all_names()),
                Param::Term(t) => s.extend(t.vars()),
                Param::Var(v, _) => {
                    s.insert(v.clone());
                }
                Param::Sort(_) => {}
            }
        }
        Names(s)
    }

    fn fresh(&mut self, base: &str) -> String {
        let n = fresh_name(base, &self.0);
        self.0.insert(n.clone());
        n
    }
}

/// The formula asserted by a scheme instance.
pub fn instantiate(scheme: AxiomScheme, params: &[Param]) -> Result<Formula, KernelError> {
    check_params(scheme, params)?;
    let fm = |i: usize| match &params[i] {
        Param::Formula(f) => f.clone(),
        _ => unreachable!(),
    };
    let tm = |i: usize| match &params[i] {
        Param::Term(t) => t.clone(),
        _ => unreachable!(),
    };
    let var = |i: usize| match &params[i] {
        Param::Var(v, _) => v.clone(),
        _ => unreachable!(),
    };
    let imp = Formula::implies;
    let mut names = Names::of(params);
    let first = Sort::First;
    let second = Sort::Second;
    Ok(match scheme {
        A::K => imp(fm(0), imp(fm(1), fm(0))),
        A::S => {
            let (p, q, r) = (fm(0), fm(1), fm(2));
            imp(
                imp(p.clone(), q.clone()),
                imp(imp(p.clone(), imp(q, r.clone())), imp(p, r)),
            )
        }
        A::AndI => imp(fm(0), imp(fm(1), Formula::and(fm(0), fm(1)))),
        A::AndL => imp(Formula::and(fm(0), fm(1)), fm(0)),
        A::AndR => imp(Formula::and(fm(0), fm(1)), fm(1)),
        A::OrIL => imp(fm(0), Formula::or(fm(0), fm(1))),
        A::OrIR => imp(fm(1), Formula::or(fm(0), fm(1))),
        A::OrE => {
            let (p, q, r) = (fm(0), fm(1), fm(2));
            imp(
                imp(p.clone(), r.clone()),
                imp(imp(q.clone(), r.clone()), imp(Formula::or(p, q), r)),
            )
        }
        A::NegI => {
            let (p, q) = (fm(0), fm(1));
            imp(
                imp(p.clone(), q.clone()),
                imp(imp(p.clone(), Formula::not(q)), Formula::not(p)),
            )
        }
        A::ExFalso => imp(Formula::not(fm(0)), imp(fm(0), fm(1))),
        A::ExI | A::AllE => {
            let Param::Sort(s) = params[0] else { unreachable!() };
            let x = var(1);
            let body = fm(2);
            let inst = body.substitute(&x, s, &subst_for(s, &params[3]))?;
            if scheme == A::ExI {
                imp(inst, Formula::exists(s, &x, body))
            } else {
                imp(Formula::forall(s, &x, body), inst)
            }
        }
        A::EqRefl => Formula::Eq(tm(0), tm(0)),
        A::EqSubst => {
            let (x, body, t, s) = (var(0), fm(1), tm(2), tm(3));
            let at_t = body.substitute(&x, first, &Subst::Term(t.clone()))?;
            let at_s = body.substitute(&x, first, &Subst::Term(s.clone()))?;
            imp(Formula::and(Formula::Eq(t, s), at_t), at_s)
        }
        A::PaSuccNeZero => Formula::not(Formula::Eq(FoTerm::succ(tm(0)), FoTerm::Zero)),
        A::PaSuccInj => imp(
            Formula::Eq(FoTerm::succ(tm(0)), FoTerm::succ(tm(1))),
            Formula::Eq(tm(0), tm(1)),
        ),
        A::PaAddZero => Formula::Eq(FoTerm::add(tm(0), FoTerm::Zero), tm(0)),
        A::PaAddSucc => Formula::Eq(
            FoTerm::add(tm(0), FoTerm::succ(tm(1))),
            FoTerm::succ(FoTerm::add(tm(0), tm(1))),
        ),
        A::PaMulZero => Formula::Eq(FoTerm::mul(tm(0), FoTerm::Zero), FoTerm::Zero),
        A::PaMulSucc => Formula::Eq(
            FoTerm::mul(tm(0), FoTerm::succ(tm(1))),
            FoTerm::add(FoTerm::mul(tm(0), tm(1)), tm(0)),
        ),
        A::Ind => {
            let (x, body) = (var(0), fm(1));
            let base = body.substitute(&x, first, &Subst::Term(FoTerm::Zero))?;
            let step = body.substitute(&x, first, &Subst::Term(FoTerm::succ(FoTerm::var(&x))))?;
            imp(
                Formula::and(base, Formula::forall(first, &x, imp(body.clone(), step))),
                Formula::forall(first, &x, body),
            )
        }
        A::Rec => {
            let (n, x, y, body) = (var(0), var(1), var(2), fm(3));
            let hyp = Formula::forall(
                first,
                &n,
                Formula::forall(second, &x, Formula::exists(second, &y, body.clone())),
            );
            let z = names.fresh("Z");
            let x2 = names.fresh("U");
            let y2 = names.fresh("V");
            let inner = body
                .substitute(&x, second, &Subst::Var(x2.clone()))?
                .substitute(&y, second, &Subst::Var(y2.clone()))?;
            let bx = Box::new;
            let concl = Surface::ForAll(
                second,
                x.clone(),
                bx(Surface::Exists(
                    second,
                    z.clone(),
                    bx(Surface::And(
                        bx(Surface::Eq2(
                            SetTerm::Slice(z.clone(), FoTerm::Zero),
                            SetTerm::Var(x.clone()),
                        )),
                        bx(Surface::ForAll(
                            first,
                            n.clone(),
                            bx(Surface::Exists(
                                second,
                                x2.clone(),
                                bx(Surface::And(
                                    bx(Surface::Eq2(
                                        SetTerm::Var(x2.clone()),
                                        SetTerm::Slice(z.clone(), FoTerm::var(&n)),
                                    )),
                                    bx(Surface::Exists(
                                        second,
                                        y2.clone(),
                                        bx(Surface::And(
                                            bx(Surface::Eq2(
                                                SetTerm::Var(y2.clone()),
                                                SetTerm::Slice(
                                                    z.clone(),
                                                    FoTerm::succ(FoTerm::var(&n)),
                                                ),
                                            )),
                                            bx(Surface::from(&inner)),
                                        )),
                                    )),
                                )),
                            )),
                        )),
                    )),
                )),
            );
            imp(hyp, syntax::expand(&concl))
        }
        A::Comp1 => {
            let (n, body) = (var(0), fm(1));
            let x = names.fresh("X");
            let lem = Formula::forall(first, &n, Formula::or(body.clone(), Formula::not(body.clone())));
            let def = Formula::exists(
                second,
                &x,
                Formula::forall(first, &n, Formula::iff(Formula::in1(FoTerm::var(&n), &x), body)),
            );
            imp(lem, def)
        }
        A::Comp2 => {
            let (x, body) = (var(0), fm(1));
            let c = names.fresh("C");
            let lem = Formula::forall(second, &x, Formula::or(body.clone(), Formula::not(body.clone())));
            let def = Formula::exists(
                Sort::Third,
                &c,
                Formula::forall(second, &x, Formula::iff(Formula::In2(x.clone(), c.clone()), body)),
            );
            imp(lem, def)
        }
        A::DecEq => {
            let e = Formula::Eq(tm(0), tm(1));
            Formula::or(e.clone(), Formula::not(e))
        }
        A::DecIn1 => {
            let e = Formula::In1(tm(0), var(1));
            Formula::or(e.clone(), Formula::not(e))
        }
        A::DecIn2 => {
            let e = Formula::In2(var(0), var(1));
            Formula::or(e.clone(), Formula::not(e))
        }
        A::Lpo => {
            let (n, p, q) = (var(0), fm(1), fm(2));
            imp(
                Formula::forall(first, &n, Formula::or(p.clone(), q.clone())),
                Formula::or(Formula::forall(first, &n, p), Formula::exists(first, &n, q)),
            )
        }
        A::PrecDec => {
            let e = Formula::Prec("X".into(), "Y".into());
            Formula::forall(
                second,
                "X",
                Formula::forall(second, "Y", Formula::or(e.clone(), Formula::not(e))),
            )
        }
        A::ExtIn2 => {
            let (x, y, c) = (var(0), var(1), var(2));
            let eq = syntax::expand(&Surface::Eq2(SetTerm::Var(x.clone()), SetTerm::Var(y.clone())));
            imp(
                eq,
                Formula::iff(Formula::In2(x, c.clone()), Formula::In2(y, c)),
            )
        }
        A::ExtPrec => {
            let (x, y, x2, y2) = (var(0), var(1), var(2), var(3));
            let eq = |a: &str, b: &str| {
                syntax::expand(&Surface::Eq2(SetTerm::Var(a.into()), SetTerm::Var(b.into())))
            };
            imp(
                Formula::and(eq(&x, &y), eq(&x2, &y2)),
                Formula::iff(Formula::Prec(x, x2), Formula::Prec(y, y2)),
            )
        }
        A::W1Irrefl => Formula::forall(second, "X", Formula::not(Formula::Prec("X".into(), "X".into()))),
        A::W1Trans => Formula::forall(
            second,
            "X",
            Formula::forall(
                second,
                "Y",
                Formula::forall(
                    second,
                    "Z",
                    imp(
                        Formula::and(
                            Formula::Prec("X".into(), "Y".into()),
                            Formula::Prec("Y".into(), "Z".into()),
                        ),
                        Formula::Prec("X".into(), "Z".into()),
                    ),
                ),
            ),
        ),
        A::W1Total => {
            let eq = syntax::expand(&Surface::Eq2(SetTerm::Var("X".into()), SetTerm::Var("Y".into())));
            Formula::forall(
                second,
                "X",
                Formula::forall(
                    second,
                    "Y",
                    Formula::or(
                        Formula::Prec("X".into(), "Y".into()),
                        Formula::or(eq, Formula::Prec("Y".into(), "X".into())),
                    ),
                ),
            )
        }
        A::W2 => {
            let (x, body) = (var(0), fm(1));
            let y = names.fresh("Y");
            let at_y = body.substitute(&x, second, &Subst::Var(y.clone()))?;
            let prog = Formula::forall(
                second,
                &x,
                imp(
                    Formula::forall(second, &y, imp(Formula::Prec(y.clone(), x.clone()), at_y)),
                    body.clone(),
                ),
            );
            imp(prog, Formula::forall(second, &x, body))
        }
        A::W2Prime => {
            let c = var(0);
            let x = names.fresh("X");
            let y = names.fresh("Y");
            let prog = Formula::forall(
                second,
                &x,
                imp(
                    Formula::forall(
                        second,
                        &y,
                        imp(Formula::Prec(y.clone(), x.clone()), Formula::In2(y.clone(), c.clone())),
                    ),
                    Formula::In2(x.clone(), c.clone()),
                ),
            );
            imp(prog, Formula::forall(second, &x, Formula::In2(x.clone(), c)))
        }
        A::W3 => {
            let bx = Box::new;
            syntax::expand(&Surface::ForAll(
                second,
                "X".into(),
                bx(Surface::Exists(
                    second,
                    "Z".into(),
                    bx(Surface::BoundedAll(
                        Bound::Prec,
                        "Y".into(),
                        "X".into(),
                        bx(Surface::Exists(
                            first,
                            "n".into(),
                            bx(Surface::Eq2(
                                SetTerm::Var("Y".into()),
                                SetTerm::Slice("Z".into(), FoTerm::var("n")),
                            )),
                        )),
                    )),
                )),
            ))
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    /// Parameters that failed to parse against the signature are kept as
    /// the error so the checker can report them as a rejection.
    Axiom(AxiomScheme, Result<Vec<Param>, KernelError>),
    Mp(usize, usize),
    AllGen(usize, Sort, Result<String, String>),
    ExGen(usize, Sort, Result<String, String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub formula: Formula,
    pub just: Justification,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Proof {
    pub lines: Vec<Line>,
}

impl Proof {
    pub fn prefix(&self, n: usize) -> Proof {
        Proof {
            lines: self.lines[..n.min(self.lines.len())].to_vec(),
        }
    }
}

/// Parses a proof file: `(declare …)` headers, then
/// `(proof (line FORMULA JUSTIFICATION) …)`.
pub fn parse_proof(src: &str) -> Result<Proof, KernelError> {
    let items = syntax::sexpr::read_all(src).map_err(|e| {
        KernelError::Syntax(SyntaxError::Lexical {
            msg: e.msg,
            pos: e.pos,
        })
    })?;
    let mut ctx = SortCtx::new();
    for it in &items {
        ctx.reserve(it);
    }
    let mut proof = None;
    for it in &items {
        if ctx.try_declaration(it)? {
            continue;
        }
        if it.head() == Some("proof") {
            if proof.is_some() {
                return Err(KernelError::Format {
                    msg: "more than one proof block".into(),
                    pos: it.pos(),
                });
            }
            proof = Some(it);
            continue;
        }
        return Err(KernelError::Format {
            msg: format!("expected (declare …) or (proof …), found {it}"),
            pos: it.pos(),
        });
    }
    let Some(block) = proof else {
        return Err(KernelError::Format {
            msg: "no (proof …) block".into(),
            pos: Pos { line: 1, col: 1 },
        });
    };
    let mut lines = Vec::new();
    for l in &block.as_list().unwrap()[1..] {
        lines.push(parse_line(&mut ctx, l)?);
    }
    Ok(Proof { lines })
}

/// Parses optional `(declare …)` headers followed by one
/// `(axiom ID PARAMS…)` and returns the instance it denotes.
pub fn parse_instance(src: &str) -> Result<(AxiomScheme, Formula), KernelError> {
    let items = syntax::sexpr::read_all(src).map_err(|e| {
        KernelError::Syntax(SyntaxError::Lexical {
            msg: e.msg,
            pos: e.pos,
        })
    })?;
    let mut ctx = SortCtx::new();
    for it in &items {
        ctx.reserve(it);
    }
    let mut found = None;
    for it in &items {
        if ctx.try_declaration(it)? {
            continue;
        }
        if it.head() != Some("axiom") || found.is_some() {
            return Err(KernelError::Format {
                msg: format!("expected one (axiom ID PARAMS…), found {it}"),
                pos: it.pos(),
            });
        }
        found = Some(parse_just(&mut ctx, it)?);
    }
    match found {
        Some(Justification::Axiom(scheme, params)) => {
            let params = params?;
            Ok((scheme, instantiate(scheme, &params)?))
        }
        _ => Err(KernelError::Format {
            msg: "no (axiom …) given".into(),
            pos: Pos { line: 1, col: 1 },
        }),
    }
}

fn parse_line(ctx: &mut SortCtx, l: &Sexp) -> Result<Line, KernelError> {
    let bad = |msg: &str| KernelError::Format {
        msg: msg.to_string(),
        pos: l.pos(),
    };
    let xs = l.as_list().ok_or_else(|| bad("expected (line FORMULA JUSTIFICATION)"))?;
    if xs.first().and_then(Sexp::as_atom) != Some("line") || xs.len() != 3 {
        return Err(bad("expected (line FORMULA JUSTIFICATION)"));
    }
    let formula = ctx.formula(&xs[1])?;
    let just = parse_just(ctx, &xs[2])?;
    Ok(Line {
        formula,
        just,
        pos: l.pos(),
    })
}

fn parse_index(s: &Sexp) -> Result<usize, KernelError> {
    s.as_atom()
        .and_then(|a| a.parse().ok())
        .ok_or_else(|| KernelError::Format {
            msg: format!("expected a line index, found {s}"),
            pos: s.pos(),
        })
}

fn parse_just(ctx: &mut SortCtx, j: &Sexp) -> Result<Justification, KernelError> {
    let bad = |msg: String| KernelError::Format { msg, pos: j.pos() };
    let xs = j.as_list().ok_or_else(|| bad(format!("expected a justification, found {j}")))?;
    match xs.first().and_then(Sexp::as_atom) {
        Some("axiom") => {
            let id = xs
                .get(1)
                .and_then(Sexp::as_atom)
                .ok_or_else(|| bad("axiom needs a scheme id".into()))?;
            let scheme = AxiomScheme::from_id(id).ok_or_else(|| {
                KernelError::Syntax(SyntaxError::UnknownHead {
                    head: id.to_string(),
                    pos: xs[1].pos(),
                })
            })?;
            let params = parse_params(ctx, scheme, &xs[2..]);
            Ok(Justification::Axiom(scheme, params))
        }
        Some("mp") => {
            if xs.len() != 3 {
                return Err(bad("mp takes two line indices".into()));
            }
            Ok(Justification::Mp(parse_index(&xs[1])?, parse_index(&xs[2])?))
        }
        Some(rule @ ("all-gen" | "ex-gen")) => {
            if xs.len() != 4 {
                return Err(bad(format!("{rule} takes a line index, a sort and a variable")));
            }
            let i = parse_index(&xs[1])?;
            let sort = xs[2]
                .as_atom()
                .and_then(Sort::from_word)
                .ok_or_else(|| bad(format!("unknown sort {}", xs[2])))?;
            let v = ctx.resolve(&xs[3], sort).map_err(|e| e.to_string());
            Ok(if rule == "all-gen" {
                Justification::AllGen(i, sort, v)
            } else {
                Justification::ExGen(i, sort, v)
            })
        }
        _ => Err(bad(format!("unknown justification {j}"))),
    }
}

fn parse_params(ctx: &mut SortCtx, scheme: AxiomScheme, xs: &[Sexp]) -> Result<Vec<Param>, KernelError> {
    let sig = scheme.signature();
    if sig.len() != xs.len() {
        return Err(KernelError::Arity {
            scheme,
            want: sig.len(),
            got: xs.len(),
        });
    }
    let mut out = Vec::new();
    let mut tag = None;
    for (index, (slot, x)) in sig.iter().zip(xs).enumerate() {
        let err = |e: &dyn std::fmt::Display| param_err(scheme, index, e.to_string());
        let p = match slot {
            Slot::Formula => Param::Formula(ctx.formula(x).map_err(|e| err(&e))?),
            Slot::Term => Param::Term(ctx.term(x).map_err(|e| err(&e))?),
            Slot::Var(s) => Param::Var(ctx.resolve(x, *s).map_err(|e| err(&e))?, *s),
            Slot::SortTag => {
                let s = x
                    .as_atom()
                    .and_then(Sort::from_word)
                    .ok_or_else(|| err(&format!("{}: expected a sort letter", x.pos())))?;
                tag = Some(s);
                Param::Sort(s)
            }
            Slot::TaggedVar => {
                let s = tag.expect("sort tag precedes");
                Param::Var(ctx.resolve(x, s).map_err(|e| err(&e))?, s)
            }
            Slot::Witness => match tag.expect("sort tag precedes") {
                Sort::First => Param::Term(ctx.term(x).map_err(|e| err(&e))?),
                s => Param::Var(ctx.resolve(x, s).map_err(|e| err(&e))?, s),
            },
        };
        out.push(p);
    }
    Ok(out)
}

/// Why a line was rejected. The string codes are a stable interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reason {
    CitationOutOfRange,
    MpNotImplication,
    MpAntecedentMismatch,
    ConclusionMismatch,
    AllGenSideCondition,
    ExGenSideCondition,
    GenShape,
    AxiomMismatch,
    AxiomParams,
    ParamSort,
    SchemeNotInTheory,
}

impl Reason {
    pub fn code(self) -> &'static str {
        match self {
            Reason::CitationOutOfRange => "citation-out-of-range",
            Reason::MpNotImplication => "mp-not-implication",
            Reason::MpAntecedentMismatch => "mp-antecedent-mismatch",
            Reason::ConclusionMismatch => "conclusion-mismatch",
            Reason::AllGenSideCondition => "allgen-side-condition",
            Reason::ExGenSideCondition => "exgen-side-condition",
            Reason::GenShape => "gen-shape",
            Reason::AxiomMismatch => "axiom-mismatch",
            Reason::AxiomParams => "axiom-params",
            Reason::ParamSort => "param-sort",
            Reason::SchemeNotInTheory => "scheme-not-in-theory",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject {
        line: usize,
        reason: Reason,
        detail: String,
    },
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Verdict::Accept => json!({"schema": 1, "status": "accept"}),
            Verdict::Reject {
                line,
                reason,
                detail,
            } => json!({
                "schema": 1,
                "status": "reject",
                "bad_line": line,
                "reason": reason.code(),
                "detail": detail,
            }),
        }
    }
}

fn reject(line: usize, reason: Reason, detail: impl Into<String>) -> Verdict {
    Verdict::Reject {
        line,
        reason,
        detail: detail.into(),
    }
}

/// Checks every line in order and reports the first failure.
pub fn check_proof(p: &Proof, th: Theory) -> Verdict {
    for (i, line) in p.lines.iter().enumerate() {
        if let Err(v) = check_line(p, i, line, th) {
            return v;
        }
    }
    Verdict::Accept
}

fn cited(p: &Proof, i: usize, j: usize) -> Result<&Formula, Verdict> {
    if j >= i {
        return Err(reject(
            i,
            Reason::CitationOutOfRange,
            format!("line {i} cites line {j}, which does not precede it"),
        ));
    }
    Ok(&p.lines[j].formula)
}

fn check_line(p: &Proof, i: usize, line: &Line, th: Theory) -> Result<(), Verdict> {
    let got = &line.formula;
    let conclude = |want: &Formula| {
        if got.alpha_eq(want) {
            Ok(())
        } else {
            Err(reject(
                i,
                Reason::ConclusionMismatch,
                format!("rule yields {want}, line states {got}"),
            ))
        }
    };
    match &line.just {
        Justification::Axiom(scheme, params) => {
            if !scheme.in_theory(th) {
                return Err(reject(
                    i,
                    Reason::SchemeNotInTheory,
                    format!("{scheme} needs the global well-ordering axioms"),
                ));
            }
            let param_reject = |e: &KernelError| {
                let reason = match e {
                    KernelError::Arity { .. } => Reason::AxiomParams,
                    _ => Reason::ParamSort,
                };
                reject(i, reason, e.to_string())
            };
            let params = params.as_ref().map_err(param_reject)?;
            let inst = instantiate(*scheme, params).map_err(|e| param_reject(&e))?;
            if got.alpha_eq(&inst) {
                Ok(())
            } else {
                Err(reject(
                    i,
                    Reason::AxiomMismatch,
                    format!("{scheme} instance is {inst}, line states {got}"),
                ))
            }
        }
        Justification::Mp(a, b) => {
            let fa = cited(p, i, *a)?;
            let fb = cited(p, i, *b)?;
            let Formula::Implies(ante, cons) = fb else {
                return Err(reject(
                    i,
                    Reason::MpNotImplication,
                    format!("line {b} is not an implication"),
                ));
            };
            if !ante.alpha_eq(fa) {
                return Err(reject(
                    i,
                    Reason::MpAntecedentMismatch,
                    format!("antecedent of line {b} is {ante}, line {a} is {fa}"),
                ));
            }
            conclude(cons)
        }
        Justification::AllGen(a, sort, v) | Justification::ExGen(a, sort, v) => {
            let all = matches!(line.just, Justification::AllGen(..));
            let v = v.as_ref().map_err(|e| reject(i, Reason::ParamSort, e.clone()))?;
            let fa = cited(p, i, *a)?;
            let Formula::Implies(ante, cons) = fa else {
                return Err(reject(
                    i,
                    Reason::GenShape,
                    format!("line {a} is not an implication"),
                ));
            };
            if all {
                if ante.is_free(v, *sort) {
                    return Err(reject(
                        i,
                        Reason::AllGenSideCondition,
                        format!("{v} occurs free in the antecedent {ante}"),
                    ));
                }
                conclude(&Formula::implies(
                    (**ante).clone(),
                    Formula::forall(*sort, v, (**cons).clone()),
                ))
            } else {
                if cons.is_free(v, *sort) {
                    return Err(reject(
                        i,
                        Reason::ExGenSideCondition,
                        format!("{v} occurs free in the consequent {cons}"),
                    ));
                }
                conclude(&Formula::implies(
                    Formula::exists(*sort, v, (**ante).clone()),
                    (**cons).clone(),
                ))
            }
        }
    }
}

/// The last line of an accepted proof.
pub fn theorem_of(p: &Proof, th: Theory) -> Result<&Formula, KernelError> {
    if let Verdict::Reject { line, reason, .. } = check_proof(p, th) {
        return Err(KernelError::Unchecked {
            line,
            reason: reason.code().to_string(),
        });
    }
    p.lines.last().map(|l| &l.formula).ok_or(KernelError::EmptyProof)
}
