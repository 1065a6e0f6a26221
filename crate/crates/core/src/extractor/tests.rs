use super::*;
use crate::kernel::parse_proof;
use crate::pca::{reduce, Outcome};
use crate::syntax::parse_formula;
use num_bigint::BigUint;
use proptest::prelude::*;

fn run(t: &CombTerm, fuel: u64) -> Outcome {
    reduce(&pca::compile(t).unwrap(), fuel)
}

fn num_of(t: &CombTerm) -> u64 {
    match run(t, 1_000_000) {
        Outcome::Converged(v, _) => pca::num_value(&v).expect("numeral"),
        o => panic!("{o:?}"),
    }
}

fn extract_src(src: &str) -> Extraction {
    extract(&parse_proof(src).unwrap(), Theory::Cm, &ExtractOptions::default()).unwrap()
}

#[test]
fn layout_orders_by_sort_then_occurrence() {
    let name = |f: &str| {
        parameter_layout(&parse_formula(f).unwrap())
            .into_iter()
            .map(|(n, _)| n)
            .collect::<Vec<_>>()
    };
    assert_eq!(name("(and (in1 n X) (= n n))"), ["n", "X"]);
    assert_eq!(name("(declare A t) (and (in1 m X) (in2 X A))"), ["m", "X", "A"]);
    assert_eq!(name("(and (in2 X A) (= m k))"), ["m", "k", "X", "A"]);
    assert!(name("(forall-n n (= n n))").is_empty());
}

#[test]
fn tuples_and_projections() {
    assert_eq!(tuple(vec![]), T::num(0));
    assert_eq!(tuple(vec![n(4)]), n(4));
    let t = tuple(vec![n(1), n(2), n(3)]);
    assert_eq!(t, T::pair(n(1), T::pair(n(2), n(3))));
    for i in 0..3 {
        let got = num_of(&project(&t, i, 3));
        assert_eq!(got, i as u64 + 1);
    }
}

#[test]
fn arithmetic_combinators() {
    for a in 0..6u64 {
        for b in 0..6u64 {
            assert_eq!(num_of(&ap(add(), [n(a), n(b)])), a + b);
            assert_eq!(num_of(&ap(mul(), [n(a), n(b)])), a * b);
        }
    }
}

#[test]
fn logical_table_shapes() {
    let opts = ExtractOptions::default();
    let f = parse_formula("(= 0 0)").unwrap();
    let pf = Param::Formula(f.clone());
    let inst = instantiate(AxiomScheme::K, &[pf.clone(), pf.clone()]).unwrap();
    let (k, ph) = realiser_for_axiom(AxiomScheme::K, &[pf.clone(), pf.clone()], &inst, &opts);
    assert!(!ph);
    assert_eq!(k.to_string(), "(lam p (lam e (lam f e)))");
    let (l, _) = realiser_for_axiom(AxiomScheme::AndL, &[pf.clone(), pf.clone()], &inst, &opts);
    assert_eq!(l.to_string(), "(lam p (lam e (P0 e)))");
    let (s, _) = realiser_for_axiom(AxiomScheme::S, &[pf.clone(), pf.clone(), pf], &inst, &opts);
    assert_eq!(s.to_string(), "(lam p (lam f (lam g (lam e (g e (f e))))))");
}

#[test]
fn rule_templates_follow_the_table() {
    let none: Vec<Var> = vec![];
    assert_eq!(
        mp_template(v("e"), &none, v("f"), &none, &none).to_string(),
        "(lam p (f p (e p)))"
    );
    let x = ("x".to_string(), Sort::First);
    assert_eq!(
        all_gen_template(v("f"), std::slice::from_ref(&x), &x, &none).to_string(),
        "(lam p (lam d (lam n (f n d))))"
    );
    let y = ("y".to_string(), Sort::First);
    // the generalised variable is slotted by layout position
    assert_eq!(
        all_gen_template(v("f"), &[x.clone(), y.clone()], &x, std::slice::from_ref(&y)).to_string(),
        "(lam p (lam d (lam n (f (P n p) d))))"
    );
    assert_eq!(
        ex_gen_template(v("f"), std::slice::from_ref(&x), &x, &none).to_string(),
        "(lam p (lam d (f (P0 d) (P1 d))))"
    );
}

#[test]
fn existential_witness_is_computed() {
    let e = extract_src(
        "(proof
          (line (= 3 3) (axiom eq-refl 3))
          (line (-> (= 3 3) (exists-n n (= n 3))) (axiom ex-i n n (= n 3) 3))
          (line (exists-n n (= n 3)) (mp 0 1)))",
    );
    assert!(e.layout.is_empty());
    assert_eq!(num_of(&p0(T::app(e.term.clone(), n(0)))), 3);
    // a single citation is inlined rather than shared
    assert!(!e.term.to_string().contains("r0"));
}

#[test]
fn induction_realiser_counts() {
    // ∀n (= (+ 0 n) n) by induction; the realiser is total on numerals
    let src = "(proof
      (line (= (+ 0 0) 0) (axiom pa-add-zero 0))
      (line (= (+ 0 (s n)) (s (+ 0 n))) (axiom pa-add-succ 0 n))
      (line (-> (and (= (+ 0 0) 0) (forall-n n (-> (= (+ 0 n) n) (= (+ 0 (s n)) (s n)))))
                (forall-n n (= (+ 0 n) n)))
            (axiom ind n (= (+ 0 n) n)))
    )";
    let p = parse_proof(src).unwrap();
    assert!(check_proof(&p, Theory::Cm).is_accept());
    let e = extract(&p, Theory::Cm, &ExtractOptions::default()).unwrap();
    assert_eq!(e.trace.len(), 3);
    assert_eq!(e.trace[1].layout, vec![("n".to_string(), Sort::First)]);
}

#[test]
fn shared_lines_are_let_bound() {
    let e = extract_src(
        "(proof
          (line (= 0 0) (axiom eq-refl 0))
          (line (-> (= 0 0) (-> (= 0 0) (and (= 0 0) (= 0 0)))) (axiom and-i (= 0 0) (= 0 0)))
          (line (-> (= 0 0) (and (= 0 0) (= 0 0))) (mp 0 1))
          (line (and (= 0 0) (= 0 0)) (mp 0 2)))",
    );
    assert!(e.term.to_string().contains("(lam r0"));
    match run(&T::app(e.term.clone(), n(0)), 10_000) {
        Outcome::Converged(v, _) => assert!(v.as_pair().is_some()),
        o => panic!("{o:?}"),
    }
    let j = e.trace_json();
    assert_eq!(j["lines"][3]["cites"], serde_json::json!([0, 2]));
}

#[test]
fn rejected_proofs_do_not_extract() {
    let p = parse_proof("(proof (line (= 0 1) (axiom eq-refl 0)))").unwrap();
    assert!(matches!(
        extract(&p, Theory::Cm, &ExtractOptions::default()),
        Err(ExtractError::Rejected(_))
    ));
    let p = parse_proof("(proof)").unwrap();
    assert_eq!(
        extract(&p, Theory::Cm, &ExtractOptions::default()).unwrap_err(),
        ExtractError::Empty
    );
}

#[test]
fn gwo_axioms_are_flagged() {
    let p = parse_proof("(proof (line (forall-s X (not (prec X X))) (axiom w1-irrefl)))").unwrap();
    let e = extract(&p, Theory::CmGwo, &ExtractOptions::default()).unwrap();
    assert!(e.placeholder);
}

#[test]
fn lpo_search_finds_first_hit() {
    // f n = ⟨[n = 2], 0⟩: the search lands on 2
    let f = lam("a", T::pair(ap(T::Cases, [n(1), n(0), v("a"), n(2)]), n(0)));
    let (r, _) = realiser_for_axiom(
        AxiomScheme::Lpo,
        &[
            Param::Var("n".into(), Sort::First),
            Param::Formula(parse_formula("(= 0 0)").unwrap()),
            Param::Formula(parse_formula("(= n 2)").unwrap()),
        ],
        &parse_formula("(= 0 0)").unwrap(),
        &ExtractOptions::default(),
    );
    let d = ap(r, [n(0), f]);
    assert_eq!(num_of(&p0(d.clone())), 1);
    assert_eq!(num_of(&p0(p1(d))), 2);
}

proptest! {
    #[test]
    fn term_translation_agrees_with_evaluation(t in crate::syntax::tests::arb_small_term()) {
        let vars = t.vars();
        let layout: Vec<Var> = {
            let mut seen: Vec<Var> = vec![];
            for x in vars { if !seen.iter().any(|(y, _)| *y == x) { seen.push((x, Sort::First)); } }
            seen
        };
        let ps = Params::new("p", layout.clone());
        let vals: Vec<u64> = (0..layout.len() as u64).map(|i| i + 1).collect();
        let tup = tuple(vals.iter().map(|&k| n(k)).collect());
        let got = num_of(&T::app(lam("p", ps.term(&t)), tup));
        let env = |x: &str| layout.iter().position(|(y, _)| y == x).map(|i| BigUint::from(vals[i]));
        let want = t.eval(&env).unwrap();
        prop_assert_eq!(BigUint::from(got), want);
    }
}
