use super::*;
use crate::kernel::parse_proof;
use crate::syntax::parse_formula;

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn small() -> Bounds {
    Bounds::new(8, 100_000)
}

fn n(k: u64) -> CombTerm {
    T::num(k)
}

#[test]
fn atomic_truth_ignores_the_realiser() {
    let env = Env::default();
    assert!(realizes(&n(7), &f("(= 0 0)"), &env, &small()).is_yes());
    assert!(realizes(&n(7), &f("(= 0 (s 0))"), &env, &small()).is_no());
    assert!(realizes(&n(0), &f("(= (+ 2 2) (* 2 2))"), &env, &small()).is_yes());
}

#[test]
fn disjunction_tags() {
    let env = Env::default();
    let phi = f("(or (= 0 0) (= 0 1))");
    assert!(realizes(&T::pair(n(0), n(0)), &phi, &env, &small()).is_yes());
    assert!(realizes(&T::pair(n(1), n(0)), &phi, &env, &small()).is_no());
    assert!(realizes(&T::pair(n(2), n(0)), &phi, &env, &small()).is_no());
}

#[test]
fn existential_witness_is_checked() {
    let env = Env::default();
    let phi = f("(exists-n x (= x (s (s (s 0)))))");
    assert!(realizes(&T::pair(n(3), n(0)), &phi, &env, &small()).is_yes());
    assert!(realizes(&T::pair(n(2), n(0)), &phi, &env, &small()).is_no());
    assert_eq!(witness(&T::pair(n(3), n(9)), &phi, 100).unwrap(), Witness::Number(3u32.into()));
    // a lazily built pair is evaluated first
    let lazy = T::apps(T::K, [T::pair(T::app(T::Succ, n(2)), n(0)), n(5)]);
    assert_eq!(witness(&lazy, &phi, 100).unwrap(), Witness::Number(3u32.into()));
    assert!(witness(&T::app(T::Proj0, T::K), &phi, 100).is_err());
}

#[test]
fn universal_first_sort_is_bounded() {
    let env = Env::default();
    let succ_pair = pca::compile(&T::lam("x", T::pair(T::app(T::Succ, T::var("x")), n(0)))).unwrap();
    let phi = f("(forall-n x (exists-n y (= y (s x))))");
    assert!(realizes(&succ_pair, &phi, &env, &small()).is_yes());
    let wrong = pca::compile(&T::lam("x", T::pair(T::var("x"), n(0)))).unwrap();
    assert!(realizes(&wrong, &phi, &env, &small()).is_no());
}

#[test]
fn sets_and_classes() {
    let mut env = Env::default();
    env.sets.insert("X".into(), default_set_samples()[3].clone()); // evens
    assert!(realizes(&n(0), &f("(in1 4 X)"), &env, &small()).is_yes());
    assert!(realizes(&n(0), &f("(in1 3 X)"), &env, &small()).is_no());
    // ∀X (0 ∈ X ∨ ¬ 0 ∈ X) realised by λx.⟨1 − x 0, 0⟩
    let dec = pca::compile(&T::lam(
        "x",
        T::pair(T::apps(T::Cases, [n(1), n(0), T::app(T::var("x"), n(0)), n(0)]), n(0)),
    ))
    .unwrap();
    let phi = f("(forall-s X (or (in1 0 X) (not (in1 0 X))))");
    assert!(realizes(&dec, &phi, &Env::default(), &small()).is_yes());
    // an existential set witness must be a 0/1 function
    let psi = f("(exists-s X (in1 0 X))");
    assert!(realizes(&T::pair(T::app(T::K, n(1)), n(0)), &psi, &env, &small()).is_yes());
    assert!(realizes(&T::pair(T::app(T::K, n(5)), n(0)), &psi, &env, &small()).is_no());
}

#[test]
fn negation_and_implication() {
    let env = Env::default();
    assert!(realizes(&n(0), &f("(not (= 0 1))"), &env, &small()).is_yes());
    assert!(realizes(&n(0), &f("(not (= 0 0))"), &env, &small()).is_no());
    // ¬∀x (x = 0): the instance x = 1 has no realiser
    assert!(realizes(&n(0), &f("(not (forall-n x (= x 0)))"), &env, &small()).is_yes());
    // ¬∃x (x = x+1) cannot be settled below the bound
    assert!(matches!(
        realizes(&n(0), &f("(not (exists-n x (= x (s x))))"), &env, &small()),
        Verdict3::Unknown(_)
    ));
    let id = pca::compile(&T::lam("e", T::var("e"))).unwrap();
    assert!(realizes(&id, &f("(-> (or (= 0 0) (= 1 1)) (or (= 0 0) (= 1 1)))"), &env, &small()).is_yes());
    let swap = pca::compile(&T::lam("e", T::pair(T::app(T::Proj1, T::var("e")), T::app(T::Proj0, T::var("e"))))).unwrap();
    assert!(realizes(&swap, &f("(-> (and (= 0 0) (= 1 1)) (and (= 1 1) (= 0 0)))"), &env, &small()).is_yes());
    // vacuous: false antecedent
    assert!(realizes(&n(0), &f("(-> (= 0 1) (= 1 2))"), &env, &small()).is_yes());
    // a realiser must map realisers of the antecedent to realisers
    assert!(realizes(&T::app(T::K, T::pair(n(1), n(0))), &f("(-> (= 0 0) (or (= 0 0) (= 0 1)))"), &env, &small()).is_no());
}

#[test]
fn fuel_exhaustion_is_unknown() {
    let omega = pca::compile(&T::app(
        T::lam("x", T::app(T::var("x"), T::var("x"))),
        T::lam("x", T::app(T::var("x"), T::var("x"))),
    ))
    .unwrap();
    let phi = f("(or (= 0 0) (= 0 0))");
    assert!(matches!(realizes(&omega, &phi, &Env::default(), &small()), Verdict3::Unknown(_)));
}

fn theorem(src: &str) -> Report {
    check_theorem(&parse_proof(src).unwrap(), Theory::Cm, &Env::default(), &Bounds::default()).unwrap()
}

#[test]
fn theorem_reports() {
    let r = theorem(
        "(proof
          (line (= 3 3) (axiom eq-refl 3))
          (line (-> (= 3 3) (exists-n n (= n 3))) (axiom ex-i n n (= n 3) 3))
          (line (exists-n n (= n 3)) (mp 0 1)))",
    );
    assert!(r.verdict.is_yes(), "{}", r.verdict);
    assert_eq!(
        r.witnesses,
        vec![Found::Exists { var: "n".into(), sort: Sort::First, value: Witness::Number(3u32.into()) }]
    );
    let j = r.to_json();
    assert_eq!(j["schema"], 1);
    assert_eq!(j["verdict"], "yes");
    assert_eq!(j["bounds"]["n"], 50);

    let r = theorem("(proof (line (or (= 0 0) (not (= 0 0))) (axiom dec-eq 0 0)))");
    assert_eq!(r.witnesses, vec![Found::Or { tag: 0 }]);
    let r = theorem("(proof (line (or (= 0 1) (not (= 0 1))) (axiom dec-eq 0 1)))");
    assert_eq!(r.witnesses, vec![Found::Or { tag: 1 }]);
    assert!(r.verdict.is_yes());
}

#[test]
fn open_theorems_range_over_assignments() {
    let r = theorem("(proof (line (= (+ n 0) n) (axiom pa-add-zero n)))");
    assert!(r.verdict.is_yes());
    assert_eq!(r.assignments, 4);
    let r = theorem("(proof (line (or (in1 n X) (not (in1 n X))) (axiom dec-in1 n X)))");
    assert!(r.verdict.is_yes(), "{}", r.verdict);
    assert_eq!(r.assignments, 20);
}

#[test]
fn stand_ins_are_never_certified() {
    let p = parse_proof("(proof (line (forall-s X (not (prec X X))) (axiom w1-irrefl)))").unwrap();
    let r = check_theorem(&p, Theory::CmGwo, &Env::default(), &Bounds::default()).unwrap();
    assert_eq!(r.verdict, Verdict3::Unknown("nonconstructive stand-in".into()));
}

#[test]
fn exhausted_search_downgrades() {
    // ∀n (n = n ∨ ¬ n = n) proved from decidability, then omniscience: the
    // search finds no n with ¬ n = n, so the left disjunct comes back with
    // only the numbers below the bound confirmed
    let src = "(proof
      (line (or (= n n) (not (= n n))) (axiom dec-eq n n))
      (line (-> (or (= n n) (not (= n n))) (-> (= 0 0) (or (= n n) (not (= n n)))))
            (axiom k (or (= n n) (not (= n n))) (= 0 0)))
      (line (-> (= 0 0) (or (= n n) (not (= n n)))) (mp 0 1))
      (line (-> (= 0 0) (forall-n n (or (= n n) (not (= n n))))) (all-gen 2 n n))
      (line (= 0 0) (axiom eq-refl 0))
      (line (forall-n n (or (= n n) (not (= n n)))) (mp 4 3))
      (line (-> (forall-n n (or (= n n) (not (= n n))))
                (or (forall-n n (= n n)) (exists-n n (not (= n n)))))
            (axiom lpo n (= n n) (not (= n n))))
      (line (or (forall-n n (= n n)) (exists-n n (not (= n n)))) (mp 5 6)))";
    let r = theorem(src);
    assert!(matches!(r.verdict, Verdict3::Unknown(_)), "{}", r.verdict);
}

#[test]
fn larger_fuel_keeps_yes() {
    let phi = f("(forall-n x (exists-n y (= y (+ x x))))");
    let d = pca::compile(&T::lam(
        "x",
        T::pair(T::apps(crate::extractor::add(), [T::var("x"), T::var("x")]), n(0)),
    ))
    .unwrap();
    let env = Env::default();
    let mut last = false;
    for fuel in [1_000u64, 10_000, 100_000, 1_000_000] {
        let yes = realizes(&d, &phi, &env, &Bounds::new(20, fuel)).is_yes();
        assert!(!last || yes, "Yes lost at fuel {fuel}");
        last = yes;
    }
    assert!(last);
}

