use super::*;
use proptest::prelude::*;

fn p(src: &str) -> CombTerm {
    parse_term(src).unwrap()
}

fn val(src: &str) -> CombTerm {
    reduce(&p(src), 10_000).value().expect("converges").0.clone()
}

#[test]
fn reduce_examples() {
    assert_eq!(val("(K (num 3) (num 5))"), CombTerm::num(3));
    assert_eq!(val("(S K K (num 9))"), CombTerm::num(9));
    assert_eq!(val("(P1 (P (num 1) (num 2)))"), CombTerm::num(2));
    assert_eq!(val("(PRED 0)"), CombTerm::num(0));
    assert_eq!(val("(SUCC (SUCC 4))"), CombTerm::num(6));
    assert_eq!(val("(CASES 1 2 (num 7) (num 7))"), CombTerm::num(1));
    assert_eq!(val("(CASES 1 2 (num 7) (num 8))"), CombTerm::num(2));
}

#[test]
fn s_k_k_takes_three_steps() {
    // S K K 9 → K 9 (K 9) → 9
    match reduce(&p("(S K K 9)"), 100) {
        Outcome::Converged(v, steps) => {
            assert_eq!(v.0, CombTerm::num(9));
            assert_eq!(steps, 2);
        }
        o => panic!("{o:?}"),
    }
    assert_eq!(reduce(&p("(S K K 9)"), 1), Outcome::OutOfFuel);
}

#[test]
fn stuck_cases() {
    assert!(matches!(reduce(&p("(CASES 1 2 (P 0 0) 0)"), 100), Outcome::Stuck(_)));
    assert!(matches!(reduce(&p("(SUCC K)"), 100), Outcome::Stuck(_)));
    assert!(matches!(reduce(&p("(3 4)"), 100), Outcome::Stuck(_)));
    assert!(matches!(reduce(&p("(P 1 2 3)"), 100), Outcome::Stuck(_)));
    assert!(matches!(reduce(&p("(P0 K)"), 100), Outcome::Stuck(_)));
    assert!(matches!(reduce(&p("(K x)"), 100), Outcome::Stuck(_)));
}

#[test]
fn partial_applications_are_values() {
    assert_eq!(val("(K 1)"), p("(K 1)"));
    assert_eq!(val("(S (K 1))"), p("(S (K 1))"));
    assert_eq!(val("(P (K 1 2) 3)"), p("(P (K 1 2) 3)"));
    assert_eq!(val("(CASES 1 2 3)"), p("(CASES 1 2 3)"));
}

#[test]
fn projections_decode_numerals() {
    for k in 0..200u64 {
        let (a, b) = crate::coding::unpair(&BigUint::from(k));
        assert_eq!(val(&format!("(P0 {k})")), T::Num(a));
        assert_eq!(val(&format!("(P1 {k})")), T::Num(b));
    }
}

#[test]
fn bracket_examples() {
    assert_eq!(bracket_abstract("x", &T::var("x")), p("(S K K)"));
    assert_eq!(
        bracket_abstract("x", &p("(K x)")),
        p("(S (K K) (S K K))")
    );
    let k2 = compile(&p("(lam x (lam y x))")).unwrap();
    for (a, b) in [("3", "4"), ("K", "S"), ("(P 1 2)", "0")] {
        let t = CombTerm::apps(k2.clone(), [p(a), p(b)]);
        assert_eq!(normalize(&t, 1000).value().unwrap().0, normalize(&p(a), 1000).value().unwrap().0);
    }
}

#[test]
fn compile_examples() {
    let t = compile(&p("(lam p (lam e (lam f e)))")).unwrap();
    let r = reduce(&CombTerm::apps(t, [CombTerm::num(1), CombTerm::num(2), CombTerm::num(3)]), 1000);
    assert_eq!(r.value().unwrap().0, CombTerm::num(2));
    assert_eq!(compile(&p("(K S)")).unwrap(), p("(K S)"));
    assert_eq!(compile(&p("(lam x y)")), Err(PcaError::FreeVariable("y".into())));
}

#[test]
fn mu_examples() {
    let f = compile(&p("(lam n (CASES 1 0 n 3))")).unwrap();
    assert_eq!(mu_search(&Value(f), 10_000).value().unwrap().0, CombTerm::num(3));
    assert_eq!(mu_search(&Value(p("(K 1)")), 100).value().unwrap().0, CombTerm::num(0));
    assert_eq!(mu_search(&Value(p("(K 0)")), 10_000), Outcome::OutOfFuel);
    assert!(matches!(mu_search(&Value(p("(K K)")), 100), Outcome::Stuck(_)));
}

#[test]
fn bounded_search_returns_the_bound() {
    let mut m = Machine::new(10_000);
    m.search_bound = Some(BigUint::from(7u32));
    let t = m.load(&p("(MU (K 0))")).unwrap();
    assert_eq!(m.force_num(t).unwrap(), Some(BigUint::from(7u32)));
    assert_eq!(m.exhausted_searches, 1);
}

fn add_term() -> CombTerm {
    // FIX (λself.λa.λb. CASES a (SUCC (self a (PRED b))) b 0)
    compile(&p(
        "(FIX (lam self (lam a (lam b (CASES a (SUCC (self a (PRED b))) b 0)))))",
    ))
    .unwrap()
}

#[test]
fn fix_recursion() {
    let add = add_term();
    for (a, b) in [(0, 0), (3, 4), (10, 0), (0, 10)] {
        let t = CombTerm::apps(add.clone(), [CombTerm::num(a), CombTerm::num(b)]);
        assert_eq!(reduce(&t, 100_000).value().unwrap().0, CombTerm::num(a + b));
    }
    // deep recursion does not overflow the native stack
    let t = CombTerm::apps(add, [CombTerm::num(0), CombTerm::num(20_000)]);
    assert_eq!(reduce(&t, 10_000_000).value().unwrap().0, CombTerm::num(20_000));
}

#[test]
fn sharing_evaluates_once() {
    // S (K K) (S K K) x y = K (x) ... argument shared between both branches
    let add = add_term();
    let heavy = CombTerm::apps(add, [CombTerm::num(0), CombTerm::num(300)]);
    let dup = compile(&p("(lam x (CASES x x x x))")).unwrap();
    let once = reduce(&heavy, 1_000_000);
    let twice = reduce(&CombTerm::app(dup, heavy), 1_000_000);
    let (Outcome::Converged(_, a), Outcome::Converged(_, b)) = (once, twice) else { panic!() };
    assert!(b < a + 50, "{a} vs {b}");
}

#[test]
fn print_parse_round_trip() {
    for src in ["(S (K K) (S K K))", "(lam p (lam e (lam f e)))", "(CASES (num 1) x (MU FIX) (P0 P1))"] {
        let t = p(src);
        assert_eq!(p(&t.to_string()), t);
    }
    assert_eq!(p("(app K S)"), p("(K S)"));
    assert_eq!(p("7"), CombTerm::num(7));
}

fn arb_closed(depth: u32) -> BoxedStrategy<CombTerm> {
    let leaf = prop_oneof![
        Just(T::K),
        Just(T::S),
        Just(T::Succ),
        Just(T::Pred),
        Just(T::Pair),
        Just(T::Proj0),
        Just(T::Proj1),
        Just(T::Cases),
        (0u64..5).prop_map(CombTerm::num),
    ];
    leaf.prop_recursive(depth, 64, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| CombTerm::app(a, b))
    })
    .boxed()
}

proptest! {
    #[test]
    fn fuel_monotone(t in arb_closed(6), f in 1u64..60) {
        if let Outcome::Converged(v, s) = reduce(&t, f) {
            prop_assert!(s <= f);
            for extra in [1u64, 10, 1000] {
                prop_assert_eq!(reduce(&t, f + extra), Outcome::Converged(v.clone(), s));
            }
        }
    }

    #[test]
    fn deterministic(t in arb_closed(6)) {
        prop_assert_eq!(reduce(&t, 500), reduce(&t, 500));
    }

    #[test]
    fn k_law(a in arb_closed(3), b in arb_closed(3)) {
        let lhs = normalize(&CombTerm::apps(T::K, [a.clone(), b]), 2000);
        let rhs = normalize(&a, 2000);
        if let (Some(l), Some(r)) = (lhs.value(), rhs.value()) {
            prop_assert_eq!(l, r);
        }
    }

    #[test]
    fn pairing_on_numerals(m in 0u64..500, n in 0u64..500) {
        let code = crate::coding::pair_u64(m, n);
        let a = reduce(&CombTerm::app(T::Proj0, T::Num(code.clone())), 10);
        let b = reduce(&CombTerm::app(T::Proj1, T::Num(code)), 10);
        prop_assert_eq!(a.value().unwrap().0.clone(), CombTerm::num(m));
        prop_assert_eq!(b.value().unwrap().0.clone(), CombTerm::num(n));
    }
}
