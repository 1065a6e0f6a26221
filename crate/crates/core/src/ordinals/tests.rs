use super::*;
use proptest::prelude::*;
use std::collections::HashSet;

fn p(a: Ord, b: Ord) -> Ord {
    Ord::phi(a, b)
}

fn n(k: u64) -> Ord {
    Ord::finite(k)
}

fn cmp(x: &Ord, y: &Ord) -> Ordering {
    ord_cmp(x, y).unwrap()
}

// Cantor normal form below ω^ω: coefficient of ω^i at index i.
type Cnf = Vec<u64>;

fn cnf_cmp(x: &Cnf, y: &Cnf) -> Ordering {
    let len = x.len().max(y.len());
    for i in (0..len).rev() {
        let (a, b) = (x.get(i).copied().unwrap_or(0), y.get(i).copied().unwrap_or(0));
        if a != b {
            return a.cmp(&b);
        }
    }
    Ordering::Equal
}

fn cnf_add(x: &Cnf, y: &Cnf) -> Cnf {
    let Some(lead) = y.iter().rposition(|&c| c > 0) else {
        return x.clone();
    };
    let mut out = vec![0; x.len().max(y.len())];
    for i in lead..x.len() {
        out[i] = x[i];
    }
    for (i, &c) in y.iter().enumerate() {
        out[i] += c;
    }
    out
}

fn cnf_raw(x: &Cnf) -> RawOrd {
    let mut parts = Vec::new();
    for i in (0..x.len()).rev() {
        for _ in 0..x[i] {
            parts.push(RawOrd::Phi(Box::new(RawOrd::Zero), Box::new(RawOrd::Nat(i as u64))));
        }
    }
    RawOrd::Sum(parts)
}

fn arb_cnf() -> impl Strategy<Value = Cnf> {
    prop::collection::vec(0u64..=3, 0..4)
}

fn arb_raw() -> impl Strategy<Value = RawOrd> {
    let leaf = prop_oneof![Just(RawOrd::Zero), (0u64..4).prop_map(RawOrd::Nat)];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| RawOrd::Phi(Box::new(a), Box::new(b))),
            prop::collection::vec(inner, 0..4).prop_map(RawOrd::Sum),
        ]
    })
}

#[test]
fn example_comparisons() {
    let one = p(Ord::Zero, Ord::Zero);
    assert_eq!(one, n(1));
    assert_eq!(cmp(&one, &p(Ord::Zero, one.clone())), Ordering::Less);
    let tower = p(Ord::Zero, p(Ord::Zero, p(Ord::Zero, Ord::Zero)));
    assert_eq!(cmp(&Ord::epsilon0(), &tower), Ordering::Greater);
    let x = Ord::cm();
    assert_eq!(cmp(&x, &x), Ordering::Equal);
}

#[test]
fn fixed_point_absorption() {
    let e0 = Ord::epsilon0();
    let raw = parse_raw("(phi 0 (phi 1 0))").unwrap();
    assert_eq!(normalize(&raw), e0);
    // φ(1, φ(2, 0)) = φ(2, 0)
    assert_eq!(parse_ord("(phi 1 (phi 2 0))").unwrap(), p(n(2), Ord::Zero));
    // ω^(ε₀+1) is a genuine new term above ε₀
    let big = parse_ord("(phi 0 (sum (phi 1 0) 1))").unwrap();
    assert!(big.is_normal());
    assert_eq!(cmp(&big, &e0), Ordering::Greater);
    assert!(!Ord::phi(Ord::Zero, e0.clone()).is_normal());
    assert!(ord_cmp(&Ord::phi(Ord::Zero, e0), &n(1)).is_err());
}

#[test]
fn sums_absorb_smaller_terms() {
    // ω + ω² = ω²
    let e = parse_raw("(sum (phi 0 1) (phi 0 2))").unwrap();
    assert_eq!(normalize(&e), p(Ord::Zero, n(2)));
    // ω² + ω stays as written
    let f = parse_ord("(sum (phi 0 2) (phi 0 1))").unwrap();
    assert!(f.is_normal());
    assert_eq!(f.to_string(), "(sum (phi 0 (n 2)) (phi 0 (n 1)))");
    assert_eq!(cmp(&f, &p(Ord::Zero, n(2))), Ordering::Greater);
    assert_eq!(normalize(&RawOrd::Zero), Ord::Zero);
    assert_eq!(parse_ord("(sum 2 3)").unwrap(), n(5));
    assert_eq!(parse_ord("(sum 3 omega)").unwrap(), Ord::omega());
}

#[test]
fn cm_ordinal_dominates() {
    let cm = Ord::cm();
    assert_eq!(cm.to_string(), "(phi (phi (n 1) 0) 0)");
    for k in 0..6 {
        assert_eq!(cmp(&cm, &p(n(k), Ord::Zero)), Ordering::Greater);
        let e = normalize(&RawOrd::Phi(Box::new(RawOrd::Nat(k)), Box::new((&Ord::epsilon0()).into())));
        assert_eq!(cmp(&cm, &e), Ordering::Greater);
    }
    let below = parse_ord("(phi (phi 0 (sum (phi 1 0) 1)) 0)").unwrap();
    assert_eq!(cmp(&cm, &below), Ordering::Less);
    assert_eq!(cmp(&cm, &parse_ord("(phi (phi 1 0) 1)").unwrap()), Ordering::Less);
}

#[test]
fn parse_errors() {
    assert!(parse_ord("(phi 0)").is_err());
    assert!(parse_ord("(n x)").is_err());
    assert!(parse_ord("(foo)").is_err());
    assert!(parse_ord("").is_err());
}

#[test]
fn display_round_trip() {
    for src in ["0", "(n 3)", "(phi (phi (n 1) 0) 0)", "(sum (phi 0 (n 2)) (n 1))"] {
        let o = parse_ord(src).unwrap();
        assert_eq!(o.to_string(), src);
        assert_eq!(parse_ord(&o.to_string()).unwrap(), o);
    }
}

#[test]
fn kb_examples() {
    let t = FinTree::new([vec![], vec![0], vec![1], vec![0, 0]]).unwrap();
    assert_eq!(kb_sort(&t), vec![vec![0, 0], vec![0], vec![1], vec![]]);
    assert!(kb_less(&[0], &[]));
    assert!(!kb_less(&[2], &[1, 7]));
    assert!(kb_less(&[1, 7], &[2]));
    assert!(FinTree::new([vec![0, 1]]).is_err());
}

#[test]
fn tree_parse() {
    let t = FinTree::parse("() (0) (1) (0 0)").unwrap();
    assert_eq!(t.len(), 4);
    assert_eq!(FinTree::parse("(() (0))").unwrap().len(), 2);
    assert_eq!(FinTree::parse("()").unwrap().len(), 1);
    assert!(FinTree::parse("() (0 x)").is_err());
    assert!(FinTree::parse("(1 2)").is_err());
}

// Post-order traversal with ascending children gives the KB order.
fn post_order(t: &FinTree) -> Vec<Vec<u64>> {
    fn go(t: &FinTree, node: &[u64], out: &mut Vec<Vec<u64>>) {
        let mut kids: Vec<&Vec<u64>> = t
            .nodes()
            .filter(|m| m.len() == node.len() + 1 && m.starts_with(node))
            .collect();
        kids.sort_by_key(|m| m[node.len()]);
        for k in kids {
            go(t, k, out);
        }
        out.push(node.to_vec());
    }
    let mut out = Vec::new();
    if !t.is_empty() {
        go(t, &[], &mut out);
    }
    out
}

fn small_trees() -> Vec<FinTree> {
    let mut seen: HashSet<Vec<Vec<u64>>> = HashSet::new();
    let mut frontier = vec![vec![vec![]]];
    seen.insert(vec![vec![]]);
    let mut all = vec![];
    while let Some(nodes) = frontier.pop() {
        all.push(FinTree::new(nodes.clone()).unwrap());
        if nodes.len() == 6 {
            continue;
        }
        for parent in &nodes {
            for l in 0..3 {
                let mut c = parent.clone();
                c.push(l);
                if nodes.contains(&c) {
                    continue;
                }
                let mut next = nodes.clone();
                next.push(c);
                next.sort();
                if seen.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
    }
    all
}

#[test]
fn kb_exhaustive_small_trees() {
    let trees = small_trees();
    assert!(trees.len() > 500);
    for t in &trees {
        let sorted = kb_sort(t);
        assert_eq!(sorted, post_order(t));
        let ns: Vec<&Vec<u64>> = t.nodes().collect();
        for s in &ns {
            assert!(!kb_less(s, s));
            for u in &ns {
                if s != u {
                    assert!(kb_less(s, u) ^ kb_less(u, s));
                }
                if u.len() > s.len() && u.starts_with(s) {
                    assert!(kb_less(u, s));
                }
            }
        }
        // descending walks stop within |t| steps
        let mut cur = sorted.last().cloned();
        let mut steps = 0;
        while let Some(c) = cur {
            cur = ns.iter().filter(|m| kb_less(m, &c)).max_by(|a, b| kb_cmp(a, b)).map(|m| m.to_vec());
            steps += 1;
            assert!(steps <= t.len());
        }
    }
}

#[test]
fn index_examples() {
    let ix = FinOrderIndex::new([1, 2], [(1, 2)], 1);
    assert!(validate_index(&ix));
    let jx = FinOrderIndex { point: 2, ..ix.clone() };
    assert!(index_less(&ix, &jx));
    assert!(!index_less(&jx, &ix));
    assert!(!index_less(&ix, &ix));
    assert!(!validate_index(&FinOrderIndex::new([1, 2, 3], [(1, 2)], 1)));
    assert!(!validate_index(&FinOrderIndex::new([1, 2], [(1, 2)], 5)));
    assert!(!validate_index(&FinOrderIndex::new([1, 2, 3], [(1, 2), (2, 3), (3, 1)], 1)));
    let other = FinOrderIndex::new([1, 2], [(2, 1)], 2);
    assert!(validate_index(&other));
    assert!(!index_less(&ix, &other));
    let other_point1 = FinOrderIndex::new([1, 2, 3], [(1, 2), (1, 3), (2, 3)], 2);
    assert!(!index_less(&ix, &other_point1));
}

#[test]
fn alpha_plus_omega_stage() {
    let alpha = FinOrderIndex::chain(&[4, 0, 7], 0);
    assert!(validate_index(&alpha));
    let ix = alpha_plus_omega(&alpha, 3);
    assert!(validate_index(&ix));
    assert_eq!(ix.point, 0);
    assert_eq!(index_rank(&ix), 6);
    // 2·4+2 below 2·0+2 below 2·7+2 below the odds below 0
    assert!(ix.rel.contains(&(10, 2)) && ix.rel.contains(&(2, 16)));
    assert!(ix.rel.contains(&(16, 1)) && ix.rel.contains(&(5, 0)));
    let beta = FinOrderIndex { point: 3, ..ix.clone() };
    assert!(index_less(&beta, &ix));
}

proptest! {
    #[test]
    fn agrees_with_cnf_oracle(x in arb_cnf(), y in arb_cnf()) {
        let (a, b) = (normalize(&cnf_raw(&x)), normalize(&cnf_raw(&y)));
        prop_assert_eq!(cmp(&a, &b), cnf_cmp(&x, &y));
    }

    #[test]
    fn addition_matches_cnf(x in arb_cnf(), y in arb_cnf()) {
        let both = RawOrd::Sum(vec![cnf_raw(&x), cnf_raw(&y)]);
        let want = normalize(&cnf_raw(&cnf_add(&x, &y)));
        prop_assert_eq!(normalize(&both), want);
    }

    #[test]
    fn normalize_idempotent(e in arb_raw()) {
        let o = normalize(&e);
        prop_assert!(o.is_normal());
        prop_assert_eq!(normalize(&RawOrd::from(&o)), o.clone());
        prop_assert_eq!(cmp(&o, &o), Ordering::Equal);
        prop_assert_eq!(parse_ord(&o.to_string()).unwrap(), o);
    }

    #[test]
    fn linear_order(a in arb_raw(), b in arb_raw(), c in arb_raw()) {
        let (x, y, z) = (normalize(&a), normalize(&b), normalize(&c));
        prop_assert_eq!(cmp(&x, &y), cmp(&y, &x).reverse());
        prop_assert_eq!(cmp(&x, &y) == Ordering::Equal, x == y);
        if cmp(&x, &y) != Ordering::Greater && cmp(&y, &z) != Ordering::Greater {
            prop_assert_ne!(cmp(&x, &z), Ordering::Greater);
        }
    }

    #[test]
    fn phi_monotone_and_above_argument(a in arb_raw(), b in arb_raw()) {
        let (x, y) = (normalize(&a), normalize(&b));
        let f = normalize(&RawOrd::Phi(Box::new(a.clone()), Box::new(b.clone())));
        prop_assert_ne!(cmp(&f, &y), Ordering::Less);
        prop_assert_ne!(cmp(&f, &x), Ordering::Less);
        let g = normalize(&RawOrd::Phi(Box::new(a), Box::new(RawOrd::Sum(vec![b, RawOrd::Nat(1)]))));
        prop_assert_eq!(cmp(&f, &g), Ordering::Less);
    }
}
