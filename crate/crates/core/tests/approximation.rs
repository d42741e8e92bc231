mod common;

use clo_core::approximation::{
    approximate_circuit, count_errors, default_params, find_sunflower, negative_error_bound, pluck,
    positive_error_bound, ApproxParams, Approximator, Indicator,
};
use clo_core::constructions::trivial_dnf;
use clo_core::testsets::TestSuite;
use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;

#[test]
fn default_params_examples() {
    let p = default_params(1024, 5).unwrap();
    assert_eq!((p.ell, p.p), (2, 224));
    let p = default_params(16, 16).unwrap();
    assert_eq!((p.ell, p.p), (4, 160));
}

#[test]
fn pluck_stalls_without_a_sunflower() {
    // a 5-cycle has no three disjoint edges and no vertex of degree three
    let cycle: Vec<Indicator> = (0..5).map(|i| Indicator::new(vec![i, (i + 1) % 5])).collect();
    let a = Approximator::new(2, cycle);
    let params = ApproxParams::new(2, 3, 2).unwrap();
    assert_eq!(pluck(&a, &params), a);
    // with p = 2 two edges sharing a vertex form a flower with a 1-vertex core
    let params = ApproxParams::new(2, 2, 2).unwrap();
    assert!(pluck(&a, &params).is_one());
}

#[test]
fn bounds_by_hand() {
    let p = ApproxParams::new(2, 3, 4).unwrap();
    // 10 · 16 · C(4, 1)
    assert_eq!(positive_error_bound(10, &p, 7, 4), BigInt::from(640));
    // 10 · 16 · (1/3)^3 · 3^7
    assert_eq!(negative_error_bound(10, &p, 7, 4), BigInt::from(12960));
}

#[test]
fn dnf_approximates_to_zero() {
    let dnf = trivial_dnf(5, 3).unwrap().circuit.binarize();
    let params = ApproxParams::new(2, 2, 1_000_000).unwrap();
    let a = approximate_circuit(&dnf, &params).unwrap();
    assert!(a.is_zero());
    let e = count_errors(&dnf, &a, &TestSuite::new(5, 3).unwrap()).unwrap();
    assert_eq!((e.e_plus, e.e_minus), (10, BigInt::from(0)));
}

#[test]
fn unbounded_fanin_is_refused() {
    let dnf = trivial_dnf(5, 3).unwrap().circuit;
    assert!(approximate_circuit(&dnf, &ApproxParams::new(2, 2, 4).unwrap()).is_err());
}

#[test]
fn approximator_json() {
    let a: Approximator = serde_json::from_str(r#"{"ell":2,"indicators":[[0,1],[2,3]]}"#).unwrap();
    assert_eq!(a.len(), 2);
    assert_eq!(serde_json::to_string(&a).unwrap(), r#"{"ell":2,"indicators":[[0,1],[2,3]]}"#);
}

fn bound(ell: usize, p: usize) -> usize {
    (p - 1).pow(ell as u32) * (1..=ell).product::<usize>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn large_families_hold_sunflowers(
        ell in 1usize..=3,
        p in 2usize..=3,
        raw in proptest::collection::vec(proptest::collection::btree_set(0usize..14, 1..=3), 60..120),
    ) {
        let mut family: Vec<Vec<usize>> = raw
            .into_iter()
            .map(|s| s.into_iter().take(ell).collect())
            .collect();
        family.sort();
        family.dedup();
        prop_assume!(family.len() > bound(ell, p));
        let f = find_sunflower(&family, p).expect("above the bound");
        prop_assert_eq!(f.members.len(), p);
        for (x, &a) in f.members.iter().enumerate() {
            for &b in &f.members[x + 1..] {
                let inter: Vec<usize> = family[a].iter().filter(|v| family[b].contains(v)).copied().collect();
                prop_assert_eq!(&inter, &f.core);
            }
        }
    }

    #[test]
    fn pluck_never_rejects_more(seed in any::<u64>(), m in 1u64..6) {
        let mut rng = rng(seed);
        let sets: Vec<Indicator> = (0..10)
            .map(|_| Indicator::new(rand::seq::index::sample(&mut rng, 7, 2).into_vec()))
            .collect();
        let a = Approximator::new(2, sets);
        let b = pluck(&a, &ApproxParams::new(2, 2, m).unwrap());
        prop_assert!(b.len() as u64 <= m.max(bound(2, 2) as u64) || b.is_one());
        for _ in 0..50 {
            let g = random_graph(&mut rng, 7, 0.4);
            prop_assert!(!a.accepts(&g) || b.accepts(&g));
        }
    }
}
