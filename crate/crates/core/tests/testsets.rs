mod common;

use std::collections::HashSet;

use clo_core::constructions::{negation_oracle, negation_oracle_explicit};
use clo_core::math::ratio;
use clo_core::rectangles::{locality_exact, RectFamily};
use clo_core::testsets::{
    dv_mass, enumerate_v, graph_of_coloring, Coloring, EdgeSet, Graph, Partition, TestSuite,
};
use common::*;
use proptest::prelude::*;

#[test]
fn dv_mass_small_cases() {
    let bip = Partition::from_parts(&[vec![0, 1], vec![2, 3]], 4).unwrap();
    assert_eq!(dv_mass(&bip, 4, 3).unwrap(), ratio(1, 7));
    let tri = Partition::from_parts(&[vec![0, 1], vec![2, 3], vec![4]], 5).unwrap();
    assert_eq!(dv_mass(&tri, 5, 4).unwrap(), ratio(1, 40));
    let four = Partition::from_parts(&[vec![0], vec![1], vec![2], vec![3, 4]], 5).unwrap();
    assert!(dv_mass(&four, 5, 4).is_err());
}

#[test]
fn v_counts_distinct_coloring_graphs() {
    for n in 4..=8 {
        for k in 3..=4 {
            let graphs: HashSet<Graph> =
                all_colorings(n, k - 1).filter(|c| !is_constant(c)).map(|c| graph_of(&c)).collect();
            assert_eq!(enumerate_v(n, k).unwrap().len(), graphs.len(), "({n},{k})");
        }
    }
}

#[test]
fn coloring_graph_is_complete_multipartite() {
    let mut rng = rng(1);
    for _ in 0..200 {
        let n = 7;
        let chi: Vec<usize> = (0..n).map(|_| rand::Rng::random_range(&mut rng, 0..3)).collect();
        let g = graph_of_coloring(&Coloring::new(chi.clone(), 3).unwrap());
        let p = partition_of(&chi);
        for i in 0..n {
            for j in 0..n {
                assert_eq!(g.has_edge(i, j), i != j && chi[i] != chi[j]);
                assert_eq!(p.separates(i, j), chi[i] != chi[j]);
            }
        }
    }
}

#[test]
fn negation_rectangle() {
    let suite = TestSuite::new(6, 3).unwrap();
    let pair = negation_oracle((0, 1), 6, 3).unwrap();
    // f* is exactly ¬x_{01} on every member
    for m in suite.members() {
        assert_eq!(pair.f_star(&m), !m.has_edge(0, 1), "{}", m.encode());
    }
    let fam = RectFamily::new(6, 3, vec![pair]);
    let brute = double_count(6, 3, |b, chi| !(b.contains(&0) && b.contains(&1)) && chi[0] != chi[1]);
    assert_eq!(locality_exact(&fam, &suite).unwrap(), brute);
    assert_eq!(brute, ratio(64, 155));

    let explicit = RectFamily::new(6, 3, vec![negation_oracle_explicit((0, 1), &suite).unwrap()]);
    assert_eq!(locality_exact(&explicit, &suite).unwrap(), ratio(64, 155));
}

fn double_count(n: usize, k: usize, hit: impl Fn(&[usize], &[usize]) -> bool) -> clo_core::Rational {
    use itertools::Itertools;
    let cliques: Vec<Vec<usize>> = (0..n).combinations(k).collect();
    let colorings: Vec<Vec<usize>> = all_colorings(n, k - 1).filter(|c| !is_constant(c)).collect();
    let hits: usize = cliques.iter().map(|b| colorings.iter().filter(|c| hit(b, c)).count()).sum();
    ratio(hits, cliques.len() * colorings.len())
}

proptest! {
    #[test]
    fn partition_encoding_round_trip(chi in proptest::collection::vec(0usize..4, 1..10)) {
        let p = partition_of(&chi);
        prop_assert_eq!(Partition::decode(&p.encode(), chi.len()).unwrap(), p);
    }
}
