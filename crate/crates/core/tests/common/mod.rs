#![allow(dead_code)]

use clo_core::circuits::{Bundle, Circuit, CircuitBuilder, Fanin, NodeId};
use clo_core::rectangles::{max_overlap, RectFamily, RectPair, SetExpr};
use clo_core::testsets::{Graph, Member, Partition, TestSuite};
use clo_core::circuits::BoundValuation;
use itertools::Itertools;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every map `[n] -> [colors]`, in odometer order.
pub fn all_colorings(n: usize, colors: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n).map(|_| 0..colors).multi_cartesian_product()
}

pub fn is_constant(chi: &[usize]) -> bool {
    chi.iter().all(|&c| c == chi[0])
}

/// Partition of `[n]` induced by a coloring, labelled by first occurrence.
pub fn partition_of(chi: &[usize]) -> Partition {
    let mut seen: Vec<Option<u32>> = vec![None; chi.iter().max().map_or(0, |m| m + 1)];
    let mut next = 0u32;
    let labels = chi
        .iter()
        .map(|&c| {
            *seen[c].get_or_insert_with(|| {
                next += 1;
                next - 1
            })
        })
        .collect();
    Partition::from_labels(labels).unwrap()
}

/// Graph of a coloring built from its edge list: `{i,j}` iff colors differ.
pub fn graph_of(chi: &[usize]) -> Graph {
    let n = chi.len();
    Graph::from_edges(n, (0..n).array_combinations().filter(|&[i, j]| chi[i] != chi[j]).map(|[i, j]| (i, j))).unwrap()
}

pub fn clique_graph(b: &[usize], n: usize) -> Graph {
    Graph::from_edges(n, b.iter().copied().array_combinations().map(|[i, j]| (i, j))).unwrap()
}

fn random_subset<T: Clone>(rng: &mut ChaCha8Rng, items: &[T], p: f64) -> Vec<T> {
    items.iter().filter(|_| rng.random_bool(p)).cloned().collect()
}

fn random_vertices(rng: &mut ChaCha8Rng, n: usize, size: usize) -> Vec<usize> {
    let mut v = rand::seq::index::sample(rng, n, size).into_vec();
    v.sort_unstable();
    v
}

pub fn random_u_expr(rng: &mut ChaCha8Rng, suite: &TestSuite, depth: usize) -> SetExpr {
    let n = suite.n();
    let choice = if depth == 0 { rng.random_range(0..6) } else { rng.random_range(0..9) };
    match choice {
        0 => SetExpr::All,
        1 => SetExpr::None,
        2 => {
            let v = random_vertices(rng, n, 2);
            SetExpr::smallest_pair(v[0], v[1])
        }
        3 => {
            let size = rng.random_range(1..suite.k());
            SetExpr::lex_first(random_vertices(rng, n, size))
        }
        4 => {
            let v = random_vertices(rng, n, 2);
            SetExpr::NotEdgeU { edge: [v[0], v[1]] }
        }
        5 => {
            let members: Vec<String> = suite.u().iter().map(|c| c.encode()).collect();
            SetExpr::explicit(random_subset(rng, &members, 0.3)).unwrap()
        }
        6 => SetExpr::union(vec![random_u_expr(rng, suite, depth - 1), random_u_expr(rng, suite, depth - 1)]),
        7 => SetExpr::intersection(vec![random_u_expr(rng, suite, depth - 1), random_u_expr(rng, suite, depth - 1)]),
        _ => SetExpr::complement(random_u_expr(rng, suite, depth - 1)),
    }
}

pub fn random_v_expr(rng: &mut ChaCha8Rng, suite: &TestSuite, depth: usize) -> SetExpr {
    let n = suite.n();
    let choice = if depth == 0 { rng.random_range(0..6) } else { rng.random_range(0..9) };
    match choice {
        0 => SetExpr::All,
        1 => SetExpr::None,
        2 => {
            let v = random_vertices(rng, n, 2);
            SetExpr::split_pair(v[0], v[1])
        }
        3 => {
            let size = rng.random_range(2..suite.k());
            SetExpr::contains_clique(random_vertices(rng, n, size))
        }
        4 => {
            let v = random_vertices(rng, n, 2);
            SetExpr::NotEdgeV { edge: [v[0], v[1]] }
        }
        5 => {
            let members: Vec<String> = suite.v().iter().map(|p| p.encode()).collect();
            SetExpr::explicit(random_subset(rng, &members, 0.3)).unwrap()
        }
        6 => SetExpr::union(vec![random_v_expr(rng, suite, depth - 1), random_v_expr(rng, suite, depth - 1)]),
        7 => SetExpr::intersection(vec![random_v_expr(rng, suite, depth - 1), random_v_expr(rng, suite, depth - 1)]),
        _ => SetExpr::complement(random_v_expr(rng, suite, depth - 1)),
    }
}

pub fn random_rect(rng: &mut ChaCha8Rng, suite: &TestSuite) -> RectPair {
    RectPair::new(random_u_expr(rng, suite, 2), random_v_expr(rng, suite, 2))
}

/// A random monotone function of the oracle leaves, never constant.
fn random_g(rng: &mut ChaCha8Rng, b: &mut CircuitBuilder, e: usize) -> NodeId {
    let terms = rng.random_range(1..=2);
    let ors: Vec<NodeId> = (0..terms)
        .map(|_| {
            let width = rng.random_range(1..=e.min(2));
            let ys: Vec<NodeId> = rand::seq::index::sample(rng, e, width).into_iter().map(|o| b.y(o)).collect();
            b.and_all(ys)
        })
        .collect();
    b.or_all(ors)
}

/// A random CLO over `(suite.n(), 3)`: one term per triangle with a random
/// nonempty subset of its edges, gated by a random monotone function of the
/// oracles unless all three edges are present. Rectangles are random
/// explicit sets. Not necessarily correct.
pub fn random_clo(rng: &mut ChaCha8Rng, suite: &TestSuite, max_oracles: usize) -> Bundle {
    assert_eq!(suite.k(), 3);
    let n = suite.n();
    let e = rng.random_range(1..=max_oracles);
    let fanin = if rng.random_bool(0.5) { Fanin::Binary } else { Fanin::Unbounded };
    let mut b = CircuitBuilder::new(n, fanin);
    let mut terms = Vec::new();
    for tri in (0..n).combinations(3) {
        let edges: Vec<[usize; 2]> = tri.iter().copied().array_combinations().collect();
        let mask = rng.random_range(1..8u8);
        let mut args: Vec<NodeId> =
            edges.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &[i, j])| b.x(i, j)).collect();
        if mask != 7 {
            args.push(random_g(rng, &mut b, e));
        }
        terms.push(b.and_all(args));
    }
    let out = b.or_all(terms);
    let circuit = b.finish(out).unwrap();
    let us: Vec<String> = suite.u().iter().map(|c| c.encode()).collect();
    let vs: Vec<String> = suite.v().iter().map(|p| p.encode()).collect();
    let rects = (0..e)
        .map(|_| {
            RectPair::new(
                SetExpr::explicit(random_subset(rng, &us, 0.4)).unwrap(),
                SetExpr::explicit(random_subset(rng, &vs, 0.4)).unwrap(),
            )
        })
        .collect();
    Bundle::new(circuit, RectFamily::new(n, 3, rects)).unwrap()
}

/// [`random_clo`] repaired to separate: cliques it rejects under `F*` join
/// every `U_i`, multipartite graphs it accepts join every `V_i`. Returns
/// the bundle and its overlap number.
pub fn random_correct_clo(rng: &mut ChaCha8Rng, suite: &TestSuite, max_oracles: usize) -> (Bundle, usize) {
    let bundle = random_clo(rng, suite, max_oracles);
    let fstar = BoundValuation::f_star(&bundle.family, suite).unwrap();
    let mut add_u = Vec::new();
    let mut add_v = Vec::new();
    for m in suite.members() {
        let out = clo_core::circuits::eval(&bundle.circuit, &m, &fstar).unwrap();
        match m {
            Member::U(_, c) if !out => add_u.push(c.encode()),
            Member::V(_, p) if out => add_v.push(p.encode()),
            _ => {}
        }
    }
    let rects = bundle
        .family
        .rects
        .iter()
        .map(|r| {
            let (SetExpr::Explicit { members: u }, SetExpr::Explicit { members: v }) = (&r.u, &r.v) else {
                unreachable!("random_clo uses explicit sets")
            };
            RectPair::new(
                SetExpr::explicit(u.iter().chain(&add_u)).unwrap(),
                SetExpr::explicit(v.iter().chain(&add_v)).unwrap(),
            )
        })
        .collect();
    let family = RectFamily::new(bundle.n, bundle.k, rects);
    let d = max_overlap(&family, suite).unwrap();
    (Bundle::new(bundle.circuit, family).unwrap(), d)
}

/// A random oracle-free binary circuit with at most `max_size` nodes.
pub fn random_monotone_circuit(rng: &mut ChaCha8Rng, n: usize, max_size: usize) -> Circuit {
    loop {
        let mut b = CircuitBuilder::new(n, Fanin::Binary);
        let leaves = rng.random_range(2..=8.min(max_size / 2));
        let mut pool: Vec<NodeId> = (0..leaves)
            .map(|_| {
                let v = random_vertices(rng, n, 2);
                b.x(v[0], v[1])
            })
            .collect();
        pool.sort_unstable();
        pool.dedup();
        let gates = rng.random_range(1..=(max_size - pool.len()).min(20));
        for _ in 0..gates {
            let a = *pool.choose(rng).unwrap();
            let c = *pool.choose(rng).unwrap();
            let g = if rng.random_bool(0.5) { b.and(a, c) } else { b.or(a, c) };
            pool.push(g);
        }
        let out = *pool.last().unwrap();
        let c = b.finish(out).unwrap();
        if c.size() <= max_size {
            return c;
        }
    }
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Graph {
    Graph::from_edges(n, (0..n).array_combinations().filter(|_| rng.random_bool(density)).map(|[i, j]| (i, j))).unwrap()
}
