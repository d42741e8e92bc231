mod common;

use clo_core::circuits::{
    check_separation, emit_bundle, normal_form, parse_bundle_str, random_separating, verify_separation, Circuit,
    CircuitBuilder, Fanin, OracleValuation,
};
use clo_core::constructions::{lex_clo, triangle_clo};
use clo_core::rectangles::{RectFamily, RectPair, SetExpr};
use clo_core::testsets::TestSuite;
use clo_core::Error;
use common::*;
use proptest::prelude::*;

#[test]
fn schema_errors_carry_a_path() {
    let err = parse_bundle_str(r#"{"n":5,"k":3,"nodes":[{"id":0,"op":"x","edge":[0,1]},{"id":1,"op":"or","args":"0"}],"output":1}"#)
        .unwrap_err();
    let Error::Schema { path, .. } = err else { panic!("{err}") };
    assert!(path.starts_with("nodes[1]"), "{path}");
}

#[test]
fn structural_errors() {
    let dangling = r#"{"n":5,"k":3,"fanin":"unbounded","nodes":[{"id":0,"op":"and","args":[7]}],"output":0}"#;
    assert!(matches!(parse_bundle_str(dangling), Err(Error::Circuit(_))));
    let cyc = r#"{"n":5,"k":3,"fanin":"unbounded","nodes":[{"id":0,"op":"or","args":[1]},{"id":1,"op":"or","args":[0]}],"output":0}"#;
    let Err(Error::Circuit(msg)) = parse_bundle_str(cyc) else { panic!() };
    assert!(msg.contains("cycle"));
    let missing = r#"{"n":5,"k":3,"nodes":[{"id":0,"op":"y","oracle":2}],"output":0,"family":{"rects":[]}}"#;
    assert!(matches!(parse_bundle_str(missing), Err(Error::MissingOracle(2))));
}

#[test]
fn random_valuations_keep_correct_constructions_correct() {
    for b in [triangle_clo(6).unwrap(), lex_clo(7, 4, 2).unwrap()] {
        let suite = TestSuite::new(b.n, b.k).unwrap();
        assert!(verify_separation(&b.circuit, &b.family, &suite).unwrap().passed());
        for seed in 0..20 {
            let bv = random_separating(&b.family, &suite, seed).unwrap();
            assert!(check_separation(&b.circuit, &bv, &suite).unwrap().passed());
        }
    }
}

#[test]
fn incorrect_under_f_star_stays_incorrect() {
    // an uncovered triangle is rejected under F*, so every valuation rejects it
    let suite = TestSuite::new(5, 3).unwrap();
    let mut rng = rng(3);
    let mut seen = 0;
    for _ in 0..200 {
        let b = random_clo(&mut rng, &suite, 3);
        let fstar = verify_separation(&b.circuit, &b.family, &suite).unwrap();
        if fstar.passed() {
            continue;
        }
        seen += 1;
        let bv = random_separating(&b.family, &suite, 9).unwrap();
        let other = check_separation(&b.circuit, &bv, &suite).unwrap();
        // failures under F are a subset of failures under F*
        assert!(other.u_accepted >= fstar.u_accepted && other.v_rejected >= fstar.v_rejected);
    }
    assert!(seen > 0);
}

#[test]
fn explicit_tables_must_separate() {
    let suite = TestSuite::new(5, 3).unwrap();
    let fam = RectFamily::new(5, 3, vec![RectPair::new(SetExpr::All, SetExpr::None)]);
    let ones = vec![vec![true; suite.len()]];
    assert!(OracleValuation::ExplicitTable { family: fam.clone(), tables: ones }.bind(&suite).is_ok());
    let zeros = vec![vec![false; suite.len()]];
    assert!(OracleValuation::ExplicitTable { family: fam, tables: zeros }.bind(&suite).is_err());
}

#[test]
fn normal_form_needs_the_overlap() {
    let suite = TestSuite::new(6, 3).unwrap();
    let mut rng = rng(4);
    let (b, d) = loop {
        let (b, d) = random_correct_clo(&mut rng, &suite, 3);
        if d > 0 {
            break (b, d);
        }
    };
    assert!(matches!(normal_form(&b.circuit, &b.family, d - 1, &suite), Err(Error::Precondition(_))));
    assert!(normal_form(&b.circuit, &b.family, d, &suite).is_ok());
}

#[test]
fn emitted_bundles_reparse() {
    let suite = TestSuite::new(6, 3).unwrap();
    let mut rng = rng(5);
    for _ in 0..20 {
        let b = random_clo(&mut rng, &suite, 3);
        let text = emit_bundle(&b);
        assert_eq!(emit_bundle(&parse_bundle_str(&text).unwrap()), text);
    }
}

fn circuit_from(ops: &[(u8, usize, usize)], n: usize) -> Circuit {
    let mut b = CircuitBuilder::new(n, Fanin::Unbounded);
    let mut pool = vec![b.x(0, 1)];
    for &(op, a, c) in ops {
        let (a, c) = (pool[a % pool.len()], pool[c % pool.len()]);
        let id = match op % 4 {
            0 => b.and_all(vec![a, c, pool[0]]),
            1 => b.or_all(vec![a, c, pool[0]]),
            2 => b.x(a % n, (a + 1 + c % (n - 1)) % n),
            _ => b.constant(op % 8 == 3),
        };
        pool.push(id);
    }
    let out = *pool.last().unwrap();
    b.finish(out).unwrap()
}

proptest! {
    #[test]
    fn binarize_preserves_values(
        ops in proptest::collection::vec((any::<u8>(), any::<usize>(), any::<usize>()), 1..25),
        seed in any::<u64>(),
    ) {
        let c = circuit_from(&ops, 6);
        let bin = c.binarize();
        prop_assert_eq!(bin.fanin(), Fanin::Binary);
        let mut rng = rng(seed);
        for _ in 0..30 {
            let g = random_graph(&mut rng, 6, 0.5);
            prop_assert_eq!(c.eval_plain(&g), bin.eval_plain(&g));
        }
    }
}
