//! Explicit CLOs: one oracle, the triangle CLO, the trivial clique DNF and
//! the lexicographic CLO, plus the single-edge negation rectangle.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_traits::One;

use crate::circuits::{Bundle, CircuitBuilder, Fanin};
use crate::error::{Error, Result};
use crate::math::{binomial_u64, falling, pow, Rational};
use crate::rectangles::{RectFamily, RectPair, SetExpr};
use crate::testsets::TestSuite;

fn check_nk(n: usize, k: usize) -> Result<()> {
    if k < 3 || k >= n {
        return Err(Error::range(format!("need 3 <= k < n, got n={n}, k={k}")));
    }
    Ok(())
}

/// Largest number of OR-terms a construction will materialize.
pub const MAX_TERMS: u64 = 1_000_000;

fn check_terms(n: usize, size: usize) -> Result<()> {
    match binomial_u64(n as u64, size as u64) {
        Some(t) if t <= MAX_TERMS => Ok(()),
        _ => Err(Error::ScaleCap(format!("C({n},{size}) terms exceed {MAX_TERMS}"))),
    }
}

fn check_lex(n: usize, k: usize, ell: usize) -> Result<()> {
    check_nk(n, k)?;
    if ell < 2 || ell >= k {
        return Err(Error::range(format!("need 2 <= ell < k, got ell={ell}, k={k}")));
    }
    Ok(())
}

/// A lone oracle leaf with the rectangle `(All, All)`.
pub fn single_oracle(n: usize, k: usize) -> Result<Bundle> {
    check_nk(n, k)?;
    let mut b = CircuitBuilder::new(n, Fanin::Binary);
    let y = b.y(0);
    let circuit = b.finish(y)?;
    Bundle::new(circuit, RectFamily::new(n, k, vec![RectPair::new(SetExpr::All, SetExpr::All)]))
}

/// `∨_{i<j} (x_{ij} ∧ y_{ij})` with `U = SmallestPair(i,j)`,
/// `V = SplitPair(i,j)`; oracle ids follow `(i,j)` in lexicographic order.
pub fn triangle_clo(n: usize) -> Result<Bundle> {
    if n < 4 {
        return Err(Error::range(format!("triangle CLO needs n >= 4, got {n}")));
    }
    let mut b = CircuitBuilder::new(n, Fanin::Unbounded);
    let mut rects = Vec::new();
    let mut terms = Vec::new();
    for [i, j] in (0..n).array_combinations() {
        let x = b.x(i, j);
        let y = b.y(rects.len());
        terms.push(b.and_all(vec![x, y]));
        rects.push(RectPair::new(SetExpr::smallest_pair(i, j), SetExpr::split_pair(i, j)));
    }
    let out = b.or_all(terms);
    Bundle::new(b.finish(out)?, RectFamily::new(n, 3, rects))
}

/// The OR of all `k`-clique indicators; no oracles.
pub fn trivial_dnf(n: usize, k: usize) -> Result<Bundle> {
    check_nk(n, k)?;
    check_terms(n, k)?;
    let mut b = CircuitBuilder::new(n, Fanin::Unbounded);
    let terms: Vec<_> = (0..n).combinations(k).map(|set| b.clique_indicator(&set)).collect();
    let out = b.or_all(terms);
    Bundle::new(b.finish(out)?, RectFamily::empty(n, k))
}

/// The `ell` smallest elements of `set`.
pub fn lex_first(set: &[usize], ell: usize) -> Result<Vec<usize>> {
    if ell > set.len() {
        return Err(Error::range(format!("ell={ell} exceeds |B|={}", set.len())));
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.truncate(ell);
    Ok(sorted)
}

/// `∨_{D ∈ C([n], ell)} (⌈D⌉ ∧ y_D)` with `U = LexFirst(D)`,
/// `V = ContainsClique(D)`; oracle ids follow `D` in lexicographic order.
pub fn lex_clo(n: usize, k: usize, ell: usize) -> Result<Bundle> {
    check_lex(n, k, ell)?;
    check_terms(n, ell)?;
    let mut b = CircuitBuilder::new(n, Fanin::Unbounded);
    let mut rects = Vec::new();
    let mut terms = Vec::new();
    for d in (0..n).combinations(ell) {
        let mut args: Vec<_> = d.iter().array_combinations().map(|[&i, &j]| b.x(i, j)).collect();
        args.push(b.y(rects.len()));
        terms.push(b.and_all(args));
        rects.push(RectPair::new(SetExpr::lex_first(d.clone()), SetExpr::contains_clique(d)));
    }
    let out = b.or_all(terms);
    Bundle::new(b.finish(out)?, RectFamily::new(n, k, rects))
}

/// Locality of [`lex_clo`]: the chance that a fixed `ell`-set is rainbow
/// under a uniform nontrivial `(k-1)`-coloring,
/// `[(k-1)(k-2)⋯(k-ell) / (k-1)^ell] / (1 - (k-1)^{1-n})`.
pub fn lex_clo_locality(n: usize, k: usize, ell: usize) -> Result<Rational> {
    check_lex(n, k, ell)?;
    let c = (k - 1) as u64;
    let rainbow = Rational::new(falling(c, ell as u64), pow(c, ell as u64));
    let nontrivial = Rational::one() - Rational::new(1.into(), pow(c, n as u64 - 1));
    Ok(rainbow / nontrivial)
}

/// Least `ell` in `2..k` whose [`lex_clo_locality`] is at most `eps`.
pub fn lex_ell_for_locality(n: usize, k: usize, eps: &Rational) -> Result<Option<usize>> {
    check_nk(n, k)?;
    for ell in 2..k {
        if lex_clo_locality(n, k, ell)? <= *eps {
            return Ok(Some(ell));
        }
    }
    Ok(None)
}

/// The rectangle that simulates `¬x_e`: cliques missing `e` against
/// multipartite graphs containing `e`.
pub fn negation_oracle(edge: (usize, usize), n: usize, k: usize) -> Result<RectPair> {
    let (i, j) = edge;
    if i == j || i >= n || j >= n {
        return Err(Error::range(format!("({i},{j}) is not an edge of K_{n}")));
    }
    check_nk(n, k)?;
    let e = [i.min(j), i.max(j)];
    Ok(RectPair::new(SetExpr::NotEdgeU { edge: e }, SetExpr::NotEdgeV { edge: e }))
}

/// [`negation_oracle`] with both sides listed member by member.
pub fn negation_oracle_explicit(edge: (usize, usize), suite: &TestSuite) -> Result<RectPair> {
    let pair = negation_oracle(edge, suite.n(), suite.k())?;
    let u = suite.u().iter().filter(|c| pair.u.eval_u(c)).map(|c| c.encode());
    let u = SetExpr::explicit(u)?;
    let v = suite.v().iter().filter(|p| pair.v.eval_v(p)).map(|p| p.encode());
    let v = SetExpr::explicit(v)?;
    Ok(RectPair::new(u, v))
}

/// Constructions reachable by name from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    SingleOracle,
    Triangle,
    TrivialDnf,
    Lex,
}

impl Construction {
    pub const ALL: [Construction; 4] =
        [Construction::SingleOracle, Construction::Triangle, Construction::TrivialDnf, Construction::Lex];

    pub fn name(self) -> &'static str {
        match self {
            Construction::SingleOracle => "single-oracle",
            Construction::Triangle => "triangle",
            Construction::TrivialDnf => "trivial-dnf",
            Construction::Lex => "lex",
        }
    }

    /// `k` is ignored by the triangle CLO (always 3); `ell` is used only by `lex`.
    pub fn build(self, n: usize, k: usize, ell: Option<usize>) -> Result<Bundle> {
        match self {
            Construction::SingleOracle => single_oracle(n, k),
            Construction::Triangle => triangle_clo(n),
            Construction::TrivialDnf => trivial_dnf(n, k),
            Construction::Lex => {
                let ell = ell.ok_or_else(|| Error::input("lex construction needs ell"))?;
                lex_clo(n, k, ell)
            }
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Construction::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::input(format!("unknown construction {s:?} (expected single-oracle, triangle, trivial-dnf or lex)")))
    }
}
