use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::approximation::sunflower::find_sunflower;
use crate::circuits::{Circuit, Fanin, Node};
use crate::error::{Error, Result};
use crate::testsets::EdgeSet;

/// Clique indicator `⌈X⌉`: the conjunction of all edges inside `X`.
/// Sets with at most one vertex are stored as `∅` (the constant 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct Indicator(Vec<usize>);

impl From<Vec<usize>> for Indicator {
    fn from(set: Vec<usize>) -> Self {
        Indicator::new(set)
    }
}

impl From<Indicator> for Vec<usize> {
    fn from(i: Indicator) -> Self {
        i.0
    }
}

impl Indicator {
    pub fn new(mut set: Vec<usize>) -> Self {
        set.sort_unstable();
        set.dedup();
        if set.len() <= 1 {
            set.clear();
        }
        Indicator(set)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// True for `⌈∅⌉ ≡ 1`.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn accepts<G: EdgeSet + ?Sized>(&self, g: &G) -> bool {
        let x = &self.0;
        (0..x.len()).all(|a| (a + 1..x.len()).all(|b| g.has_edge(x[a], x[b])))
    }

    pub fn union(&self, other: &Indicator) -> Indicator {
        let mut v = Vec::with_capacity(self.len() + other.len());
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i] < b[j]) {
                v.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j] < a[i] {
                v.push(b[j]);
                j += 1;
            } else {
                v.push(a[i]);
                i += 1;
                j += 1;
            }
        }
        Indicator(v)
    }
}

/// Parameters of the approximation method: indicator width `ell`,
/// sunflower size `p`, and indicator budget `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxParams {
    pub ell: usize,
    pub p: usize,
    pub m: u64,
}

impl ApproxParams {
    pub fn new(ell: usize, p: usize, m: u64) -> Result<Self> {
        if ell < 1 || p < 2 || m < 1 {
            return Err(Error::range(format!("need ell >= 1, p >= 2, m >= 1; got ell={ell}, p={p}, m={m}")));
        }
        Ok(ApproxParams { ell, p, m })
    }
}

fn isqrt(x: u128) -> u128 {
    if x < 2 {
        return x;
    }
    let mut r = (x as f64).sqrt() as u128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// `ell = ⌊√k⌋`, `p = ⌈10·√k·log₂ n⌉`, `m = (p-1)^ell · ell!` (saturating).
/// `p` is exact when `n` is a power of two and uses `f64` otherwise.
pub fn default_params(n: usize, k: usize) -> Result<ApproxParams> {
    if n < 2 || k < 2 {
        return Err(Error::range(format!("need n, k >= 2, got n={n}, k={k}")));
    }
    let ell = isqrt(k as u128) as usize;
    let p = if n.is_power_of_two() {
        let log = n.trailing_zeros() as u128;
        let x = 100 * log * log * k as u128;
        let r = isqrt(x);
        (if r * r < x { r + 1 } else { r }) as usize
    } else {
        (10.0 * (k as f64).sqrt() * (n as f64).log2()).ceil() as usize
    };
    let p = p.max(2);
    let mut m: u64 = 1;
    for i in 1..=ell as u64 {
        m = m.saturating_mul(p as u64 - 1).saturating_mul(i);
    }
    ApproxParams::new(ell, p, m.max(1))
}

/// A disjunction of clique indicators; `[]` is the constant 0 and `[∅]`
/// the constant 1. Indicators are kept distinct, in insertion order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "ApproxJson")]
pub struct Approximator {
    pub ell: usize,
    indicators: Vec<Indicator>,
}

#[derive(Deserialize)]
struct ApproxJson {
    ell: usize,
    indicators: Vec<Indicator>,
}

impl From<ApproxJson> for Approximator {
    fn from(raw: ApproxJson) -> Self {
        Approximator::new(raw.ell, raw.indicators)
    }
}

impl Approximator {
    /// Dedupes; any `⌈∅⌉` absorbs the rest.
    pub fn new(ell: usize, indicators: impl IntoIterator<Item = Indicator>) -> Self {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for ind in indicators {
            if ind.is_empty() {
                return Approximator::one(ell);
            }
            if seen.insert(ind.clone()) {
                out.push(ind);
            }
        }
        Approximator { ell, indicators: out }
    }

    pub fn zero(ell: usize) -> Self {
        Approximator { ell, indicators: Vec::new() }
    }

    pub fn one(ell: usize) -> Self {
        Approximator { ell, indicators: vec![Indicator(Vec::new())] }
    }

    pub fn indicators(&self) -> &[Indicator] {
        &self.indicators
    }

    pub fn len(&self) -> usize {
        self.indicators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indicators.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.indicators.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.indicators.len() == 1 && self.indicators[0].is_empty()
    }

    pub fn accepts<G: EdgeSet + ?Sized>(&self, g: &G) -> bool {
        self.indicators.iter().any(|i| i.accepts(g))
    }

    fn sets(&self) -> Vec<Vec<usize>> {
        self.indicators.iter().map(|i| i.0.clone()).collect()
    }
}

/// Replaces `p`-sunflowers by their cores while more than `m` indicators
/// remain. Stops early if no sunflower exists, which can only happen when
/// `m` is below `(p-1)^ell · ell!`.
pub fn pluck(a: &Approximator, params: &ApproxParams) -> Approximator {
    let mut cur = a.clone();
    while cur.len() as u64 > params.m {
        let Some(flower) = find_sunflower(&cur.sets(), params.p) else {
            break;
        };
        let core = Indicator::new(flower.core);
        if core.is_empty() {
            return Approximator::one(cur.ell);
        }
        let first = flower.members[0];
        let drop: HashSet<usize> = flower.members.into_iter().collect();
        let next = cur.indicators.iter().enumerate().filter_map(|(i, ind)| {
            if i == first {
                Some(core.clone())
            } else if drop.contains(&i) {
                None
            } else {
                Some(ind.clone())
            }
        });
        cur = Approximator::new(cur.ell, next.collect::<Vec<_>>());
    }
    cur
}

/// Intermediate results of [`approx_or_traced`].
#[derive(Clone, Debug)]
pub struct OrSteps {
    /// Concatenation, deduped: exactly the OR of the inputs.
    pub merged: Approximator,
    pub plucked: Approximator,
}

/// Intermediate results of [`approx_and_traced`].
#[derive(Clone, Debug)]
pub struct AndSteps {
    /// All pairwise unions, deduped. Equals the AND on cliques and implies
    /// it on every graph.
    pub unions: Approximator,
    /// After discarding unions larger than `ell`.
    pub dropped: Approximator,
    pub plucked: Approximator,
}

pub fn approx_or_traced(a: &Approximator, b: &Approximator, params: &ApproxParams) -> OrSteps {
    let merged = Approximator::new(params.ell, a.indicators.iter().chain(&b.indicators).cloned().collect::<Vec<_>>());
    let plucked = pluck(&merged, params);
    OrSteps { merged, plucked }
}

pub fn approx_and_traced(a: &Approximator, b: &Approximator, params: &ApproxParams) -> AndSteps {
    let mut all = Vec::with_capacity(a.len() * b.len());
    for x in &a.indicators {
        for y in &b.indicators {
            all.push(x.union(y));
        }
    }
    let unions = Approximator::new(params.ell, all.clone());
    let dropped = Approximator::new(params.ell, all.into_iter().filter(|u| u.len() <= params.ell).collect::<Vec<_>>());
    let plucked = pluck(&dropped, params);
    AndSteps { unions, dropped, plucked }
}

pub fn approx_or(a: &Approximator, b: &Approximator, params: &ApproxParams) -> Approximator {
    approx_or_traced(a, b, params).plucked
}

pub fn approx_and(a: &Approximator, b: &Approximator, params: &ApproxParams) -> Approximator {
    approx_and_traced(a, b, params).plucked
}

/// Bottom-up approximation of an oracle-free binary circuit. Edge leaves
/// become 2-vertex indicators regardless of `ell`.
pub fn approximate_circuit(circuit: &Circuit, params: &ApproxParams) -> Result<Approximator> {
    if circuit.fanin() != Fanin::Binary {
        return Err(Error::Precondition("approximation needs a binary fan-in circuit; binarize first".into()));
    }
    if !circuit.is_oracle_free() {
        return Err(Error::Precondition("approximation needs an oracle-free circuit".into()));
    }
    let reach = circuit.reachable();
    let mut val: Vec<Option<Approximator>> = vec![None; circuit.nodes().len()];
    for &id in circuit.order() {
        if !reach[id] {
            continue;
        }
        let get = |c: usize, val: &[Option<Approximator>]| val[c].clone().expect("children precede parents");
        let a = match circuit.node(id) {
            Node::X(i, j) => Approximator::new(params.ell, [Indicator::new(vec![*i, *j])]),
            Node::Const(true) => Approximator::one(params.ell),
            Node::Const(false) => Approximator::zero(params.ell),
            Node::Y(_) => unreachable!("checked oracle-free"),
            Node::And(c) => approx_and(&get(c[0], &val), &get(c[1], &val), params),
            Node::Or(c) => approx_or(&get(c[0], &val), &get(c[1], &val), params),
        };
        val[id] = Some(a);
    }
    Ok(val[circuit.output()].take().expect("output evaluated"))
}
