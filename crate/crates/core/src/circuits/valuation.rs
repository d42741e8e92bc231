use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuits::circuit::Circuit;
use crate::error::{Error, Result};
use crate::rectangles::{CompiledFamily, RectFamily, Side};
use crate::testsets::{Member, TestSuite};

/// An assignment of separating functions `f_i: A -> {0,1}` to oracle leaves.
#[derive(Clone, Debug)]
pub enum OracleValuation {
    /// `f*_i = 1` exactly on `U_i ∪ (V \ V_i)`.
    FStar(RectFamily),
    /// 1 on `U_i`, 0 on `V_i`, a stateless hash of `(seed, i, member)` elsewhere.
    Seeded { family: RectFamily, seed: u64 },
    /// `tables[i]` holds `f_i` over suite positions (all of `U`, then all of `V`).
    ExplicitTable { family: RectFamily, tables: Vec<Vec<bool>> },
}

/// The `F*` sequence of a family.
pub fn f_star(family: &RectFamily) -> OracleValuation {
    OracleValuation::FStar(family.clone())
}

/// A pseudo-random separating sequence. It is monotone on `A` when `A` is an
/// antichain, which holds for `k = 3` but not for `k >= 4`.
pub fn random_separating(family: &RectFamily, suite: &TestSuite, seed: u64) -> Result<BoundValuation> {
    OracleValuation::Seeded { family: family.clone(), seed }.bind(suite)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn position(member: &Member<'_>, u_len: usize) -> usize {
    match member {
        Member::U(i, _) => *i,
        Member::V(i, _) => u_len + i,
    }
}

#[derive(Clone, Debug)]
enum Kind {
    FStar,
    Seeded(u64),
    Table(Vec<FixedBitSet>),
}

/// A valuation resolved against a concrete suite.
#[derive(Clone, Debug)]
pub struct BoundValuation {
    kind: Kind,
    family: CompiledFamily,
    u_len: usize,
}

impl OracleValuation {
    pub fn family(&self) -> &RectFamily {
        match self {
            OracleValuation::FStar(f) => f,
            OracleValuation::Seeded { family, .. } | OracleValuation::ExplicitTable { family, .. } => family,
        }
    }

    /// Compiles the rectangles over `suite`. Explicit tables are checked to
    /// separate their pairs.
    pub fn bind(&self, suite: &TestSuite) -> Result<BoundValuation> {
        let family = CompiledFamily::new(self.family(), suite)?;
        let u_len = suite.u().len();
        let kind = match self {
            OracleValuation::FStar(_) => Kind::FStar,
            OracleValuation::Seeded { seed, .. } => Kind::Seeded(*seed),
            OracleValuation::ExplicitTable { tables, .. } => {
                if tables.len() != family.len() {
                    return Err(Error::input(format!("{} tables for {} oracles", tables.len(), family.len())));
                }
                let mut bits = Vec::with_capacity(tables.len());
                for (i, t) in tables.iter().enumerate() {
                    if t.len() != suite.len() {
                        return Err(Error::input(format!("table {i} has {} entries, suite has {}", t.len(), suite.len())));
                    }
                    let mut b = FixedBitSet::with_capacity(t.len());
                    for (pos, &v) in t.iter().enumerate() {
                        b.set(pos, v);
                    }
                    for u in family.u_sets[i].ones() {
                        if !b.contains(u) {
                            return Err(Error::input(format!("table {i} is 0 on a member of U_{i}")));
                        }
                    }
                    for v in family.v_sets[i].ones() {
                        if b.contains(u_len + v) {
                            return Err(Error::input(format!("table {i} is 1 on a member of V_{i}")));
                        }
                    }
                    bits.push(b);
                }
                Kind::Table(bits)
            }
        };
        Ok(BoundValuation { kind, family, u_len })
    }
}

impl BoundValuation {
    pub fn f_star(family: &RectFamily, suite: &TestSuite) -> Result<Self> {
        OracleValuation::FStar(family.clone()).bind(suite)
    }

    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }

    pub fn compiled(&self) -> &CompiledFamily {
        &self.family
    }

    #[inline]
    pub fn value(&self, oracle: usize, member: &Member<'_>) -> bool {
        let in_u = |i: usize| self.family.u_sets[oracle].contains(i);
        let in_v = |i: usize| self.family.v_sets[oracle].contains(i);
        match (&self.kind, member) {
            (Kind::FStar, m) => self.family.f_star(oracle, m),
            (Kind::Seeded(_), Member::U(i, _)) if in_u(*i) => true,
            (Kind::Seeded(_), Member::V(i, _)) if in_v(*i) => false,
            (Kind::Seeded(seed), m) => {
                let h = splitmix64(splitmix64(splitmix64(*seed) ^ oracle as u64) ^ position(m, self.u_len) as u64);
                h & 1 == 1
            }
            (Kind::Table(t), m) => t[oracle].contains(position(m, self.u_len)),
        }
    }

    pub fn check_covers(&self, circuit: &Circuit) -> Result<()> {
        match circuit.oracle_ids().into_iter().find(|&o| o >= self.len()) {
            Some(o) => Err(Error::MissingOracle(o)),
            None => Ok(()),
        }
    }
}

/// `C(a, F)` for a member of the suite.
pub fn eval(circuit: &Circuit, member: &Member<'_>, valuation: &BoundValuation) -> Result<bool> {
    valuation.check_covers(circuit)?;
    Ok(eval_unchecked(circuit, member, valuation))
}

#[inline]
pub(crate) fn eval_unchecked(circuit: &Circuit, member: &Member<'_>, valuation: &BoundValuation) -> bool {
    circuit.eval_with(member, |o| valuation.value(o, member))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Whether `(C, W)` accepts all of `U` and rejects all of `V` under a valuation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub verdict: Verdict,
    /// Canonical encoding of the first failing member in suite order.
    pub witness: Option<String>,
    pub witness_side: Option<Side>,
    pub u_accepted: usize,
    pub u_total: usize,
    pub v_rejected: usize,
    pub v_total: usize,
}

impl SeparationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Separation under an arbitrary bound valuation.
pub fn check_separation(circuit: &Circuit, valuation: &BoundValuation, suite: &TestSuite) -> Result<SeparationReport> {
    valuation.check_covers(circuit)?;
    let u_ok: Vec<bool> =
        suite.u().par_iter().enumerate().map(|(i, c)| eval_unchecked(circuit, &Member::U(i, c), valuation)).collect();
    let v_ok: Vec<bool> =
        suite.v().par_iter().enumerate().map(|(i, p)| !eval_unchecked(circuit, &Member::V(i, p), valuation)).collect();
    let u_accepted = u_ok.iter().filter(|&&b| b).count();
    let v_rejected = v_ok.iter().filter(|&&b| b).count();
    let (witness, witness_side) = if let Some(i) = u_ok.iter().position(|&b| !b) {
        (Some(suite.u()[i].encode()), Some(Side::U))
    } else if let Some(i) = v_ok.iter().position(|&b| !b) {
        (Some(suite.v()[i].encode()), Some(Side::V))
    } else {
        (None, None)
    };
    Ok(SeparationReport {
        verdict: if witness.is_none() { Verdict::Pass } else { Verdict::Fail },
        witness,
        witness_side,
        u_accepted,
        u_total: u_ok.len(),
        v_rejected,
        v_total: v_ok.len(),
    })
}

/// Evaluates `C(·, F*)` on all of `A`. A pass certifies correctness under
/// every separating sequence: any sequence that errs on `a` forces `F*` to
/// err on `a` as well.
pub fn verify_separation(circuit: &Circuit, family: &RectFamily, suite: &TestSuite) -> Result<SeparationReport> {
    let fstar = BoundValuation::f_star(family, suite)?;
    check_separation(circuit, &fstar, suite)
}
