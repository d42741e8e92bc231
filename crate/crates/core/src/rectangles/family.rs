use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rectangles::setexpr::{SetExpr, Side};
use crate::testsets::{Member, TestSuite};

/// An oracle rectangle `W_i = (U_i, V_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RectPair {
    #[serde(rename = "U")]
    pub u: SetExpr,
    #[serde(rename = "V")]
    pub v: SetExpr,
}

impl RectPair {
    pub fn new(u: SetExpr, v: SetExpr) -> Self {
        RectPair { u, v }
    }

    /// `(U_{n,k}, ∅)`: the pair whose `f*` is constantly 1 on `A`.
    pub fn always() -> Self {
        RectPair::new(SetExpr::All, SetExpr::None)
    }

    pub fn check_sides(&self) -> Result<()> {
        self.u.check_side(Side::U)?;
        self.v.check_side(Side::V)
    }

    pub fn validate(&self, n: usize) -> Result<RectPair> {
        let p = RectPair::new(self.u.validate(n)?, self.v.validate(n)?);
        p.check_sides()?;
        Ok(p)
    }

    /// `f*_{(U,V)}(a)`: 1 on `U ∪ (V_{n,k} \ V)`.
    pub fn f_star(&self, member: &Member<'_>) -> bool {
        match member {
            Member::U(_, c) => self.u.eval_u(c),
            Member::V(_, p) => !self.v.eval_v(p),
        }
    }
}

/// `(U_i ∪ U_j, V_i ∩ V_j)`; its `f*` is the OR of the two `f*`s on `A`.
pub fn rect_or(a: &RectPair, b: &RectPair) -> RectPair {
    RectPair::new(
        SetExpr::union(vec![a.u.clone(), b.u.clone()]),
        SetExpr::intersection(vec![a.v.clone(), b.v.clone()]),
    )
}

/// `(U_i ∩ U_j, V_i ∪ V_j)`; its `f*` is the AND of the two `f*`s on `A`.
pub fn rect_and(a: &RectPair, b: &RectPair) -> RectPair {
    RectPair::new(
        SetExpr::intersection(vec![a.u.clone(), b.u.clone()]),
        SetExpr::union(vec![a.v.clone(), b.v.clone()]),
    )
}

/// The rectangle sequence `W = (W_i)`, indexed by oracle id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectFamily {
    pub n: usize,
    pub k: usize,
    pub rects: Vec<RectPair>,
}

impl RectFamily {
    pub fn new(n: usize, k: usize, rects: Vec<RectPair>) -> Self {
        RectFamily { n, k, rects }
    }

    pub fn empty(n: usize, k: usize) -> Self {
        RectFamily::new(n, k, Vec::new())
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    pub fn get(&self, oracle: usize) -> Result<&RectPair> {
        self.rects.get(oracle).ok_or(Error::MissingOracle(oracle))
    }

    pub fn validate(&self) -> Result<RectFamily> {
        let rects = self.rects.iter().map(|r| r.validate(self.n)).collect::<Result<_>>()?;
        Ok(RectFamily { n: self.n, k: self.k, rects })
    }

    pub fn check_suite(&self, suite: &TestSuite) -> Result<()> {
        if self.n != suite.n() || self.k != suite.k() {
            return Err(Error::input(format!(
                "family is for (n,k)=({},{}), suite is ({},{})",
                self.n,
                self.k,
                suite.n(),
                suite.k()
            )));
        }
        Ok(())
    }
}

/// Rectangle memberships materialized as bit sets over suite indices.
#[derive(Clone, Debug)]
pub struct CompiledFamily {
    pub u_sets: Vec<FixedBitSet>,
    pub v_sets: Vec<FixedBitSet>,
}

impl CompiledFamily {
    pub fn new(family: &RectFamily, suite: &TestSuite) -> Result<Self> {
        family.check_suite(suite)?;
        Self::from_pairs(&family.rects, suite)
    }

    pub fn from_pairs(pairs: &[RectPair], suite: &TestSuite) -> Result<Self> {
        let mut u_sets = Vec::with_capacity(pairs.len());
        let mut v_sets = Vec::with_capacity(pairs.len());
        for pair in pairs {
            pair.check_sides()?;
            let mut us = FixedBitSet::with_capacity(suite.u().len());
            for (i, c) in suite.u().iter().enumerate() {
                us.set(i, pair.u.eval_u(c));
            }
            let mut vs = FixedBitSet::with_capacity(suite.v().len());
            for (i, p) in suite.v().iter().enumerate() {
                vs.set(i, pair.v.eval_v(p));
            }
            u_sets.push(us);
            v_sets.push(vs);
        }
        Ok(CompiledFamily { u_sets, v_sets })
    }

    pub fn len(&self) -> usize {
        self.u_sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u_sets.is_empty()
    }

    #[inline]
    pub fn f_star(&self, oracle: usize, member: &Member<'_>) -> bool {
        match member {
            Member::U(i, _) => self.u_sets[oracle].contains(*i),
            Member::V(i, _) => !self.v_sets[oracle].contains(*i),
        }
    }

    /// `max_u |{i : u ∈ U_i}|`.
    pub fn max_overlap(&self, u_len: usize) -> usize {
        (0..u_len)
            .map(|u| self.u_sets.iter().filter(|s| s.contains(u)).count())
            .max()
            .unwrap_or(0)
    }
}

/// `d*`: the largest number of `U_i` sharing one clique. Assumption `A_d`
/// holds iff `d* <= d`.
pub fn max_overlap(family: &RectFamily, suite: &TestSuite) -> Result<usize> {
    Ok(CompiledFamily::new(family, suite)?.max_overlap(suite.u().len()))
}
