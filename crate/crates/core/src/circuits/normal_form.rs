use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::circuits::circuit::Circuit;
use crate::circuits::valuation::{eval_unchecked, verify_separation, BoundValuation};
use crate::error::{Error, Result};
use crate::rectangles::{CompiledFamily, RectFamily, RectPair, SetExpr};
use crate::testsets::TestSuite;

/// One term `D_J ∧ f*_{(U_J, V_J)}` of the normal form.
#[derive(Clone, Debug)]
pub struct NormalFormEntry {
    pub oracles: Vec<usize>,
    pub circuit: Circuit,
    pub pair: RectPair,
}

#[derive(Clone, Debug)]
pub struct NormalForm {
    pub entries: Vec<NormalFormEntry>,
    /// Members of `A` on which equivalence with `C(·, F*)` was checked.
    pub checked_members: usize,
}

/// Summary row for reports.
#[derive(Clone, Debug, Serialize)]
pub struct NormalFormEntrySummary {
    #[serde(rename = "J")]
    pub oracles: Vec<usize>,
    pub size: usize,
    pub pair: RectPair,
}

impl NormalForm {
    pub fn summary(&self) -> Vec<NormalFormEntrySummary> {
        self.entries
            .iter()
            .map(|e| NormalFormEntrySummary { oracles: e.oracles.clone(), size: e.circuit.size(), pair: e.pair.clone() })
            .collect()
    }
}

/// `(∩_{j∈J} U_j, ∪_{j∈J} V_j)`, with `(All, None)` for `J = ∅`.
pub fn pair_for_subset(family: &RectFamily, oracles: &[usize]) -> Result<RectPair> {
    if oracles.is_empty() {
        return Ok(RectPair::always());
    }
    let mut us = Vec::with_capacity(oracles.len());
    let mut vs = Vec::with_capacity(oracles.len());
    for &j in oracles {
        let r = family.get(j)?;
        us.push(r.u.clone());
        vs.push(r.v.clone());
    }
    if oracles.len() == 1 {
        return Ok(RectPair::new(us.pop().unwrap(), vs.pop().unwrap()));
    }
    Ok(RectPair::new(SetExpr::intersection(us), SetExpr::union(vs)))
}

/// All `J ⊆ [e]` with `|J| <= d`, by size then lexicographically.
pub fn small_subsets(e: usize, d: usize) -> Vec<Vec<usize>> {
    (0..=d.min(e)).flat_map(|size| (0..e).combinations(size)).collect()
}

/// Rewrites `C(·, F*)` over `A` as `∨_{|J| <= d} D_J ∧ f*_{(U_J, V_J)}` and
/// checks the equivalence on every member of the suite.
///
/// Requires assumption `A_d` (at most `d` of the `U_i` share a clique) and a
/// separating pair `(C, W)`.
pub fn normal_form(circuit: &Circuit, family: &RectFamily, d: usize, suite: &TestSuite) -> Result<NormalForm> {
    let fstar = BoundValuation::f_star(family, suite)?;
    fstar.check_covers(circuit)?;
    let overlap = fstar.compiled().max_overlap(suite.u().len());
    if overlap > d {
        return Err(Error::Precondition(format!("assumption A_{d} fails: a clique lies in {overlap} of the U_i")));
    }
    let report = verify_separation(circuit, family, suite)?;
    if !report.passed() {
        return Err(Error::Precondition(format!(
            "circuit does not separate U and V under F* (witness {})",
            report.witness.unwrap_or_default()
        )));
    }

    let entries = small_subsets(family.len(), d)
        .into_iter()
        .map(|j| {
            let pair = pair_for_subset(family, &j)?;
            Ok(NormalFormEntry { circuit: circuit.substitute(&j), oracles: j, pair })
        })
        .collect::<Result<Vec<_>>>()?;

    let pairs: Vec<RectPair> = entries.iter().map(|e| e.pair.clone()).collect();
    let compiled = CompiledFamily::from_pairs(&pairs, suite)?;
    let members: Vec<_> = suite.members().collect();
    let mismatch = members.par_iter().find_first(|m| {
        let lhs = eval_unchecked(circuit, m, &fstar);
        let rhs = entries
            .iter()
            .enumerate()
            .any(|(t, e)| compiled.f_star(t, m) && e.circuit.eval_plain(*m));
        lhs != rhs
    });
    if let Some(m) = mismatch {
        return Err(Error::Invariant(format!("normal form disagrees with C(·,F*) on {}", m.encode())));
    }
    Ok(NormalForm { entries, checked_members: members.len() })
}
