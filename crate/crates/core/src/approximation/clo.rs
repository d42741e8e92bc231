use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::approximation::approximator::{approximate_circuit, ApproxParams, Approximator};
use crate::approximation::errors::{bigint_str, count_errors, positive_error_bound, negative_error_bound, ErrorCounts};
use crate::circuits::{eval_unchecked, pair_for_subset, small_subsets, verify_separation, BoundValuation};
use crate::error::{Error, Result};
use crate::math::{format_rational, Rational};
use crate::rectangles::{CompiledFamily, RectPair};
use crate::testsets::{coloring_multiplicity, Member, TestSuite};
use crate::{circuits::Circuit, rectangles::RectFamily};

/// Per-`J` data of the approximated CLO.
#[derive(Clone, Debug, Serialize)]
pub struct TermReport {
    #[serde(rename = "J")]
    pub oracles: Vec<usize>,
    pub size: usize,
    pub pair: RectPair,
    pub approximator: Approximator,
    pub errors: ErrorCounts,
    #[serde(serialize_with = "bigint_str")]
    pub e_plus_bound: BigInt,
    #[serde(serialize_with = "bigint_str")]
    pub e_minus_bound: BigInt,
}

#[derive(Clone, Debug, Serialize)]
pub struct CloApproxReport {
    pub params: ApproxParams,
    pub d: usize,
    pub terms: Vec<TermReport>,
    /// `D^U`-measure of cliques the approximation accepts, as `"num/den"`.
    pub u_accepted: String,
    /// `D^V`-measure of multipartite graphs it rejects.
    pub v_rejected: String,
    /// Cliques on which it disagrees with `C(·, F*)`.
    pub u_disagreements: u64,
    /// Partitions on which it disagrees, and their total coloring weight.
    pub v_disagreements: u64,
    #[serde(serialize_with = "bigint_str")]
    pub v_disagreement_weight: BigInt,
    pub sum_e_plus: u64,
    #[serde(serialize_with = "bigint_str")]
    pub sum_e_minus: BigInt,
    /// Disagreements are within the per-term error sums on both sides.
    pub union_bound_holds: bool,
}

impl CloApproxReport {
    pub fn agrees_everywhere(&self) -> bool {
        self.u_disagreements == 0 && self.v_disagreements == 0
    }
}

/// Approximates every `D_J` (`|J| <= d`) and evaluates
/// `∨_J approx(D_J) ∧ f*_{(U_J, V_J)}` against `C(·, F*)` on the whole suite.
pub fn approximate_clo(
    circuit: &Circuit,
    family: &RectFamily,
    d: usize,
    params: &ApproxParams,
    suite: &TestSuite,
) -> Result<CloApproxReport> {
    let fstar = BoundValuation::f_star(family, suite)?;
    fstar.check_covers(circuit)?;
    let overlap = fstar.compiled().max_overlap(suite.u().len());
    if overlap > d {
        return Err(Error::Precondition(format!("assumption A_{d} fails: a clique lies in {overlap} of the U_i")));
    }
    let sep = verify_separation(circuit, family, suite)?;
    if !sep.passed() {
        return Err(Error::Precondition(format!(
            "circuit does not separate U and V under F* (witness {})",
            sep.witness.unwrap_or_default()
        )));
    }
    let (n, k) = (suite.n(), suite.k());

    let terms = small_subsets(family.len(), d)
        .into_iter()
        .map(|j| {
            let dj = circuit.substitute(&j).binarize();
            let approximator = approximate_circuit(&dj, params)?;
            let errors = count_errors(&dj, &approximator, suite)?;
            let size = dj.size();
            Ok(TermReport {
                pair: pair_for_subset(family, &j)?,
                oracles: j,
                size,
                approximator,
                errors,
                e_plus_bound: positive_error_bound(size, params, n, k),
                e_minus_bound: negative_error_bound(size, params, n, k),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let pairs: Vec<RectPair> = terms.iter().map(|t| t.pair.clone()).collect();
    let compiled = CompiledFamily::from_pairs(&pairs, suite)?;
    let approx_eval = |m: &Member<'_>| terms.iter().enumerate().any(|(t, term)| compiled.f_star(t, m) && term.approximator.accepts(m));

    let u_flags: Vec<(bool, bool)> = suite
        .u()
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let m = Member::U(i, c);
            (approx_eval(&m), eval_unchecked(circuit, &m, &fstar))
        })
        .collect();
    let v_flags: Vec<(bool, bool)> = suite
        .v()
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let m = Member::V(i, p);
            (approx_eval(&m), eval_unchecked(circuit, &m, &fstar))
        })
        .collect();

    let u_acc = u_flags.iter().filter(|f| f.0).count();
    let u_disagreements = u_flags.iter().filter(|f| f.0 != f.1).count() as u64;
    let mut v_rejected = Rational::zero();
    let mut v_disagreements = 0u64;
    let mut v_weight = BigInt::zero();
    for (i, &(a, c)) in v_flags.iter().enumerate() {
        if !a {
            v_rejected += suite.dv_mass(i);
        }
        if a != c {
            v_disagreements += 1;
            v_weight += coloring_multiplicity(suite.v()[i].zeta(), k);
        }
    }
    let sum_e_plus: u64 = terms.iter().map(|t| t.errors.e_plus).sum();
    let sum_e_minus: BigInt = terms.iter().map(|t| &t.errors.e_minus).sum();
    let u_accepted = Rational::new(BigInt::from(u_acc), BigInt::from(suite.u().len()));

    Ok(CloApproxReport {
        params: *params,
        d,
        union_bound_holds: u_disagreements <= sum_e_plus && v_weight <= sum_e_minus,
        terms,
        u_accepted: format_rational(&u_accepted),
        v_rejected: format_rational(&v_rejected),
        u_disagreements,
        v_disagreements,
        v_disagreement_weight: v_weight,
        sum_e_plus,
        sum_e_minus,
    })
}
