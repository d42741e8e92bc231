use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::approximation::approximator::{ApproxParams, Approximator};
use crate::circuits::Circuit;
use crate::error::{Error, Result};
use crate::math::{binomial, floor_to_int, pow, Rational};
use crate::testsets::{coloring_multiplicity, Graph, TestSuite};

pub(crate) fn bigint_str<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Approximation errors of one circuit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorCounts {
    /// Cliques accepted by the circuit and rejected by the approximator.
    pub e_plus: u64,
    /// Colorings `[n] -> [k-1]` (trivial ones included) whose graph the
    /// approximator accepts and the circuit rejects.
    #[serde(serialize_with = "bigint_str")]
    pub e_minus: BigInt,
}

/// Exact `(e_plus, e_minus)`. Each partition with `ζ` parts stands for
/// `(k-1)(k-2)⋯(k-ζ)` colorings; the `k-1` constant colorings all give the
/// empty graph.
pub fn count_errors(circuit: &Circuit, approx: &Approximator, suite: &TestSuite) -> Result<ErrorCounts> {
    if !circuit.is_oracle_free() {
        return Err(Error::Precondition("error counting needs an oracle-free circuit".into()));
    }
    let k = suite.k();
    let e_plus = suite.u().par_iter().filter(|c| circuit.eval_plain(*c) && !approx.accepts(*c)).count() as u64;
    let per_zeta = suite
        .v()
        .par_iter()
        .fold(
            || vec![0u64; k],
            |mut acc, p| {
                if approx.accepts(p) && !circuit.eval_plain(p) {
                    acc[p.zeta()] += 1;
                }
                acc
            },
        )
        .reduce(|| vec![0u64; k], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
    let mut e_minus = per_zeta
        .iter()
        .enumerate()
        .fold(BigInt::zero(), |acc, (z, &c)| acc + coloring_multiplicity(z, k) * BigInt::from(c));
    let empty = Graph::empty(suite.n());
    if approx.accepts(&empty) && !circuit.eval_plain(&empty) {
        e_minus += coloring_multiplicity(1, k);
    }
    Ok(ErrorCounts { e_plus, e_minus })
}

/// `s · m² · C(n-ell-1, k-ell-1)`, zero when `k <= ell`.
pub fn positive_error_bound(size: usize, params: &ApproxParams, n: usize, k: usize) -> BigInt {
    let ell = params.ell;
    if k < ell + 1 || n < ell + 1 {
        return BigInt::zero();
    }
    let m = BigInt::from(params.m);
    BigInt::from(size) * &m * &m * binomial((n - ell - 1) as u64, (k - ell - 1) as u64)
}

/// `⌊s · m² · (C(ell,2)/(k-1))^p · (k-1)^n⌋`, evaluated exactly.
pub fn negative_error_bound(size: usize, params: &ApproxParams, n: usize, k: usize) -> BigInt {
    let m = BigInt::from(params.m);
    let base = Rational::new(binomial(params.ell as u64, 2), BigInt::from(k - 1));
    let mut factor = Rational::from_integer(BigInt::from(1));
    for _ in 0..params.p {
        factor *= &base;
    }
    let total = Rational::from_integer(BigInt::from(size) * &m * &m * pow((k - 1) as u64, n as u64)) * factor;
    floor_to_int(&total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approximation::approximator::{approximate_circuit, Indicator};
    use crate::constructions::trivial_dnf;

    #[test]
    fn trivial_dnf_collapses_to_zero() {
        let suite = TestSuite::new(5, 3).unwrap();
        let c = trivial_dnf(5, 3).unwrap().circuit.binarize();
        let params = ApproxParams::new(2, 2, 1_000_000).unwrap();
        let a = approximate_circuit(&c, &params).unwrap();
        assert!(a.is_zero());
        let e = count_errors(&c, &a, &suite).unwrap();
        assert_eq!(e, ErrorCounts { e_plus: 10, e_minus: BigInt::zero() });
    }

    #[test]
    fn exact_dnf_has_no_errors() {
        let suite = TestSuite::new(5, 3).unwrap();
        let c = trivial_dnf(5, 3).unwrap().circuit;
        let a = Approximator::new(3, suite.u().iter().map(|c| Indicator::new(c.vertices().to_vec())).collect::<Vec<_>>());
        assert_eq!(count_errors(&c, &a, &suite).unwrap(), ErrorCounts { e_plus: 0, e_minus: BigInt::zero() });
    }

    #[test]
    fn constant_one_counts_every_coloring() {
        let suite = TestSuite::new(5, 3).unwrap();
        let c = trivial_dnf(5, 3).unwrap().circuit;
        let e = count_errors(&c, &Approximator::one(2), &suite).unwrap();
        assert_eq!(e.e_minus, BigInt::from(32)); // 2^5 colorings, none has a triangle
    }

    #[test]
    fn bounds() {
        let p = ApproxParams::new(2, 2, 3).unwrap();
        assert_eq!(positive_error_bound(10, &p, 7, 3), BigInt::from(90));
        // 10 * 9 * (1/2)^2 * 2^7 = 2880
        assert_eq!(negative_error_bound(10, &p, 7, 3), BigInt::from(2880));
    }
}
