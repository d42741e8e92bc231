use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::math::{binomial, format_rational, to_f64, Rational};
use crate::rectangles::family::{CompiledFamily, RectFamily};
use crate::testsets::{coloring_multiplicity, nontrivial_colorings, CliqueGraph, Partition, TestSuite};

/// Two-sided 99% normal quantile.
const Z_99: f64 = 2.575_829_303_548_900_4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocalityMode {
    Exact,
    Mc,
}

/// Result of a locality computation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalityReport {
    pub mode: LocalityMode,
    /// Exact value as `"num/den"` (exact mode only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    pub estimate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_width_99: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hits: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

impl LocalityReport {
    pub fn exact(value: &Rational) -> Self {
        LocalityReport {
            mode: LocalityMode::Exact,
            value: Some(format_rational(value)),
            estimate: to_f64(value),
            half_width_99: None,
            samples: None,
            hits: None,
            seed: None,
            workers: None,
        }
    }
}

/// Exact `D_{n,k}`-measure of `∪_i U_i × V_i`.
///
/// For each `v ∈ V` the `U_i` of all rectangles whose `V_i` contains `v` are
/// unioned as a bit set over clique indices; the popcounts are summed per
/// part count `ζ`, so the final value is one exact division.
pub fn locality_exact(family: &RectFamily, suite: &TestSuite) -> Result<Rational> {
    let compiled = CompiledFamily::new(family, suite)?;
    Ok(locality_of_compiled(&compiled, suite))
}

pub fn locality_of_compiled(compiled: &CompiledFamily, suite: &TestSuite) -> Rational {
    let (n, k) = (suite.n(), suite.k());
    let u_len = suite.u().len();
    let v = suite.v();
    let per_zeta = (0..v.len())
        .into_par_iter()
        .fold(
            || (vec![0u64; k], FixedBitSet::with_capacity(u_len)),
            |(mut acc, mut covered), idx| {
                covered.clear();
                for i in 0..compiled.len() {
                    if compiled.v_sets[i].contains(idx) {
                        covered.union_with(&compiled.u_sets[i]);
                    }
                }
                acc[v[idx].zeta()] += covered.count_ones(..) as u64;
                (acc, covered)
            },
        )
        .map(|(acc, _)| acc)
        .reduce(|| vec![0u64; k], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());

    let numer = per_zeta
        .iter()
        .enumerate()
        .fold(BigInt::zero(), |acc, (zeta, &cnt)| acc + coloring_multiplicity(zeta, k) * BigInt::from(cnt));
    let denom = nontrivial_colorings(n, k) * binomial(n as u64, k as u64);
    Rational::new(numer, denom)
}

fn sample_clique(rng: &mut ChaCha8Rng, n: usize, k: usize) -> CliqueGraph {
    let mut b = rand::seq::index::sample(rng, n, k).into_vec();
    b.sort_unstable();
    CliqueGraph::from_sorted_unchecked(b, n)
}

/// Uniform nontrivial coloring `[n] -> [k-1]`, by rejection.
fn sample_partition(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Partition {
    let colors = k - 1;
    let mut chi = vec![0usize; n];
    loop {
        for c in chi.iter_mut() {
            *c = rng.random_range(0..colors);
        }
        if chi.windows(2).any(|w| w[0] != w[1]) {
            return Partition::canonicalize(&chi, colors);
        }
    }
}

/// Monte-Carlo estimate of the locality with a 99% normal-approximation
/// confidence half-width. Worker `w` draws from a ChaCha8 stream keyed by
/// `(seed, w)`, so the result depends only on `(seed, workers, samples)`.
pub fn locality_mc(family: &RectFamily, samples: u64, seed: u64, workers: usize) -> Result<LocalityReport> {
    let family = family.validate()?;
    let (n, k) = (family.n, family.k);
    if n < 4 || k < 3 || k >= n {
        return Err(crate::Error::range(format!("need n >= 4 and 3 <= k < n, got n={n}, k={k}")));
    }
    let samples = samples.max(1);
    let workers = workers.max(1);
    let hits: u64 = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let share = samples / workers as u64 + u64::from((w as u64) < samples % workers as u64);
                let family = &family;
                scope.spawn(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(w as u64);
                    let mut hits = 0u64;
                    for _ in 0..share {
                        let u = sample_clique(&mut rng, n, k);
                        let v = sample_partition(&mut rng, n, k);
                        if family.rects.iter().any(|r| r.u.eval_u(&u) && r.v.eval_v(&v)) {
                            hits += 1;
                        }
                    }
                    hits
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("locality worker panicked")).sum()
    });
    let p = hits as f64 / samples as f64;
    let half = Z_99 * (p * (1.0 - p) / samples as f64).sqrt();
    Ok(LocalityReport {
        mode: LocalityMode::Mc,
        value: None,
        estimate: p,
        half_width_99: Some(half),
        samples: Some(samples),
        hits: Some(hits),
        seed: Some(seed),
        workers: Some(workers),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::ratio;
    use crate::rectangles::{RectPair, SetExpr};
    use num_traits::One;

    fn triangle_family(n: usize) -> RectFamily {
        let rects = (0..n)
            .flat_map(|j| (0..j).map(move |i| RectPair::new(SetExpr::smallest_pair(i, j), SetExpr::split_pair(i, j))))
            .collect();
        RectFamily::new(n, 3, rects)
    }

    #[test]
    fn whole_rectangle_has_locality_one() {
        let s = TestSuite::new(6, 3).unwrap();
        let f = RectFamily::new(6, 3, vec![RectPair::new(SetExpr::All, SetExpr::All)]);
        assert_eq!(locality_exact(&f, &s).unwrap(), Rational::one());
        assert_eq!(locality_exact(&RectFamily::empty(6, 3), &s).unwrap(), Rational::zero());
    }

    #[test]
    fn triangle_family_n6() {
        let s = TestSuite::new(6, 3).unwrap();
        assert_eq!(locality_exact(&triangle_family(6), &s).unwrap(), ratio(16, 31));
    }

    #[test]
    fn mc_whole_rectangle_is_exact() {
        let f = RectFamily::new(7, 4, vec![RectPair::new(SetExpr::All, SetExpr::All)]);
        let r = locality_mc(&f, 500, 1, 3).unwrap();
        assert_eq!(r.estimate, 1.0);
        assert_eq!(r.half_width_99, Some(0.0));
    }

    #[test]
    fn mc_is_deterministic_per_seed_and_workers() {
        let f = triangle_family(6);
        let a = locality_mc(&f, 4000, 7, 4).unwrap();
        let b = locality_mc(&f, 4000, 7, 4).unwrap();
        assert_eq!(a, b);
        let c = locality_mc(&f, 4000, 8, 4).unwrap();
        assert_ne!(a.hits, c.hits);
    }

    #[test]
    fn mc_near_exact() {
        let f = triangle_family(6);
        let r = locality_mc(&f, 100_000, 2024, 2).unwrap();
        let exact = 16.0 / 31.0;
        assert!((r.estimate - exact).abs() <= 3.0 * r.half_width_99.unwrap(), "{r:?}");
    }

    #[test]
    fn adding_a_rectangle_never_decreases_locality() {
        let s = TestSuite::new(6, 3).unwrap();
        let mut f = RectFamily::empty(6, 3);
        let mut last = Rational::zero();
        for (i, j) in [(0, 1), (2, 4), (1, 3), (0, 5)] {
            f.rects.push(RectPair::new(SetExpr::smallest_pair(i, j), SetExpr::split_pair(j, i)));
            let now = locality_exact(&f, &s).unwrap();
            assert!(now >= last && now <= Rational::one());
            last = now;
        }
    }
}
