use std::collections::HashMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::math::{binomial_u64, falling, pow, ratio, Rational};
use crate::testsets::clique::CliqueGraph;
use crate::testsets::graph::{EdgeSet, Graph};
use crate::testsets::partition::{enumerate_partitions, stirling2_row, Partition};

/// Size limits for exact enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_cliques: u64,
    pub max_partitions: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_cliques: 1_000_000, max_partitions: 10_000_000 }
    }
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if n < 4 || k < 3 || k >= n {
        return Err(Error::range(format!("need n >= 4 and 3 <= k < n, got n={n}, k={k}")));
    }
    Ok(())
}

/// `U_{n,k}`: all `C(n,k)` cliques, `B` in lexicographic order.
pub fn enumerate_u(n: usize, k: usize) -> Result<Vec<CliqueGraph>> {
    check_nk(n, k)?;
    Ok((0..n).combinations(k).map(|b| CliqueGraph::from_sorted_unchecked(b, n)).collect())
}

/// `V_{n,k}`: complete `ζ`-partite graphs on `[n]` with `2 <= ζ <= k-1`,
/// one per canonical partition, in lexicographic restricted-growth order.
/// `k = n` is accepted here since the negative side is still well defined.
pub fn enumerate_v(n: usize, k: usize) -> Result<Vec<Partition>> {
    if n < 2 || k < 3 || k > n {
        return Err(Error::range(format!("need 3 <= k <= n, got n={n}, k={k}")));
    }
    Ok(enumerate_partitions(n, 2, k - 1))
}

/// Number of members of `V_{n,k}` without enumerating them.
pub fn count_v(n: usize, k: usize) -> u128 {
    let row = stirling2_row(n, k - 1);
    row[2.min(row.len())..].iter().sum()
}

/// Denominator of `D^V`: the number of nontrivial colorings, `(k-1)^n - (k-1)`.
pub fn nontrivial_colorings(n: usize, k: usize) -> BigInt {
    pow(k as u64 - 1, n as u64) - BigInt::from(k - 1)
}

/// Number of colorings `χ: [n] -> [k-1]` whose classes form a given `ζ`-part
/// partition: `(k-1)(k-2)…(k-ζ)`.
pub fn coloring_multiplicity(zeta: usize, k: usize) -> BigInt {
    falling(k as u64 - 1, zeta as u64)
}

/// `D^V_{n,k}` mass of a partition: `(k-1)(k-2)…(k-ζ) / ((k-1)^n - (k-1))`.
pub fn dv_mass(p: &Partition, n: usize, k: usize) -> Result<Rational> {
    let zeta = p.zeta();
    if p.n() != n {
        return Err(Error::input(format!("partition on {} vertices, expected {n}", p.n())));
    }
    if zeta < 2 || zeta + 1 > k {
        return Err(Error::range(format!("ζ={zeta} outside [2, {}]", k - 1)));
    }
    Ok(Rational::new(coloring_multiplicity(zeta, k), nontrivial_colorings(n, k)))
}

/// A member of `A_{n,k}` together with its position in the suite.
#[derive(Clone, Copy, Debug)]
pub enum Member<'a> {
    U(usize, &'a CliqueGraph),
    V(usize, &'a Partition),
}

impl Member<'_> {
    pub fn is_positive(&self) -> bool {
        matches!(self, Member::U(..))
    }

    pub fn encode(&self) -> String {
        match self {
            Member::U(_, c) => c.encode(),
            Member::V(_, p) => p.encode(),
        }
    }
}

impl EdgeSet for Member<'_> {
    fn vertex_count(&self) -> usize {
        match self {
            Member::U(_, c) => c.n(),
            Member::V(_, p) => p.n(),
        }
    }

    #[inline]
    fn has_edge(&self, u: usize, v: usize) -> bool {
        match self {
            Member::U(_, c) => c.has_edge(u, v),
            Member::V(_, p) => p.has_edge(u, v),
        }
    }
}

/// The universe `A_{n,k} = U_{n,k} ∪ V_{n,k}` with the masses of `D_{n,k}`.
#[derive(Clone, Debug)]
pub struct TestSuite {
    n: usize,
    k: usize,
    u: Vec<CliqueGraph>,
    v: Vec<Partition>,
    u_lookup: HashMap<Vec<usize>, usize>,
    v_lookup: HashMap<Vec<u32>, usize>,
}

impl TestSuite {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        Self::with_caps(n, k, Caps::default())
    }

    pub fn with_caps(n: usize, k: usize, caps: Caps) -> Result<Self> {
        check_nk(n, k)?;
        let cliques = binomial_u64(n as u64, k as u64).unwrap_or(u64::MAX);
        if cliques > caps.max_cliques {
            return Err(Error::ScaleCap(format!("C({n},{k}) = {cliques} exceeds {}", caps.max_cliques)));
        }
        let parts = count_v(n, k);
        if parts > caps.max_partitions {
            return Err(Error::ScaleCap(format!(
                "|V_{{{n},{k}}}| = {parts} exceeds {}",
                caps.max_partitions
            )));
        }
        let u = enumerate_u(n, k)?;
        let v = enumerate_v(n, k)?;
        let u_lookup = u.iter().enumerate().map(|(i, c)| (c.vertices().to_vec(), i)).collect();
        let v_lookup = v.iter().enumerate().map(|(i, p)| (p.labels().to_vec(), i)).collect();
        Ok(TestSuite { n, k, u, v, u_lookup, v_lookup })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn u(&self) -> &[CliqueGraph] {
        &self.u
    }

    pub fn v(&self) -> &[Partition] {
        &self.v
    }

    pub fn len(&self) -> usize {
        self.u.len() + self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Members of `A`: all of `U` (in order) followed by all of `V`.
    pub fn members(&self) -> impl Iterator<Item = Member<'_>> + '_ {
        self.u
            .iter()
            .enumerate()
            .map(|(i, c)| Member::U(i, c))
            .chain(self.v.iter().enumerate().map(|(i, p)| Member::V(i, p)))
    }

    pub fn u_index_of(&self, c: &CliqueGraph) -> Option<usize> {
        self.u_lookup.get(c.vertices()).copied()
    }

    pub fn v_index_of(&self, p: &Partition) -> Option<usize> {
        self.v_lookup.get(p.labels()).copied()
    }

    /// Looks a member up by its canonical encoding (`|` marks a partition).
    pub fn find(&self, encoding: &str) -> Result<Member<'_>> {
        if encoding.contains('|') {
            let p = Partition::decode(encoding, self.n)?;
            let i = self
                .v_index_of(&p)
                .ok_or_else(|| Error::input(format!("{encoding:?} is not a member of V")))?;
            Ok(Member::V(i, &self.v[i]))
        } else {
            let c = CliqueGraph::decode(encoding, self.n)?;
            let i = self
                .u_index_of(&c)
                .ok_or_else(|| Error::input(format!("{encoding:?} is not a member of U")))?;
            Ok(Member::U(i, &self.u[i]))
        }
    }

    /// `1 / C(n,k)`, the mass of every clique.
    pub fn du_mass(&self) -> Rational {
        ratio(BigInt::one(), self.u.len())
    }

    pub fn dv_mass(&self, index: usize) -> Rational {
        dv_mass(&self.v[index], self.n, self.k).expect("suite members are valid")
    }

    /// `D^V` mass of a member with `ζ` parts.
    pub fn dv_mass_for_zeta(&self, zeta: usize) -> Rational {
        Rational::new(coloring_multiplicity(zeta, self.k), nontrivial_colorings(self.n, self.k))
    }

    pub fn graphs(&self) -> Vec<Graph> {
        self.members().map(|m| m.to_graph()).collect()
    }
}

/// True iff no two distinct members are comparable under
/// edge-set inclusion. Checked pairwise, exactly.
pub fn check_antichain(suite: &TestSuite) -> bool {
    check_antichain_graphs(&suite.graphs())
}

pub fn check_antichain_graphs(graphs: &[Graph]) -> bool {
    (0..graphs.len()).into_par_iter().all(|i| {
        graphs.iter().enumerate().all(|(j, h)| {
            i == j || graphs[i] == *h || !graphs[i].is_subgraph_of(h)
        })
    }) && {
        // distinct positions holding equal graphs are comparable too
        let mut seen = std::collections::HashSet::new();
        graphs.iter().all(|g| seen.insert(g.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn u_counts() {
        assert_eq!(enumerate_u(4, 3).unwrap().len(), 4);
        assert_eq!(enumerate_u(6, 3).unwrap().len(), 20);
        for c in enumerate_u(7, 4).unwrap() {
            assert_eq!(c.to_graph().num_edges(), 6);
        }
        let u = enumerate_u(5, 3).unwrap();
        assert_eq!(u[0].encode(), "0,1,2");
        assert_eq!(u[9].encode(), "2,3,4");
    }

    #[test]
    fn parameter_range() {
        assert!(enumerate_u(3, 3).is_err());
        assert!(enumerate_u(5, 2).is_err());
        assert!(enumerate_u(5, 5).is_err());
        assert!(TestSuite::new(5, 5).is_err());
        assert!(enumerate_v(4, 4).is_ok());
        assert!(enumerate_v(4, 5).is_err());
    }

    #[test]
    fn dv_mass_examples() {
        let p = Partition::decode("0,1|2,3", 4).unwrap();
        assert_eq!(dv_mass(&p, 4, 3).unwrap(), ratio(1, 7));
        let p = Partition::decode("0,1|2|3,4", 5).unwrap();
        assert_eq!(dv_mass(&p, 5, 4).unwrap(), ratio(1, 40));
        let trivial = Partition::decode("0,1,2,3", 4).unwrap();
        assert!(dv_mass(&trivial, 4, 3).is_err());
        let too_many = Partition::decode("0|1|2|3", 4).unwrap();
        assert!(dv_mass(&too_many, 4, 3).is_err());
    }

    #[test]
    fn masses_sum_to_one() {
        for (n, k) in [(4, 3), (6, 3), (6, 4), (7, 5)] {
            let s = TestSuite::new(n, k).unwrap();
            let total: Rational = (0..s.v().len()).map(|i| s.dv_mass(i)).fold(Rational::zero(), |a, b| a + b);
            assert_eq!(total, Rational::one());
            assert_eq!(s.du_mass() * Rational::from_integer(s.u().len().into()), Rational::one());
        }
    }

    #[test]
    fn lookup_by_encoding() {
        let s = TestSuite::new(6, 3).unwrap();
        assert!(matches!(s.find("0,2,5").unwrap(), Member::U(_, _)));
        assert!(matches!(s.find("0,2|1,3,4,5").unwrap(), Member::V(_, _)));
        assert!(s.find("0,1").is_err());
        assert!(s.find("0|1|2,3,4,5").is_err());
    }

    #[test]
    fn antichain_small() {
        assert!(check_antichain(&TestSuite::new(4, 3).unwrap()));
        assert!(check_antichain(&TestSuite::new(6, 3).unwrap()));
        // a bipartite graph sits inside each tripartite refinement
        assert!(!check_antichain(&TestSuite::new(5, 4).unwrap()));
        let mut gs = vec![Graph::empty(5)];
        gs.push(CliqueGraph::new([0, 1, 2], 5).unwrap().to_graph());
        assert!(!check_antichain_graphs(&gs));
        let k = CliqueGraph::new([0, 1, 2], 5).unwrap().to_graph();
        assert!(!check_antichain_graphs(&[k.clone(), k]));
    }

    #[test]
    fn scale_cap() {
        let caps = Caps { max_cliques: 10, max_partitions: 1_000 };
        assert!(matches!(TestSuite::with_caps(6, 3, caps), Err(Error::ScaleCap(_))));
    }
}
