use std::fmt;

use crate::error::{Error, Result};
use crate::testsets::clique::{encode_vertex_set, parse_vertex_set};
use crate::testsets::graph::{EdgeSet, Graph};

/// A coloring `χ: [n] -> {0, …, colors-1}`; for the test sets `colors = k - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring {
    colors: usize,
    chi: Vec<usize>,
}

impl Coloring {
    pub fn new(chi: Vec<usize>, colors: usize) -> Result<Self> {
        if let Some(&c) = chi.iter().find(|&&c| c >= colors) {
            return Err(Error::input(format!("color {c} outside 0..{colors}")));
        }
        Ok(Coloring { colors, chi })
    }

    pub fn n(&self) -> usize {
        self.chi.len()
    }

    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn values(&self) -> &[usize] {
        &self.chi
    }

    pub fn is_trivial(&self) -> bool {
        self.chi.windows(2).all(|w| w[0] == w[1])
    }

    /// The color classes as a canonical partition (classes ordered by least vertex).
    pub fn partition(&self) -> Partition {
        Partition::canonicalize(&self.chi, self.colors)
    }
}

impl EdgeSet for Coloring {
    fn vertex_count(&self) -> usize {
        self.chi.len()
    }

    #[inline]
    fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.chi[u] != self.chi[v]
    }
}

/// `G(χ)`: edge `{u,v}` present iff `χ(u) != χ(v)`.
pub fn graph_of_coloring(chi: &Coloring) -> Graph {
    chi.to_graph()
}

/// A set partition of `[n]`, stored as its restricted-growth string: vertex
/// `v` lies in part `labels[v]`, and parts are numbered in order of their
/// least vertex. This is the identity key of a complete multipartite graph.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    labels: Vec<u32>,
    zeta: usize,
}

impl Partition {
    /// Relabels an arbitrary class assignment (values `< classes`) canonically.
    pub(crate) fn canonicalize(assign: &[usize], classes: usize) -> Partition {
        let mut relabel = vec![u32::MAX; classes];
        let mut next = 0u32;
        let labels = assign
            .iter()
            .map(|&c| {
                if relabel[c] == u32::MAX {
                    relabel[c] = next;
                    next += 1;
                }
                relabel[c]
            })
            .collect();
        Partition { labels, zeta: next as usize }
    }

    pub fn from_parts(parts: &[Vec<usize>], n: usize) -> Result<Self> {
        let mut owner = vec![usize::MAX; n];
        for (p, part) in parts.iter().enumerate() {
            if part.is_empty() {
                return Err(Error::input("empty part in partition"));
            }
            for &v in part {
                if v >= n {
                    return Err(Error::input(format!("vertex {v} out of range for n={n}")));
                }
                if owner[v] != usize::MAX {
                    return Err(Error::input(format!("vertex {v} appears in two parts")));
                }
                owner[v] = p;
            }
        }
        if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::input(format!("vertex {v} is not covered by the partition")));
        }
        Ok(Partition::canonicalize(&owner, parts.len()))
    }

    /// Accepts a restricted-growth string; rejects anything non-canonical.
    pub fn from_labels(labels: Vec<u32>) -> Result<Self> {
        let mut next = 0u32;
        for &l in &labels {
            if l > next {
                return Err(Error::input(format!("labels {labels:?} are not a restricted-growth string")));
            }
            if l == next {
                next += 1;
            }
        }
        Ok(Partition { labels, zeta: next as usize })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Number of parts `ζ`.
    pub fn zeta(&self) -> usize {
        self.zeta
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    #[inline]
    pub fn part_of(&self, v: usize) -> u32 {
        self.labels[v]
    }

    /// `true` iff `u` and `v` lie in different parts.
    #[inline]
    pub fn separates(&self, u: usize, v: usize) -> bool {
        self.labels[u] != self.labels[v]
    }

    /// `true` iff the vertices of `set` lie in pairwise distinct parts,
    /// i.e. `K_set` is a subgraph of the multipartite graph.
    pub fn rainbow(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(a, &u)| set[a + 1..].iter().all(|&v| self.separates(u, v)))
    }

    /// Parts in canonical order, each sorted ascending.
    pub fn parts(&self) -> Vec<Vec<usize>> {
        let mut parts = vec![Vec::new(); self.zeta];
        for (v, &l) in self.labels.iter().enumerate() {
            parts[l as usize].push(v);
        }
        parts
    }

    /// `"0,2|1,3"`.
    pub fn encode(&self) -> String {
        self.parts().iter().map(|p| encode_vertex_set(p)).collect::<Vec<_>>().join("|")
    }

    pub fn decode(s: &str, n: usize) -> Result<Self> {
        let parts = s.split('|').map(parse_vertex_set).collect::<Result<Vec<_>>>()?;
        Partition::from_parts(&parts, n)
    }
}

impl EdgeSet for Partition {
    fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.separates(u, v)
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P[{}]", self.encode())
    }
}

/// All set partitions of `[n]` with between `min_parts` and `max_parts`
/// parts, in lexicographic order of their restricted-growth strings.
pub fn enumerate_partitions(n: usize, min_parts: usize, max_parts: usize) -> Vec<Partition> {
    fn rec(i: usize, used: usize, labels: &mut Vec<u32>, lo: usize, hi: usize, out: &mut Vec<Partition>) {
        let n = labels.len();
        if i == n {
            if used >= lo {
                out.push(Partition { labels: labels.clone(), zeta: used });
            }
            return;
        }
        if used + (n - i) < lo {
            return;
        }
        for l in 0..=used.min(hi - 1) {
            labels[i] = l as u32;
            rec(i + 1, used.max(l + 1), labels, lo, hi, out);
        }
    }

    let mut out = Vec::new();
    if n == 0 || max_parts == 0 || min_parts > max_parts {
        return out;
    }
    let mut labels = vec![0u32; n];
    rec(1, 1, &mut labels, min_parts, max_parts, &mut out);
    out
}

/// Stirling numbers of the second kind `S(n, j)` for `j in 0..=max_parts`.
pub fn stirling2_row(n: usize, max_parts: usize) -> Vec<u128> {
    let mut row = vec![0u128; max_parts + 1];
    row[0] = 1;
    for _ in 0..n {
        for j in (1..=max_parts).rev() {
            row[j] = row[j] * j as u128 + row[j - 1];
        }
        row[0] = 0;
    }
    row
}
