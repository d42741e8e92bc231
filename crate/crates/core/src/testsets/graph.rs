use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Slot of the undirected edge `{i, j}` in the `C(n, 2)`-bit edge vector.
#[inline]
pub fn edge_index(i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

/// Inverse of [`edge_index`].
pub fn edge_endpoints(index: usize) -> (usize, usize) {
    // largest j with j(j-1)/2 <= index
    let mut j = ((((8 * index + 1) as f64).sqrt() + 1.0) / 2.0) as usize;
    while j * (j.saturating_sub(1)) / 2 > index {
        j -= 1;
    }
    while (j + 1) * j / 2 <= index {
        j += 1;
    }
    (index - j * (j - 1) / 2, j)
}

pub fn edge_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Anything that answers "is `{u, v}` an edge".
pub trait EdgeSet {
    fn vertex_count(&self) -> usize;
    fn has_edge(&self, u: usize, v: usize) -> bool;

    fn to_graph(&self) -> Graph {
        let n = self.vertex_count();
        let mut g = Graph::empty(n);
        for j in 1..n {
            for i in 0..j {
                if self.has_edge(i, j) {
                    g.edges.insert(edge_index(i, j));
                }
            }
        }
        g
    }
}

/// A simple graph on vertices `0..n`, stored as a bit set over edge slots.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: FixedBitSet,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { n, edges: FixedBitSet::with_capacity(edge_count(n)) }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        g.edges.insert_range(..);
        g
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            if u == v || u >= n || v >= n {
                return Err(Error::input(format!("edge {{{u},{v}}} invalid for n={n}")));
            }
            g.edges.insert(edge_index(u, v));
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_bits(&self) -> &FixedBitSet {
        &self.edges
    }

    pub fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        self.edges.set(edge_index(u, v), present);
    }

    pub fn num_edges(&self) -> usize {
        self.edges.count_ones(..)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.ones().map(edge_endpoints)
    }

    /// Edge-set inclusion.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.edges.is_subset(&other.edges)
    }

    /// Lowercase hex of the edge vector read as an integer (edge 0 is the
    /// least significant bit), padded to `ceil(C(n,2)/4)` digits.
    pub fn to_hex(&self) -> String {
        let width = edge_count(self.n).div_ceil(4).max(1);
        (0..width)
            .rev()
            .map(|d| {
                let nibble = (0..4).fold(0u32, |acc, b| {
                    let idx = 4 * d + b;
                    if idx < self.edges.len() && self.edges.contains(idx) {
                        acc | (1 << b)
                    } else {
                        acc
                    }
                });
                char::from_digit(nibble, 16).unwrap()
            })
            .collect()
    }

    pub fn from_hex(n: usize, hex: &str) -> Result<Self> {
        let mut g = Graph::empty(n);
        let m = edge_count(n);
        for (d, ch) in hex.trim().chars().rev().enumerate() {
            let nibble = ch
                .to_digit(16)
                .ok_or_else(|| Error::input(format!("bad hex digit {ch:?} in graph encoding")))?;
            for b in 0..4 {
                if nibble & (1 << b) != 0 {
                    let idx = 4 * d + b;
                    if idx >= m {
                        return Err(Error::input(format!("graph encoding sets bit {idx} >= C({n},2)")));
                    }
                    g.edges.insert(idx);
                }
            }
        }
        Ok(g)
    }
}

impl EdgeSet for Graph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.edges.contains(edge_index(u, v))
    }

    fn to_graph(&self) -> Graph {
        self.clone()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, {})", self.n, self.to_hex())
    }
}
