use std::fmt;

use crate::error::{Error, Result};
use crate::testsets::graph::EdgeSet;

/// `K_B`: the clique on a sorted vertex set `B` inside `[n]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CliqueGraph {
    n: usize,
    vertices: Vec<usize>,
}

impl CliqueGraph {
    /// Requires `B ⊆ [n]` and `|B| >= 2`; duplicates are rejected.
    pub fn new(vertices: impl IntoIterator<Item = usize>, n: usize) -> Result<Self> {
        let mut vertices: Vec<usize> = vertices.into_iter().collect();
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::input(format!("repeated vertex in clique {vertices:?}")));
        }
        if vertices.len() < 2 {
            return Err(Error::input(format!("clique needs at least 2 vertices, got {vertices:?}")));
        }
        if let Some(&v) = vertices.last().filter(|&&v| v >= n) {
            return Err(Error::input(format!("vertex {v} out of range for n={n}")));
        }
        Ok(CliqueGraph { n, vertices })
    }

    pub(crate) fn from_sorted_unchecked(vertices: Vec<usize>, n: usize) -> Self {
        CliqueGraph { n, vertices }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn encode(&self) -> String {
        encode_vertex_set(&self.vertices)
    }

    pub fn decode(s: &str, n: usize) -> Result<Self> {
        CliqueGraph::new(parse_vertex_set(s)?, n)
    }
}

/// Convenience wrapper matching the operation name used across the crate.
pub fn clique_graph(b: &[usize], n: usize) -> Result<CliqueGraph> {
    CliqueGraph::new(b.iter().copied(), n)
}

impl EdgeSet for CliqueGraph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.contains(u) && self.contains(v)
    }
}

impl fmt::Debug for CliqueGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K[{}]", self.encode())
    }
}

pub fn encode_vertex_set(vs: &[usize]) -> String {
    vs.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

/// Parses `"0,2,5"`; the empty string is the empty set.
pub fn parse_vertex_set(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| Error::input(format!("bad vertex {t:?} in {s:?}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testsets::graph::{edge_count, Graph};

    #[test]
    fn triangle_in_four_vertices() {
        let k = clique_graph(&[0, 1, 2], 4).unwrap();
        let g = k.to_graph();
        assert_eq!(g, Graph::from_edges(4, [(0, 1), (0, 2), (1, 2)]).unwrap());
    }

    #[test]
    fn single_edge() {
        let k = clique_graph(&[1, 0], 3).unwrap();
        assert_eq!(k.to_graph().edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn full_vertex_set_is_complete() {
        for n in 2..9 {
            let k = CliqueGraph::new(0..n, n).unwrap();
            assert_eq!(k.to_graph(), Graph::complete(n));
            assert_eq!(k.to_graph().num_edges(), edge_count(n));
        }
    }

    #[test]
    fn rejects_bad_sets() {
        assert!(clique_graph(&[0], 4).is_err());
        assert!(clique_graph(&[0, 4], 4).is_err());
        assert!(clique_graph(&[1, 1, 2], 4).is_err());
    }

    #[test]
    fn encoding() {
        let k = CliqueGraph::decode("5,0,2", 6).unwrap();
        assert_eq!(k.encode(), "0,2,5");
    }
}
