//! The test-set universe `A_{n,k} = U_{n,k} ∪ V_{n,k}` and its distribution.
//!
//! Vertices are `0..n`. Cliques are enumerated with `B` in lexicographic
//! order; multipartite graphs are enumerated as set partitions in
//! lexicographic order of their restricted-growth strings, so indices are
//! stable across runs.

mod clique;
mod graph;
mod partition;
mod suite;

pub use clique::{clique_graph, encode_vertex_set, parse_vertex_set, CliqueGraph};
pub use graph::{edge_count, edge_endpoints, edge_index, EdgeSet, Graph};
pub use partition::{enumerate_partitions, graph_of_coloring, stirling2_row, Coloring, Partition};
pub use suite::{
    check_antichain, check_antichain_graphs, coloring_multiplicity, count_v, dv_mass, enumerate_u, enumerate_v,
    nontrivial_colorings, Caps, Member, TestSuite,
};
