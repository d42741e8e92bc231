use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::testsets::{encode_vertex_set, parse_vertex_set, CliqueGraph, Member, Partition};

/// Which half of the universe an expression ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    U,
    V,
}

/// A predicate-defined subset of `U_{n,k}` or `V_{n,k}`.
///
/// Leaves that only make sense on one side (`smallest_pair`, `lex_first`,
/// `not_edge_u` for cliques; `split_pair`, `contains_clique`, `not_edge_v`
/// for multipartite graphs) fix the side of the whole expression.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetExpr {
    All,
    None,
    /// Canonical member encodings; a `|` marks a partition.
    Explicit { members: Vec<String> },
    /// Cliques whose two smallest vertices are exactly `i < j`.
    SmallestPair { i: usize, j: usize },
    /// Multipartite graphs with `i` and `j` in different parts.
    SplitPair { i: usize, j: usize },
    /// Cliques whose `|set|` smallest vertices are exactly `set`.
    LexFirst { set: Vec<usize> },
    /// Multipartite graphs containing the clique on `set`.
    ContainsClique { set: Vec<usize> },
    /// Cliques not containing both endpoints of `edge`.
    NotEdgeU { edge: [usize; 2] },
    /// Multipartite graphs containing `edge`.
    NotEdgeV { edge: [usize; 2] },
    Union { args: Vec<SetExpr> },
    Intersection { args: Vec<SetExpr> },
    Complement { arg: Box<SetExpr> },
}

fn canonical_member(s: &str) -> Result<String> {
    if s.contains('|') {
        let mut parts = s.split('|').map(parse_vertex_set).collect::<Result<Vec<_>>>()?;
        for p in &mut parts {
            p.sort_unstable();
            if p.is_empty() {
                return Err(Error::input(format!("empty part in {s:?}")));
            }
        }
        parts.sort_by_key(|p| p[0]);
        Ok(parts.iter().map(|p| encode_vertex_set(p)).collect::<Vec<_>>().join("|"))
    } else {
        let mut b = parse_vertex_set(s)?;
        b.sort_unstable();
        Ok(encode_vertex_set(&b))
    }
}

impl SetExpr {
    pub fn explicit<S: AsRef<str>>(members: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut members = members
            .into_iter()
            .map(|m| canonical_member(m.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        members.sort();
        members.dedup();
        Ok(SetExpr::Explicit { members })
    }

    pub fn smallest_pair(i: usize, j: usize) -> Self {
        SetExpr::SmallestPair { i: i.min(j), j: i.max(j) }
    }

    pub fn split_pair(i: usize, j: usize) -> Self {
        SetExpr::SplitPair { i: i.min(j), j: i.max(j) }
    }

    pub fn lex_first(mut set: Vec<usize>) -> Self {
        set.sort_unstable();
        SetExpr::LexFirst { set }
    }

    pub fn contains_clique(mut set: Vec<usize>) -> Self {
        set.sort_unstable();
        SetExpr::ContainsClique { set }
    }

    pub fn union(args: Vec<SetExpr>) -> Self {
        SetExpr::Union { args }
    }

    pub fn intersection(args: Vec<SetExpr>) -> Self {
        SetExpr::Intersection { args }
    }

    pub fn complement(arg: SetExpr) -> Self {
        SetExpr::Complement { arg: Box::new(arg) }
    }

    /// `Ok(None)` for side-neutral expressions; an error if both sides occur.
    pub fn side(&self) -> Result<Option<Side>> {
        let leaf = |s: Side| Ok(Some(s));
        match self {
            SetExpr::All | SetExpr::None => Ok(None),
            SetExpr::Explicit { members } => {
                let has_v = members.iter().any(|m| m.contains('|'));
                let has_u = members.iter().any(|m| !m.contains('|'));
                match (has_u, has_v) {
                    (true, true) => Err(Error::SideMismatch("explicit list mixes cliques and partitions".into())),
                    (true, false) => leaf(Side::U),
                    (false, true) => leaf(Side::V),
                    (false, false) => Ok(None),
                }
            }
            SetExpr::SmallestPair { .. } | SetExpr::LexFirst { .. } | SetExpr::NotEdgeU { .. } => leaf(Side::U),
            SetExpr::SplitPair { .. } | SetExpr::ContainsClique { .. } | SetExpr::NotEdgeV { .. } => leaf(Side::V),
            SetExpr::Union { args } | SetExpr::Intersection { args } => {
                let mut side = None;
                for a in args {
                    match (side, a.side()?) {
                        (_, None) => {}
                        (None, s) => side = s,
                        (Some(x), Some(y)) if x != y => {
                            return Err(Error::SideMismatch("combinator mixes U-side and V-side leaves".into()))
                        }
                        _ => {}
                    }
                }
                Ok(side)
            }
            SetExpr::Complement { arg } => arg.side(),
        }
    }

    /// Errors unless the expression can be read as a subset of `side`.
    pub fn check_side(&self, side: Side) -> Result<()> {
        match self.side()? {
            Some(s) if s != side => Err(Error::SideMismatch(format!("{s:?}-side expression used as a {side:?}-set"))),
            _ => Ok(()),
        }
    }

    /// Membership of a test-set member. Side mismatch is an error.
    pub fn eval(&self, member: &Member<'_>) -> Result<bool> {
        match member {
            Member::U(_, c) => {
                self.check_side(Side::U)?;
                Ok(self.eval_u(c))
            }
            Member::V(_, p) => {
                self.check_side(Side::V)?;
                Ok(self.eval_v(p))
            }
        }
    }

    /// Membership of a clique; V-only leaves are treated as empty.
    pub fn eval_u(&self, c: &CliqueGraph) -> bool {
        let b = c.vertices();
        match self {
            SetExpr::All => true,
            SetExpr::None => false,
            SetExpr::Explicit { members } => members.binary_search(&c.encode()).is_ok(),
            SetExpr::SmallestPair { i, j } => b.len() >= 2 && b[0] == *i && b[1] == *j,
            SetExpr::LexFirst { set } => set.len() <= b.len() && b[..set.len()] == set[..],
            SetExpr::NotEdgeU { edge } => !(c.contains(edge[0]) && c.contains(edge[1])),
            SetExpr::SplitPair { .. } | SetExpr::ContainsClique { .. } | SetExpr::NotEdgeV { .. } => false,
            SetExpr::Union { args } => args.iter().any(|a| a.eval_u(c)),
            SetExpr::Intersection { args } => args.iter().all(|a| a.eval_u(c)),
            SetExpr::Complement { arg } => !arg.eval_u(c),
        }
    }

    /// Membership of a multipartite graph; U-only leaves are treated as empty.
    pub fn eval_v(&self, p: &Partition) -> bool {
        match self {
            SetExpr::All => true,
            SetExpr::None => false,
            SetExpr::Explicit { members } => members.binary_search(&p.encode()).is_ok(),
            SetExpr::SplitPair { i, j } => p.separates(*i, *j),
            SetExpr::ContainsClique { set } => p.rainbow(set),
            SetExpr::NotEdgeV { edge } => p.separates(edge[0], edge[1]),
            SetExpr::SmallestPair { .. } | SetExpr::LexFirst { .. } | SetExpr::NotEdgeU { .. } => false,
            SetExpr::Union { args } => args.iter().any(|a| a.eval_v(p)),
            SetExpr::Intersection { args } => args.iter().all(|a| a.eval_v(p)),
            SetExpr::Complement { arg } => !arg.eval_v(p),
        }
    }

    /// Checks vertex ranges against `n` and canonicalizes explicit lists.
    pub fn validate(&self, n: usize) -> Result<SetExpr> {
        let vertex = |v: usize| {
            if v < n {
                Ok(v)
            } else {
                Err(Error::input(format!("vertex {v} out of range for n={n}")))
            }
        };
        let pair = |i: usize, j: usize| -> Result<(usize, usize)> {
            vertex(i)?;
            vertex(j)?;
            if i == j {
                return Err(Error::input(format!("pair ({i},{j}) needs distinct vertices")));
            }
            Ok((i.min(j), i.max(j)))
        };
        let set = |s: &[usize]| -> Result<Vec<usize>> {
            let mut s = s.iter().map(|&v| vertex(v)).collect::<Result<Vec<_>>>()?;
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::input(format!("repeated vertex in {s:?}")));
            }
            Ok(s)
        };
        let out = match self {
            SetExpr::All => SetExpr::All,
            SetExpr::None => SetExpr::None,
            SetExpr::Explicit { members } => {
                let e = SetExpr::explicit(members)?;
                if let SetExpr::Explicit { members } = &e {
                    for m in members {
                        if m.contains('|') {
                            Partition::decode(m, n)?;
                        } else {
                            CliqueGraph::decode(m, n)?;
                        }
                    }
                }
                e
            }
            SetExpr::SmallestPair { i, j } => {
                let (i, j) = pair(*i, *j)?;
                SetExpr::SmallestPair { i, j }
            }
            SetExpr::SplitPair { i, j } => {
                let (i, j) = pair(*i, *j)?;
                SetExpr::SplitPair { i, j }
            }
            SetExpr::LexFirst { set: s } => SetExpr::LexFirst { set: set(s)? },
            SetExpr::ContainsClique { set: s } => SetExpr::ContainsClique { set: set(s)? },
            SetExpr::NotEdgeU { edge } => {
                let (i, j) = pair(edge[0], edge[1])?;
                SetExpr::NotEdgeU { edge: [i, j] }
            }
            SetExpr::NotEdgeV { edge } => {
                let (i, j) = pair(edge[0], edge[1])?;
                SetExpr::NotEdgeV { edge: [i, j] }
            }
            SetExpr::Union { args } => SetExpr::Union { args: args.iter().map(|a| a.validate(n)).collect::<Result<_>>()? },
            SetExpr::Intersection { args } => {
                SetExpr::Intersection { args: args.iter().map(|a| a.validate(n)).collect::<Result<_>>()? }
            }
            SetExpr::Complement { arg } => SetExpr::Complement { arg: Box::new(arg.validate(n)?) },
        };
        out.side()?;
        Ok(out)
    }
}

/// Free-function form of [`SetExpr::eval`].
pub fn eval_set_expr(expr: &SetExpr, member: &Member<'_>) -> Result<bool> {
    expr.eval(member)
}
