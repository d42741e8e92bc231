use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::testsets::EdgeSet;

pub type NodeId = usize;

/// A node of a monotone circuit with local oracles.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    /// Edge variable `x_{i,j}`, `i < j`.
    X(usize, usize),
    /// Oracle variable `y_i`.
    Y(usize),
    Const(bool),
    And(Vec<NodeId>),
    Or(Vec<NodeId>),
}

impl Node {
    pub fn children(&self) -> &[NodeId] {
        match self {
            Node::And(c) | Node::Or(c) => c,
            _ => &[],
        }
    }

    pub fn is_leaf(&self) -> bool {
        !matches!(self, Node::And(_) | Node::Or(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Fanin {
    /// Every gate has exactly two inputs.
    #[default]
    Binary,
    /// Gates take one or more inputs (the depth-2 model).
    Unbounded,
}

/// A validated DAG. Node ids are positions in `nodes`; evaluation follows a
/// topological order computed at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    n: usize,
    nodes: Vec<Node>,
    output: NodeId,
    fanin: Fanin,
    order: Vec<NodeId>,
}

impl Circuit {
    pub fn new(n: usize, nodes: Vec<Node>, output: NodeId, fanin: Fanin) -> Result<Self> {
        if output >= nodes.len() {
            return Err(Error::Circuit(format!("output {output} is not a node id")));
        }
        for (id, node) in nodes.iter().enumerate() {
            match node {
                Node::X(i, j) => {
                    if !(i < j && *j < n) {
                        return Err(Error::Circuit(format!("node {id}: edge ({i},{j}) invalid for n={n}")));
                    }
                }
                Node::And(c) | Node::Or(c) => {
                    if let Some(&bad) = c.iter().find(|&&c| c >= nodes.len()) {
                        return Err(Error::Circuit(format!("node {id}: argument {bad} is not a node id")));
                    }
                    match fanin {
                        Fanin::Binary if c.len() != 2 => {
                            return Err(Error::Circuit(format!(
                                "node {id}: binary circuits need fan-in 2, got {}",
                                c.len()
                            )))
                        }
                        Fanin::Unbounded if c.is_empty() => {
                            return Err(Error::Circuit(format!("node {id}: gate without inputs")))
                        }
                        _ => {}
                    }
                }
                _ => {}
            }
        }
        let order = topo_order(&nodes)?;
        Ok(Circuit { n, nodes, output, fanin, order })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn output(&self) -> NodeId {
        self.output
    }

    pub fn fanin(&self) -> Fanin {
        self.fanin
    }

    /// Topological order (children first) over all nodes.
    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    /// Nodes reachable from the output.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![self.output];
        while let Some(id) = stack.pop() {
            if !std::mem::replace(&mut seen[id], true) {
                stack.extend(self.nodes[id].children());
            }
        }
        seen
    }

    /// Node count including sources, over nodes reachable from the output;
    /// each distinct leaf label counts once however often it occurs.
    pub fn size(&self) -> usize {
        let reach = self.reachable();
        let mut leaves = HashSet::new();
        let mut gates = 0;
        for (id, node) in self.nodes.iter().enumerate().filter(|(id, _)| reach[*id]) {
            let _ = id;
            if node.is_leaf() {
                leaves.insert(node.clone());
            } else {
                gates += 1;
            }
        }
        gates + leaves.len()
    }

    /// Distinct oracle ids used by reachable `y` leaves, ascending.
    pub fn oracle_ids(&self) -> Vec<usize> {
        let reach = self.reachable();
        let mut ids: Vec<usize> = self
            .nodes
            .iter()
            .enumerate()
            .filter_map(|(id, n)| match n {
                Node::Y(o) if reach[id] => Some(*o),
                _ => None,
            })
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    pub fn is_oracle_free(&self) -> bool {
        self.oracle_ids().is_empty()
    }

    /// Evaluates with `y_i := oracle(i)`.
    pub fn eval_with<G: EdgeSet + ?Sized>(&self, g: &G, mut oracle: impl FnMut(usize) -> bool) -> bool {
        let mut val = vec![false; self.nodes.len()];
        for &id in &self.order {
            val[id] = match &self.nodes[id] {
                Node::X(i, j) => g.has_edge(*i, *j),
                Node::Y(o) => oracle(*o),
                Node::Const(b) => *b,
                Node::And(c) => c.iter().all(|&c| val[c]),
                Node::Or(c) => c.iter().any(|&c| val[c]),
            };
        }
        val[self.output]
    }

    /// Evaluates an oracle-free circuit; `y` leaves read as 0.
    pub fn eval_plain<G: EdgeSet + ?Sized>(&self, g: &G) -> bool {
        self.eval_with(g, |_| false)
    }

    /// `D_J`: every `y_j` replaced by the constant `[j ∈ J]`. Node ids and
    /// structure are kept, so the size can only shrink.
    pub fn substitute(&self, j: &[usize]) -> Circuit {
        let nodes = self
            .nodes
            .iter()
            .map(|node| match node {
                Node::Y(o) => Node::Const(j.contains(o)),
                other => other.clone(),
            })
            .collect();
        Circuit { n: self.n, nodes, output: self.output, fanin: self.fanin, order: self.order.clone() }
    }

    /// Rewrites wide gates as left-leaning chains of binary gates. A gate
    /// with a single input is replaced by that input.
    pub fn binarize(&self) -> Circuit {
        if self.fanin == Fanin::Binary {
            return self.clone();
        }
        let mut b = CircuitBuilder::new(self.n, Fanin::Binary);
        let mut map = vec![usize::MAX; self.nodes.len()];
        let reach = self.reachable();
        for &id in &self.order {
            if !reach[id] {
                continue;
            }
            map[id] = match &self.nodes[id] {
                Node::X(i, j) => b.x(*i, *j),
                Node::Y(o) => b.y(*o),
                Node::Const(v) => b.constant(*v),
                Node::And(c) => b.and_all(c.iter().map(|&c| map[c]).collect()),
                Node::Or(c) => b.or_all(c.iter().map(|&c| map[c]).collect()),
            };
        }
        b.finish(map[self.output]).expect("binarization preserves validity")
    }
}

fn topo_order(nodes: &[Node]) -> Result<Vec<NodeId>> {
    // iterative DFS with colors; 0 = new, 1 = on stack, 2 = done
    let mut color = vec![0u8; nodes.len()];
    let mut order = Vec::with_capacity(nodes.len());
    for root in 0..nodes.len() {
        if color[root] != 0 {
            continue;
        }
        let mut stack: Vec<(NodeId, usize)> = vec![(root, 0)];
        color[root] = 1;
        while let Some(&mut (id, ref mut next)) = stack.last_mut() {
            let children = nodes[id].children();
            if *next < children.len() {
                let c = children[*next];
                *next += 1;
                match color[c] {
                    0 => {
                        color[c] = 1;
                        stack.push((c, 0));
                    }
                    1 => {
                        let start = stack.iter().position(|&(s, _)| s == c).unwrap_or(0);
                        let mut cycle: Vec<String> = stack[start..].iter().map(|(s, _)| s.to_string()).collect();
                        cycle.push(c.to_string());
                        return Err(Error::Circuit(format!("cycle through nodes {}", cycle.join(" -> "))));
                    }
                    _ => {}
                }
            } else {
                color[id] = 2;
                order.push(id);
                stack.pop();
            }
        }
    }
    Ok(order)
}

/// Incremental construction with leaf sharing.
#[derive(Clone, Debug)]
pub struct CircuitBuilder {
    n: usize,
    fanin: Fanin,
    nodes: Vec<Node>,
    leaves: HashMap<Node, NodeId>,
}

impl CircuitBuilder {
    pub fn new(n: usize, fanin: Fanin) -> Self {
        CircuitBuilder { n, fanin, nodes: Vec::new(), leaves: HashMap::new() }
    }

    fn leaf(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.leaves.get(&node) {
            return id;
        }
        let id = self.push(node.clone());
        self.leaves.insert(node, id);
        id
    }

    fn push(&mut self, node: Node) -> NodeId {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    pub fn x(&mut self, i: usize, j: usize) -> NodeId {
        self.leaf(Node::X(i.min(j), i.max(j)))
    }

    pub fn y(&mut self, oracle: usize) -> NodeId {
        self.leaf(Node::Y(oracle))
    }

    pub fn constant(&mut self, value: bool) -> NodeId {
        self.leaf(Node::Const(value))
    }

    pub fn and(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.push(Node::And(vec![a, b]))
    }

    pub fn or(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.push(Node::Or(vec![a, b]))
    }

    /// Conjunction of `args`: one gate in unbounded mode, a left-leaning
    /// chain in binary mode. Empty is the constant 1.
    pub fn and_all(&mut self, args: Vec<NodeId>) -> NodeId {
        self.gate_all(args, true)
    }

    /// Disjunction of `args`; empty is the constant 0.
    pub fn or_all(&mut self, args: Vec<NodeId>) -> NodeId {
        self.gate_all(args, false)
    }

    fn gate_all(&mut self, args: Vec<NodeId>, is_and: bool) -> NodeId {
        match args.len() {
            0 => self.constant(is_and),
            1 => args[0],
            _ => match self.fanin {
                Fanin::Unbounded => self.push(if is_and { Node::And(args) } else { Node::Or(args) }),
                Fanin::Binary => {
                    let mut acc = args[0];
                    for &a in &args[1..] {
                        acc = if is_and { self.and(acc, a) } else { self.or(acc, a) };
                    }
                    acc
                }
            },
        }
    }

    /// Clique indicator `⌈X⌉`: AND of the edges inside `set`.
    pub fn clique_indicator(&mut self, set: &[usize]) -> NodeId {
        let mut edges = Vec::new();
        for (a, &u) in set.iter().enumerate() {
            for &v in &set[a + 1..] {
                edges.push(self.x(u, v));
            }
        }
        self.and_all(edges)
    }

    pub fn finish(self, output: NodeId) -> Result<Circuit> {
        Circuit::new(self.n, self.nodes, output, self.fanin)
    }
}
