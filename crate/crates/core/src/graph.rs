//! Graph games: positions stored once in a node arena, with product
//! positions keyed by the pair of operand positions.

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;

use crate::analytics::SizeQuad;
use crate::connectives::{product_polarity, Prefixer};
use crate::error::{Error, Result};
use crate::game::{GameTree, Profile};
use crate::limits::{Limits, Meter};
use crate::polarity::Polarity;
use crate::syntax::{Family, Formula, Label, Node, UnOp};

pub type NodeId = u32;

/// How a node arose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Literal,
    /// A product position; the first `split` edges are moves of the left
    /// component, the rest moves of the right one. `two_sided` when both
    /// components may move here.
    Pair {
        split: u32,
        two_sided: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphNode {
    pub polarity: Polarity,
    pub kind: NodeKind,
    pub edges: Vec<(Label, NodeId)>,
}

/// An acyclic game graph; every child id is smaller than its parent's.
#[derive(Debug, Clone, Default)]
pub struct GraphGame {
    nodes: Vec<GraphNode>,
    root: NodeId,
}

impl GraphGame {
    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &GraphNode {
        &self.nodes[id as usize]
    }

    /// Every node in the store, reachable or not.
    pub fn store_len(&self) -> usize {
        self.nodes.len()
    }

    /// Node ids reachable from the root, in increasing order (children
    /// before parents).
    pub fn reachable(&self) -> Vec<NodeId> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![self.root];
        seen[self.root as usize] = true;
        while let Some(id) = stack.pop() {
            for &(_, c) in &self.node(id).edges {
                if !seen[c as usize] {
                    seen[c as usize] = true;
                    stack.push(c);
                }
            }
        }
        (0..self.nodes.len() as NodeId)
            .filter(|&i| seen[i as usize])
            .collect()
    }

    /// Node and edge counts of the reachable part.
    pub fn size(&self) -> SizeQuad {
        let (mut no, mut np, mut eo, mut ep) = (0u64, 0u64, 0u64, 0u64);
        for id in self.reachable() {
            let n = self.node(id);
            let k = n.edges.len() as u64;
            match n.polarity {
                Polarity::Opponent => {
                    no += 1;
                    eo += k;
                }
                Polarity::Player => {
                    np += 1;
                    ep += k;
                }
            }
        }
        SizeQuad::from_u64s(no, np, eo, ep)
    }

    /// Entry `i` counts the distinct nodes reachable by a path of length `i`.
    pub fn profile(&self) -> Profile {
        let mut out = Vec::new();
        let mut level: Vec<NodeId> = vec![self.root];
        let mut mark = vec![usize::MAX; self.nodes.len()];
        let mut depth = 0;
        while !level.is_empty() {
            out.push(BigUint::from(level.len()));
            depth += 1;
            let mut next = Vec::new();
            for &id in &level {
                for &(_, c) in &self.node(id).edges {
                    if mark[c as usize] != depth {
                        mark[c as usize] = depth;
                        next.push(c);
                    }
                }
            }
            level = next;
        }
        Profile::new(out)
    }

    /// The tree of plays from the root.
    pub fn unfold(&self, max_nodes: u64) -> Result<GameTree> {
        let mut meter = Meter::new(Limits::nodes(max_nodes));
        self.unfold_at(self.root, &mut meter)
    }

    fn unfold_at(&self, id: NodeId, meter: &mut Meter) -> Result<GameTree> {
        meter.tick(1)?;
        let n = self.node(id);
        let mut branches = Vec::with_capacity(n.edges.len());
        for (l, c) in &n.edges {
            branches.push((l.clone(), self.unfold_at(*c, meter)?));
        }
        Ok(GameTree::from_parts(n.polarity, branches))
    }
}

/// Interning key for a node: its polarity and labelled children.
type NodeKey = (Polarity, Vec<(Label, NodeId)>);

struct Builder {
    nodes: Vec<GraphNode>,
    pairs: HashMap<(Family, NodeId, NodeId), NodeId>,
    shared: Option<HashMap<NodeKey, NodeId>>,
    prefix: Prefixer,
    meter: Meter,
}

impl Builder {
    fn push(&mut self, node: GraphNode) -> Result<NodeId> {
        if let Some(shared) = &self.shared {
            if let Some(&id) = shared.get(&(node.polarity, node.edges.clone())) {
                return Ok(id);
            }
        }
        self.meter.tick(1)?;
        let id = NodeId::try_from(self.nodes.len()).map_err(|_| Error::BudgetExceeded {
            produced: self.nodes.len() as u64,
            budget: NodeId::MAX as u64,
        })?;
        if let Some(shared) = &mut self.shared {
            shared.insert((node.polarity, node.edges.clone()), id);
        }
        self.nodes.push(node);
        Ok(id)
    }

    fn formula(&mut self, f: &Formula) -> Result<NodeId> {
        match f.node() {
            Node::Lit { polarity, branches } => {
                let mut edges = Vec::with_capacity(branches.len());
                for b in branches {
                    edges.push((b.label.clone(), self.formula(&b.child)?));
                }
                self.push(GraphNode {
                    polarity: *polarity,
                    kind: NodeKind::Literal,
                    edges,
                })
            }
            Node::Binary { op, left, right } => {
                let x = self.formula(left)?;
                let y = self.formula(right)?;
                self.pair(op.family(), x, y)
            }
            Node::Unary { op, child } => match op {
                UnOp::Dual => {
                    let c = self.formula(child)?;
                    let mut done = HashMap::new();
                    self.dual(c, &mut done)
                }
                UnOp::Bang | UnOp::Quest => Err(Error::Unsupported {
                    connective: op.name(),
                }),
            },
        }
    }

    fn pair(&mut self, family: Family, x: NodeId, y: NodeId) -> Result<NodeId> {
        if let Some(&id) = self.pairs.get(&(family, x, y)) {
            return Ok(id);
        }
        let (px, py) = (
            self.nodes[x as usize].polarity,
            self.nodes[y as usize].polarity,
        );
        let pol = product_polarity(family, px, py);
        let mut edges = Vec::new();
        if px == pol {
            for (l, c) in self.nodes[x as usize].edges.clone() {
                let label = self.prefix.get(&l, false);
                edges.push((label, self.pair(family, c, y)?));
            }
        }
        let split = edges.len() as u32;
        if py == pol {
            for (l, c) in self.nodes[y as usize].edges.clone() {
                let label = self.prefix.get(&l, true);
                edges.push((label, self.pair(family, x, c)?));
            }
        }
        let id = self.push(GraphNode {
            polarity: pol,
            kind: NodeKind::Pair {
                split,
                two_sided: px == pol && py == pol,
            },
            edges,
        })?;
        self.pairs.insert((family, x, y), id);
        Ok(id)
    }

    fn dual(&mut self, id: NodeId, done: &mut HashMap<NodeId, NodeId>) -> Result<NodeId> {
        if let Some(&d) = done.get(&id) {
            return Ok(d);
        }
        let n = self.nodes[id as usize].clone();
        let mut edges = Vec::with_capacity(n.edges.len());
        for (l, c) in n.edges {
            edges.push((l, self.dual(c, done)?));
        }
        let d = self.push(GraphNode {
            polarity: n.polarity.flip(),
            kind: n.kind,
            edges,
        })?;
        done.insert(id, d);
        Ok(d)
    }
}

/// Builds the graph game of a multiplicative formula. With `global_dedup`,
/// structurally identical nodes anywhere in the graph are also merged.
pub fn build_graph(f: &Formula, global_dedup: bool) -> Result<GraphGame> {
    build_graph_with(f, global_dedup, Limits::default())
}

pub fn build_graph_with(f: &Formula, global_dedup: bool, limits: Limits) -> Result<GraphGame> {
    let mut b = Builder {
        nodes: Vec::new(),
        pairs: HashMap::new(),
        shared: global_dedup.then(HashMap::new),
        prefix: Prefixer::default(),
        meter: Meter::new(limits),
    };
    let root = b.formula(f)?;
    Ok(GraphGame {
        nodes: b.nodes,
        root,
    })
}

/// Checks the arena invariants: children precede parents and polarities
/// alternate along edges.
pub fn check_invariants(g: &GraphGame) -> bool {
    g.nodes.iter().enumerate().all(|(i, n)| {
        let labels: HashSet<&Label> = n.edges.iter().map(|(l, _)| l).collect();
        labels.len() == n.edges.len()
            && n.edges
                .iter()
                .all(|&(_, c)| (c as usize) < i && g.nodes[c as usize].polarity != n.polarity)
    })
}
