//! Expanded additive game trees and their size measures.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::polarity::Polarity;
use crate::syntax::{Branch, Formula, Label};

/// A finite alternating game tree with labelled, ordered branches.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GameTree {
    polarity: Polarity,
    branches: Vec<(Label, GameTree)>,
}

impl GameTree {
    /// Builds a node, checking alternation and label distinctness.
    pub fn new(polarity: Polarity, branches: Vec<(Label, GameTree)>) -> Result<GameTree> {
        let mut seen = HashSet::with_capacity(branches.len());
        for (label, child) in &branches {
            if !seen.insert(label) {
                return Err(Error::DuplicateLabel {
                    label: label.to_string(),
                });
            }
            if child.polarity == polarity {
                return Err(Error::Polarity {
                    connective: "game".into(),
                    detail: format!("branch `{label}` does not alternate polarity"),
                });
            }
        }
        Ok(GameTree { polarity, branches })
    }

    /// Constructor for callers that already guarantee the invariants.
    pub(crate) fn from_parts(polarity: Polarity, branches: Vec<(Label, GameTree)>) -> GameTree {
        debug_assert!(branches.iter().all(|(_, c)| c.polarity != polarity));
        GameTree { polarity, branches }
    }

    pub fn leaf(polarity: Polarity) -> GameTree {
        GameTree {
            polarity,
            branches: Vec::new(),
        }
    }

    /// `()`
    pub fn one() -> GameTree {
        GameTree::leaf(Polarity::Opponent)
    }

    /// `{}`
    pub fn zero() -> GameTree {
        GameTree::leaf(Polarity::Player)
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn branches(&self) -> &[(Label, GameTree)] {
        &self.branches
    }

    pub fn is_leaf(&self) -> bool {
        self.branches.is_empty()
    }

    /// Child reached by `label`, if any.
    pub fn child(&self, label: &str) -> Option<&GameTree> {
        self.branches
            .iter()
            .find(|(l, _)| &**l == label)
            .map(|(_, c)| c)
    }

    /// Same shape and labels with every polarity flipped.
    pub fn dual(&self) -> GameTree {
        GameTree {
            polarity: self.polarity.flip(),
            branches: self
                .branches
                .iter()
                .map(|(l, c)| (l.clone(), c.dual()))
                .collect(),
        }
    }

    /// The tree as a formula made only of literals.
    pub fn to_formula(&self) -> Formula {
        let branches = self
            .branches
            .iter()
            .map(|(l, c)| Branch::new(l.clone(), c.to_formula()))
            .collect();
        Formula::lit(self.polarity, branches).expect("game trees are well-formed literals")
    }

    /// Parses a formula built only from literals.
    pub fn from_literal(f: &Formula) -> Option<GameTree> {
        match f.node() {
            crate::syntax::Node::Lit { polarity, branches } => {
                let mut out = Vec::with_capacity(branches.len());
                for b in branches {
                    out.push((b.label.clone(), GameTree::from_literal(&b.child)?));
                }
                Some(GameTree::from_parts(*polarity, out))
            }
            _ => None,
        }
    }

    /// Visits every node in preorder together with its depth.
    pub fn for_each_node(&self, mut visit: impl FnMut(&GameTree, usize)) {
        let mut stack = vec![(self, 0usize)];
        while let Some((g, d)) = stack.pop() {
            visit(g, d);
            for (_, c) in g.branches.iter().rev() {
                stack.push((c, d + 1));
            }
        }
    }

    pub fn node_count(&self) -> u64 {
        let mut n = 0;
        self.for_each_node(|_, _| n += 1);
        n
    }

    pub fn leaf_count(&self) -> u64 {
        let mut n = 0;
        self.for_each_node(|g, _| n += g.is_leaf() as u64);
        n
    }
}

impl fmt::Display for GameTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (open, close) = match self.polarity {
            Polarity::Opponent => ('(', ')'),
            Polarity::Player => ('{', '}'),
        };
        if self.branches.is_empty() {
            return write!(f, "{open}{close}");
        }
        write!(f, "{open} ")?;
        for (i, (l, c)) in self.branches.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}:{c}")?;
        }
        write!(f, " {close}")
    }
}

/// All size measures of a game tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SizeReport {
    pub nodes: u64,
    pub nodes_o: u64,
    pub nodes_p: u64,
    pub edges: u64,
    /// Edges leaving opponent nodes.
    pub edges_o: u64,
    /// Edges leaving player nodes.
    pub edges_p: u64,
    pub leaves: u64,
    /// Leaves minus one: the binary meets/joins needed to evaluate the tree.
    #[serde(rename = "usize")]
    pub uniform_size: u64,
    /// Edges on the longest root-to-leaf path.
    pub depth: u64,
}

pub fn measure(g: &GameTree) -> SizeReport {
    let mut r = SizeReport::default();
    g.for_each_node(|n, d| {
        r.nodes += 1;
        let k = n.branches.len() as u64;
        match n.polarity {
            Polarity::Opponent => {
                r.nodes_o += 1;
                r.edges_o += k;
            }
            Polarity::Player => {
                r.nodes_p += 1;
                r.edges_p += k;
            }
        }
        r.edges += k;
        if k == 0 {
            r.leaves += 1;
        }
        r.depth = r.depth.max(d as u64);
    });
    r.uniform_size = r.leaves - 1;
    r
}

/// Per-depth node counts; entry `i` counts nodes at depth `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Profile(Vec<BigUint>);

impl Profile {
    pub fn new(entries: Vec<BigUint>) -> Profile {
        let mut p = Profile(entries);
        p.trim();
        p
    }

    pub fn from_u64s(entries: &[u64]) -> Profile {
        Profile::new(entries.iter().map(|&n| BigUint::from(n)).collect())
    }

    /// Drops trailing zero entries.
    fn trim(&mut self) {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
    }

    pub fn entries(&self) -> &[BigUint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entry `i`, reading out-of-range entries as zero.
    pub fn get(&self, i: usize) -> BigUint {
        self.0.get(i).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.0.iter().sum()
    }

    pub fn to_u64s(&self) -> Option<Vec<u64>> {
        self.0.iter().map(ToPrimitive::to_u64).collect()
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str("]")
    }
}

/// Serialized as a JSON array; entries beyond `u64` become decimal strings.
impl Serialize for Profile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for n in &self.0 {
            seq.serialize_element(&BigJson(n))?;
        }
        seq.end()
    }
}

/// JSON form of a big count: a number when it fits in `u64`, else a string.
pub(crate) struct BigJson<'a>(pub(crate) &'a BigUint);

impl Serialize for BigJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_u64() {
            Some(v) => s.serialize_u64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

pub(crate) fn serialize_big<S: Serializer>(
    n: &BigUint,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    BigJson(n).serialize(s)
}

pub fn profile(g: &GameTree) -> Profile {
    let mut counts: Vec<u64> = Vec::new();
    g.for_each_node(|_, d| {
        if counts.len() <= d {
            counts.resize(d + 1, 0);
        }
        counts[d] += 1;
    });
    Profile::from_u64s(&counts)
}

/// Branch label for the `k`-th move (1-based): `b<k>` at opponent nodes,
/// `a<k>` at player nodes.
pub(crate) fn move_label(polarity: Polarity, k: usize) -> Label {
    match polarity {
        Polarity::Opponent => format!("b{k}").into(),
        Polarity::Player => format!("a{k}").into(),
    }
}

/// Deterministic random game: each node's branching factor is uniform on
/// `0..=max_branch`, and zero at the depth limit. Generated in preorder
/// from a ChaCha8 stream seeded with `seed`.
pub fn random_game(depth: usize, max_branch: usize, start: Polarity, seed: u64) -> GameTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_game_with(&mut rng, depth, max_branch, start)
}

pub(crate) fn random_game_with<R: Rng + ?Sized>(
    rng: &mut R,
    depth: usize,
    max_branch: usize,
    polarity: Polarity,
) -> GameTree {
    if depth == 0 {
        return GameTree::leaf(polarity);
    }
    let k = rng.gen_range(0..=max_branch);
    let branches = (1..=k)
        .map(|i| {
            (
                move_label(polarity, i),
                random_game_with(rng, depth - 1, max_branch, polarity.flip()),
            )
        })
        .collect();
    GameTree::from_parts(polarity, branches)
}
