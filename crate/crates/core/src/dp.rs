//! Dynamic-programming evaluation over graph games.
//!
//! Every graph position is evaluated once (meets at opponent positions,
//! joins at player positions) and the number of binary meet/join
//! operations is counted. A position with `k` moves costs `k - 1`; a
//! product position where both components may move combines the `m` left
//! and `n` right moves separately and then once more, costing
//! `(m-1) + (n-1) + 1` with empty or singleton sides contributing nothing
//! to their own part.

use num_bigint::BigUint;
use serde::Serialize;

use crate::analytics::{graph_size, SizeQuad};
use crate::connectives::expand_with;
use crate::error::{Error, Result};
use crate::graph::{build_graph_with, GraphGame, NodeId, NodeKind};
use crate::limits::{Limits, Meter};
use crate::polarity::Polarity;
use crate::syntax::{Branch, Formula, Node, UnOp};

/// Operation counts of one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct OpCounter {
    pub binary_ops: u64,
    pub memo_hits: u64,
    pub memo_entries: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpOptions {
    pub memo: bool,
    pub global_dedup: bool,
    /// Expand `bang`/`quest` subformulas into literals instead of using
    /// `S(!O) = S(O)` and `S(?P) = S(P)`.
    pub expand_exponentials: bool,
    pub limits: Limits,
}

impl Default for DpOptions {
    fn default() -> DpOptions {
        DpOptions {
            memo: true,
            global_dedup: true,
            expand_exponentials: false,
            limits: Limits::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DpResult {
    pub verdict: bool,
    pub counter: OpCounter,
    /// Nodes in the graph store.
    pub graph_nodes: u64,
}

/// Rewrites exponentials so the formula can be built as a graph.
pub fn prepare(f: &Formula, expand_exponentials: bool, limits: Limits) -> Result<Formula> {
    Ok(match f.node() {
        Node::Lit { polarity, branches } => {
            let mut out = Vec::with_capacity(branches.len());
            for b in branches {
                out.push(Branch::new(
                    b.label.clone(),
                    prepare(&b.child, expand_exponentials, limits)?,
                ));
            }
            Formula::lit(*polarity, out)?
        }
        Node::Binary { op, left, right } => Formula::binary(
            *op,
            prepare(left, expand_exponentials, limits)?,
            prepare(right, expand_exponentials, limits)?,
        )?,
        Node::Unary {
            op: UnOp::Dual,
            child,
        } => Formula::dual(prepare(child, expand_exponentials, limits)?),
        Node::Unary { child, .. } => {
            if expand_exponentials {
                expand_with(f, limits)?.to_formula()
            } else {
                prepare(child, expand_exponentials, limits)?
            }
        }
    })
}

fn node_cost(kind: NodeKind, k: usize) -> u64 {
    let minus_one = |n: usize| n.saturating_sub(1) as u64;
    match kind {
        NodeKind::Pair {
            split,
            two_sided: true,
        } => {
            let m = split as usize;
            minus_one(m) + minus_one(k - m) + u64::from(k >= 1)
        }
        _ => minus_one(k),
    }
}

/// Evaluates the graph from its root.
pub fn eval_graph(g: &GraphGame, memo: bool, limits: Limits) -> Result<(bool, OpCounter)> {
    let mut counter = OpCounter::default();
    let mut values: Vec<Option<bool>> = vec![None; g.store_len()];
    let mut meter = Meter::new(limits);
    struct Frame {
        id: NodeId,
        next: usize,
        acc: bool,
    }
    let frame = |id: NodeId| Frame {
        id,
        next: 0,
        acc: g.node(id).polarity == Polarity::Opponent,
    };
    let mut stack = vec![frame(g.root())];
    meter.tick(1)?;
    loop {
        let top = stack.last_mut().expect("root stays until it returns");
        let node = g.node(top.id);
        if top.next == node.edges.len() {
            let done = stack.pop().expect("nonempty");
            counter.binary_ops += node_cost(node.kind, node.edges.len());
            if memo {
                values[done.id as usize] = Some(done.acc);
                counter.memo_entries += 1;
            }
            match stack.last_mut() {
                None => return Ok((done.acc, counter)),
                Some(parent) => combine(g, parent.id, &mut parent.acc, done.acc),
            }
            continue;
        }
        let child = node.edges[top.next].1;
        top.next += 1;
        if let Some(v) = values[child as usize] {
            counter.memo_hits += 1;
            let (id, acc) = (top.id, &mut top.acc);
            combine(g, id, acc, v);
        } else {
            meter.tick(1)?;
            stack.push(frame(child));
        }
    }
}

fn combine(g: &GraphGame, parent: NodeId, acc: &mut bool, v: bool) {
    match g.node(parent).polarity {
        Polarity::Opponent => *acc &= v,
        Polarity::Player => *acc |= v,
    }
}

/// Decides whether `f` has a strategy by evaluating its graph game.
pub fn eval_dp(f: &Formula, opts: &DpOptions) -> Result<DpResult> {
    let prepared = prepare(f, opts.expand_exponentials, opts.limits)?;
    let g = build_graph_with(&prepared, opts.global_dedup, opts.limits)?;
    let (verdict, counter) = eval_graph(&g, opts.memo, opts.limits)?;
    Ok(DpResult {
        verdict,
        counter,
        graph_nodes: g.store_len() as u64,
    })
}

/// The cost lemma's bound for a multiplicative formula: literals add their
/// arity to their children's costs; a product costs the edges of each
/// operand times the active-polarity nodes of the other.
pub fn dp_cost_bound(f: &Formula) -> Result<BigUint> {
    match f.node() {
        Node::Lit { branches, .. } => {
            let mut total = BigUint::from(branches.len());
            for b in branches {
                total += dp_cost_bound(&b.child)?;
            }
            Ok(total)
        }
        Node::Binary { op, left, right } => {
            let l = graph_size(left)?;
            let r = graph_size(right)?;
            let active = |q: &SizeQuad| match op.family().base() {
                Polarity::Opponent => q.nodes_o.clone(),
                Polarity::Player => q.nodes_p.clone(),
            };
            Ok(l.edges() * active(&r) + r.edges() * active(&l))
        }
        Node::Unary { op, child } => match op {
            UnOp::Dual => dp_cost_bound(child),
            UnOp::Bang | UnOp::Quest => Err(Error::Unsupported {
                connective: op.name(),
            }),
        },
    }
}

/// Multiplier applied to [`dp_cost_bound`] when checking measured costs.
pub const COST_BOUND_SLACK: u64 = 4;

/// The bound `usize[P]·|P'|_p + usize[P']·|P|_p + |P|_p·|P'|_p` for the
/// par of two player trees, from their size reports.
pub fn par_ops_bound(p: &crate::game::SizeReport, q: &crate::game::SizeReport) -> u64 {
    p.uniform_size * q.nodes_p + q.uniform_size * p.nodes_p + p.nodes_p * q.nodes_p
}
