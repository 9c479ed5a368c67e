//! Linear-time provability: one bottom-up pass over the formula.
//!
//! `S(f)` is "f has a strategy" (a map from `1` into `f`, mixed when `f` is
//! a player formula):
//!
//! ```text
//! S((b_i : P_i)) = ⋀ S(P_i)        S({a_j : O_j}) = ⋁ S(O_j)
//! S(ox(O, O'))   = S(O) ∧ S(O')    S(par(P, P'))   = S(P) ∨ S(P')
//! S(oxr(O, P))   = S(O) ∧ S(P)     S(otr(P, O))    = S(P) ∨ S(O)
//! S(oxl(P, O))   = S(P) ∧ S(O)     S(otl(O, P))    = S(O) ∨ S(P)
//! S(dual(G))     = ¬S(G)           S(!O) = S(O),   S(?P) = S(P)
//! ```
//!
//! The counter-strategy value `C` uses the dual rules.

use crate::connectives::expand_with;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::naive::has_strategy;
use crate::polarity::Polarity;
use crate::syntax::{BinOp, Formula, Node, Sequent, SequentKind, UnOp};

/// Which value the pass computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Reading {
    Strategy,
    CounterStrategy,
}

/// Verdict and the number of AST nodes visited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct LinearResult {
    pub verdict: bool,
    pub visits: u64,
}

fn children(f: &Formula) -> Vec<&Formula> {
    match f.node() {
        Node::Lit { branches, .. } => branches.iter().map(|b| &b.child).collect(),
        Node::Binary { left, right, .. } => vec![left, right],
        Node::Unary { child, .. } => vec![child],
    }
}

/// Combines child values at `f` under the given reading.
fn rule(f: &Formula, vals: &[bool], reading: Reading) -> bool {
    let strategy = reading == Reading::Strategy;
    match f.node() {
        Node::Lit { polarity, .. } => {
            // Opponent literals are meets for strategies, joins for counters.
            if (*polarity == Polarity::Opponent) == strategy {
                vals.iter().all(|&v| v)
            } else {
                vals.iter().any(|&v| v)
            }
        }
        Node::Binary { op, .. } => {
            let conj = matches!(op, BinOp::Tensor | BinOp::OxR | BinOp::OxL);
            if conj == strategy {
                vals[0] && vals[1]
            } else {
                vals[0] || vals[1]
            }
        }
        Node::Unary { op, .. } => match op {
            UnOp::Dual => !vals[0],
            UnOp::Bang | UnOp::Quest => vals[0],
        },
    }
}

fn run(f: &Formula, reading: Reading) -> LinearResult {
    struct Frame<'a> {
        node: &'a Formula,
        kids: Vec<&'a Formula>,
        vals: Vec<bool>,
    }
    let mut visits = 1u64;
    let mut stack = vec![Frame {
        node: f,
        kids: children(f),
        vals: Vec::new(),
    }];
    loop {
        let top = stack.last_mut().expect("root stays until it returns");
        if top.vals.len() == top.kids.len() {
            let done = stack.pop().expect("nonempty");
            let v = rule(done.node, &done.vals, reading);
            match stack.last_mut() {
                None => return LinearResult { verdict: v, visits },
                Some(parent) => parent.vals.push(v),
            }
        } else {
            let next = top.kids[top.vals.len()];
            visits += 1;
            stack.push(Frame {
                node: next,
                kids: children(next),
                vals: Vec::new(),
            });
        }
    }
}

/// `S(f)`, with the visit count.
pub fn linear_eval(f: &Formula) -> LinearResult {
    run(f, Reading::Strategy)
}

/// Whether `f` has a strategy.
pub fn linear_value(f: &Formula) -> bool {
    linear_eval(f).verdict
}

/// Whether `f` has a counter-strategy, by the dual rules.
pub fn linear_counter_value(f: &Formula) -> bool {
    run(f, Reading::CounterStrategy).verdict
}

/// Provability of a sequent: `¬S(lhs) ∨ S(rhs)` for every kind.
pub fn provable(s: &Sequent) -> bool {
    !linear_value(s.lhs()) || linear_value(s.rhs())
}

/// Provability with the total number of AST visits over both sides.
pub fn provable_eval(s: &Sequent) -> LinearResult {
    let l = linear_eval(s.lhs());
    let r = linear_eval(s.rhs());
    LinearResult {
        verdict: !l.verdict || r.verdict,
        visits: l.visits + r.visits,
    }
}

/// Decides `O |-o O'` three ways (the sequent rule, the value formula,
/// and the naive engine on the expanded hom game) and returns the common
/// verdict.
pub fn hom_reduction_check(o: &Formula, o2: &Formula, limits: Limits) -> Result<bool> {
    let s = Sequent::new(SequentKind::Opponent, o.clone(), o2.clone())?;
    let by_sequent = provable(&s);
    let by_values = !linear_value(o) || linear_value(o2);
    let hom = Formula::otr(Formula::dual(o.clone()), o2.clone())?;
    let by_expansion = has_strategy(&expand_with(&hom, limits)?);
    if by_sequent != by_values || by_values != by_expansion {
        return Err(Error::Disagreement(format!(
            "sequent {by_sequent}, values {by_values}, expansion {by_expansion} for {s}"
        )));
    }
    Ok(by_sequent)
}
