//! Strategy semantics on expanded trees: opponent nodes are meets, player
//! nodes are joins.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::game::GameTree;
use crate::morphism::Term;
use crate::polarity::Polarity;

/// Evaluation order for the meet/join recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Visit every node.
    #[default]
    Full,
    /// Stop a meet at the first false child and a join at the first true one.
    ShortCircuit,
}

/// Verdict and the number of nodes visited to reach it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EvalCost {
    pub verdict: bool,
    pub visits: u64,
}

/// Evaluates with an explicit stack. `meet_at` is the polarity whose nodes
/// are meets (an empty meet is true, an empty join false).
fn and_or(g: &GameTree, meet_at: Polarity, mode: Mode) -> EvalCost {
    struct Frame<'a> {
        node: &'a GameTree,
        next: usize,
        acc: bool,
    }
    fn start(node: &GameTree, meet_at: Polarity) -> Frame<'_> {
        Frame {
            node,
            next: 0,
            acc: node.polarity() == meet_at,
        }
    }
    let mut visits = 1;
    let mut stack = vec![start(g, meet_at)];
    loop {
        let top = stack
            .last_mut()
            .expect("stack holds the root until it returns");
        let is_meet = top.node.polarity() == meet_at;
        let decided = mode == Mode::ShortCircuit && top.acc != is_meet;
        if decided || top.next == top.node.branches().len() {
            let done = stack.pop().expect("nonempty");
            match stack.last_mut() {
                None => {
                    return EvalCost {
                        verdict: done.acc,
                        visits,
                    }
                }
                Some(parent) => {
                    if parent.node.polarity() == meet_at {
                        parent.acc &= done.acc;
                    } else {
                        parent.acc |= done.acc;
                    }
                }
            }
        } else {
            let child = &top.node.branches()[top.next].1;
            top.next += 1;
            visits += 1;
            stack.push(start(child, meet_at));
        }
    }
}

/// Whether the system has a strategy (a map from `1` into `g`).
pub fn has_strategy(g: &GameTree) -> bool {
    and_or(g, Polarity::Opponent, Mode::ShortCircuit).verdict
}

/// Verdict and node visits under the given mode.
pub fn eval_cost(g: &GameTree, mode: Mode) -> EvalCost {
    and_or(g, Polarity::Opponent, mode)
}

/// Whether the environment has a counter-strategy (a map from `g` into `0`),
/// computed by the dual rules: opponent nodes join, player nodes meet.
pub fn has_counter_strategy(g: &GameTree) -> bool {
    and_or(g, Polarity::Player, Mode::ShortCircuit).verdict
}

/// Number of strategies: meets become products and joins sums.
pub fn count_strategies(g: &GameTree) -> BigUint {
    let mut stack: Vec<(&GameTree, usize, BigUint)> = vec![(g, 0, unit(g))];
    loop {
        let top = stack.last_mut().expect("nonempty");
        if top.1 == top.0.branches().len() {
            let (_, _, value) = stack.pop().expect("nonempty");
            match stack.last_mut() {
                None => return value,
                Some((parent, _, acc)) => match parent.polarity() {
                    Polarity::Opponent => *acc *= value,
                    Polarity::Player => *acc += value,
                },
            }
        } else {
            let child = &top.0.branches()[top.1].1;
            top.1 += 1;
            stack.push((child, 0, unit(child)));
        }
    }
}

fn unit(g: &GameTree) -> BigUint {
    match g.polarity() {
        Polarity::Opponent => BigUint::one(),
        Polarity::Player => BigUint::zero(),
    }
}

/// A cut-free strategy term for `g`, taking the leftmost winning move at
/// every player node. Opponent-rooted games yield a tuple (typed against
/// `() |-o g`), player-rooted games a right move (typed against `() |- g`).
pub fn extract_strategy(g: &GameTree) -> Option<Term> {
    match g.polarity() {
        Polarity::Opponent => {
            let mut entries = Vec::with_capacity(g.branches().len());
            for (b, p) in g.branches() {
                entries.push((b.clone(), extract_strategy(p)?));
            }
            Some(Term::Tuple(entries))
        }
        Polarity::Player => g
            .branches()
            .iter()
            .find_map(|(a, o)| extract_strategy(o).map(|t| Term::Right(a.clone(), Box::new(t)))),
    }
}
