//! Cut elimination by small-step rewriting.
//!
//! ```text
//! f ; id → f                       id ; g → g
//! f ; (b ↦ h_b)    → (b ↦ f ; h_b)
//! (b ↦ h_b) ; ←b_k·v → h_k ; v
//! f ; →a·v         → →a·(f ; v)
//! →a_k·v ; {a ↦ h_a} → v ; h_k
//! ←b·v ; g         → ←b·(v ; g)
//! {a ↦ h_a} ; g    → {a ↦ h_a ; g}
//! ```
//!
//! Identities left over in a normal form are eta-expanded from the types.

use crate::error::{Error, Result};
use crate::game::GameTree;

use super::term::Term;
use super::typecheck::{identity_of, TypedTerm};

/// Which redex a step contracts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Order {
    #[default]
    InnermostLeftmost,
    OutermostLeftmost,
}

/// Default bound on rewriting steps.
pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;

/// Contracts `f ; g` when a rule applies at the root.
fn contract(f: &Term, g: &Term) -> Option<Term> {
    let cut = |a: &Term, b: &Term| Term::compose(a.clone(), b.clone());
    Some(match (f, g) {
        (_, Term::Id) => f.clone(),
        (Term::Id, _) => g.clone(),
        (_, Term::Tuple(hs)) => {
            Term::Tuple(hs.iter().map(|(b, h)| (b.clone(), cut(f, h))).collect())
        }
        (Term::Tuple(hs), Term::Left(b, v)) => {
            let (_, h) = hs.iter().find(|(l, _)| l == b)?;
            cut(h, v)
        }
        (_, Term::Right(a, v)) => Term::right(a.clone(), cut(f, v)),
        (Term::Right(a, v), Term::Cotuple(hs)) => {
            let (_, h) = hs.iter().find(|(l, _)| l == a)?;
            cut(v, h)
        }
        (Term::Left(b, v), _) => Term::left(b.clone(), cut(v, g)),
        (Term::Cotuple(hs), _) => {
            Term::Cotuple(hs.iter().map(|(a, h)| (a.clone(), cut(h, g))).collect())
        }
        _ => return None,
    })
}

/// One rewriting step, or `None` when no redex exists.
pub fn step(t: &Term, order: Order) -> Option<Term> {
    let at_root = || match t {
        Term::Compose(f, g) => contract(f, g),
        _ => None,
    };
    if order == Order::OutermostLeftmost {
        if let Some(r) = at_root() {
            return Some(r);
        }
    }
    let inner = match t {
        Term::Tuple(es) | Term::Cotuple(es) => es.iter().enumerate().find_map(|(i, (_, s))| {
            step(s, order).map(|s2| {
                let mut es2 = es.clone();
                es2[i].1 = s2;
                match t {
                    Term::Tuple(_) => Term::Tuple(es2),
                    _ => Term::Cotuple(es2),
                }
            })
        }),
        Term::Left(b, s) => step(s, order).map(|s2| Term::left(b.clone(), s2)),
        Term::Right(a, s) => step(s, order).map(|s2| Term::right(a.clone(), s2)),
        Term::Compose(f, g) => match step(f, order) {
            Some(f2) => Some(Term::Compose(Box::new(f2), g.clone())),
            None => step(g, order).map(|g2| Term::Compose(f.clone(), Box::new(g2))),
        },
        Term::Id => None,
    };
    if inner.is_some() || order == Order::OutermostLeftmost {
        return inner;
    }
    at_root()
}

/// Rewrites until no redex remains. Returns the normal form and the number
/// of steps taken.
pub fn rewrite(t: &Term, order: Order, budget: u64) -> Result<(Term, u64)> {
    let mut cur = t.clone();
    let mut steps = 0;
    while let Some(next) = step(&cur, order) {
        steps += 1;
        if steps > budget {
            return Err(Error::StepBudget(budget));
        }
        cur = next;
    }
    if !cur.is_normal() {
        return Err(Error::Stuck(cur.to_string()));
    }
    Ok((cur, steps))
}

/// Replaces identities in a cut-free term by their expansions.
pub fn eta_expand(t: &Term, lhs: &GameTree, rhs: &GameTree) -> Result<Term> {
    let missing = |l: &str| Error::ShapeMismatch {
        path: l.to_string(),
        msg: format!("no move `{l}` for this term"),
    };
    Ok(match t {
        Term::Id => identity_of(lhs),
        Term::Tuple(es) => {
            let mut out = Vec::with_capacity(es.len());
            for (b, h) in es {
                let zb = rhs.child(b).ok_or_else(|| missing(b))?;
                out.push((b.clone(), eta_expand(h, lhs, zb)?));
            }
            Term::Tuple(out)
        }
        Term::Cotuple(es) => {
            let mut out = Vec::with_capacity(es.len());
            for (a, h) in es {
                let xa = lhs.child(a).ok_or_else(|| missing(a))?;
                out.push((a.clone(), eta_expand(h, xa, rhs)?));
            }
            Term::Cotuple(out)
        }
        Term::Left(b, v) => {
            let xb = lhs.child(b).ok_or_else(|| missing(b))?;
            Term::left(b.clone(), eta_expand(v, xb, rhs)?)
        }
        Term::Right(a, v) => {
            let za = rhs.child(a).ok_or_else(|| missing(a))?;
            Term::right(a.clone(), eta_expand(v, lhs, za)?)
        }
        Term::Compose(..) => return Err(Error::NotNormal(t.to_string())),
    })
}

/// The cut-free, identity-free normal form of a typed term.
pub fn normalize_with(t: &TypedTerm, order: Order, budget: u64) -> Result<Term> {
    let (nf, _) = rewrite(&t.term, order, budget)?;
    eta_expand(&nf, &t.lhs, &t.rhs)
}

pub fn normalize(t: &TypedTerm) -> Result<Term> {
    normalize_with(t, Order::default(), DEFAULT_STEP_BUDGET)
}
