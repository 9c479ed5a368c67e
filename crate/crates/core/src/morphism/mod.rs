//! Proof terms: typechecking, identities, cut elimination, and the
//! translation between proofs and strategies in hom games.

pub mod normalize;
pub mod term;
pub mod translate;
pub mod typecheck;

pub use normalize::{normalize, normalize_with, rewrite, Order};
pub use term::{parse_term, Term};
pub use translate::{
    count_normal_proofs, enumerate_normal_proofs, hom_formula, proof_to_strategy, strategy_to_proof,
};
pub use typecheck::{identity_of, typecheck, typecheck_trees, typecheck_with, TypedTerm};

use crate::error::{Error, Result};
use crate::syntax::{parse_sequent, Sequent};

/// Parses `term :: sequent`.
pub fn parse_typed(text: &str) -> Result<(Term, Sequent)> {
    let (t, s) = text.split_once("::").ok_or_else(|| Error::Syntax {
        pos: text.len(),
        msg: "expected `term :: sequent`".into(),
    })?;
    let term = parse_term(t)?;
    let sequent = parse_sequent(s).map_err(|e| match e {
        Error::Syntax { pos, msg } => Error::Syntax {
            pos: pos + t.len() + 2,
            msg,
        },
        other => other,
    })?;
    Ok((term, sequent))
}
