//! Proofs of sequents as strategies in hom games.
//!
//! A sequent is read as a single opponent game whose strategies are exactly
//! its cut-free, identity-free proofs:
//!
//! ```text
//! O |-o O'   ↦  otr(dual O, O')
//! O |-  P    ↦  otr(dual O, (apres : P))
//! P |-p P'   ↦  otr(dual dual P', dual P)      via  dual P' |-o dual P
//! ```
//!
//! Moves of the left game carry the prefix `L.` and moves of the right game
//! `R.`, as in every product expansion.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::game::GameTree;
use crate::limits::Limits;
use crate::polarity::Polarity;
use crate::syntax::{Formula, Label, Sequent, SequentKind};

use super::normalize::eta_expand;
use super::term::Term;
use super::typecheck::{typecheck_with, TypedTerm};

/// The opponent move that opens the hom game of a mixed sequent.
pub const APRES: &str = "apres";

/// The hom game of a sequent.
pub fn hom_formula(s: &Sequent) -> Result<Formula> {
    let (l, r) = (s.lhs().clone(), s.rhs().clone());
    match s.kind() {
        SequentKind::Opponent => Formula::otr(Formula::dual(l), r),
        SequentKind::Mixed => Formula::otr(Formula::dual(l), Formula::opp([(APRES, r)])?),
        SequentKind::Player => Formula::otr(Formula::dual(Formula::dual(r)), Formula::dual(l)),
    }
}

/// Swaps tuples with cotuples and left moves with right moves, turning a
/// proof of `P |-p P'` into one of `dual P' |-o dual P` and back.
pub fn flip(t: &Term) -> Term {
    let entries = |es: &[(Label, Term)]| es.iter().map(|(l, h)| (l.clone(), flip(h))).collect();
    match t {
        Term::Tuple(es) => Term::Cotuple(entries(es)),
        Term::Cotuple(es) => Term::Tuple(entries(es)),
        Term::Left(b, v) => Term::Right(b.clone(), Box::new(flip(v))),
        Term::Right(a, v) => Term::Left(a.clone(), Box::new(flip(v))),
        Term::Id => Term::Id,
        Term::Compose(f, g) => Term::compose(flip(g), flip(f)),
    }
}

fn tag(side: &str, l: &Label) -> Label {
    format!("{side}.{l}").into()
}

fn mismatch(path: &str, msg: impl Into<String>) -> Error {
    Error::ShapeMismatch {
        path: if path.is_empty() {
            "top".into()
        } else {
            path.into()
        },
        msg: msg.into(),
    }
}

fn opp_to(t: &Term) -> Result<Term> {
    match t {
        Term::Tuple(es) => Ok(Term::Tuple(
            es.iter()
                .map(|(b, h)| Ok((tag("R", b), mixed_to(h)?)))
                .collect::<Result<_>>()?,
        )),
        other => Err(Error::NotNormal(other.to_string())),
    }
}

fn mixed_to(t: &Term) -> Result<Term> {
    match t {
        Term::Left(b, f) => Ok(Term::Right(tag("L", b), Box::new(player_to(f)?))),
        Term::Right(a, g) => Ok(Term::Right(tag("R", a), Box::new(opp_to(g)?))),
        other => Err(Error::NotNormal(other.to_string())),
    }
}

fn player_to(t: &Term) -> Result<Term> {
    match t {
        Term::Cotuple(es) => Ok(Term::Tuple(
            es.iter()
                .map(|(c, h)| Ok((tag("L", c), mixed_to(h)?)))
                .collect::<Result<_>>()?,
        )),
        other => Err(Error::NotNormal(other.to_string())),
    }
}

/// The strategy in the hom game that a typed proof denotes. Identities are
/// expanded first; compositions are rejected.
pub fn proof_to_strategy(p: &TypedTerm) -> Result<Term> {
    if !p.term.is_normal() {
        return Err(Error::NotNormal(p.term.to_string()));
    }
    let t = eta_expand(&p.term, &p.lhs, &p.rhs)?;
    match p.kind() {
        SequentKind::Opponent => opp_to(&t),
        SequentKind::Mixed => Ok(Term::Tuple(vec![(tag("R", &APRES.into()), mixed_to(&t)?)])),
        SequentKind::Player => opp_to(&flip(&t)),
    }
}

fn strip<'a>(l: &'a Label, side: &str, path: &str) -> Result<&'a str> {
    l.strip_prefix(side)
        .and_then(|r| r.strip_prefix('.'))
        .ok_or_else(|| mismatch(path, format!("move `{l}` is not a `{side}.` move")))
}

fn opp_from(t: &Term, path: &str) -> Result<Term> {
    match t {
        Term::Tuple(es) => {
            let mut out = Vec::with_capacity(es.len());
            for (l, h) in es {
                let b = strip(l, "R", path)?;
                out.push((Label::from(b), mixed_from(h, &format!("{path}/{l}"))?));
            }
            Ok(Term::Tuple(out))
        }
        other => Err(mismatch(path, format!("expected a tuple, found `{other}`"))),
    }
}

fn mixed_from(t: &Term, path: &str) -> Result<Term> {
    match t {
        Term::Right(l, v) => {
            let sub = format!("{path}/{l}");
            if let Ok(b) = strip(l, "L", path) {
                Ok(Term::left(b, player_from(v, &sub)?))
            } else {
                let a = strip(l, "R", path)?;
                Ok(Term::right(a, opp_from(v, &sub)?))
            }
        }
        other => Err(mismatch(
            path,
            format!("expected a player move, found `{other}`"),
        )),
    }
}

fn player_from(t: &Term, path: &str) -> Result<Term> {
    match t {
        Term::Tuple(es) => {
            let mut out = Vec::with_capacity(es.len());
            for (l, h) in es {
                let c = strip(l, "L", path)?;
                out.push((Label::from(c), mixed_from(h, &format!("{path}/{l}"))?));
            }
            Ok(Term::Cotuple(out))
        }
        other => Err(mismatch(path, format!("expected a tuple, found `{other}`"))),
    }
}

/// The proof of `s` denoted by a strategy in its hom game; the result is
/// typechecked against `s`.
pub fn strategy_to_proof(strategy: &Term, s: &Sequent, limits: Limits) -> Result<TypedTerm> {
    let t = match s.kind() {
        SequentKind::Opponent => opp_from(strategy, "")?,
        SequentKind::Mixed => match strategy {
            Term::Tuple(es) if es.len() == 1 && strip(&es[0].0, "R", "")? == APRES => {
                mixed_from(&es[0].1, &es[0].0)?
            }
            other => {
                return Err(mismatch(
                    "",
                    format!("expected `( R.{APRES} -> ... )`, found `{other}`"),
                ))
            }
        },
        SequentKind::Player => flip(&opp_from(strategy, "")?),
    };
    typecheck_with(&t, s, limits)
}

fn count_opp(x: &GameTree, y: &GameTree) -> BigUint {
    let mut n = BigUint::one();
    for (_, yb) in y.branches() {
        n *= count_mixed(x, yb);
        if n.is_zero() {
            break;
        }
    }
    n
}

fn count_mixed(x: &GameTree, z: &GameTree) -> BigUint {
    let lefts = x.branches().iter().map(|(_, xb)| count_player(xb, z));
    let rights = z.branches().iter().map(|(_, za)| count_opp(x, za));
    lefts.chain(rights).sum()
}

fn count_player(x: &GameTree, z: &GameTree) -> BigUint {
    let mut n = BigUint::one();
    for (_, xa) in x.branches() {
        n *= count_mixed(xa, z);
        if n.is_zero() {
            break;
        }
    }
    n
}

/// Number of cut-free, identity-free proofs of `lhs ⊨ rhs`.
pub fn count_normal_proofs(lhs: &GameTree, rhs: &GameTree) -> Result<BigUint> {
    match (lhs.polarity(), rhs.polarity()) {
        (Polarity::Opponent, Polarity::Opponent) => Ok(count_opp(lhs, rhs)),
        (Polarity::Opponent, Polarity::Player) => Ok(count_mixed(lhs, rhs)),
        (Polarity::Player, Polarity::Player) => Ok(count_player(lhs, rhs)),
        (Polarity::Player, Polarity::Opponent) => Err(Error::NoMorphismDirection),
    }
}

/// All combinations of one choice per slot, at most `cap` of them.
fn product(slots: Vec<Vec<Term>>, cap: usize) -> Vec<Vec<Term>> {
    let mut acc: Vec<Vec<Term>> = vec![Vec::new()];
    for options in slots {
        let mut next = Vec::new();
        'outer: for prefix in &acc {
            for o in &options {
                if next.len() >= cap {
                    break 'outer;
                }
                let mut p = prefix.clone();
                p.push(o.clone());
                next.push(p);
            }
        }
        acc = next;
        if acc.is_empty() {
            break;
        }
    }
    acc
}

fn enum_opp(x: &GameTree, y: &GameTree, cap: usize) -> Vec<Term> {
    let labels: Vec<Label> = y.branches().iter().map(|(l, _)| l.clone()).collect();
    let slots = y
        .branches()
        .iter()
        .map(|(_, yb)| enum_mixed(x, yb, cap))
        .collect();
    product(slots, cap)
        .into_iter()
        .map(|hs| Term::Tuple(labels.iter().cloned().zip(hs).collect()))
        .collect()
}

fn enum_mixed(x: &GameTree, z: &GameTree, cap: usize) -> Vec<Term> {
    let mut out = Vec::new();
    for (b, xb) in x.branches() {
        for p in enum_player(xb, z, cap - out.len()) {
            out.push(Term::left(b.clone(), p));
        }
        if out.len() >= cap {
            return out;
        }
    }
    for (a, za) in z.branches() {
        for p in enum_opp(x, za, cap - out.len()) {
            out.push(Term::right(a.clone(), p));
        }
        if out.len() >= cap {
            return out;
        }
    }
    out
}

fn enum_player(x: &GameTree, z: &GameTree, cap: usize) -> Vec<Term> {
    let labels: Vec<Label> = x.branches().iter().map(|(l, _)| l.clone()).collect();
    let slots = x
        .branches()
        .iter()
        .map(|(_, xa)| enum_mixed(xa, z, cap))
        .collect();
    product(slots, cap)
        .into_iter()
        .map(|hs| Term::Cotuple(labels.iter().cloned().zip(hs).collect()))
        .collect()
}

/// Up to `cap` distinct cut-free, identity-free proofs of `lhs ⊨ rhs`.
pub fn enumerate_normal_proofs(lhs: &GameTree, rhs: &GameTree, cap: usize) -> Result<Vec<Term>> {
    match (lhs.polarity(), rhs.polarity()) {
        (Polarity::Opponent, Polarity::Opponent) => Ok(enum_opp(lhs, rhs, cap)),
        (Polarity::Opponent, Polarity::Player) => Ok(enum_mixed(lhs, rhs, cap)),
        (Polarity::Player, Polarity::Player) => Ok(enum_player(lhs, rhs, cap)),
        (Polarity::Player, Polarity::Opponent) => Err(Error::NoMorphismDirection),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectives::expand;
    use crate::game::random_game;
    use crate::morphism::typecheck::typecheck_trees;
    use crate::naive::count_strategies;
    use crate::syntax::parse_sequent;
    use proptest::prelude::*;
    use std::collections::HashSet;

    const EXAM: &str = "(a:{}, b:{}) |-o (a:{c:(),d:()}, b:{e:(),f:()})";

    fn sides(s: &Sequent) -> (GameTree, GameTree) {
        (
            expand(s.lhs(), 100_000).unwrap(),
            expand(s.rhs(), 100_000).unwrap(),
        )
    }

    #[test]
    fn exam_maps_are_sixteen() {
        let s = parse_sequent(EXAM).unwrap();
        let (l, r) = sides(&s);
        assert_eq!(count_normal_proofs(&l, &r).unwrap(), BigUint::from(16u8));
        let proofs = enumerate_normal_proofs(&l, &r, 100).unwrap();
        assert_eq!(proofs.len(), 16);
        let listed = [
            "( a -> >c . ( ), b -> >e . ( ) )",
            "( a -> >d . ( ), b -> >f . ( ) )",
            "( a -> <a . { }, b -> <b . { } )",
            "( a -> >c . ( ), b -> <a . { } )",
        ];
        let shown: HashSet<String> = proofs.iter().map(Term::to_string).collect();
        assert!(listed.iter().all(|t| shown.contains(*t)));
        let hom = expand(&hom_formula(&s).unwrap(), 100_000).unwrap();
        assert_eq!(count_strategies(&hom), BigUint::from(16u8));
    }

    #[test]
    fn translation_of_one_map() {
        let s = parse_sequent(EXAM).unwrap();
        let t = typecheck_with(
            &crate::morphism::parse_term("( a -> >c . ( ), b -> <a . { } )").unwrap(),
            &s,
            Limits::default(),
        )
        .unwrap();
        let st = proof_to_strategy(&t).unwrap();
        assert_eq!(st.to_string(), "( R.a -> >R.c . ( ), R.b -> >L.a . ( ) )");
        let hom = expand(&hom_formula(&s).unwrap(), 100_000).unwrap();
        typecheck_trees(&st, &GameTree::one(), &hom).unwrap();
        assert_eq!(
            strategy_to_proof(&st, &s, Limits::default()).unwrap().term,
            t.term
        );
    }

    fn round_trip(s: &Sequent) -> std::result::Result<(), TestCaseError> {
        let (l, r) = sides(s);
        let hom = expand(&hom_formula(s).unwrap(), 1_000_000).unwrap();
        let n = count_normal_proofs(&l, &r).unwrap();
        prop_assert_eq!(&n, &count_strategies(&hom));
        let proofs = enumerate_normal_proofs(&l, &r, 200).unwrap();
        let mut seen = HashSet::new();
        for p in &proofs {
            let typed = typecheck_with(p, s, Limits::default()).unwrap();
            let st = proof_to_strategy(&typed).unwrap();
            prop_assert!(typecheck_trees(&st, &GameTree::one(), &hom).is_ok());
            prop_assert!(seen.insert(st.to_string()));
            prop_assert_eq!(
                &strategy_to_proof(&st, s, Limits::default()).unwrap().term,
                p
            );
        }
        Ok(())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]

        #[test]
        fn proofs_and_strategies_correspond(s1 in any::<u64>(), s2 in any::<u64>(), kind in 0u8..3) {
            let (pl, pr) = match kind {
                0 => (Polarity::Opponent, Polarity::Opponent),
                1 => (Polarity::Opponent, Polarity::Player),
                _ => (Polarity::Player, Polarity::Player),
            };
            let l = random_game(3, 2, pl, s1).to_formula();
            let r = random_game(3, 2, pr, s2).to_formula();
            let k = SequentKind::for_polarities(pl, pr).unwrap();
            round_trip(&Sequent::new(k, l, r).unwrap())?;
        }
    }
}
