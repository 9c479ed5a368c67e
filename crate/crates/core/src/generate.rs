//! Seeded random instances for property tests and benchmarks. All
//! generators draw from ChaCha8 streams, so a seed fixes the output.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::{move_label, random_game_with, GameTree};
use crate::limits::Limits;
use crate::morphism::{typecheck_with, Term, TypedTerm};
use crate::naive::has_strategy;
use crate::polarity::Polarity;
use crate::syntax::{BinOp, Branch, Formula, Label, Sequent, SequentKind, UnOp};

/// Shape parameters for [`random_formula`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormulaParams {
    /// Maximum connective nesting above the literal leaves.
    pub max_depth: usize,
    /// Maximum branching of generated literals.
    pub max_branch: usize,
    /// Depth of the literal games at the leaves.
    pub leaf_depth: usize,
    pub exponentials: bool,
    pub duals: bool,
    /// Polarity of the whole formula; random when `None`.
    pub polarity: Option<Polarity>,
}

impl FormulaParams {
    /// Small formulas over all multiplicative connectives and duals.
    pub fn multiplicative() -> FormulaParams {
        FormulaParams {
            max_depth: 3,
            max_branch: 2,
            leaf_depth: 2,
            exponentials: false,
            duals: true,
            polarity: None,
        }
    }

    /// As [`FormulaParams::multiplicative`], with `bang` and `quest`.
    pub fn mixed() -> FormulaParams {
        FormulaParams {
            exponentials: true,
            ..FormulaParams::multiplicative()
        }
    }

    pub fn with_polarity(self, polarity: Polarity) -> FormulaParams {
        FormulaParams {
            polarity: Some(polarity),
            ..self
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_formula(params: &FormulaParams, seed: u64) -> Formula {
    let mut r = rng(seed);
    let pol = params.polarity.unwrap_or_else(|| {
        if r.gen() {
            Polarity::Opponent
        } else {
            Polarity::Player
        }
    });
    random_formula_with(&mut r, params, pol, params.max_depth)
}

#[derive(Clone, Copy)]
enum Shape {
    Lit,
    Bin(BinOp),
    Un(UnOp),
}

pub fn random_formula_with<R: Rng + ?Sized>(
    rng: &mut R,
    params: &FormulaParams,
    polarity: Polarity,
    depth: usize,
) -> Formula {
    if depth == 0 {
        return random_game_with(rng, params.leaf_depth, params.max_branch, polarity).to_formula();
    }
    let mut shapes = vec![Shape::Lit];
    shapes.extend(
        BinOp::ALL
            .iter()
            .filter(|op| op.result_polarity() == polarity)
            .map(|&op| Shape::Bin(op)),
    );
    if params.duals {
        shapes.push(Shape::Un(UnOp::Dual));
    }
    if params.exponentials {
        shapes.push(Shape::Un(match polarity {
            Polarity::Opponent => UnOp::Bang,
            Polarity::Player => UnOp::Quest,
        }));
    }
    let shape = *shapes.choose(rng).expect("literals are always available");
    match shape {
        Shape::Lit => {
            let k = rng.gen_range(0..=params.max_branch);
            let branches = (1..=k)
                .map(|i| {
                    let child = random_formula_with(rng, params, polarity.flip(), depth - 1);
                    Branch::new(move_label(polarity, i), child)
                })
                .collect();
            Formula::lit(polarity, branches).expect("generated literal is well-typed")
        }
        Shape::Bin(op) => {
            let (pl, pr) = op.operand_polarities();
            let l = random_formula_with(rng, params, pl, depth - 1);
            let r = random_formula_with(rng, params, pr, depth - 1);
            Formula::binary(op, l, r).expect("operands generated at the required polarities")
        }
        Shape::Un(op) => {
            let child_pol = match op {
                UnOp::Dual => polarity.flip(),
                UnOp::Bang | UnOp::Quest => polarity,
            };
            let c = random_formula_with(rng, params, child_pol, depth - 1);
            Formula::unary(op, c).expect("operand generated at the required polarity")
        }
    }
}

/// `L_k`: a unary chain of `k` moves starting with the player, ending in
/// `{}` (even `k`) or `()` (odd `k`).
pub fn chain_game(k: usize) -> GameTree {
    let mut g = GameTree::leaf(if k.is_multiple_of(2) {
        Polarity::Player
    } else {
        Polarity::Opponent
    });
    for _ in 0..k {
        let pol = g.polarity().flip();
        g = GameTree::from_parts(pol, vec![("_1".into(), g)]);
    }
    g
}

/// `A_k`: binary player choices alternating with unary opponent moves,
/// `A_{k+1} = {2 : B_k}`, `B_{k+1} = (1 : A_k)`.
pub fn branching_game(k: usize) -> GameTree {
    let mut g = GameTree::leaf(if k.is_multiple_of(2) {
        Polarity::Player
    } else {
        Polarity::Opponent
    });
    for _ in 0..k {
        g = match g.polarity() {
            Polarity::Opponent => GameTree::from_parts(
                Polarity::Player,
                vec![("_1".into(), g.clone()), ("_2".into(), g)],
            ),
            Polarity::Player => GameTree::from_parts(Polarity::Opponent, vec![("_1".into(), g)]),
        };
    }
    g
}

/// Shape parameters for random proof terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermParams {
    /// Depth of the games on either side of the sequent.
    pub game_depth: usize,
    pub max_branch: usize,
    /// Maximum nesting of compositions along any path of the term.
    pub cuts: u32,
    /// Probability of a composition where one may be placed.
    pub cut_rate: f64,
    /// Probability of an identity where the endpoints agree.
    pub id_rate: f64,
}

impl Default for TermParams {
    fn default() -> TermParams {
        TermParams {
            game_depth: 3,
            max_branch: 2,
            cuts: 2,
            cut_rate: 0.4,
            id_rate: 0.2,
        }
    }
}

/// Whether some proof of `x ⊨ y` exists.
fn entails(x: &GameTree, y: &GameTree) -> bool {
    !has_strategy(x) || has_strategy(y)
}

/// A random proof of `x ⊨ z`, with compositions and identities mixed in,
/// or `None` when the sequent has no proof.
pub fn random_term_with<R: Rng + ?Sized>(
    rng: &mut R,
    params: &TermParams,
    x: &GameTree,
    z: &GameTree,
    cuts: u32,
) -> Option<Term> {
    if !entails(x, z) || (x.polarity() == Polarity::Player && z.polarity() == Polarity::Opponent) {
        return None;
    }
    if cuts > 0 && rng.gen_bool(params.cut_rate) {
        let pol = if x.polarity() == z.polarity() {
            x.polarity()
        } else if rng.gen_bool(0.5) {
            Polarity::Opponent
        } else {
            Polarity::Player
        };
        for attempt in 0..4 {
            let y = match attempt {
                0 if x.polarity() == pol => x.clone(),
                1 if z.polarity() == pol => z.clone(),
                _ => random_game_with(rng, params.game_depth.min(2), params.max_branch, pol),
            };
            if entails(x, &y) && entails(&y, z) {
                let f = random_term_with(rng, params, x, &y, cuts - 1)?;
                let g = random_term_with(rng, params, &y, z, cuts - 1)?;
                return Some(Term::compose(f, g));
            }
        }
    }
    if x == z && rng.gen_bool(params.id_rate) {
        return Some(Term::Id);
    }
    match (x.polarity(), z.polarity()) {
        (Polarity::Opponent, Polarity::Opponent) => {
            let mut es = Vec::with_capacity(z.branches().len());
            for (b, zb) in z.branches() {
                es.push((b.clone(), random_term_with(rng, params, x, zb, cuts)?));
            }
            Some(Term::Tuple(es))
        }
        (Polarity::Player, Polarity::Player) => {
            let mut es = Vec::with_capacity(x.branches().len());
            for (a, xa) in x.branches() {
                es.push((a.clone(), random_term_with(rng, params, xa, z, cuts)?));
            }
            Some(Term::Cotuple(es))
        }
        _ => {
            let mut options: Vec<(bool, &Label, &GameTree)> = Vec::new();
            for (b, xb) in x.branches() {
                if entails(xb, z) {
                    options.push((true, b, xb));
                }
            }
            for (a, za) in z.branches() {
                if entails(x, za) {
                    options.push((false, a, za));
                }
            }
            let &(left, l, next) = options.choose(rng)?;
            Some(if left {
                Term::left(l.clone(), random_term_with(rng, params, next, z, cuts)?)
            } else {
                Term::right(l.clone(), random_term_with(rng, params, x, next, cuts)?)
            })
        }
    }
}

/// A random provable sequent between random games of the given polarities.
fn provable_pair<R: Rng + ?Sized>(
    rng: &mut R,
    params: &TermParams,
    pl: Polarity,
    pr: Polarity,
) -> (GameTree, GameTree) {
    loop {
        let x = random_game_with(rng, params.game_depth, params.max_branch, pl);
        let z = random_game_with(rng, params.game_depth, params.max_branch, pr);
        if entails(&x, &z) {
            return (x, z);
        }
    }
}

fn typed(t: Term, x: &GameTree, z: &GameTree) -> TypedTerm {
    let kind = SequentKind::for_polarities(x.polarity(), z.polarity()).expect("generated forward");
    let s = Sequent::new(kind, x.to_formula(), z.to_formula()).expect("polarities match kind");
    typecheck_with(&t, &s, Limits::default()).expect("generated terms are well typed")
}

/// A random typed term over a random provable sequent of random kind.
pub fn random_typed_term(params: &TermParams, seed: u64) -> TypedTerm {
    let mut rng = rng(seed);
    let (pl, pr) = match rng.gen_range(0..3) {
        0 => (Polarity::Opponent, Polarity::Opponent),
        1 => (Polarity::Opponent, Polarity::Player),
        _ => (Polarity::Player, Polarity::Player),
    };
    loop {
        let (x, z) = provable_pair(&mut rng, params, pl, pr);
        if let Some(t) = random_term_with(&mut rng, params, &x, &z, params.cuts) {
            return typed(t, &x, &z);
        }
    }
}

/// Three composable random typed terms `W ⊨ X`, `X ⊨ Y`, `Y ⊨ Z`.
pub fn random_typed_triple(params: &TermParams, seed: u64) -> [TypedTerm; 3] {
    let mut rng = rng(seed);
    let opponents = rng.gen_range(0..=4);
    let pols: Vec<Polarity> = (0..4)
        .map(|i| {
            if i < opponents {
                Polarity::Opponent
            } else {
                Polarity::Player
            }
        })
        .collect();
    loop {
        let games: Vec<GameTree> = pols
            .iter()
            .map(|&p| random_game_with(&mut rng, params.game_depth, params.max_branch, p))
            .collect();
        let terms: Option<Vec<Term>> = (0..3)
            .map(|i| random_term_with(&mut rng, params, &games[i], &games[i + 1], params.cuts))
            .collect();
        if let Some(ts) = terms {
            let mut it = ts
                .into_iter()
                .enumerate()
                .map(|(i, t)| typed(t, &games[i], &games[i + 1]));
            let f = it.next().expect("three terms");
            let g = it.next().expect("three terms");
            let h = it.next().expect("three terms");
            return [f, g, h];
        }
    }
}
