//! Expansion of compound formulas into explicit game trees, and structural
//! isomorphism of the results.
//!
//! Every binary connective is an interleaving product of its operands. A
//! product position is a pair of operand positions. Tensor-family products
//! are opponent positions exactly when both components are, and par-family
//! products are player positions exactly when both components are. At a
//! product position, the components whose polarity matches the position
//! may move; moves in the left component are labelled `L.<label>` and moves
//! in the right one `R.<label>`, left before right.

use std::collections::HashMap;

use crate::error::Result;
use crate::game::GameTree;
use crate::limits::{Limits, Meter};
use crate::polarity::Polarity;
use crate::syntax::{Family, Formula, Label, Node, UnOp};

/// Interns the `L.`/`R.` prefixed forms of labels.
#[derive(Debug, Default)]
pub(crate) struct Prefixer {
    cache: HashMap<Label, (Label, Label)>,
}

impl Prefixer {
    pub(crate) fn get(&mut self, label: &Label, right: bool) -> Label {
        let (l, r) = self
            .cache
            .entry(label.clone())
            .or_insert_with(|| (format!("L.{label}").into(), format!("R.{label}").into()));
        if right {
            r.clone()
        } else {
            l.clone()
        }
    }
}

/// Polarity of the product position over components of polarity `x`, `y`.
pub(crate) fn product_polarity(family: Family, x: Polarity, y: Polarity) -> Polarity {
    let base = family.base();
    if x == base && y == base {
        base
    } else {
        base.flip()
    }
}

struct Expander {
    meter: Meter,
    prefix: Prefixer,
}

impl Expander {
    fn formula(&mut self, f: &Formula) -> Result<GameTree> {
        match f.node() {
            Node::Lit { polarity, branches } => {
                let mut out = Vec::with_capacity(branches.len());
                for b in branches {
                    out.push((b.label.clone(), self.formula(&b.child)?));
                }
                self.meter.tick(1)?;
                Ok(GameTree::from_parts(*polarity, out))
            }
            Node::Binary { op, left, right } => {
                let x = self.formula(left)?;
                let y = self.formula(right)?;
                self.product(op.family(), &x, &y)
            }
            Node::Unary { op, child } => {
                let g = self.formula(child)?;
                match op {
                    UnOp::Dual => Ok(g.dual()),
                    UnOp::Bang => self.bang(&g),
                    UnOp::Quest => Ok(self.bang(&g.dual())?.dual()),
                }
            }
        }
    }

    fn product(&mut self, family: Family, x: &GameTree, y: &GameTree) -> Result<GameTree> {
        self.meter.tick(1)?;
        let pol = product_polarity(family, x.polarity(), y.polarity());
        let mut out = Vec::new();
        if x.polarity() == pol {
            for (l, c) in x.branches() {
                let label = self.prefix.get(l, false);
                out.push((label, self.product(family, c, y)?));
            }
        }
        if y.polarity() == pol {
            for (l, c) in y.branches() {
                let label = self.prefix.get(l, true);
                out.push((label, self.product(family, x, c)?));
            }
        }
        Ok(GameTree::from_parts(pol, out))
    }

    /// `!O`: the right-nested tensor over the opponent moves `b_i` of `O` of
    /// the components `(b_i : { a_j : !O_ij })`; `!() = ()`.
    fn bang(&mut self, o: &GameTree) -> Result<GameTree> {
        let mut components = Vec::with_capacity(o.branches().len());
        for (b, p) in o.branches() {
            let mut moves = Vec::with_capacity(p.branches().len());
            for (a, oij) in p.branches() {
                moves.push((a.clone(), self.bang(oij)?));
            }
            self.meter.tick(2)?;
            let inner = GameTree::from_parts(Polarity::Player, moves);
            components.push(GameTree::from_parts(
                Polarity::Opponent,
                vec![(b.clone(), inner)],
            ));
        }
        let Some(mut acc) = components.pop() else {
            self.meter.tick(1)?;
            return Ok(GameTree::one());
        };
        while let Some(c) = components.pop() {
            acc = self.product(Family::Tensor, &c, &acc)?;
        }
        Ok(acc)
    }
}

/// Expands `f` into its game tree, failing once more than `max_nodes`
/// nodes have been produced.
pub fn expand(f: &Formula, max_nodes: u64) -> Result<GameTree> {
    expand_with(f, Limits::nodes(max_nodes))
}

pub fn expand_with(f: &Formula, limits: Limits) -> Result<GameTree> {
    let mut ex = Expander {
        meter: Meter::new(limits),
        prefix: Prefixer::default(),
    };
    ex.formula(f)
}

/// Label-free normal form: children are canonicalized, sorted, and then
/// relabelled `_1.._k` in order.
pub fn canonical_form(g: &GameTree) -> GameTree {
    let mut children: Vec<GameTree> = g
        .branches()
        .iter()
        .map(|(_, c)| canonical_form(c))
        .collect();
    children.sort();
    let branches = children
        .into_iter()
        .enumerate()
        .map(|(i, c)| (Label::from(format!("_{}", i + 1)), c))
        .collect();
    GameTree::from_parts(g.polarity(), branches)
}

/// Structural isomorphism of trees.
pub fn trees_iso(a: &GameTree, b: &GameTree) -> bool {
    a.polarity() == b.polarity() && canonical_form(a) == canonical_form(b)
}

/// Structural isomorphism of the expansions of two formulas.
pub fn is_iso(f: &Formula, h: &Formula, limits: Limits) -> Result<bool> {
    if f.polarity() != h.polarity() {
        return Ok(false);
    }
    Ok(trees_iso(
        &expand_with(f, limits)?,
        &expand_with(h, limits)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::game::{measure, profile, random_game, Profile};
    use crate::syntax::parse_formula;
    use proptest::prelude::*;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn ex(f: &Formula) -> GameTree {
        expand(f, 1_000_000).unwrap()
    }

    fn iso(a: &Formula, b: &Formula) -> bool {
        is_iso(a, b, Limits::default()).unwrap()
    }

    fn game(depth: usize, pol: Polarity, seed: u64) -> Formula {
        random_game(depth, 2, pol, seed).to_formula()
    }

    #[test]
    fn worked_oxr_expansion() {
        let f = p("oxr((2:{2:()}), {1:(),1:(2:{})})");
        let g = ex(&f);
        assert_eq!(profile(&g), Profile::from_u64s(&[1, 2, 6, 8, 8]));
        let r = measure(&g);
        assert_eq!((r.nodes, r.edges), (25, 24));
        assert_eq!(g.polarity(), Polarity::Player);
        assert_eq!(
            g.branches().iter().map(|(l, _)| &**l).collect::<Vec<_>>(),
            ["R._1", "R._2"]
        );
    }

    #[test]
    fn small_products_have_expected_shape() {
        let g = ex(&p("ox((a:{}), (b:{}))"));
        assert_eq!(g.to_string(), "( L.a:{}, R.b:{} )");
        let g = ex(&p("par({a:()}, {b:()})"));
        assert_eq!(g.to_string(), "{ L.a:(), R.b:() }");
        let g = ex(&p("otr({a:()}, (b:{c:()}))"));
        assert_eq!(g.to_string(), "( R.b:{ L.a:(), R.c:() } )");
    }

    #[test]
    fn unit_laws() {
        let o = p("(a:{c:(), d:()}, b:{})");
        let pl = p("{a:(b:{}), c:()}");
        assert!(iso(&p(&format!("ox({o}, ())")), &o));
        assert!(iso(&p(&format!("par({{}}, {pl})")), &pl));
        assert!(iso(&p(&format!("oxr({o}, {{}})")), &Formula::zero()));
        assert!(iso(&p(&format!("otl((), {pl})")), &Formula::one()));
        assert!(iso(&p(&format!("oxr((), {pl})")), &pl));
        assert!(iso(&p(&format!("otl({o}, {{}})")), &o));
        assert!(trees_iso(&ex(&Formula::one()), &ex(&Formula::one())));
    }

    #[test]
    fn bang_leaf_counts() {
        let g = ex(&p("bang((2:{2:()}))"));
        assert_eq!(g.leaf_count(), 8);
        assert_eq!(ex(&p("!()")), GameTree::one());
        let q = ex(&p("?{}"));
        assert_eq!(q, GameTree::zero());
    }

    #[test]
    fn budget_is_enforced() {
        match expand(&p("bang((8:{2:()}))"), 1_000_000) {
            Err(Error::BudgetExceeded { produced, budget }) => {
                assert_eq!(budget, 1_000_000);
                assert!(produced > budget);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn canonical_form_ignores_labels_and_order() {
        let a = ex(&p("(x:{}, y:{z:()})"));
        let b = ex(&p("(q:{r:()}, s:{})"));
        assert!(trees_iso(&a, &b));
        assert!(!trees_iso(&a, &ex(&p("(x:{}, y:{})"))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn commutativity(s1 in any::<u64>(), s2 in any::<u64>()) {
            let (a, b) = (game(3, Polarity::Opponent, s1), game(3, Polarity::Opponent, s2));
            prop_assert!(iso(&Formula::tensor(a.clone(), b.clone()).unwrap(), &Formula::tensor(b, a).unwrap()));
            let (c, d) = (game(3, Polarity::Player, s1), game(3, Polarity::Player, s2));
            prop_assert!(iso(&Formula::par(c.clone(), d.clone()).unwrap(), &Formula::par(d, c).unwrap()));
        }

        #[test]
        fn associativity(s in any::<[u64; 3]>()) {
            let [a, b, c] = s.map(|k| game(2, Polarity::Opponent, k));
            let l = Formula::tensor(Formula::tensor(a.clone(), b.clone()).unwrap(), c.clone()).unwrap();
            let r = Formula::tensor(a, Formula::tensor(b, c).unwrap()).unwrap();
            prop_assert!(iso(&l, &r));
            let [a, b, c] = s.map(|k| game(2, Polarity::Player, k));
            let l = Formula::par(Formula::par(a.clone(), b.clone()).unwrap(), c.clone()).unwrap();
            let r = Formula::par(a, Formula::par(b, c).unwrap()).unwrap();
            prop_assert!(iso(&l, &r));
        }

        #[test]
        fn mixed_associativity(s in any::<[u64; 3]>()) {
            let o = game(2, Polarity::Opponent, s[0]);
            let o2 = game(2, Polarity::Opponent, s[1]);
            let pl = game(2, Polarity::Player, s[2]);
            let l = Formula::oxr(Formula::tensor(o.clone(), o2.clone()).unwrap(), pl.clone()).unwrap();
            let r = Formula::oxr(o.clone(), Formula::oxr(o2, pl.clone()).unwrap()).unwrap();
            prop_assert!(iso(&l, &r));
            let p2 = game(2, Polarity::Player, s[0] ^ 1);
            let l = Formula::otl(o.clone(), Formula::par(pl.clone(), p2.clone()).unwrap()).unwrap();
            let r = Formula::otl(Formula::otl(o, pl).unwrap(), p2).unwrap();
            prop_assert!(iso(&l, &r));
        }

        #[test]
        fn duality_square(s1 in any::<u64>(), s2 in any::<u64>()) {
            let (a, b) = (game(3, Polarity::Opponent, s1), game(3, Polarity::Opponent, s2));
            let lhs = Formula::dual(Formula::tensor(a.clone(), b.clone()).unwrap());
            let rhs = Formula::par(Formula::dual(a.clone()), Formula::dual(b.clone())).unwrap();
            prop_assert!(iso(&lhs, &rhs));

            let pl = game(3, Polarity::Player, s2);
            let lhs = Formula::dual(Formula::oxr(a.clone(), pl.clone()).unwrap());
            let rhs = Formula::otr(Formula::dual(a.clone()), Formula::dual(pl.clone())).unwrap();
            prop_assert!(iso(&lhs, &rhs));
            let lhs = Formula::dual(Formula::oxl(pl.clone(), a.clone()).unwrap());
            let rhs = Formula::otl(Formula::dual(pl), Formula::dual(a.clone())).unwrap();
            prop_assert!(iso(&lhs, &rhs));

            let small = game(2, Polarity::Opponent, s1);
            let lhs = Formula::dual(Formula::bang(small.clone()).unwrap());
            let rhs = Formula::quest(Formula::dual(small)).unwrap();
            prop_assert!(iso(&lhs, &rhs));
        }

        #[test]
        fn left_and_right_directed_products_mirror(s1 in any::<u64>(), s2 in any::<u64>()) {
            let o = game(3, Polarity::Opponent, s1);
            let pl = game(3, Polarity::Player, s2);
            prop_assert!(iso(&Formula::oxr(o.clone(), pl.clone()).unwrap(), &Formula::oxl(pl.clone(), o.clone()).unwrap()));
            prop_assert!(iso(&Formula::otr(pl.clone(), o.clone()).unwrap(), &Formula::otl(o, pl).unwrap()));
        }
    }
}
