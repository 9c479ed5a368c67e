//! Closed-form sizes and profiles, computed from formulas without expansion.

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{serialize_big, Profile};
use crate::polarity::Polarity;
use crate::syntax::{BinOp, Formula, Node, UnOp};

/// Zero exactly when both `n` and `m` are odd.
pub fn gamma(n: usize, m: usize) -> bool {
    n.is_multiple_of(2) || m.is_multiple_of(2)
}

fn choose(n: usize, k: usize) -> BigUint {
    binomial(BigUint::from(n), BigUint::from(k))
}

/// Profile of the interleaving product of two games of the same polarity
/// (`ox` of opponent games, `par` of player games).
pub fn profile_tensor(p1: &Profile, p2: &Profile) -> Profile {
    interleave(p1, p2, true)
}

/// Profile of `oxr(O, P)` from the profiles of `O` and `P`.
pub fn profile_oxr(p_o: &Profile, p_p: &Profile) -> Profile {
    directed(p_o, p_p, true)
}

fn interleave(p1: &Profile, p2: &Profile, binomials: bool) -> Profile {
    if p1.is_empty() || p2.is_empty() {
        return Profile::default();
    }
    let len = p1.len() + p2.len() - 1;
    let mut out = Vec::with_capacity(len);
    for n in 0..len {
        let mut acc = BigUint::zero();
        for i in n.saturating_sub(p2.len() - 1)..=n.min(p1.len() - 1) {
            if !gamma(i, n - i) {
                continue;
            }
            let mut term = &p1.entries()[i] * &p2.entries()[n - i];
            if binomials {
                term *= choose(n / 2, i / 2);
            }
            acc += term;
        }
        out.push(acc);
    }
    Profile::new(out)
}

fn directed(p_o: &Profile, p_p: &Profile, binomials: bool) -> Profile {
    if p_o.is_empty() || p_p.is_empty() {
        return Profile::default();
    }
    let mut out = vec![BigUint::one()];
    // Entry n+1 pairs a node of O at depth i with a non-root node of P at
    // depth n-i+1.
    for n in 0..p_o.len() + p_p.len() - 2 {
        let mut acc = BigUint::zero();
        for i in 0..=n.min(p_o.len() - 1) {
            let j = n - i + 1;
            if j >= p_p.len() || !gamma(i, n - i) {
                continue;
            }
            let mut term = &p_o.entries()[i] * &p_p.entries()[j];
            if binomials {
                term *= choose(n / 2, i / 2);
            }
            acc += term;
        }
        out.push(acc);
    }
    Profile::new(out)
}

fn literal_profile(children: Vec<Profile>) -> Profile {
    let len = children.iter().map(Profile::len).max().unwrap_or(0) + 1;
    let mut out = vec![BigUint::zero(); len];
    out[0] = BigUint::one();
    for c in &children {
        for (i, n) in c.entries().iter().enumerate() {
            out[i + 1] += n;
        }
    }
    Profile::new(out)
}

fn formula_profile(f: &Formula, binomials: bool) -> Result<Profile> {
    match f.node() {
        Node::Lit { branches, .. } => {
            let children = branches
                .iter()
                .map(|b| formula_profile(&b.child, binomials))
                .collect::<Result<Vec<_>>>()?;
            Ok(literal_profile(children))
        }
        Node::Binary { op, left, right } => {
            let l = formula_profile(left, binomials)?;
            let r = formula_profile(right, binomials)?;
            Ok(match op {
                BinOp::Tensor | BinOp::Par => interleave(&l, &r, binomials),
                // `directed` takes the waiting component first and the
                // component that opens second.
                BinOp::OxR | BinOp::OtR => directed(&l, &r, binomials),
                BinOp::OxL | BinOp::OtL => directed(&r, &l, binomials),
            })
        }
        Node::Unary { op, child } => match op {
            UnOp::Dual => formula_profile(child, binomials),
            UnOp::Bang | UnOp::Quest => Err(Error::Unsupported {
                connective: op.name(),
            }),
        },
    }
}

/// Profile of the expanded tree of a multiplicative formula.
pub fn tree_profile(f: &Formula) -> Result<Profile> {
    formula_profile(f, true)
}

/// Profile of the shared graph game of a multiplicative formula.
pub fn graph_profile(f: &Formula) -> Result<Profile> {
    formula_profile(f, false)
}

/// `Σ p_i · p_{i+1}`: every edge joins consecutive levels.
pub fn edge_bound_from_profile(p: &Profile) -> BigUint {
    p.entries().windows(2).map(|w| &w[0] * &w[1]).sum()
}

fn factorial(n: u64) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

/// Leaves of `!(n:{m:()})`: `n! · m^n`.
pub fn bang_leaf_count(n: u64, m: u64) -> BigUint {
    factorial(n) * BigUint::from(m).pow(n as u32)
}

/// Edge bound for `!O` from the opponent/player edge counts of `O`:
/// `2·eo·eo!·ep^eo` when `ep > 0`, else `eo`.
pub fn bang_edge_bound(eo: u64, ep: u64) -> BigUint {
    if ep == 0 {
        return BigUint::from(eo);
    }
    BigUint::from(2u8) * eo * factorial(eo) * BigUint::from(ep).pow(eo as u32)
}

/// Node and edge counts of a graph game, split by polarity. Edges are
/// attributed to the polarity of their source.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct SizeQuad {
    #[serde(serialize_with = "serialize_big")]
    pub nodes_o: BigUint,
    #[serde(serialize_with = "serialize_big")]
    pub nodes_p: BigUint,
    #[serde(serialize_with = "serialize_big")]
    pub edges_o: BigUint,
    #[serde(serialize_with = "serialize_big")]
    pub edges_p: BigUint,
}

impl SizeQuad {
    pub fn from_u64s(nodes_o: u64, nodes_p: u64, edges_o: u64, edges_p: u64) -> SizeQuad {
        SizeQuad {
            nodes_o: nodes_o.into(),
            nodes_p: nodes_p.into(),
            edges_o: edges_o.into(),
            edges_p: edges_p.into(),
        }
    }

    pub fn nodes(&self) -> BigUint {
        &self.nodes_o + &self.nodes_p
    }

    pub fn edges(&self) -> BigUint {
        &self.edges_o + &self.edges_p
    }

    fn swapped(self) -> SizeQuad {
        SizeQuad {
            nodes_o: self.nodes_p,
            nodes_p: self.nodes_o,
            edges_o: self.edges_p,
            edges_p: self.edges_o,
        }
    }
}

/// Graph size plus the root data the product rules need.
struct Sized {
    quad: SizeQuad,
    polarity: Polarity,
    root_degree: BigUint,
}

/// Counts split by whether a position has the family's base polarity
/// (opponent for tensors, player for pars).
struct Split {
    nodes_base: BigUint,
    nodes_other: BigUint,
    edges_base: BigUint,
    edges_other: BigUint,
}

impl Split {
    fn of(q: &SizeQuad, base: Polarity) -> Split {
        let (nb, no, eb, eo) = match base {
            Polarity::Opponent => (&q.nodes_o, &q.nodes_p, &q.edges_o, &q.edges_p),
            Polarity::Player => (&q.nodes_p, &q.nodes_o, &q.edges_p, &q.edges_o),
        };
        Split {
            nodes_base: nb.clone(),
            nodes_other: no.clone(),
            edges_base: eb.clone(),
            edges_other: eo.clone(),
        }
    }

    fn into_quad(self, base: Polarity) -> SizeQuad {
        let q = SizeQuad {
            nodes_o: self.nodes_base,
            nodes_p: self.nodes_other,
            edges_o: self.edges_base,
            edges_p: self.edges_other,
        };
        match base {
            Polarity::Opponent => q,
            Polarity::Player => q.swapped(),
        }
    }
}

/// Product of a graph whose root has base polarity (`x`) with one whose
/// root does not (`y`): only `y` can open, after which both interleave.
fn one_sided(x: &Split, y: &Split, y_degree: &BigUint) -> Split {
    let y_nonroot_other = &y.nodes_other - 1u8;
    Split {
        nodes_base: &x.nodes_base * &y.nodes_base,
        nodes_other: BigUint::one()
            + &x.nodes_other * &y.nodes_base
            + &x.nodes_base * &y_nonroot_other,
        edges_base: &x.edges_base * &y.nodes_base + &x.nodes_base * &y.edges_base,
        edges_other: y_degree
            + &x.edges_other * &y.nodes_base
            + &x.nodes_base * (&y.edges_other - y_degree),
    }
}

fn sized(f: &Formula) -> Result<Sized> {
    match f.node() {
        Node::Lit { polarity, branches } => {
            let mut quad = SizeQuad::default();
            for b in branches {
                let c = sized(&b.child)?.quad;
                quad.nodes_o += c.nodes_o;
                quad.nodes_p += c.nodes_p;
                quad.edges_o += c.edges_o;
                quad.edges_p += c.edges_p;
            }
            let k = BigUint::from(branches.len());
            match polarity {
                Polarity::Opponent => {
                    quad.nodes_o += 1u8;
                    quad.edges_o += &k;
                }
                Polarity::Player => {
                    quad.nodes_p += 1u8;
                    quad.edges_p += &k;
                }
            }
            Ok(Sized {
                quad,
                polarity: *polarity,
                root_degree: k,
            })
        }
        Node::Binary { op, left, right } => {
            let l = sized(left)?;
            let r = sized(right)?;
            let base = op.family().base();
            let (x, y) = (Split::of(&l.quad, base), Split::of(&r.quad, base));
            let (split, polarity, root_degree) = match (l.polarity == base, r.polarity == base) {
                (true, true) => (
                    Split {
                        nodes_base: &x.nodes_base * &y.nodes_base,
                        nodes_other: &x.nodes_other * &y.nodes_base
                            + &x.nodes_base * &y.nodes_other,
                        edges_base: &x.edges_base * &y.nodes_base + &x.nodes_base * &y.edges_base,
                        edges_other: &x.edges_other * &y.nodes_base
                            + &x.nodes_base * &y.edges_other,
                    },
                    base,
                    &l.root_degree + &r.root_degree,
                ),
                (true, false) => (
                    one_sided(&x, &y, &r.root_degree),
                    base.flip(),
                    r.root_degree,
                ),
                (false, true) => (
                    one_sided(&y, &x, &l.root_degree),
                    base.flip(),
                    l.root_degree,
                ),
                (false, false) => unreachable!("connective typing rules out two inactive roots"),
            };
            Ok(Sized {
                quad: split.into_quad(base),
                polarity,
                root_degree,
            })
        }
        Node::Unary { op, child } => match op {
            UnOp::Dual => {
                let c = sized(child)?;
                Ok(Sized {
                    quad: c.quad.swapped(),
                    polarity: c.polarity.flip(),
                    root_degree: c.root_degree,
                })
            }
            UnOp::Bang | UnOp::Quest => Err(Error::Unsupported {
                connective: op.name(),
            }),
        },
    }
}

/// Exact node/edge counts of the product graph of a multiplicative formula
/// (product positions keyed by operand positions, no further sharing).
pub fn graph_size(f: &Formula) -> Result<SizeQuad> {
    Ok(sized(f)?.quad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectives::expand;
    use crate::game::{measure, profile, random_game};
    use crate::syntax::parse_formula;
    use proptest::prelude::*;

    fn pr(v: &[u64]) -> Profile {
        Profile::from_u64s(v)
    }

    #[test]
    fn gamma_table() {
        assert!(gamma(0, 0) && gamma(0, 3) && gamma(2, 1) && gamma(4, 4));
        assert!(!gamma(1, 1) && !gamma(3, 5));
    }

    #[test]
    fn worked_profiles() {
        assert_eq!(
            profile_oxr(&pr(&[1, 2, 4]), &pr(&[1, 2, 2])),
            pr(&[1, 2, 6, 8, 8])
        );
        assert_eq!(profile_tensor(&pr(&[1]), &pr(&[1])), pr(&[1]));
        let p = pr(&[1, 3, 2, 7]);
        assert_eq!(profile_tensor(&p, &pr(&[1])), p);
        assert_eq!(profile_oxr(&pr(&[1]), &p), p);
        let l4 = pr(&[1, 1, 1, 1, 1]);
        assert_eq!(profile_tensor(&l4, &l4).get(8), BigUint::from(6u8));
    }

    #[test]
    fn edge_bounds() {
        assert_eq!(edge_bound_from_profile(&pr(&[1])), BigUint::zero());
        assert_eq!(
            edge_bound_from_profile(&pr(&[1, 2, 6, 8, 8])),
            BigUint::from(126u8)
        );
        assert_eq!(bang_edge_bound(2, 0), BigUint::from(2u8));
        assert_eq!(bang_edge_bound(1, 1), BigUint::from(2u8));
    }

    #[test]
    fn bang_leaves_match_expansion() {
        assert_eq!(bang_leaf_count(1, 1), BigUint::one());
        assert_eq!(bang_leaf_count(2, 2), BigUint::from(8u8));
        assert_eq!(bang_leaf_count(3, 2), BigUint::from(48u8));
        let g = expand(&parse_formula("bang((3:{2:()}))").unwrap(), 1_000_000).unwrap();
        assert_eq!(g.leaf_count(), 48);
    }

    #[test]
    fn bang_edge_bound_on_worked_game() {
        let o = parse_formula("(2:{2:()})").unwrap();
        let r = measure(&expand(&o, 1000).unwrap());
        let bang = measure(&expand(&Formula::bang(o).unwrap(), 1_000_000).unwrap());
        assert!(BigUint::from(bang.edges) <= bang_edge_bound(r.edges_o, r.edges_p));
    }

    #[test]
    fn unit_sizes() {
        let one = Formula::one();
        assert_eq!(graph_size(&one).unwrap(), SizeQuad::from_u64s(1, 0, 0, 0));
        assert_eq!(graph_profile(&one).unwrap(), pr(&[1]));
        let pp = parse_formula("par({a:(),b:()}, {a:(),b:()})").unwrap();
        assert_eq!(graph_size(&pp).unwrap().edges_p, BigUint::from(4u8));
        let oo = parse_formula("ox((a:{}), (a:{}))").unwrap();
        assert_eq!(graph_size(&oo).unwrap().edges_o, BigUint::from(2u8));
        assert!(matches!(
            graph_size(&parse_formula("!()").unwrap()),
            Err(Error::Unsupported { connective: "bang" })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn profile_formulas_match_expansion(s1 in any::<u64>(), s2 in any::<u64>(), d1 in 0usize..5, d2 in 0usize..5) {
            let o = random_game(d1, 3, Polarity::Opponent, s1);
            let o2 = random_game(d2, 3, Polarity::Opponent, s2);
            let pl = random_game(d2, 3, Polarity::Player, s2);
            let t = Formula::tensor(o.to_formula(), o2.to_formula()).unwrap();
            let measured = profile(&expand(&t, 1_000_000).unwrap());
            prop_assert_eq!(&profile_tensor(&profile(&o), &profile(&o2)), &measured);
            prop_assert_eq!(&tree_profile(&t).unwrap(), &measured);
            let d = Formula::oxr(o.to_formula(), pl.to_formula()).unwrap();
            let measured = profile(&expand(&d, 1_000_000).unwrap());
            prop_assert_eq!(&profile_oxr(&profile(&o), &profile(&pl)), &measured);
            prop_assert_eq!(measured.get(0), BigUint::one());
        }

        #[test]
        fn gamma_is_symmetric(n in 0usize..50, m in 0usize..50) {
            prop_assert_eq!(gamma(n, m), gamma(m, n));
            if n * m % 2 == 0 {
                prop_assert!(gamma(n, m));
            }
        }
    }
}
