//! Typechecking proof terms against sequents over expanded games.
//!
//! The cut rule hides its middle game, so checking infers it. Every game in
//! play is described by a [`Shape`]: a partially known tree whose polarity
//! may be unknown and whose branch set is either exact (`closed`) or a lower
//! bound. The rules refine shapes monotonically and fail on conflicts;
//! compositions and tuples are re-checked until their shapes stop changing.

use crate::connectives::expand_with;
use crate::error::{Error, Result};
use crate::game::GameTree;
use crate::limits::Limits;
use crate::polarity::Polarity;
use crate::syntax::{Label, Sequent, SequentKind};

use super::term::Term;

/// A term checked against a sequent, with both sides expanded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedTerm {
    pub term: Term,
    pub sequent: Sequent,
    pub lhs: GameTree,
    pub rhs: GameTree,
}

impl TypedTerm {
    pub fn kind(&self) -> SequentKind {
        self.sequent.kind()
    }
}

/// Partial knowledge of a game.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub(crate) struct Shape {
    pol: Option<Polarity>,
    closed: bool,
    kids: Vec<(Label, Shape)>,
}

fn type_error(rule: &'static str, path: &str, msg: impl Into<String>) -> Error {
    Error::Type {
        rule,
        path: if path.is_empty() {
            "top".into()
        } else {
            path.into()
        },
        msg: msg.into(),
    }
}

/// Bound on re-check rounds while inferring cut types.
const MAX_ROUNDS: usize = 64;

impl Shape {
    pub(crate) fn from_tree(g: &GameTree) -> Shape {
        Shape {
            pol: Some(g.polarity()),
            closed: true,
            kids: g
                .branches()
                .iter()
                .map(|(l, c)| (l.clone(), Shape::from_tree(c)))
                .collect(),
        }
    }

    fn set_pol(&mut self, p: Polarity, rule: &'static str, path: &str) -> Result<()> {
        match self.pol {
            Some(q) if q != p => Err(type_error(
                rule,
                path,
                format!("needs a {p} game here, found a {q} game"),
            )),
            Some(_) => Ok(()),
            None => {
                self.pol = Some(p);
                for (_, k) in &mut self.kids {
                    k.set_pol(p.flip(), rule, path)?;
                }
                Ok(())
            }
        }
    }

    fn close_with(&mut self, labels: &[&Label], rule: &'static str, path: &str) -> Result<()> {
        for (l, _) in &self.kids {
            if !labels.contains(&l) {
                return Err(type_error(rule, path, format!("no entry for move `{l}`")));
            }
        }
        if self.closed {
            if let Some(l) = labels
                .iter()
                .find(|l| !self.kids.iter().any(|(k, _)| k == **l))
            {
                return Err(type_error(rule, path, format!("game has no move `{l}`")));
            }
        } else {
            for l in labels {
                self.child_mut(l, rule, path)?;
            }
            self.closed = true;
        }
        Ok(())
    }

    fn child_mut(&mut self, label: &Label, rule: &'static str, path: &str) -> Result<&mut Shape> {
        if let Some(i) = self.kids.iter().position(|(l, _)| l == label) {
            return Ok(&mut self.kids[i].1);
        }
        if self.closed {
            return Err(type_error(
                rule,
                path,
                format!("game has no move `{label}`"),
            ));
        }
        let child = Shape {
            pol: self.pol.map(Polarity::flip),
            ..Shape::default()
        };
        self.kids.push((label.clone(), child));
        Ok(&mut self.kids.last_mut().expect("just pushed").1)
    }

    fn merge(&mut self, other: &Shape, rule: &'static str, path: &str) -> Result<()> {
        if let Some(p) = other.pol {
            self.set_pol(p, rule, path)?;
        }
        if other.closed {
            let labels: Vec<&Label> = other.kids.iter().map(|(l, _)| l).collect();
            self.close_with(&labels, rule, path)?;
        }
        for (l, k) in &other.kids {
            let mine = self.child_mut(l, rule, path)?;
            mine.merge(k, rule, &format!("{path}.{l}"))?;
        }
        Ok(())
    }
}

fn join(path: &str, step: &str) -> String {
    if path.is_empty() {
        step.to_string()
    } else {
        format!("{path}/{step}")
    }
}

/// Refines `x` and `z` so that `t :: x ⊨ z` holds.
pub(crate) fn check(t: &Term, x: &mut Shape, z: &mut Shape, path: &str) -> Result<()> {
    match t {
        Term::Tuple(es) => {
            x.set_pol(Polarity::Opponent, "tuple", path)?;
            z.set_pol(Polarity::Opponent, "tuple", path)?;
            let labels: Vec<&Label> = es.iter().map(|(l, _)| l).collect();
            z.close_with(&labels, "tuple", path)?;
            fixpoint(x, |x| {
                for (b, h) in es {
                    let zb = z.child_mut(b, "tuple", path)?;
                    check(h, x, zb, &join(path, &format!("({b})")))?;
                }
                Ok(())
            })
        }
        Term::Cotuple(es) => {
            x.set_pol(Polarity::Player, "cotuple", path)?;
            z.set_pol(Polarity::Player, "cotuple", path)?;
            let labels: Vec<&Label> = es.iter().map(|(l, _)| l).collect();
            x.close_with(&labels, "cotuple", path)?;
            fixpoint(z, |z| {
                for (a, h) in es {
                    let xa = x.child_mut(a, "cotuple", path)?;
                    check(h, xa, z, &join(path, &format!("{{{a}}}")))?;
                }
                Ok(())
            })
        }
        Term::Left(b, f) => {
            x.set_pol(Polarity::Opponent, "projection", path)?;
            z.set_pol(Polarity::Player, "projection", path)?;
            let xb = x.child_mut(b, "projection", path)?;
            check(f, xb, z, &join(path, &format!("<{b}")))
        }
        Term::Right(a, g) => {
            x.set_pol(Polarity::Opponent, "injection", path)?;
            z.set_pol(Polarity::Player, "injection", path)?;
            let za = z.child_mut(a, "injection", path)?;
            check(g, x, za, &join(path, &format!(">{a}")))
        }
        Term::Id => {
            if let (Some(p), Some(q)) = (x.pol, z.pol) {
                if p != q {
                    return Err(type_error(
                        "identity",
                        path,
                        format!("identity needs equal endpoints, found {p} and {q} games"),
                    ));
                }
            }
            let mut both = x.clone();
            both.merge(z, "identity", path)?;
            *x = both.clone();
            *z = both;
            Ok(())
        }
        Term::Compose(f, g) => {
            let mut y = Shape::default();
            let mut rounds = 0;
            loop {
                let before = (x.clone(), y.clone(), z.clone());
                check(f, x, &mut y, &join(path, "cut.left"))?;
                check(g, &mut y, z, &join(path, "cut.right"))?;
                if let (Some(p), Some(q)) = (x.pol, z.pol) {
                    if p == q {
                        y.set_pol(p, "cut", path)?;
                    }
                }
                if (x.clone(), y.clone(), z.clone()) == before {
                    break;
                }
                rounds += 1;
                if rounds > MAX_ROUNDS {
                    return Err(type_error("cut", path, "cut type inference did not settle"));
                }
            }
            let Some(yp) = y.pol else {
                return Err(type_error(
                    "cut",
                    path,
                    "cannot determine the polarity of the cut game",
                ));
            };
            let backwards = (x.pol == Some(Polarity::Player) && yp == Polarity::Opponent)
                || (yp == Polarity::Player && z.pol == Some(Polarity::Opponent));
            if backwards {
                return Err(Error::NoMorphismDirection);
            }
            Ok(())
        }
    }
}

fn fixpoint(s: &mut Shape, mut pass: impl FnMut(&mut Shape) -> Result<()>) -> Result<()> {
    for _ in 0..MAX_ROUNDS {
        let before = s.clone();
        pass(s)?;
        if *s == before {
            return Ok(());
        }
    }
    Err(type_error("tuple", "", "shape inference did not settle"))
}

/// Checks `t` against a sequent whose sides are given as trees.
pub fn typecheck_trees(t: &Term, lhs: &GameTree, rhs: &GameTree) -> Result<()> {
    if lhs.polarity() == Polarity::Player && rhs.polarity() == Polarity::Opponent {
        return Err(Error::NoMorphismDirection);
    }
    let (mut x, mut z) = (Shape::from_tree(lhs), Shape::from_tree(rhs));
    check(t, &mut x, &mut z, "")
}

/// Checks `t :: s`, expanding both sides of the sequent within `limits`.
pub fn typecheck_with(t: &Term, s: &Sequent, limits: Limits) -> Result<TypedTerm> {
    let lhs = expand_with(s.lhs(), limits)?;
    let rhs = expand_with(s.rhs(), limits)?;
    typecheck_trees(t, &lhs, &rhs)?;
    Ok(TypedTerm {
        term: t.clone(),
        sequent: s.clone(),
        lhs,
        rhs,
    })
}

pub fn typecheck(t: &Term, s: &Sequent) -> Result<TypedTerm> {
    typecheck_with(t, s, Limits::default())
}

/// The identity on `g`: tuples of projections on opponent games, cotuples
/// of injections on player games.
pub fn identity_of(g: &GameTree) -> Term {
    let entries = g
        .branches()
        .iter()
        .map(|(l, c)| {
            let body = Box::new(identity_of(c));
            let step = match g.polarity() {
                Polarity::Opponent => Term::Left(l.clone(), body),
                Polarity::Player => Term::Right(l.clone(), body),
            };
            (l.clone(), step)
        })
        .collect();
    match g.polarity() {
        Polarity::Opponent => Term::Tuple(entries),
        Polarity::Player => Term::Cotuple(entries),
    }
}
