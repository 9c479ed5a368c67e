use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::polarity::Polarity;

/// Branch labels are shared, immutable strings.
pub type Label = Arc<str>;

/// Scheduling family of a binary connective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `ox`, `oxr`, `oxl`: the opponent picks the component.
    Tensor,
    /// `par`, `otr`, `otl`: the player picks the component.
    Par,
}

impl Family {
    /// Polarity of a product position where both components share it.
    pub fn base(self) -> Polarity {
        match self {
            Family::Tensor => Polarity::Opponent,
            Family::Par => Polarity::Player,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    /// `ox(O, O')`
    Tensor,
    /// `oxr(O, P)`
    OxR,
    /// `oxl(P, O)`
    OxL,
    /// `par(P, P')`
    Par,
    /// `otr(P, O)`
    OtR,
    /// `otl(O, P)`
    OtL,
}

impl BinOp {
    pub const ALL: [BinOp; 6] = [
        BinOp::Tensor,
        BinOp::OxR,
        BinOp::OxL,
        BinOp::Par,
        BinOp::OtR,
        BinOp::OtL,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BinOp::Tensor => "ox",
            BinOp::OxR => "oxr",
            BinOp::OxL => "oxl",
            BinOp::Par => "par",
            BinOp::OtR => "otr",
            BinOp::OtL => "otl",
        }
    }

    pub fn from_name(name: &str) -> Option<BinOp> {
        BinOp::ALL.into_iter().find(|op| op.name() == name)
    }

    pub fn family(self) -> Family {
        match self {
            BinOp::Tensor | BinOp::OxR | BinOp::OxL => Family::Tensor,
            BinOp::Par | BinOp::OtR | BinOp::OtL => Family::Par,
        }
    }

    /// Required polarities of the (left, right) operands.
    pub fn operand_polarities(self) -> (Polarity, Polarity) {
        use Polarity::*;
        match self {
            BinOp::Tensor => (Opponent, Opponent),
            BinOp::OxR => (Opponent, Player),
            BinOp::OxL => (Player, Opponent),
            BinOp::Par => (Player, Player),
            BinOp::OtR => (Player, Opponent),
            BinOp::OtL => (Opponent, Player),
        }
    }

    pub fn result_polarity(self) -> Polarity {
        match self {
            BinOp::Tensor | BinOp::OtR | BinOp::OtL => Polarity::Opponent,
            BinOp::Par | BinOp::OxR | BinOp::OxL => Polarity::Player,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnOp {
    Dual,
    Bang,
    Quest,
}

impl UnOp {
    pub fn name(self) -> &'static str {
        match self {
            UnOp::Dual => "dual",
            UnOp::Bang => "bang",
            UnOp::Quest => "quest",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub label: Label,
    pub child: Formula,
}

impl Branch {
    pub fn new(label: impl Into<Label>, child: Formula) -> Branch {
        Branch {
            label: label.into(),
            child,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    /// `( .. )` when opponent, `{ .. }` when player.
    Lit {
        polarity: Polarity,
        branches: Vec<Branch>,
    },
    Binary {
        op: BinOp,
        left: Box<Formula>,
        right: Box<Formula>,
    },
    Unary {
        op: UnOp,
        child: Box<Formula>,
    },
}

/// A polarized formula over literals and connectives.
///
/// Only well-typed formulas can be constructed, so [`Formula::polarity`] is
/// total. Polarity and node count are cached at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    node: Node,
    polarity: Polarity,
    size: usize,
}

impl Formula {
    /// The empty opponent game `()`.
    pub fn one() -> Formula {
        Formula {
            node: Node::Lit {
                polarity: Polarity::Opponent,
                branches: Vec::new(),
            },
            polarity: Polarity::Opponent,
            size: 1,
        }
    }

    /// The empty player game `{}`.
    pub fn zero() -> Formula {
        Formula {
            node: Node::Lit {
                polarity: Polarity::Player,
                branches: Vec::new(),
            },
            polarity: Polarity::Player,
            size: 1,
        }
    }

    pub fn lit(polarity: Polarity, branches: Vec<Branch>) -> Result<Formula> {
        let mut seen = HashSet::with_capacity(branches.len());
        for b in &branches {
            if !seen.insert(b.label.clone()) {
                return Err(Error::DuplicateLabel {
                    label: b.label.to_string(),
                });
            }
            if b.child.polarity != polarity.flip() {
                return Err(Error::Polarity {
                    connective: lit_name(polarity).into(),
                    detail: format!(
                        "branch `{}` must be a {} game, found {}",
                        b.label,
                        polarity.flip(),
                        b.child.polarity
                    ),
                });
            }
        }
        let size = 1 + branches.iter().map(|b| b.child.size).sum::<usize>();
        Ok(Formula {
            node: Node::Lit { polarity, branches },
            polarity,
            size,
        })
    }

    /// Opponent literal from `(label, child)` pairs.
    pub fn opp<L: Into<Label>>(
        branches: impl IntoIterator<Item = (L, Formula)>,
    ) -> Result<Formula> {
        Formula::lit(
            Polarity::Opponent,
            branches
                .into_iter()
                .map(|(l, c)| Branch::new(l, c))
                .collect(),
        )
    }

    /// Player literal from `(label, child)` pairs.
    pub fn player<L: Into<Label>>(
        branches: impl IntoIterator<Item = (L, Formula)>,
    ) -> Result<Formula> {
        Formula::lit(
            Polarity::Player,
            branches
                .into_iter()
                .map(|(l, c)| Branch::new(l, c))
                .collect(),
        )
    }

    pub fn binary(op: BinOp, left: Formula, right: Formula) -> Result<Formula> {
        let (pl, pr) = op.operand_polarities();
        if left.polarity != pl || right.polarity != pr {
            return Err(Error::Polarity {
                connective: op.name().into(),
                detail: format!(
                    "expects ({pl}, {pr}) operands, found ({}, {})",
                    left.polarity, right.polarity
                ),
            });
        }
        let size = 1 + left.size + right.size;
        Ok(Formula {
            node: Node::Binary {
                op,
                left: Box::new(left),
                right: Box::new(right),
            },
            polarity: op.result_polarity(),
            size,
        })
    }

    pub fn tensor(left: Formula, right: Formula) -> Result<Formula> {
        Formula::binary(BinOp::Tensor, left, right)
    }

    pub fn oxr(left: Formula, right: Formula) -> Result<Formula> {
        Formula::binary(BinOp::OxR, left, right)
    }

    pub fn oxl(left: Formula, right: Formula) -> Result<Formula> {
        Formula::binary(BinOp::OxL, left, right)
    }

    pub fn par(left: Formula, right: Formula) -> Result<Formula> {
        Formula::binary(BinOp::Par, left, right)
    }

    pub fn otr(left: Formula, right: Formula) -> Result<Formula> {
        Formula::binary(BinOp::OtR, left, right)
    }

    pub fn otl(left: Formula, right: Formula) -> Result<Formula> {
        Formula::binary(BinOp::OtL, left, right)
    }

    pub fn unary(op: UnOp, child: Formula) -> Result<Formula> {
        let polarity = match op {
            UnOp::Dual => child.polarity.flip(),
            UnOp::Bang | UnOp::Quest => {
                let want = if op == UnOp::Bang {
                    Polarity::Opponent
                } else {
                    Polarity::Player
                };
                if child.polarity != want {
                    return Err(Error::Polarity {
                        connective: op.name().into(),
                        detail: format!("expects a {want} operand, found {}", child.polarity),
                    });
                }
                want
            }
        };
        let size = 1 + child.size;
        Ok(Formula {
            node: Node::Unary {
                op,
                child: Box::new(child),
            },
            polarity,
            size,
        })
    }

    pub fn dual(child: Formula) -> Formula {
        Formula::unary(UnOp::Dual, child).expect("dual accepts every polarity")
    }

    pub fn bang(child: Formula) -> Result<Formula> {
        Formula::unary(UnOp::Bang, child)
    }

    pub fn quest(child: Formula) -> Result<Formula> {
        Formula::unary(UnOp::Quest, child)
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    /// Number of AST nodes (literals and connectives; labels are not counted).
    pub fn size(&self) -> usize {
        self.size
    }

    /// True when the formula contains no `bang`/`quest`.
    pub fn is_multiplicative(&self) -> bool {
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            match &f.node {
                Node::Lit { branches, .. } => stack.extend(branches.iter().map(|b| &b.child)),
                Node::Binary { left, right, .. } => {
                    stack.push(left);
                    stack.push(right);
                }
                Node::Unary {
                    op: UnOp::Dual,
                    child,
                } => stack.push(child),
                Node::Unary { .. } => return false,
            }
        }
        true
    }

    /// Moves every child formula out of this node, leaving it childless.
    fn detach_children(&mut self, out: &mut Vec<Formula>) {
        match &mut self.node {
            Node::Lit { branches, .. } => {
                out.extend(branches.drain(..).map(|b| b.child));
            }
            Node::Binary { left, right, .. } => {
                out.push(std::mem::replace(&mut **left, Formula::one()));
                out.push(std::mem::replace(&mut **right, Formula::one()));
            }
            Node::Unary { child, .. } => {
                out.push(std::mem::replace(&mut **child, Formula::one()));
            }
        }
    }
}

impl Drop for Formula {
    fn drop(&mut self) {
        // Deep connective chains would otherwise recurse once per level.
        if self.size <= 1 {
            return;
        }
        let mut pending = Vec::new();
        self.detach_children(&mut pending);
        while let Some(mut f) = pending.pop() {
            if f.size > 1 {
                f.detach_children(&mut pending);
            }
        }
    }
}

fn lit_name(p: Polarity) -> &'static str {
    match p {
        Polarity::Opponent => "( )",
        Polarity::Player => "{ }",
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            Node::Lit { polarity, branches } => {
                let (open, close) = match polarity {
                    Polarity::Opponent => ('(', ')'),
                    Polarity::Player => ('{', '}'),
                };
                if branches.is_empty() {
                    return write!(f, "{open}{close}");
                }
                write!(f, "{open} ")?;
                for (i, b) in branches.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}:{}", b.label, b.child)?;
                }
                write!(f, " {close}")
            }
            Node::Binary { op, left, right } => write!(f, "{}({}, {})", op.name(), left, right),
            Node::Unary { op, child } => write!(f, "{}({})", op.name(), child),
        }
    }
}

/// The three kinds of sequent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SequentKind {
    /// `O |-o O'`
    Opponent,
    /// `O |- P`
    Mixed,
    /// `P |-p P'`
    Player,
}

impl SequentKind {
    pub fn turnstile(self) -> &'static str {
        match self {
            SequentKind::Opponent => "|-o",
            SequentKind::Mixed => "|-",
            SequentKind::Player => "|-p",
        }
    }

    pub fn polarities(self) -> (Polarity, Polarity) {
        match self {
            SequentKind::Opponent => (Polarity::Opponent, Polarity::Opponent),
            SequentKind::Mixed => (Polarity::Opponent, Polarity::Player),
            SequentKind::Player => (Polarity::Player, Polarity::Player),
        }
    }

    /// The kind that fits a pair of endpoint polarities, if any.
    pub fn for_polarities(lhs: Polarity, rhs: Polarity) -> Result<SequentKind> {
        match (lhs, rhs) {
            (Polarity::Opponent, Polarity::Opponent) => Ok(SequentKind::Opponent),
            (Polarity::Opponent, Polarity::Player) => Ok(SequentKind::Mixed),
            (Polarity::Player, Polarity::Player) => Ok(SequentKind::Player),
            (Polarity::Player, Polarity::Opponent) => Err(Error::NoMorphismDirection),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequent {
    kind: SequentKind,
    lhs: Formula,
    rhs: Formula,
}

impl Sequent {
    pub fn new(kind: SequentKind, lhs: Formula, rhs: Formula) -> Result<Sequent> {
        if lhs.polarity() == Polarity::Player && rhs.polarity() == Polarity::Opponent {
            return Err(Error::NoMorphismDirection);
        }
        let (pl, pr) = kind.polarities();
        if lhs.polarity() != pl || rhs.polarity() != pr {
            return Err(Error::SequentKind {
                turnstile: kind.turnstile(),
                expected: match kind {
                    SequentKind::Opponent => "opponent |-o opponent",
                    SequentKind::Mixed => "opponent |- player",
                    SequentKind::Player => "player |-p player",
                },
                found: format!("{} {} {}", lhs.polarity(), kind.turnstile(), rhs.polarity()),
            });
        }
        Ok(Sequent { kind, lhs, rhs })
    }

    pub fn kind(&self) -> SequentKind {
        self.kind
    }

    pub fn lhs(&self) -> &Formula {
        &self.lhs
    }

    pub fn rhs(&self) -> &Formula {
        &self.rhs
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.kind.turnstile(), self.rhs)
    }
}
