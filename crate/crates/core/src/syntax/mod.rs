//! Formula and sequent syntax.

pub mod formula;
pub mod parser;

pub use formula::{BinOp, Branch, Family, Formula, Label, Node, Sequent, SequentKind, UnOp};
pub use parser::{parse_formula, parse_sequent};
