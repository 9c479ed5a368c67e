//! Polarized game logic: formulas, expanded game trees, graph games, three
//! provability engines, size analytics, and cut elimination on proof terms.

pub mod analytics;
pub mod connectives;
pub mod dp;
pub mod error;
pub mod game;
pub mod generate;
pub mod graph;
pub mod limits;
pub mod linear;
pub mod morphism;
pub mod naive;
pub mod polarity;
pub mod syntax;

pub use error::{Error, Result};
pub use game::{GameTree, Profile, SizeReport};
pub use limits::Limits;
pub use polarity::Polarity;
pub use syntax::{parse_formula, parse_sequent, BinOp, Formula, Label, Sequent, SequentKind, UnOp};
