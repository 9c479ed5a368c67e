use std::fmt;

use serde::{Deserialize, Serialize};

/// Which participant moves first at a position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Opponent,
    Player,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Opponent => Polarity::Player,
            Polarity::Player => Polarity::Opponent,
        }
    }

    pub fn is_opponent(self) -> bool {
        self == Polarity::Opponent
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Opponent => "opponent",
            Polarity::Player => "player",
        })
    }
}
