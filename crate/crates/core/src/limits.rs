//! Resource limits shared by the expanding engines.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Default node budget for expansions and graph constructions.
pub const DEFAULT_MAX_NODES: u64 = 1_000_000;

/// Node budget and optional wall-clock limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_nodes: u64,
    pub timeout: Option<Duration>,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits {
            max_nodes: DEFAULT_MAX_NODES,
            timeout: None,
        }
    }
}

impl Limits {
    pub fn nodes(max_nodes: u64) -> Limits {
        Limits {
            max_nodes,
            timeout: None,
        }
    }

    pub fn with_timeout(self, timeout: Duration) -> Limits {
        Limits {
            timeout: Some(timeout),
            ..self
        }
    }
}

/// Counts produced nodes against a [`Limits`].
#[derive(Debug)]
pub(crate) struct Meter {
    produced: u64,
    max_nodes: u64,
    deadline: Option<(Instant, u64)>,
}

impl Meter {
    pub(crate) fn new(limits: Limits) -> Meter {
        Meter {
            produced: 0,
            max_nodes: limits.max_nodes,
            deadline: limits
                .timeout
                .map(|t| (Instant::now() + t, t.as_millis() as u64)),
        }
    }

    /// Records `n` new nodes.
    pub(crate) fn tick(&mut self, n: u64) -> Result<()> {
        let before = self.produced;
        self.produced += n;
        if self.produced > self.max_nodes {
            return Err(Error::BudgetExceeded {
                produced: self.produced,
                budget: self.max_nodes,
            });
        }
        if let Some((deadline, limit_ms)) = self.deadline {
            if before >> 12 != self.produced >> 12 && Instant::now() > deadline {
                return Err(Error::Timeout { limit_ms });
            }
        }
        Ok(())
    }
}
