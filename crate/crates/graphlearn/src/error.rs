//! Error type and the elementary-check meter shared by all searches.

use thiserror::Error;

/// Default ceiling on elementary checks per search invocation.
///
/// Overridable per call site; the CLI also honors the `GRAPHLEARN_BUDGET`
/// environment variable.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid arguments: {0}")]
    InvalidArguments(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid graph spec: {0}")]
    InvalidSpec(String),

    #[error("search budget exceeded after {spent} elementary checks (ceiling {ceiling})")]
    BudgetExceeded { spent: u64, ceiling: u64 },

    #[error("stage {stage} would add {would_add} fresh vertices, over the cap of {cap}")]
    StageCapExceeded {
        stage: usize,
        would_add: u128,
        cap: u64,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Counts elementary checks (edge probes, candidate assignments) against a
/// ceiling. Searches thread a `&mut Meter` and abort with
/// [`Error::BudgetExceeded`] once the ceiling is hit, so a refusal always
/// names the work actually attempted rather than an a-priori estimate.
#[derive(Debug)]
pub struct Meter {
    ceiling: u64,
    spent: u64,
}

impl Meter {
    pub fn new(ceiling: u64) -> Self {
        Meter { ceiling, spent: 0 }
    }

    pub fn unlimited() -> Self {
        Meter::new(u64::MAX)
    }

    pub fn spent(&self) -> u64 {
        self.spent
    }

    pub fn ceiling(&self) -> u64 {
        self.ceiling
    }

    #[inline]
    pub fn charge(&mut self, n: u64) -> Result<(), Error> {
        self.spent = self.spent.saturating_add(n);
        if self.spent > self.ceiling {
            Err(Error::BudgetExceeded {
                spent: self.spent,
                ceiling: self.ceiling,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Meter {
    fn default() -> Self {
        Meter::new(DEFAULT_BUDGET)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn meter_trips_at_ceiling() {
        let mut m = Meter::new(10);
        assert!(m.charge(10).is_ok());
        assert!(matches!(m.charge(1), Err(Error::BudgetExceeded { .. })));
    }
}
