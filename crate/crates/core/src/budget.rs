//! Cooperative step budgets for exhaustive searches.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;

use thiserror::Error;

/// Raised when a search runs past its budget or is cancelled.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("resource limit exceeded in {what}: {used} > {limit}")]
pub struct ResourceLimit {
    pub what: String,
    pub used: u64,
    pub limit: u64,
}

/// A shared step counter. Every long-running search calls [`Budget::tick`]
/// and aborts with [`ResourceLimit`] once the limit is passed or the
/// cancellation flag is raised.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
    cancel: Option<Arc<AtomicBool>>,
}

impl Budget {
    pub const DEFAULT_STEPS: u64 = 50_000_000;

    pub fn new(limit: u64) -> Self {
        Self {
            limit,
            used: AtomicU64::new(0),
            cancel: None,
        }
    }

    pub fn unlimited() -> Self {
        Self::new(u64::MAX)
    }

    pub fn with_cancel(mut self, flag: Arc<AtomicBool>) -> Self {
        self.cancel = Some(flag);
        self
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    pub fn tick(&self, what: &str, steps: u64) -> Result<(), ResourceLimit> {
        let used = self
            .used
            .fetch_add(steps, Ordering::Relaxed)
            .saturating_add(steps);
        let cancelled = self
            .cancel
            .as_ref()
            .is_some_and(|c| c.load(Ordering::Relaxed));
        if used > self.limit || cancelled {
            return Err(ResourceLimit {
                what: what.to_string(),
                used,
                limit: self.limit,
            });
        }
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::new(Self::DEFAULT_STEPS)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tick_past_limit() {
        let b = Budget::new(10);
        assert!(b.tick("x", 10).is_ok());
        let err = b.tick("x", 1).unwrap_err();
        assert_eq!(err.used, 11);
    }

    #[test]
    fn cancellation_stops_search() {
        let flag = Arc::new(AtomicBool::new(false));
        let b = Budget::unlimited().with_cancel(flag.clone());
        assert!(b.tick("x", 1).is_ok());
        flag.store(true, Ordering::Relaxed);
        assert!(b.tick("x", 1).is_err());
    }
}
