use crate::error::{NearnessError, Result};

/// Name of the environment variable that caps every enumeration bound.
pub const ENV_MAX_ELEMS: &str = "NEARNESS_MAX_ELEMS";

/// Hard ceiling imposed by the single-word set representation.
pub const WORD_BITS: usize = 64;

/// Size limits for the exponential scans.
///
/// `powerset` covers scans of all subsets of P, `double_powerset` covers
/// nearness and restriction queries, `replacement` covers the directed
/// replacement which lives on the powerset of P.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub powerset: usize,
    pub double_powerset: usize,
    pub replacement: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            powerset: 20,
            double_powerset: 14,
            replacement: 8,
        }
    }
}

impl Bounds {
    /// Every bound set to `k`.
    pub fn uniform(k: usize) -> Self {
        Bounds {
            powerset: k,
            double_powerset: k,
            replacement: k,
        }
    }

    /// Defaults, overridden by `NEARNESS_MAX_ELEMS` when it parses.
    pub fn from_env() -> Self {
        std::env::var(ENV_MAX_ELEMS)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .map(Bounds::uniform)
            .unwrap_or_default()
    }

    pub(crate) fn check_powerset(&self, what: &'static str, n: usize) -> Result<()> {
        check(what, n, self.powerset)
    }

    pub(crate) fn check_double(&self, what: &'static str, n: usize) -> Result<()> {
        check(what, n, self.double_powerset)
    }

    pub(crate) fn check_replacement(&self, what: &'static str, n: usize) -> Result<()> {
        // the family bitsets of the replacement hold at most 256 subsets
        check(what, n, self.replacement.min(8))
    }
}

fn check(what: &'static str, size: usize, bound: usize) -> Result<()> {
    let bound = bound.min(WORD_BITS - 1);
    if size > bound {
        Err(NearnessError::BoundExceeded { what, size, bound })
    } else {
        Ok(())
    }
}
