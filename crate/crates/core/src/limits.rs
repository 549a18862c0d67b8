//! Resource caps for the exponential searches.
//!
//! Every capped search reports [`crate::Error::CapExceeded`] instead of
//! returning a truncated answer.

pub const CAP_ENV_VAR: &str = "POLYSTOCH_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Node expansions in the species canonical-form search.
    pub species_nodes: u64,
    /// Node expansions in the s-permanent exact-cover search.
    pub permanent_s_nodes: u64,
    /// Node expansions in transversal-cover and similar exact-cover searches.
    pub cover_nodes: u64,
    /// Node expansions in Latin completion enumerations.
    pub enumeration_nodes: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            species_nodes: 10_000_000,
            permanent_s_nodes: 100_000_000,
            cover_nodes: 100_000_000,
            enumeration_nodes: 100_000_000,
        }
    }
}

impl Limits {
    /// Every cap set to the same value.
    pub fn uniform(cap: u64) -> Self {
        Limits {
            species_nodes: cap,
            permanent_s_nodes: cap,
            cover_nodes: cap,
            enumeration_nodes: cap,
        }
    }

    /// Defaults, or a single override for all caps taken from `POLYSTOCH_CAP`.
    pub fn from_env() -> Self {
        std::env::var(CAP_ENV_VAR)
            .ok()
            .and_then(|v| v.trim().replace('_', "").parse::<u64>().ok())
            .map(Limits::uniform)
            .unwrap_or_default()
    }
}

/// Counts node expansions against a cap.
#[derive(Debug)]
pub(crate) struct Budget {
    used: u64,
    cap: u64,
    what: &'static str,
}

impl Budget {
    pub(crate) fn new(cap: u64, what: &'static str) -> Self {
        Budget { used: 0, cap, what }
    }

    #[inline]
    pub(crate) fn tick(&mut self) -> crate::Result<()> {
        self.used += 1;
        if self.used > self.cap {
            Err(crate::Error::CapExceeded { what: self.what, cap: self.cap })
        } else {
            Ok(())
        }
    }
}
