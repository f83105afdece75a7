//! Enumeration budgets. Every exhaustive loop checks its workload against a
//! budget up front and refuses with [`crate::Error::BudgetExceeded`] instead
//! of running unbounded; a refusal is never a silent wrong answer.

/// Budgets for the exhaustive enumerations in the crate.
///
/// Environment variables override the defaults when constructed through
/// [`Limits::from_env`]: `LATFREE_LEVEL_BUDGET`, `LATFREE_COSET_BUDGET`,
/// `LATFREE_BOX_BUDGET`, `LATFREE_LINE_BUDGET`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Max candidates in one width-norm level scan, `(k+1)^(d+1) - k^(d+1)`.
    pub level_candidates: u128,
    /// Max index of a quotient group whose coset representatives are listed.
    pub coset_index: u128,
    /// Max bounding-box volume for direct integer-point enumeration.
    pub box_points: u128,
    /// Max number of lines of `(Z/pZ)^d` walked by a census or search.
    pub lines: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            level_candidates: 100_000_000,
            coset_index: 10_000_000,
            box_points: 100_000_000,
            lines: 2_000_000_000,
        }
    }
}

impl Limits {
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        let read = |name: &str| {
            std::env::var(name)
                .ok()
                .and_then(|v| v.trim().parse::<u128>().ok())
        };
        if let Some(v) = read("LATFREE_LEVEL_BUDGET") {
            limits.level_candidates = v;
        }
        if let Some(v) = read("LATFREE_COSET_BUDGET") {
            limits.coset_index = v;
        }
        if let Some(v) = read("LATFREE_BOX_BUDGET") {
            limits.box_points = v;
        }
        if let Some(v) = read("LATFREE_LINE_BUDGET") {
            limits.lines = v;
        }
        limits
    }

    pub(crate) fn check(&self, task: &'static str, needed: u128, budget: u128) -> crate::error::Result<()> {
        if needed > budget {
            Err(crate::Error::BudgetExceeded {
                task,
                needed,
                budget,
            })
        } else {
            Ok(())
        }
    }
}
