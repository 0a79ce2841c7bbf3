//! Iteration machinery shared by the quota-removal rules: fractional
//! tallies, dissatisfaction levels, candidate states and the two-stage
//! driver parameterized by selection, removal and completion hooks.

mod driver;
mod invariants;
mod levels;
mod state;
mod tally;

pub use driver::{
    check_removal, iteration_kind, run_ejr_exact, Completion, IterationKind, IterationLog,
    IterationRecord, Outcome, RemoveQuota, RunState, SelectNormal,
};
pub use invariants::InvariantCheck;
pub use levels::{
    initial_levels, level_from_definition, outlook, refresh_levels, slack_g, unserved_weight,
    voter_level, voter_level_all, DissatisfactionTable, Outlook,
};
pub use state::{classify, classify_all, CandidateState, StateTag};
pub use tally::{FractionalTally, PartialCommittee};

use std::fmt;
use thiserror::Error;

/// Whether the runtime invariant checks run alongside a rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Verification {
    #[default]
    On,
    Off,
}

impl Verification {
    pub fn is_on(self) -> bool {
        self == Verification::On
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hook {
    Select,
    Remove,
    Complete,
}

impl fmt::Display for Hook {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hook::Select => "normal-candidate selection",
            Hook::Remove => "quota removal",
            Hook::Complete => "completion",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("{hook} hook broke its contract ({clause}) at iteration {iteration}{}: {detail}",
        .group.map(|g| format!(", ballot group {g}")).unwrap_or_default())]
    Hook {
        hook: Hook,
        clause: &'static str,
        iteration: usize,
        group: Option<usize>,
        detail: String,
    },
    #[error("invariant violated: {check} after {iteration} iterations: {detail}")]
    Invariant {
        check: InvariantCheck,
        iteration: usize,
        detail: String,
    },
    #[error("search exceeded the cap of {limit} nodes")]
    SearchCap { limit: u64 },
}

pub(crate) use driver::{level_snapshot, observe};
pub(crate) use invariants::removed_mass;
