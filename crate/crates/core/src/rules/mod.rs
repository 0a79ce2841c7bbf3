//! Concrete voting rules.

mod hare;
mod lr_even;
mod mwv;
mod phragmen;
mod rav;
mod sejr;

pub use hare::{hare_av, hare_av_reachable, hare_av_with, HareRemovalStrategy, HareResult};
pub use lr_even::{ejr_lr_even, ejr_mwv_even, EvenRemoval, MaxSupport, MaxSupportCompletion};
pub use mwv::{mwv_classes, mwv_removal, MwvRemoval, WasteClass};
pub use phragmen::phragmen_stv;
pub use rav::{rav, rav_weight, RavCompletion};
pub use sejr::{sejr, sejr_rav};

use crate::election::Election;
use crate::engine::{EngineError, Outcome, Verification};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiePolicy {
    /// Highest support first, then candidate priority.
    #[default]
    SupportThenIndex,
    /// Candidate priority only.
    IndexOnly,
}

/// Deterministic tie-breaking among candidates tied on a rule's primary
/// criterion. Priority defaults to input order (lower index wins).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TieBreak {
    pub policy: TiePolicy,
    rank: Option<Vec<usize>>,
}

impl TieBreak {
    pub fn new(policy: TiePolicy) -> Self {
        TieBreak { policy, rank: None }
    }

    pub fn index_only() -> Self {
        TieBreak::new(TiePolicy::IndexOnly)
    }

    /// Uses `order` (most preferred first, a permutation of all candidates)
    /// instead of index order as the final tie-break.
    pub fn with_priority(policy: TiePolicy, order: &[usize]) -> Self {
        let mut rank = vec![0; order.len()];
        for (r, &c) in order.iter().enumerate() {
            rank[c] = r;
        }
        TieBreak {
            policy,
            rank: Some(rank),
        }
    }

    fn rank(&self, candidate: usize) -> usize {
        self.rank.as_ref().map_or(candidate, |r| r[candidate])
    }

    /// Picks the item with the largest `primary`, then (under
    /// `SupportThenIndex`) the largest `support`, then the best priority.
    pub fn choose<P: Ord, S: Ord>(
        &self,
        items: impl IntoIterator<Item = (usize, P, S)>,
    ) -> Option<usize> {
        items
            .into_iter()
            .max_by(|a, b| {
                a.1.cmp(&b.1)
                    .then_with(|| match self.policy {
                        TiePolicy::SupportThenIndex => a.2.cmp(&b.2),
                        TiePolicy::IndexOnly => Ordering::Equal,
                    })
                    .then_with(|| self.rank(b.0).cmp(&self.rank(a.0)))
            })
            .map(|(c, _, _)| c)
    }
}

/// Registered rule names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    PhragmenStv,
    HareAv,
    EjrLrEven,
    Sejr,
    SejrRav,
    Rav,
    EjrMwvEven,
}

impl Rule {
    pub const ALL: [Rule; 7] = [
        Rule::PhragmenStv,
        Rule::HareAv,
        Rule::EjrLrEven,
        Rule::Sejr,
        Rule::SejrRav,
        Rule::Rav,
        Rule::EjrMwvEven,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::PhragmenStv => "phragmen-stv",
            Rule::HareAv => "hare-av",
            Rule::EjrLrEven => "ejr-lr-even",
            Rule::Sejr => "sejr",
            Rule::SejrRav => "sejr-rav",
            Rule::Rav => "rav",
            Rule::EjrMwvEven => "ejr-mwv-even",
        }
    }

    /// Runs the rule to a full committee. HareAV removes votes in group order.
    pub fn run(
        self,
        e: &Election,
        tb: &TieBreak,
        verify: Verification,
    ) -> Result<Outcome, EngineError> {
        match self {
            Rule::PhragmenStv => phragmen_stv(e, tb, verify),
            Rule::HareAv => Ok(hare_av(e, tb)),
            Rule::EjrLrEven => ejr_lr_even(e, tb, verify),
            Rule::Sejr => sejr(e, tb, &mut MaxSupportCompletion::new(tb.clone()), verify),
            Rule::SejrRav => sejr_rav(e, tb, verify),
            Rule::Rav => Ok(rav::rav_rule(e, tb)),
            Rule::EjrMwvEven => ejr_mwv_even(e, tb, verify),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown rule {0:?}")]
pub struct UnknownRule(pub String);

impl FromStr for Rule {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| UnknownRule(s.to_string()))
    }
}
