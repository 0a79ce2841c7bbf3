use super::levels::{outlook, DissatisfactionTable};
use super::tally::{FractionalTally, PartialCommittee};
use crate::election::{exact_quota, Election};
use crate::rational::{self, Rational};
use num_traits::Zero;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateTag {
    /// Safe to elect: every supporter is above its retention floor and
    /// `q` can be removed from the removable slack.
    Normal,
    /// Some supporter has already dropped below its retention floor.
    Starving,
    /// Enough support, but removing `q` would over-drain supporters.
    Eager,
    /// Remaining support below `q`.
    InsufficientlySupported,
}

/// Classification of an unelected candidate, with the quantities behind it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateState {
    pub tag: StateTag,
    /// `s_c = Σ weight·f` over approvers.
    pub support: Rational,
    /// `x_c = Σ weight·(f − g)` over approvers.
    pub removable: Rational,
    /// First approving group found below its retention floor.
    pub starving_group: Option<usize>,
}

impl CandidateState {
    pub fn is_normal(&self) -> bool {
        self.tag == StateTag::Normal
    }
}

pub fn classify(
    e: &Election,
    t: &DissatisfactionTable,
    tally: &FractionalTally,
    candidate: usize,
    w: &PartialCommittee,
) -> CandidateState {
    let mut support = Rational::zero();
    let mut removable = Rational::zero();
    let mut starving_group = None;
    for &g in e.approvers(candidate) {
        let f = tally.fraction(g);
        let weight = rational::from_int(e.groups()[g].weight);
        let view = outlook(t, e, g, candidate, w);
        if starving_group.is_none() {
            if let Some(floor) = view.floor() {
                if *f < floor {
                    starving_group = Some(g);
                }
            }
        }
        support += f * &weight;
        removable += (f - view.slack()) * weight;
    }
    let q = exact_quota(e);
    let tag = if starving_group.is_some() {
        StateTag::Starving
    } else if removable >= q {
        StateTag::Normal
    } else if support >= q {
        StateTag::Eager
    } else {
        StateTag::InsufficientlySupported
    };
    CandidateState {
        tag,
        support,
        removable,
        starving_group,
    }
}

/// Classifies every unelected candidate, in index order.
pub fn classify_all(
    e: &Election,
    t: &DissatisfactionTable,
    tally: &FractionalTally,
    w: &PartialCommittee,
) -> Vec<(usize, CandidateState)> {
    w.unelected()
        .map(|c| (c, classify(e, t, tally, c, w)))
        .collect()
}
