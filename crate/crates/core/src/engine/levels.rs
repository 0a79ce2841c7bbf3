//! Dissatisfaction levels of candidates and voters.

use super::tally::PartialCommittee;
use crate::election::{approver_weight, BallotGroup, Election};
use crate::rational::Rational;
use num_traits::Zero;

/// `ℓ_j(c)` for every candidate. Entries of elected candidates are frozen at
/// the value they had when elected and are never consulted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DissatisfactionTable {
    levels: Vec<usize>,
}

impl DissatisfactionTable {
    pub fn from_levels(levels: Vec<usize>) -> Self {
        DissatisfactionTable { levels }
    }

    pub fn level(&self, candidate: usize) -> usize {
        self.levels[candidate]
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    /// Maximum level over unelected candidates; 0 when none remain.
    pub fn max_unelected(&self, w: &PartialCommittee) -> usize {
        w.unelected().map(|c| self.levels[c]).max().unwrap_or(0)
    }

    /// Lowers each unelected candidate's level until it is a fixed point for
    /// `w`. `ops` counts approver-group visits and level comparisons.
    pub fn refresh(&mut self, e: &Election, w: &PartialCommittee, ops: &mut u64) {
        let (k, n) = (e.k() as u128, e.n() as u128);
        for c in w.unelected() {
            let mut level = self.levels[c];
            loop {
                *ops += 1;
                if level == 0 {
                    break;
                }
                let behind = unserved_weight(e, w, c, level, ops) as u128;
                if (level as u128) * n > k * behind {
                    level -= 1;
                } else {
                    break;
                }
            }
            self.levels[c] = level;
        }
    }
}

/// Weight of the voters approving `candidate` that hold fewer than `level`
/// winners.
pub fn unserved_weight(
    e: &Election,
    w: &PartialCommittee,
    candidate: usize,
    level: usize,
    ops: &mut u64,
) -> u64 {
    e.approvers(candidate)
        .iter()
        .filter(|&&g| {
            *ops += 1;
            w.hits(g) < level
        })
        .map(|&g| e.groups()[g].weight)
        .sum()
}

/// `ℓ_0(c) = ⌊k·n_c / n⌋`.
pub fn initial_levels(e: &Election) -> DissatisfactionTable {
    let (k, n) = (e.k() as u128, e.n() as u128);
    let levels = (0..e.num_candidates())
        .map(|c| (k * approver_weight(e, c) as u128 / n) as usize)
        .collect();
    DissatisfactionTable { levels }
}

/// Returns `t` refreshed against the committee `w`.
pub fn refresh_levels(
    t: &DissatisfactionTable,
    e: &Election,
    w: &PartialCommittee,
) -> DissatisfactionTable {
    let mut out = t.clone();
    out.refresh(e, w, &mut 0);
    out
}

/// `ℓ(c, W)` straight from its definition: the largest `ℓ ∈ 0..=k` with
/// `ℓ = ⌊(k/n)·|{i : c ∈ A_i, |A_i ∩ W| < ℓ}|⌋`. Does not depend on any
/// earlier table, so it serves as the reference for `refresh`.
pub fn level_from_definition(e: &Election, w: &PartialCommittee, candidate: usize) -> usize {
    let (k, n) = (e.k() as u128, e.n() as u128);
    (0..=e.k())
        .rev()
        .find(|&level| {
            let behind = unserved_weight(e, w, candidate, level, &mut 0) as u128;
            level as u128 == k * behind / n
        })
        .expect("level 0 is always a fixed point")
}

/// `ℓ_j(i, c)`: the largest level among the group's unelected approved
/// candidates other than `candidate` (0 if there are none).
pub fn voter_level(
    t: &DissatisfactionTable,
    group: &BallotGroup,
    candidate: usize,
    w: &PartialCommittee,
) -> usize {
    group
        .approves
        .iter()
        .filter(|&&c| c != candidate && !w.contains(c))
        .map(|&c| t.level(c))
        .max()
        .unwrap_or(0)
}

/// `ℓ_j(i)`: the largest level among the group's unelected approved
/// candidates.
pub fn voter_level_all(
    t: &DissatisfactionTable,
    group: &BallotGroup,
    w: &PartialCommittee,
) -> usize {
    group
        .approves
        .iter()
        .filter(|&&c| !w.contains(c))
        .map(|&c| t.level(c))
        .max()
        .unwrap_or(0)
}

/// A voter group's expectation if some candidate is elected next: its voter
/// level and the winners it already holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outlook {
    pub level: usize,
    pub hits: usize,
}

impl Outlook {
    pub fn expects_more(&self) -> bool {
        self.level > self.hits
    }

    /// `g`: fraction to keep for the remaining expected winners once one more
    /// approved candidate is in.
    pub fn slack(&self) -> Rational {
        if self.expects_more() {
            Rational::new(
                ((self.level - self.hits - 1) as u64).into(),
                (self.level as u64).into(),
            )
        } else {
            Rational::zero()
        }
    }

    /// `(ℓ − h)/ℓ`: fraction the group must still hold, or `None` if the group
    /// expects nothing more.
    pub fn floor(&self) -> Option<Rational> {
        self.expects_more().then(|| {
            Rational::new(
                ((self.level - self.hits) as u64).into(),
                (self.level as u64).into(),
            )
        })
    }
}

pub fn outlook(
    t: &DissatisfactionTable,
    e: &Election,
    group: usize,
    candidate: usize,
    w: &PartialCommittee,
) -> Outlook {
    Outlook {
        level: voter_level(t, &e.groups()[group], candidate, w),
        hits: w.hits(group),
    }
}

/// `g_i^j(c)` for the given group.
pub fn slack_g(
    t: &DissatisfactionTable,
    e: &Election,
    group: usize,
    candidate: usize,
    w: &PartialCommittee,
) -> Rational {
    outlook(t, e, group, candidate, w).slack()
}
