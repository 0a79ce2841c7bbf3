//! Runtime checks of the properties that hold while every iteration so far
//! has been normal.

use super::levels::{level_from_definition, voter_level_all, DissatisfactionTable};
use super::state::{CandidateState, StateTag};
use super::tally::{FractionalTally, PartialCommittee};
use super::EngineError;
use crate::election::{exact_quota, Election};
use crate::rational::{self, to_fraction_string as fs, Rational};
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvariantCheck {
    /// Exactly `q` of vote mass leaves at every normal iteration.
    QuotaRemoval,
    /// Remaining mass is `n − j·q` after `j` normal iterations.
    MassConservation,
    /// Every group is served or keeps `(ℓ_j(i) − h)/ℓ_j(i)` of its vote.
    RetentionFloor,
    /// No unelected candidate is starving.
    NoStarving,
    /// Every candidate with positive level has `q` of reserve mass.
    QuotaReserve,
    /// An eager candidate implies some normal candidate.
    NormalWhileEager,
    /// Refreshed levels match the level definition.
    RefreshFixedPoint,
    /// `removable ≤ support`, so eager and insufficiently supported are
    /// disjoint.
    StatePartition,
    /// Stage 2 starts only with every candidate insufficiently supported.
    StageTwoEntry,
}

impl fmt::Display for InvariantCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InvariantCheck::QuotaRemoval => "quota-removal identity",
            InvariantCheck::MassConservation => "mass conservation n - j*q",
            InvariantCheck::RetentionFloor => "retention floor of every voter",
            InvariantCheck::NoStarving => "no starving candidate",
            InvariantCheck::QuotaReserve => "quota reserve of positive-level candidates",
            InvariantCheck::NormalWhileEager => "normal candidate exists while one is eager",
            InvariantCheck::RefreshFixedPoint => "refreshed level fixed point",
            InvariantCheck::StatePartition => "state partition",
            InvariantCheck::StageTwoEntry => {
                "stage-2 entry with all candidates insufficiently supported"
            }
        })
    }
}

pub(crate) struct Checker {
    enabled: bool,
    pub(crate) counts: BTreeMap<InvariantCheck, u64>,
}

impl Checker {
    pub(crate) fn new(enabled: bool) -> Self {
        Checker {
            enabled,
            counts: BTreeMap::new(),
        }
    }

    pub(crate) fn enabled(&self) -> bool {
        self.enabled
    }

    fn tick(&mut self, check: InvariantCheck) {
        *self.counts.entry(check).or_insert(0) += 1;
    }

    fn fail(check: InvariantCheck, iteration: usize, detail: String) -> EngineError {
        EngineError::Invariant {
            check,
            iteration,
            detail,
        }
    }

    /// Properties of the state reached after `w.len()` normal iterations.
    pub(crate) fn after_normal(
        &mut self,
        e: &Election,
        t: &DissatisfactionTable,
        tally: &FractionalTally,
        w: &PartialCommittee,
        states: &[(usize, CandidateState)],
    ) -> Result<(), EngineError> {
        if !self.enabled {
            return Ok(());
        }
        let j = w.len();
        let q = exact_quota(e);

        self.tick(InvariantCheck::MassConservation);
        let expected = rational::from_int(e.n()) - &q * rational::from_int(j as u64);
        let mass = tally.total_mass(e);
        if mass != expected {
            return Err(Self::fail(
                InvariantCheck::MassConservation,
                j,
                format!("remaining mass {} != {}", fs(&mass), fs(&expected)),
            ));
        }

        for (g, group) in e.groups().iter().enumerate() {
            self.tick(InvariantCheck::RetentionFloor);
            let level = voter_level_all(t, group, w);
            let hits = w.hits(g);
            if hits < level {
                let floor = Rational::new(((level - hits) as u64).into(), (level as u64).into());
                if *tally.fraction(g) < floor {
                    return Err(Self::fail(
                        InvariantCheck::RetentionFloor,
                        j,
                        format!(
                            "group {g}: fraction {} below floor {} (level {level}, hits {hits})",
                            fs(tally.fraction(g)),
                            fs(&floor)
                        ),
                    ));
                }
            }
        }

        for c in w.unelected() {
            let level = t.level(c);
            if level == 0 {
                continue;
            }
            self.tick(InvariantCheck::QuotaReserve);
            let reserve = e.approvers(c).iter().filter(|&&g| w.hits(g) < level).fold(
                Rational::zero(),
                |acc, &g| {
                    let keep = Rational::new(
                        ((level - w.hits(g) - 1) as u64).into(),
                        (level as u64).into(),
                    );
                    acc + (tally.fraction(g) - keep) * rational::from_int(e.groups()[g].weight)
                },
            );
            if reserve < q {
                return Err(Self::fail(
                    InvariantCheck::QuotaReserve,
                    j,
                    format!(
                        "candidate {c} (level {level}) has reserve {} < q",
                        fs(&reserve)
                    ),
                ));
            }
        }

        for (c, s) in states {
            self.tick(InvariantCheck::StatePartition);
            if s.removable > s.support {
                return Err(Self::fail(
                    InvariantCheck::StatePartition,
                    j,
                    format!("candidate {c}: removable exceeds support"),
                ));
            }
        }

        // The remaining two are only claimed while seats remain.
        if j < e.k() {
            for (c, s) in states {
                self.tick(InvariantCheck::NoStarving);
                if s.tag == StateTag::Starving {
                    return Err(Self::fail(
                        InvariantCheck::NoStarving,
                        j,
                        format!("candidate {c} starving via group {:?}", s.starving_group),
                    ));
                }
            }
            self.tick(InvariantCheck::NormalWhileEager);
            let eager = states.iter().find(|(_, s)| s.tag == StateTag::Eager);
            if let Some((c, _)) = eager {
                if !states.iter().any(|(_, s)| s.is_normal()) {
                    return Err(Self::fail(
                        InvariantCheck::NormalWhileEager,
                        j,
                        format!("candidate {c} eager and no candidate normal"),
                    ));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn quota_removed(
        &mut self,
        e: &Election,
        j: usize,
        before: &[Rational],
        after: &[Rational],
    ) -> Result<(), EngineError> {
        if !self.enabled {
            return Ok(());
        }
        self.tick(InvariantCheck::QuotaRemoval);
        let removed = removed_mass(e, before, after);
        let q = exact_quota(e);
        if removed != q {
            return Err(Self::fail(
                InvariantCheck::QuotaRemoval,
                j,
                format!("removed {} instead of {}", fs(&removed), fs(&q)),
            ));
        }
        Ok(())
    }

    pub(crate) fn refreshed(
        &mut self,
        e: &Election,
        t: &DissatisfactionTable,
        previous: &DissatisfactionTable,
        w: &PartialCommittee,
    ) -> Result<(), EngineError> {
        if !self.enabled {
            return Ok(());
        }
        for c in w.unelected() {
            self.tick(InvariantCheck::RefreshFixedPoint);
            let direct = level_from_definition(e, w, c);
            if t.level(c) != direct || t.level(c) > previous.level(c) {
                return Err(Self::fail(
                    InvariantCheck::RefreshFixedPoint,
                    w.len(),
                    format!(
                        "candidate {c}: refreshed {} (was {}), definition gives {direct}",
                        t.level(c),
                        previous.level(c)
                    ),
                ));
            }
        }
        Ok(())
    }

    pub(crate) fn stage_two_entry(
        &mut self,
        j: usize,
        states: &[(usize, CandidateState)],
    ) -> Result<(), EngineError> {
        if !self.enabled {
            return Ok(());
        }
        self.tick(InvariantCheck::StageTwoEntry);
        if let Some((c, s)) = states
            .iter()
            .find(|(_, s)| s.tag != StateTag::InsufficientlySupported)
        {
            return Err(Self::fail(
                InvariantCheck::StageTwoEntry,
                j,
                format!("candidate {c} is {:?} at stage-2 entry", s.tag),
            ));
        }
        Ok(())
    }
}

/// `Σ weight·(before − after)` over all groups.
pub(crate) fn removed_mass(e: &Election, before: &[Rational], after: &[Rational]) -> Rational {
    before
        .iter()
        .zip(after)
        .zip(e.groups())
        .fold(Rational::zero(), |acc, ((b, a), g)| {
            acc + (b - a) * rational::from_int(g.weight)
        })
}
