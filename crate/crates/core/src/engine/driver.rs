//! The two-stage driver: normal iterations while some candidate is in a
//! normal state, then a completion hook for the remaining seats.

use super::invariants::{removed_mass, Checker, InvariantCheck};
use super::levels::{initial_levels, outlook, DissatisfactionTable};
use super::state::{classify_all, CandidateState, StateTag};
use super::tally::{FractionalTally, PartialCommittee};
use super::{EngineError, Hook, Verification};
use crate::election::{exact_quota, Committee, Election};
use crate::rational::{self, to_fraction_string as fs, Rational};
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;

/// Everything a hook may look at during a run.
#[derive(Debug, Clone)]
pub struct RunState<'e> {
    pub election: &'e Election,
    pub committee: PartialCommittee,
    pub tally: FractionalTally,
    pub levels: DissatisfactionTable,
}

impl<'e> RunState<'e> {
    pub fn new(election: &'e Election) -> Self {
        RunState {
            election,
            committee: PartialCommittee::new(election),
            tally: FractionalTally::new(election),
            levels: initial_levels(election),
        }
    }

    pub fn quota(&self) -> Rational {
        exact_quota(self.election)
    }

    pub fn support(&self, candidate: usize) -> Rational {
        self.tally.support(self.election, candidate)
    }
}

/// Picks the next winner among the candidates currently in a normal state.
pub trait SelectNormal {
    fn select(&mut self, run: &RunState<'_>, normal: &[(usize, CandidateState)]) -> usize;
}

/// Removes exactly `q` of vote mass from the approvers of `winner`, returning
/// the new fraction of every ballot group.
pub trait RemoveQuota {
    fn remove(
        &mut self,
        run: &RunState<'_>,
        winner: usize,
        state: &CandidateState,
    ) -> Vec<Rational>;
}

/// Fills one seat once no candidate is normal. May lower fractions in
/// `tally`; must return an unelected candidate.
pub trait Completion {
    fn next_seat(
        &mut self,
        e: &Election,
        committee: &PartialCommittee,
        tally: &mut FractionalTally,
    ) -> usize;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IterationKind {
    Normal,
    InsufficientlySupported,
    NotNormal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationRecord {
    pub kind: IterationKind,
    pub chosen: usize,
    /// Per-group fractions around this iteration; `None` for rules that keep
    /// no tally.
    pub fractions_before: Option<Vec<Rational>>,
    pub fractions_after: Option<Vec<Rational>>,
    /// `(candidate, level)` for every unelected candidate at selection time.
    pub levels: Vec<(usize, usize)>,
    /// State of every unelected candidate at selection time.
    pub states: Vec<(usize, CandidateState)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IterationLog {
    pub records: Vec<IterationRecord>,
    /// How many times each invariant was checked (verified mode only).
    pub checks: BTreeMap<InvariantCheck, u64>,
    /// Elementary steps spent on level maintenance and selection.
    pub ops: u64,
}

impl IterationLog {
    pub fn winners(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.chosen).collect()
    }

    pub fn normal_prefix(&self) -> usize {
        self.records
            .iter()
            .take_while(|r| r.kind == IterationKind::Normal)
            .count()
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub committee: Committee,
    pub log: IterationLog,
}

pub(crate) fn level_snapshot(
    t: &DissatisfactionTable,
    w: &PartialCommittee,
) -> Vec<(usize, usize)> {
    w.unelected().map(|c| (c, t.level(c))).collect()
}

/// First approver of `winner` whose new fraction is below
/// `(ℓ − |A_i ∩ W_j|)/ℓ`, with `ℓ = ℓ_{j−1}(i, winner)` and `W_j` including
/// the winner. `w` and `t` are the state before the winner is added.
fn floor_breach(
    e: &Election,
    t: &DissatisfactionTable,
    w: &PartialCommittee,
    winner: usize,
    after: &[Rational],
) -> Option<(usize, Rational)> {
    e.approvers(winner).iter().find_map(|&g| {
        let view = outlook(t, e, g, winner, w);
        let floor = view.floor().map(|_| view.slack())?;
        (after[g] < floor).then_some((g, floor))
    })
}

/// Validates a removal against the quota-removal contract. Always enforced,
/// regardless of verification mode.
pub fn check_removal(
    e: &Election,
    t: &DissatisfactionTable,
    w: &PartialCommittee,
    winner: usize,
    before: &[Rational],
    after: &[Rational],
) -> Result<(), EngineError> {
    let iteration = w.len() + 1;
    let err = |clause, group, detail| EngineError::Hook {
        hook: Hook::Remove,
        clause,
        iteration,
        group,
        detail,
    };
    if after.len() != before.len() {
        return Err(err(
            "one fraction per ballot group",
            None,
            format!("{} fractions for {} groups", after.len(), before.len()),
        ));
    }
    for (g, group) in e.groups().iter().enumerate() {
        let (b, a) = (&before[g], &after[g]);
        if !group.approves_candidate(winner) && a != b {
            return Err(err(
                "non-approvers unchanged",
                Some(g),
                format!("{} -> {}", fs(b), fs(a)),
            ));
        }
        if a > b || !rational::is_unit_interval(a) {
            return Err(err(
                "0 <= new fraction <= old fraction",
                Some(g),
                format!("{} -> {}", fs(b), fs(a)),
            ));
        }
    }
    let removed = removed_mass(e, before, after);
    let q = exact_quota(e);
    if removed != q {
        return Err(err(
            "exactly q removed",
            None,
            format!("removed {} with q = {}", fs(&removed), fs(&q)),
        ));
    }
    if let Some((g, floor)) = floor_breach(e, t, w, winner, after) {
        return Err(err(
            "fraction kept for expected winners",
            Some(g),
            format!("new fraction {} below {}", fs(&after[g]), fs(&floor)),
        ));
    }
    Ok(())
}

/// Which kind of iteration electing `winner` with the given new fractions
/// would be, judged against the state before it.
pub fn iteration_kind(
    e: &Election,
    t: &DissatisfactionTable,
    w: &PartialCommittee,
    winner: usize,
    state: &CandidateState,
    after: &[Rational],
) -> IterationKind {
    match state.tag {
        StateTag::Normal if floor_breach(e, t, w, winner, after).is_none() => IterationKind::Normal,
        StateTag::InsufficientlySupported => IterationKind::InsufficientlySupported,
        _ => IterationKind::NotNormal,
    }
}

/// Runs a rule of the two-stage family described by the three hooks.
pub fn run_ejr_exact(
    e: &Election,
    select: &mut dyn SelectNormal,
    remove: &mut dyn RemoveQuota,
    complete: &mut dyn Completion,
    verify: Verification,
) -> Result<Outcome, EngineError> {
    let k = e.k();
    let mut run = RunState::new(e);
    let mut checker = Checker::new(verify.is_on());
    let mut log = IterationLog::default();

    // Stage 1: normal iterations.
    let mut states = classify_all(e, &run.levels, &run.tally, &run.committee);
    loop {
        checker.after_normal(e, &run.levels, &run.tally, &run.committee, &states)?;
        if run.committee.len() == k {
            break;
        }
        let normal: Vec<(usize, CandidateState)> = states
            .iter()
            .filter(|(_, s)| s.is_normal())
            .cloned()
            .collect();
        log.ops += states.len() as u64;
        if normal.is_empty() {
            break;
        }
        let iteration = run.committee.len() + 1;
        let winner = select.select(&run, &normal);
        let Some((_, state)) = normal.iter().find(|(c, _)| *c == winner) else {
            return Err(EngineError::Hook {
                hook: Hook::Select,
                clause: "winner must be in a normal state",
                iteration,
                group: None,
                detail: format!("selected candidate {winner}"),
            });
        };
        let before = run.tally.fractions().to_vec();
        let after = remove.remove(&run, winner, state);
        check_removal(e, &run.levels, &run.committee, winner, &before, &after)?;
        checker.quota_removed(e, iteration, &before, &after)?;

        log.records.push(IterationRecord {
            kind: IterationKind::Normal,
            chosen: winner,
            fractions_before: Some(before),
            fractions_after: Some(after.clone()),
            levels: level_snapshot(&run.levels, &run.committee),
            states,
        });
        run.tally.advance(after);
        run.committee.insert(e, winner);
        let previous = checker.enabled().then(|| run.levels.clone());
        run.levels.refresh(e, &run.committee, &mut log.ops);
        if let Some(previous) = previous {
            checker.refreshed(e, &run.levels, &previous, &run.committee)?;
        }
        states = classify_all(e, &run.levels, &run.tally, &run.committee);
    }

    // Stage 2: insufficiently supported iterations.
    if run.committee.len() < k {
        checker.stage_two_entry(run.committee.len(), &states)?;
    }
    while run.committee.len() < k {
        let iteration = run.committee.len() + 1;
        let before = run.tally.fractions().to_vec();
        let chosen = complete.next_seat(e, &run.committee, &mut run.tally);
        if chosen >= e.num_candidates() || run.committee.contains(chosen) {
            return Err(EngineError::Hook {
                hook: Hook::Complete,
                clause: "new seat must be an unelected candidate",
                iteration,
                group: None,
                detail: format!("returned candidate {chosen}"),
            });
        }
        let after = run.tally.fractions().to_vec();
        if let Some(g) =
            (0..before.len()).find(|&g| after[g] > before[g] || after[g] < Rational::zero())
        {
            return Err(EngineError::Hook {
                hook: Hook::Complete,
                clause: "fractions only decrease and stay non-negative",
                iteration,
                group: Some(g),
                detail: format!("{} -> {}", fs(&before[g]), fs(&after[g])),
            });
        }
        log.records.push(IterationRecord {
            kind: IterationKind::InsufficientlySupported,
            chosen,
            fractions_before: Some(before),
            fractions_after: Some(after),
            levels: level_snapshot(&run.levels, &run.committee),
            states,
        });
        run.tally.bump();
        run.committee.insert(e, chosen);
        run.levels.refresh(e, &run.committee, &mut 0);
        states = classify_all(e, &run.levels, &run.tally, &run.committee);
    }

    log.checks = checker.counts;
    let committee = Committee::new(e, run.committee.members().to_vec())
        .expect("driver fills exactly k distinct seats");
    Ok(Outcome { committee, log })
}

/// Record for an iteration of a rule outside the driver, classified after
/// the fact.
pub(crate) fn observe(
    e: &Election,
    t: &DissatisfactionTable,
    w: &PartialCommittee,
    tally: &FractionalTally,
    winner: usize,
    after: Vec<Rational>,
) -> IterationRecord {
    let states = classify_all(e, t, tally, w);
    let kind = states
        .iter()
        .find(|(c, _)| *c == winner)
        .map(|(_, s)| iteration_kind(e, t, w, winner, s, &after))
        .unwrap_or(IterationKind::NotNormal);
    IterationRecord {
        kind,
        chosen: winner,
        fractions_before: Some(tally.fractions().to_vec()),
        fractions_after: Some(after),
        levels: level_snapshot(t, w),
        states,
    }
}
