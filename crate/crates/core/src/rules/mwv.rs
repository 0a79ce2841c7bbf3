//! Quota removal that prefers votes that are otherwise wasted.

use crate::engine::{outlook, CandidateState, RemoveQuota, RunState};
use crate::rational::{self, Rational};
use num_traits::Zero;

/// Priority class of a supporter of the winner `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum WasteClass {
    /// Every approved candidate is in `W_j ∪ {w}`.
    FullyElected,
    /// Holds at least `ℓ_j(i, w)` winners once `w` is in.
    Satisfied,
    Other,
}

/// `(group, class)` for every approver of `winner`.
pub fn mwv_classes(run: &RunState<'_>, winner: usize) -> Vec<(usize, WasteClass)> {
    let e = run.election;
    let w = &run.committee;
    e.approvers(winner)
        .iter()
        .map(|&g| {
            let group = &e.groups()[g];
            let class = if group.approves.iter().all(|&c| c == winner || w.contains(c)) {
                WasteClass::FullyElected
            } else if w.hits(g) + 1 >= outlook(&run.levels, e, g, winner, w).level {
                WasteClass::Satisfied
            } else {
                WasteClass::Other
            };
            (g, class)
        })
        .collect()
}

/// Removes `q` from the supporters of `winner` class by class, draining a
/// class's slack completely before touching the next. Within the class that
/// finishes the quota, slack is taken proportionally.
pub fn mwv_removal(run: &RunState<'_>, winner: usize) -> Vec<Rational> {
    let e = run.election;
    let mut after = run.tally.fractions().to_vec();
    let mut need = run.quota();
    let classes = mwv_classes(run, winner);
    for class in [
        WasteClass::FullyElected,
        WasteClass::Satisfied,
        WasteClass::Other,
    ] {
        if need.is_zero() {
            break;
        }
        let members: Vec<(usize, Rational)> = classes
            .iter()
            .filter(|(_, c)| *c == class)
            .map(|&(g, _)| {
                (
                    g,
                    outlook(&run.levels, e, g, winner, &run.committee).slack(),
                )
            })
            .collect();
        let slack = members.iter().fold(Rational::zero(), |acc, (g, keep)| {
            acc + (&after[*g] - keep) * rational::from_int(e.groups()[*g].weight)
        });
        if slack.is_zero() {
            continue;
        }
        if slack <= need {
            for (g, keep) in members {
                after[g] = keep;
            }
            need -= slack;
        } else {
            let share = &need / &slack;
            for (g, keep) in members {
                let f = &after[g];
                after[g] = f - &share * (f - keep);
            }
            need = Rational::zero();
        }
    }
    after
}

/// [`mwv_removal`] as a removal hook.
#[derive(Debug, Clone, Copy, Default)]
pub struct MwvRemoval;

impl RemoveQuota for MwvRemoval {
    fn remove(
        &mut self,
        run: &RunState<'_>,
        winner: usize,
        _state: &CandidateState,
    ) -> Vec<Rational> {
        mwv_removal(run, winner)
    }
}
