use super::mwv::MwvRemoval;
use super::TieBreak;
use crate::election::Election;
use crate::engine::{
    outlook, run_ejr_exact, CandidateState, Completion, EngineError, FractionalTally, Outcome,
    PartialCommittee, RemoveQuota, RunState, SelectNormal, Verification,
};
use crate::rational::Rational;
use num_traits::Zero;

/// Selects the normal candidate with the largest remaining support.
#[derive(Debug, Clone, Default)]
pub struct MaxSupport {
    pub tie_break: TieBreak,
}

impl SelectNormal for MaxSupport {
    fn select(&mut self, _run: &RunState<'_>, normal: &[(usize, CandidateState)]) -> usize {
        self.tie_break
            .choose(normal.iter().map(|(c, s)| (*c, &s.support, &s.support)))
            .expect("normal set is non-empty")
    }
}

/// Scales every supporter's removable slack `f − g` by the same factor
/// `q / x_w`.
#[derive(Debug, Clone, Copy, Default)]
pub struct EvenRemoval;

impl RemoveQuota for EvenRemoval {
    fn remove(
        &mut self,
        run: &RunState<'_>,
        winner: usize,
        state: &CandidateState,
    ) -> Vec<Rational> {
        let e = run.election;
        let share = run.quota() / &state.removable;
        let mut after = run.tally.fractions().to_vec();
        for &g in e.approvers(winner) {
            let keep = outlook(&run.levels, e, g, winner, &run.committee).slack();
            let f = &after[g];
            after[g] = f - &share * (f - keep);
        }
        after
    }
}

/// Elects the unelected candidate with the largest remaining support and
/// removes all of its supporters' votes.
#[derive(Debug, Clone, Default)]
pub struct MaxSupportCompletion {
    pub tie_break: TieBreak,
}

impl MaxSupportCompletion {
    pub fn new(tie_break: TieBreak) -> Self {
        MaxSupportCompletion { tie_break }
    }
}

impl Completion for MaxSupportCompletion {
    fn next_seat(
        &mut self,
        e: &Election,
        w: &PartialCommittee,
        tally: &mut FractionalTally,
    ) -> usize {
        let supports: Vec<(usize, Rational)> =
            w.unelected().map(|c| (c, tally.support(e, c))).collect();
        let winner = self
            .tie_break
            .choose(supports.iter().map(|(c, s)| (*c, s, s)))
            .expect("an unelected candidate remains");
        for &g in e.approvers(winner) {
            tally.set(g, Rational::zero());
        }
        winner
    }
}

/// Normal iterations with the largest-support selector and even slack
/// removal; remaining seats by largest remaining support.
pub fn ejr_lr_even(
    e: &Election,
    tb: &TieBreak,
    verify: Verification,
) -> Result<Outcome, EngineError> {
    run_ejr_exact(
        e,
        &mut MaxSupport {
            tie_break: tb.clone(),
        },
        &mut EvenRemoval,
        &mut MaxSupportCompletion::new(tb.clone()),
        verify,
    )
}

/// As [`ejr_lr_even`], with removal that drains already-served voters first.
pub fn ejr_mwv_even(
    e: &Election,
    tb: &TieBreak,
    verify: Verification,
) -> Result<Outcome, EngineError> {
    run_ejr_exact(
        e,
        &mut MaxSupport {
            tie_break: tb.clone(),
        },
        &mut MwvRemoval,
        &mut MaxSupportCompletion::new(tb.clone()),
        verify,
    )
}
