use super::TieBreak;
use crate::election::{approver_weight, Committee, Election};
use crate::engine::{
    initial_levels, level_snapshot, refresh_levels, Completion, FractionalTally, IterationKind,
    IterationLog, IterationRecord, Outcome, PartialCommittee,
};
use crate::rational::{self, Rational};
use num_traits::Zero;

/// `Σ_{i : c ∈ A_i} 1 / (1 + |W ∩ A_i|)`, over all ballots at full weight.
pub fn rav_weight(e: &Election, w: &PartialCommittee, candidate: usize) -> Rational {
    e.approvers(candidate)
        .iter()
        .fold(Rational::zero(), |acc, &g| {
            acc + rational::ratio(e.groups()[g].weight, 1 + w.hits(g) as u64)
        })
}

fn rav_pick(e: &Election, w: &PartialCommittee, tb: &TieBreak) -> usize {
    tb.choose(
        w.unelected()
            .map(|c| (c, rav_weight(e, w, c), approver_weight(e, c))),
    )
    .expect("an unelected candidate remains")
}

/// Extends `start` by `seats` reweighted-approval picks. Ties on approval
/// weight fall back to raw approval counts under the support policy.
pub fn rav(e: &Election, start: &[usize], tb: &TieBreak, seats: usize) -> Vec<usize> {
    assert!(
        start.len() + seats <= e.num_candidates(),
        "not enough candidates"
    );
    let mut w = PartialCommittee::from_members(e, start);
    (0..seats)
        .map(|_| {
            let c = rav_pick(e, &w, tb);
            w.insert(e, c);
            c
        })
        .collect()
}

/// Reweighted approval voting as a completion hook. Leaves the tally alone.
#[derive(Debug, Clone, Default)]
pub struct RavCompletion {
    pub tie_break: TieBreak,
}

impl Completion for RavCompletion {
    fn next_seat(
        &mut self,
        e: &Election,
        w: &PartialCommittee,
        _tally: &mut FractionalTally,
    ) -> usize {
        rav_pick(e, w, &self.tie_break)
    }
}

/// Plain RAV from the empty committee, with a log of the picks.
pub(crate) fn rav_rule(e: &Election, tb: &TieBreak) -> Outcome {
    let mut w = PartialCommittee::new(e);
    let mut levels = initial_levels(e);
    let mut log = IterationLog::default();
    while w.len() < e.k() {
        let c = rav_pick(e, &w, tb);
        log.records.push(IterationRecord {
            kind: IterationKind::NotNormal,
            chosen: c,
            fractions_before: None,
            fractions_after: None,
            levels: level_snapshot(&levels, &w),
            states: Vec::new(),
        });
        w.insert(e, c);
        levels = refresh_levels(&levels, e, &w);
    }
    Outcome {
        committee: Committee::new(e, w.members().to_vec()).expect("k distinct seats"),
        log,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles;
    use crate::rational::ratio;

    #[test]
    fn continuation_after_four_winners() {
        let e = profiles::phragmen_stv_failure();
        let start = [0, 2, 4, 7];
        let w = PartialCommittee::from_members(&e, &start);
        assert_eq!(rav_weight(&e, &w, 8), ratio(251, 2));
        let picks = rav(&e, &start, &TieBreak::default(), 14);
        let mut expected = vec![8, 6];
        expected.extend(9..21);
        assert_eq!(picks, expected);
    }

    #[test]
    fn single_seat_is_approval_winner() {
        let e = profiles::phragmen_stv_failure();
        assert_eq!(rav(&e, &[], &TieBreak::default(), 1), vec![4]);
    }
}
