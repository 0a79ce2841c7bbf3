use super::TieBreak;
use crate::election::{exact_quota, Committee, Election};
use crate::engine::{
    initial_levels, observe, removed_mass, EngineError, FractionalTally, InvariantCheck,
    IterationLog, Outcome, PartialCommittee, Verification,
};
use crate::rational::{to_fraction_string as fs, Rational};
use num_traits::Zero;

/// Sequential rule that elects the candidate with the most remaining vote
/// mass and scales all its supporters down evenly so that exactly `q`
/// leaves (or everything, if at most `q` remains).
pub fn phragmen_stv(
    e: &Election,
    tb: &TieBreak,
    verify: Verification,
) -> Result<Outcome, EngineError> {
    let q = exact_quota(e);
    let mut w = PartialCommittee::new(e);
    let mut tally = FractionalTally::new(e);
    let mut levels = initial_levels(e);
    let mut log = IterationLog::default();

    while w.len() < e.k() {
        let supports: Vec<(usize, Rational)> =
            w.unelected().map(|c| (c, tally.support(e, c))).collect();
        log.ops += supports.len() as u64;
        let winner = tb
            .choose(supports.iter().map(|(c, s)| (*c, s, s)))
            .expect("k <= m leaves an unelected candidate");
        let s = &supports.iter().find(|(c, _)| *c == winner).unwrap().1;

        let mut after = tally.fractions().to_vec();
        for &g in e.approvers(winner) {
            after[g] = if *s <= q {
                Rational::zero()
            } else {
                &after[g] * (s - &q) / s
            };
        }
        if verify.is_on() {
            let removed = removed_mass(e, tally.fractions(), &after);
            let expected = if *s <= q { s.clone() } else { q.clone() };
            if removed != expected {
                return Err(EngineError::Invariant {
                    check: InvariantCheck::QuotaRemoval,
                    iteration: w.len(),
                    detail: format!("removed {} instead of {}", fs(&removed), fs(&expected)),
                });
            }
            let any_quota = supports.iter().any(|(_, v)| *v >= q);
            if any_quota && *s < q {
                return Err(EngineError::Invariant {
                    check: InvariantCheck::QuotaRemoval,
                    iteration: w.len(),
                    detail: "elected a candidate below quota while one above exists".into(),
                });
            }
        }

        log.records
            .push(observe(e, &levels, &w, &tally, winner, after.clone()));
        tally.advance(after);
        w.insert(e, winner);
        levels.refresh(e, &w, &mut log.ops);
    }

    let committee = Committee::new(e, w.members().to_vec()).expect("k distinct seats");
    Ok(Outcome { committee, log })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{IterationKind, StateTag};
    use crate::profiles;
    use crate::rational::{from_int, ratio};

    #[test]
    fn first_iteration_scales_c5_supporters() {
        let e = profiles::phragmen_stv_failure();
        let out = phragmen_stv(&e, &TieBreak::default(), Verification::On).unwrap();
        let first = &out.log.records[0];
        assert_eq!(first.chosen, 4);
        let after = first.fractions_after.as_ref().unwrap();
        for &g in e.approvers(4) {
            assert_eq!(after[g], ratio(122, 242));
        }
        assert_eq!(first.kind, IterationKind::Normal);
    }

    #[test]
    fn third_pick_is_eager_c6() {
        let e = profiles::phragmen_stv_failure();
        let out = phragmen_stv(&e, &TieBreak::default(), Verification::On).unwrap();
        let third = &out.log.records[2];
        assert_eq!(out.log.winners()[..3], [4, 7, 5]);
        let (_, s) = third.states.iter().find(|(c, _)| *c == 5).unwrap();
        assert_eq!(s.tag, StateTag::Eager);
        assert_eq!(s.removable, from_int(95));
        assert_eq!(third.kind, IterationKind::NotNormal);
    }

    #[test]
    fn committee_shape() {
        let e = profiles::phragmen_stv_failure();
        let out = phragmen_stv(&e, &TieBreak::default(), Verification::On).unwrap();
        let set = out.committee.sorted();
        assert!((4..21).all(|c| set.contains(&c)));
        assert_eq!(set.iter().filter(|&&c| c == 2 || c == 3).count(), 1);
    }

    #[test]
    fn unanimous_profile() {
        let e = profiles::unanimous(6, 3, 9);
        for tb in [TieBreak::default(), TieBreak::index_only()] {
            let out = phragmen_stv(&e, &tb, Verification::On).unwrap();
            assert_eq!(out.committee.sorted(), vec![0, 1, 2]);
        }
    }
}
