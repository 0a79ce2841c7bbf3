use super::rav::RavCompletion;
use super::TieBreak;
use crate::election::{Committee, Election};
use crate::engine::{
    initial_levels, level_from_definition, level_snapshot, unserved_weight, Completion,
    EngineError, FractionalTally, InvariantCheck, IterationKind, IterationLog, IterationRecord,
    Outcome, PartialCommittee, Verification,
};

/// Elects candidates of maximum dissatisfaction level while any level is
/// positive, then hands the remaining seats to `complete`. Keeps no tally;
/// `complete` sees every voter at a whole vote.
///
/// Level ties are broken by the weight of the voters still short of the
/// candidate's level, then by priority.
pub fn sejr(
    e: &Election,
    tb: &TieBreak,
    complete: &mut dyn Completion,
    verify: Verification,
) -> Result<Outcome, EngineError> {
    let k = e.k();
    let mut w = PartialCommittee::new(e);
    let mut levels = initial_levels(e);
    let mut log = IterationLog::default();
    log.ops += e
        .groups()
        .iter()
        .map(|g| g.approves.len() as u64)
        .sum::<u64>();

    loop {
        let top = w.unelected().map(|c| levels.level(c)).max().unwrap_or(0);
        log.ops += (e.num_candidates() - w.len()) as u64;
        if w.len() == k || top == 0 {
            break;
        }
        let mut ops = 0;
        let winner = tb
            .choose(
                w.unelected()
                    .filter(|&c| levels.level(c) == top)
                    .map(|c| (c, top, unserved_weight(e, &w, c, top, &mut ops)))
                    .collect::<Vec<_>>(),
            )
            .expect("some candidate has the top level");
        log.ops += ops;
        log.records.push(IterationRecord {
            kind: IterationKind::Normal,
            chosen: winner,
            fractions_before: None,
            fractions_after: None,
            levels: level_snapshot(&levels, &w),
            states: Vec::new(),
        });
        w.insert(e, winner);
        log.ops += e.approvers(winner).len() as u64;
        let previous = levels.clone();
        levels.refresh(e, &w, &mut log.ops);
        if verify.is_on() {
            for c in w.unelected() {
                *log.checks
                    .entry(InvariantCheck::RefreshFixedPoint)
                    .or_insert(0) += 1;
                let direct = level_from_definition(e, &w, c);
                if levels.level(c) != direct || levels.level(c) > previous.level(c) {
                    return Err(EngineError::Invariant {
                        check: InvariantCheck::RefreshFixedPoint,
                        iteration: w.len(),
                        detail: format!("candidate {c}: {} vs {direct}", levels.level(c)),
                    });
                }
            }
        }
    }

    let mut tally = FractionalTally::new(e);
    while w.len() < k {
        let chosen = complete.next_seat(e, &w, &mut tally);
        if chosen >= e.num_candidates() || w.contains(chosen) {
            return Err(EngineError::Hook {
                hook: crate::engine::Hook::Complete,
                clause: "new seat must be an unelected candidate",
                iteration: w.len() + 1,
                group: None,
                detail: format!("returned candidate {chosen}"),
            });
        }
        log.records.push(IterationRecord {
            kind: IterationKind::InsufficientlySupported,
            chosen,
            fractions_before: None,
            fractions_after: None,
            levels: level_snapshot(&levels, &w),
            states: Vec::new(),
        });
        w.insert(e, chosen);
    }

    let committee = Committee::new(e, w.members().to_vec()).expect("k distinct seats");
    Ok(Outcome { committee, log })
}

/// SEJR with reweighted approval voting for the remaining seats.
pub fn sejr_rav(e: &Election, tb: &TieBreak, verify: Verification) -> Result<Outcome, EngineError> {
    sejr(
        e,
        tb,
        &mut RavCompletion {
            tie_break: tb.clone(),
        },
        verify,
    )
}
