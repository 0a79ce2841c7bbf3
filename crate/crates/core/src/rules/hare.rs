//! Greedy approval voting that removes whole votes, up to `⌈n/k⌉` per seat.

use super::TieBreak;
use crate::election::{approver_weight, Committee, Election};
use crate::engine::{
    initial_levels, observe, EngineError, FractionalTally, IterationLog, Outcome, PartialCommittee,
};
use crate::rational::{self, Rational};
use std::collections::{BTreeSet, HashSet};

/// Which whole votes HareAV removes when a candidate is elected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HareRemovalStrategy {
    /// From the approving groups in group order.
    ByGroupOrder,
    /// Every split across approving groups and every tie among top
    /// candidates, up to `node_limit` search states.
    Exhaustive { node_limit: u64 },
}

impl HareRemovalStrategy {
    pub const DEFAULT_NODE_LIMIT: u64 = 1_000_000;

    pub fn exhaustive() -> Self {
        HareRemovalStrategy::Exhaustive {
            node_limit: Self::DEFAULT_NODE_LIMIT,
        }
    }
}

#[derive(Debug, Clone)]
pub enum HareResult {
    Single(Outcome),
    /// Every reachable committee, as sorted member lists.
    Reachable(BTreeSet<Vec<usize>>),
}

fn removal_size(e: &Election) -> u64 {
    e.n().div_ceil(e.k() as u64)
}

fn remaining_approvals(e: &Election, remaining: &[u64], candidate: usize) -> u64 {
    e.approvers(candidate).iter().map(|&g| remaining[g]).sum()
}

fn as_tally(e: &Election, remaining: &[u64]) -> Vec<Rational> {
    remaining
        .iter()
        .zip(e.groups())
        .map(|(&r, g)| rational::ratio(r, g.weight))
        .collect()
}

/// HareAV removing votes in group order. The log reports each round with
/// remaining votes expressed as per-group fractions.
pub fn hare_av(e: &Election, tb: &TieBreak) -> Outcome {
    let per_seat = removal_size(e);
    let mut remaining: Vec<u64> = e.groups().iter().map(|g| g.weight).collect();
    let mut w = PartialCommittee::new(e);
    let mut levels = initial_levels(e);
    let mut log = IterationLog::default();
    let mut tally = FractionalTally::new(e);
    while w.len() < e.k() {
        let winner = tb
            .choose(w.unelected().map(|c| {
                (
                    c,
                    remaining_approvals(e, &remaining, c),
                    approver_weight(e, c),
                )
            }))
            .expect("an unelected candidate remains");
        let mut budget = per_seat;
        for &g in e.approvers(winner) {
            let take = budget.min(remaining[g]);
            remaining[g] -= take;
            budget -= take;
        }
        let after = as_tally(e, &remaining);
        log.records
            .push(observe(e, &levels, &w, &tally, winner, after.clone()));
        tally.advance(after);
        w.insert(e, winner);
        levels.refresh(e, &w, &mut log.ops);
    }
    Outcome {
        committee: Committee::new(e, w.members().to_vec()).expect("k distinct seats"),
        log,
    }
}

/// All committees HareAV can reach over every tie-breaking and every choice
/// of removed votes (at ballot-group granularity).
pub fn hare_av_reachable(
    e: &Election,
    node_limit: u64,
) -> Result<BTreeSet<Vec<usize>>, EngineError> {
    let mut search = Search {
        e,
        per_seat: removal_size(e),
        node_limit,
        nodes: 0,
        seen: HashSet::new(),
        found: BTreeSet::new(),
    };
    let remaining: Vec<u64> = e.groups().iter().map(|g| g.weight).collect();
    search.visit(Vec::new(), remaining)?;
    Ok(search.found)
}

pub fn hare_av_with(
    e: &Election,
    tb: &TieBreak,
    strategy: HareRemovalStrategy,
) -> Result<HareResult, EngineError> {
    match strategy {
        HareRemovalStrategy::ByGroupOrder => Ok(HareResult::Single(hare_av(e, tb))),
        HareRemovalStrategy::Exhaustive { node_limit } => {
            hare_av_reachable(e, node_limit).map(HareResult::Reachable)
        }
    }
}

struct Search<'e> {
    e: &'e Election,
    per_seat: u64,
    node_limit: u64,
    nodes: u64,
    seen: HashSet<(Vec<usize>, Vec<u64>)>,
    found: BTreeSet<Vec<usize>>,
}

impl Search<'_> {
    fn visit(&mut self, elected: Vec<usize>, remaining: Vec<u64>) -> Result<(), EngineError> {
        if !self.seen.insert((elected.clone(), remaining.clone())) {
            return Ok(());
        }
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Err(EngineError::SearchCap {
                limit: self.node_limit,
            });
        }
        let e = self.e;
        if elected.len() == e.k() {
            self.found.insert(elected);
            return Ok(());
        }
        let open: Vec<(usize, u64)> = (0..e.num_candidates())
            .filter(|c| elected.binary_search(c).is_err())
            .map(|c| (c, remaining_approvals(e, &remaining, c)))
            .collect();
        let best = open.iter().map(|&(_, a)| a).max().expect("k <= m");
        for &(winner, approvals) in open.iter().filter(|&&(_, a)| a == best) {
            let mut next = elected.clone();
            next.insert(next.binary_search(&winner).unwrap_err(), winner);
            let take = self.per_seat.min(approvals);
            let groups: Vec<usize> = e
                .approvers(winner)
                .iter()
                .copied()
                .filter(|&g| remaining[g] > 0)
                .collect();
            let mut splits = Vec::new();
            splits_of(
                &groups,
                &remaining,
                take,
                &mut remaining.clone(),
                &mut splits,
            );
            for after in splits {
                self.visit(next.clone(), after)?;
            }
        }
        Ok(())
    }
}

/// Every way to remove `take` votes from `groups` (bounded by `remaining`).
fn splits_of(
    groups: &[usize],
    remaining: &[u64],
    take: u64,
    cur: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) {
    let Some((&g, rest)) = groups.split_first() else {
        if take == 0 {
            out.push(cur.clone());
        }
        return;
    };
    let capacity_rest: u64 = rest.iter().map(|&h| remaining[h]).sum();
    let lo = take.saturating_sub(capacity_rest);
    let hi = take.min(remaining[g]);
    for r in lo..=hi {
        cur[g] = remaining[g] - r;
        splits_of(rest, remaining, take - r, cur, out);
    }
    cur[g] = remaining[g];
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles;

    #[test]
    fn reachable_committees_take_three_of_the_block() {
        let e = profiles::hare_av_failure();
        let all = hare_av_reachable(&e, HareRemovalStrategy::DEFAULT_NODE_LIMIT).unwrap();
        assert!(!all.is_empty());
        for w in &all {
            assert_eq!(w.iter().filter(|&&c| (4..8).contains(&c)).count(), 3);
            assert!((0..4).all(|c| w.contains(&c)));
        }
        // Which three of the block is free.
        assert_eq!(all.len(), 4);
    }

    #[test]
    fn by_group_order_matches_reachable_set() {
        let e = profiles::hare_av_failure();
        let single = hare_av(&e, &TieBreak::default());
        let all = hare_av_reachable(&e, 10_000).unwrap();
        assert!(all.contains(&single.committee.sorted()));
    }

    #[test]
    fn node_cap_is_reported() {
        let e = profiles::hare_av_failure();
        assert_eq!(
            hare_av_reachable(&e, 3).unwrap_err(),
            EngineError::SearchCap { limit: 3 }
        );
    }

    #[test]
    fn disjoint_singletons_with_n_equal_k() {
        let names = (0..5).map(|i| format!("c{i}")).collect();
        let e = Election::new(names, 3, [(vec![0], 1), (vec![1], 1), (vec![2], 1)]).unwrap();
        let out = hare_av(&e, &TieBreak::default());
        assert_eq!(out.committee.sorted(), vec![0, 1, 2]);
    }

    #[test]
    fn removal_splits_enumerated() {
        let mut out = Vec::new();
        let remaining = vec![2, 1, 5];
        splits_of(&[0, 1], &remaining, 2, &mut remaining.clone(), &mut out);
        out.sort();
        assert_eq!(out, vec![vec![0, 1, 5], vec![1, 0, 5]]);
    }
}
