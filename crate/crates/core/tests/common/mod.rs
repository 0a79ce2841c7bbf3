//! Seeded random profiles shared by the integration tests.
#![allow(dead_code)]

use ejr_core::apportionment::PartyListElection;
use ejr_core::Election;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small profile: `m ≤ 10`, `k ≤ min(5, m)`, total weight `≤ 20`.
///
/// Half the instances are built around two or three candidate blocks that
/// groups approve with small perturbations, so cohesive groups are common.
pub fn small_election(rng: &mut ChaCha8Rng) -> Election {
    let m = rng.gen_range(1..=10);
    let k = rng.gen_range(1..=m.min(5));
    let names = (1..=m).map(|i| format!("c{i}")).collect();
    let mut budget: u64 = rng.gen_range(1..=20);
    let blocks: Vec<Vec<usize>> = if rng.gen_bool(0.5) {
        let mut all: Vec<usize> = (0..m).collect();
        (0..rng.gen_range(2..=3))
            .map(|_| {
                all.shuffle(rng);
                all[..rng.gen_range(1..=m.min(4))].to_vec()
            })
            .collect()
    } else {
        Vec::new()
    };
    let mut ballots = Vec::new();
    while budget > 0 {
        let weight = rng.gen_range(1..=budget.min(6));
        budget -= weight;
        let mut approves: Vec<usize> = if !blocks.is_empty() && rng.gen_bool(0.7) {
            blocks.choose(rng).unwrap().clone()
        } else {
            let size = rng.gen_range(0..=m.min(4));
            rand::seq::index::sample(rng, m, size).into_vec()
        };
        if rng.gen_bool(0.25) {
            approves.push(rng.gen_range(0..m));
        }
        ballots.push((approves, weight));
    }
    Election::new(names, k, ballots).expect("generated profile is valid")
}

pub fn corpus(seed: u64, count: usize) -> Vec<Election> {
    let mut r = rng(seed);
    (0..count).map(|_| small_election(&mut r)).collect()
}

/// Up to 6 parties, `k ≤ 8`, votes `≤ 50` with at least one positive.
pub fn party_list(rng: &mut ChaCha8Rng) -> PartyListElection {
    let parties = rng.gen_range(1..=6);
    let seats = rng.gen_range(1..=8);
    loop {
        let votes: Vec<u64> = (0..parties).map(|_| rng.gen_range(0..=50)).collect();
        if votes.iter().any(|&v| v > 0) {
            return PartyListElection::from_votes(&votes, seats).expect("valid party list");
        }
    }
}
