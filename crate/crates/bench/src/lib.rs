//! Synthetic profiles for benchmarking.

use ejr_core::Election;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `groups` ballot groups over `m` candidates, each approving a random subset
/// of size `1..=max_ballot` with weight `1..=max_weight`.
pub fn random_profile(
    seed: u64,
    m: usize,
    k: usize,
    groups: usize,
    max_ballot: usize,
    max_weight: u64,
) -> Election {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = (1..=m).map(|i| format!("c{i}")).collect();
    let ballots: Vec<(Vec<usize>, u64)> = (0..groups)
        .map(|_| {
            let size = rng.gen_range(1..=max_ballot.min(m));
            let approves = rand::seq::index::sample(&mut rng, m, size).into_vec();
            (approves, rng.gen_range(1..=max_weight))
        })
        .collect();
    Election::new(names, k, ballots).expect("generated profile is valid")
}

/// Approval clusters around party-like blocks: voters mostly approve a
/// contiguous block of candidates, with occasional extra picks.
pub fn clustered_profile(seed: u64, m: usize, k: usize, groups: usize) -> Election {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = (1..=m).map(|i| format!("c{i}")).collect();
    let block = (m / 4).max(1);
    let ballots: Vec<(Vec<usize>, u64)> = (0..groups)
        .map(|_| {
            let start = rng.gen_range(0..m);
            let mut approves: Vec<usize> = (start..(start + block).min(m)).collect();
            if rng.gen_bool(0.3) {
                approves.push(rng.gen_range(0..m));
            }
            (approves, rng.gen_range(1..=20))
        })
        .collect();
    Election::new(names, k, ballots).expect("generated profile is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let a = random_profile(7, 12, 4, 30, 5, 9);
        let b = random_profile(7, 12, 4, 30, 5, 9);
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(clustered_profile(3, 16, 5, 40).k(), 5);
    }
}
