//! Reference profiles used by tests, benches and documentation.

use crate::election::Election;

fn names(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("c{i}")).collect()
}

/// Ten voters, seven seats: four singleton voters for `c1..c4` and six voters
/// approving `{c5, c6, c7, c8}`. Removing whole votes per seat leaves the
/// group of six with only three winners although it is 4-cohesive.
pub fn hare_av_failure() -> Election {
    let mut ballots: Vec<(Vec<usize>, u64)> = (0..4).map(|c| (vec![c], 1)).collect();
    ballots.push((vec![4, 5, 6, 7], 6));
    Election::new(names(8), 7, ballots).expect("valid profile")
}

/// 2160 voters, 18 seats, 21 candidates (quota 120). Scaling down every
/// supporter of the winner evenly lets the 240 voters behind `{c1, c2}` end
/// with a single winner each.
pub fn phragmen_stv_failure() -> Election {
    let c = |i: usize| i - 1;
    let mut ballots = vec![
        (vec![c(1), c(2), c(5)], 120),
        (vec![c(1), c(2), c(6)], 120),
        (vec![c(5), c(7)], 122),
        (vec![c(3), c(4), c(6)], 70),
        (vec![c(3), c(4)], 50),
        (vec![c(3), c(4), c(8)], 120),
        (vec![c(8), c(9)], 121),
        (vec![c(7)], 52),
        (vec![c(9)], 65),
    ];
    for i in 1..=12 {
        ballots.push((vec![c(9 + i)], 110));
    }
    Election::new(names(21), 18, ballots).expect("valid profile")
}

/// Every voter approves the first `k` of `m` candidates.
pub fn unanimous(m: usize, k: usize, voters: u64) -> Election {
    Election::new(names(m), k, [((0..k).collect(), voters)]).expect("valid profile")
}
