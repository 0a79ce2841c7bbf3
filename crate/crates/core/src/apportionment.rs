//! Party-list apportionment: the reduction to approval profiles and the two
//! reference methods rules are compared against.

use crate::election::{Committee, Election, ElectionError};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ApportionError {
    #[error("malformed party-list input: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("at least one party is required")]
    NoParties,
    #[error("{parties} parties but {votes} vote counts")]
    LengthMismatch { parties: usize, votes: usize },
    #[error("seat count must be at least 1, got {0}")]
    Seats(i64),
    #[error("party {party:?} has negative votes {votes}")]
    NegativeVotes { party: String, votes: i64 },
    #[error("duplicate party {0:?}")]
    DuplicateParty(String),
    #[error("no party received any votes")]
    NoVotes,
    #[error("candidate index {0} lies outside the reduction")]
    OutsideReduction(usize),
    #[error(transparent)]
    Election(#[from] ElectionError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartyListDocument {
    pub parties: Vec<String>,
    pub votes: Vec<i64>,
    pub seats: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartyListElection {
    parties: Vec<String>,
    votes: Vec<u64>,
    seats: usize,
}

/// Seats per party, in party order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SeatAllocation(pub Vec<u64>);

impl SeatAllocation {
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl PartyListElection {
    /// Parties with zero votes are allowed; they simply receive no ballots in
    /// the reduction.
    pub fn new(
        parties: Vec<String>,
        votes: Vec<u64>,
        seats: usize,
    ) -> Result<Self, ApportionError> {
        if parties.is_empty() {
            return Err(ApportionError::NoParties);
        }
        if parties.len() != votes.len() {
            return Err(ApportionError::LengthMismatch {
                parties: parties.len(),
                votes: votes.len(),
            });
        }
        if seats == 0 {
            return Err(ApportionError::Seats(0));
        }
        let mut seen = BTreeSet::new();
        for p in &parties {
            if !seen.insert(p.as_str()) {
                return Err(ApportionError::DuplicateParty(p.clone()));
            }
        }
        if votes.iter().all(|&v| v == 0) {
            return Err(ApportionError::NoVotes);
        }
        Ok(PartyListElection {
            parties,
            votes,
            seats,
        })
    }

    /// Parties named `p1`, `p2`, ...
    pub fn from_votes(votes: &[u64], seats: usize) -> Result<Self, ApportionError> {
        let parties = (1..=votes.len()).map(|i| format!("p{i}")).collect();
        Self::new(parties, votes.to_vec(), seats)
    }

    pub fn parties(&self) -> &[String] {
        &self.parties
    }

    pub fn votes(&self) -> &[u64] {
        &self.votes
    }

    pub fn seats(&self) -> usize {
        self.seats
    }

    pub fn total_votes(&self) -> u64 {
        self.votes.iter().sum()
    }

    /// `⌊votes·k/n⌋` per party.
    pub fn lower_quotas(&self) -> Vec<u64> {
        let (n, k) = (self.total_votes() as u128, self.seats as u128);
        self.votes
            .iter()
            .map(|&v| (v as u128 * k / n) as u64)
            .collect()
    }
}

impl TryFrom<PartyListDocument> for PartyListElection {
    type Error = ApportionError;

    fn try_from(doc: PartyListDocument) -> Result<Self, ApportionError> {
        if doc.seats < 1 {
            return Err(ApportionError::Seats(doc.seats));
        }
        let mut votes = Vec::with_capacity(doc.votes.len());
        for (i, &v) in doc.votes.iter().enumerate() {
            if v < 0 {
                let party = doc.parties.get(i).cloned().unwrap_or_default();
                return Err(ApportionError::NegativeVotes { party, votes: v });
            }
            votes.push(v as u64);
        }
        PartyListElection::new(doc.parties, votes, doc.seats as usize)
    }
}

pub fn parse_party_list(json: &str) -> Result<PartyListElection, ApportionError> {
    let doc: PartyListDocument = serde_json::from_str(json)?;
    doc.try_into()
}

/// `k` candidates per party named `party:1..=k`; each party's voters form one
/// group approving exactly those candidates.
pub fn reduce_party_list(p: &PartyListElection) -> Election {
    let k = p.seats;
    let candidates = p
        .parties
        .iter()
        .flat_map(|party| (1..=k).map(move |j| format!("{party}:{j}")))
        .collect();
    let ballots = p
        .votes
        .iter()
        .enumerate()
        .filter(|&(_, &v)| v > 0)
        .map(|(i, &v)| ((i * k..(i + 1) * k).collect::<Vec<_>>(), v));
    Election::new(candidates, k, ballots).expect("party-list reduction is always well formed")
}

/// Seats won by each party, given a committee on `reduce_party_list(p)`.
pub fn committee_to_seats(
    p: &PartyListElection,
    w: &Committee,
) -> Result<SeatAllocation, ApportionError> {
    let mut seats = vec![0u64; p.parties.len()];
    for &c in &w.members {
        let party = c / p.seats;
        if party >= seats.len() {
            return Err(ApportionError::OutsideReduction(c));
        }
        seats[party] += 1;
    }
    Ok(SeatAllocation(seats))
}

/// Remainder of party `i` scaled by `n`: `votes·k mod n`.
fn scaled_remainders(p: &PartyListElection) -> Vec<u128> {
    let (n, k) = (p.total_votes() as u128, p.seats as u128);
    p.votes.iter().map(|&v| v as u128 * k % n).collect()
}

/// Lower quotas, then one more seat to each of the largest remainders; equal
/// remainders go to the earlier party.
pub fn largest_remainders(p: &PartyListElection) -> SeatAllocation {
    let mut seats = p.lower_quotas();
    let left = p.seats as u64 - seats.iter().sum::<u64>();
    let rem = scaled_remainders(p);
    let mut order: Vec<usize> = (0..seats.len()).collect();
    order.sort_by(|&a, &b| rem[b].cmp(&rem[a]).then(a.cmp(&b)));
    for &i in order.iter().take(left as usize) {
        seats[i] += 1;
    }
    SeatAllocation(seats)
}

/// Compares `votes_a / (seats_a + 1)` with `votes_b / (seats_b + 1)`.
fn quotient_cmp(va: u64, sa: u64, vb: u64, sb: u64) -> Ordering {
    (va as u128 * (sb as u128 + 1)).cmp(&(vb as u128 * (sa as u128 + 1)))
}

/// `k` rounds, each seat to the highest `votes/(seats + 1)`; ties go to the
/// earlier party.
pub fn dhondt(p: &PartyListElection) -> SeatAllocation {
    let mut seats = vec![0u64; p.parties.len()];
    for _ in 0..p.seats {
        let mut best = 0;
        for i in 1..seats.len() {
            if quotient_cmp(p.votes[i], seats[i], p.votes[best], seats[best]) == Ordering::Greater {
                best = i;
            }
        }
        seats[best] += 1;
    }
    SeatAllocation(seats)
}

/// Every way to hand `extra` seats to distinct parties among `tied`.
fn spread(base: &[u64], tied: &[usize], extra: usize) -> BTreeSet<SeatAllocation> {
    fn go(base: &mut Vec<u64>, tied: &[usize], extra: usize, out: &mut BTreeSet<SeatAllocation>) {
        if extra == 0 {
            out.insert(SeatAllocation(base.clone()));
            return;
        }
        if tied.len() < extra {
            return;
        }
        base[tied[0]] += 1;
        go(base, &tied[1..], extra - 1, out);
        base[tied[0]] -= 1;
        go(base, &tied[1..], extra, out);
    }
    let mut out = BTreeSet::new();
    go(&mut base.to_vec(), tied, extra, &mut out);
    out
}

/// All allocations largest remainders can produce under some ordering of
/// equal remainders.
pub fn largest_remainders_closure(p: &PartyListElection) -> BTreeSet<SeatAllocation> {
    let mut seats = p.lower_quotas();
    let left = (p.seats as u64 - seats.iter().sum::<u64>()) as usize;
    if left == 0 {
        return BTreeSet::from([SeatAllocation(seats)]);
    }
    let rem = scaled_remainders(p);
    let mut sorted = rem.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let cut = sorted[left - 1];
    for (i, s) in seats.iter_mut().enumerate() {
        if rem[i] > cut {
            *s += 1;
        }
    }
    let tied: Vec<usize> = (0..rem.len()).filter(|&i| rem[i] == cut).collect();
    let extra = left - rem.iter().filter(|&&r| r > cut).count();
    spread(&seats, &tied, extra)
}

/// All allocations D'Hondt can produce under some resolution of equal
/// quotients.
///
/// The `k` winning quotients are exactly those above the `k`-th largest value
/// plus any choice among the quotients equal to it.
pub fn dhondt_closure(p: &PartyListElection) -> BTreeSet<SeatAllocation> {
    let k = p.seats as u64;
    // The k-th largest quotient is found among the first k divisors of each party.
    let mut quotients: Vec<(u64, u64)> = Vec::new();
    for &v in &p.votes {
        for d in 1..=k {
            quotients.push((v, d));
        }
    }
    quotients.sort_by(|a, b| (b.0 as u128 * a.1 as u128).cmp(&(a.0 as u128 * b.1 as u128)));
    let (cv, cd) = quotients[k as usize - 1];
    let above = |v: u64, d: u64| v as u128 * cd as u128 > cv as u128 * d as u128;
    let equal = |v: u64, d: u64| v as u128 * cd as u128 == cv as u128 * d as u128;
    let mut base = vec![0u64; p.votes.len()];
    let mut tied = Vec::new();
    for (i, &v) in p.votes.iter().enumerate() {
        base[i] = (1..=k).filter(|&d| above(v, d)).count() as u64;
        // A party can hold at most one tied quotient: equal values need equal divisors.
        if (1..=k).any(|d| equal(v, d)) {
            tied.push(i);
        }
    }
    let extra = (k - base.iter().sum::<u64>()) as usize;
    spread(&base, &tied, extra)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Verification;
    use crate::rules::{Rule, TieBreak};

    fn seats(v: &[u64]) -> SeatAllocation {
        SeatAllocation(v.to_vec())
    }

    #[test]
    fn reduction_shape() {
        let p = PartyListElection::from_votes(&[3, 2], 2).unwrap();
        let e = reduce_party_list(&p);
        assert_eq!((e.num_candidates(), e.groups().len(), e.n()), (4, 2, 5));
        assert_eq!(e.name(2), "p2:1");
        let p = PartyListElection::from_votes(&[7, 5, 3], 5).unwrap();
        let e = reduce_party_list(&p);
        assert_eq!((e.num_candidates(), e.n()), (15, 15));
    }

    #[test]
    fn reference_methods() {
        let p = PartyListElection::from_votes(&[7, 5, 3], 5).unwrap();
        assert_eq!(p.lower_quotas(), vec![2, 1, 1]);
        assert_eq!(largest_remainders(&p), seats(&[2, 2, 1]));
        assert_eq!(dhondt(&p), seats(&[2, 2, 1]));
        let p = PartyListElection::from_votes(&[10, 0, 0], 4).unwrap();
        assert_eq!(largest_remainders(&p), seats(&[4, 0, 0]));
        assert_eq!(dhondt(&p), seats(&[4, 0, 0]));
        let p = PartyListElection::from_votes(&[100, 1], 3).unwrap();
        assert_eq!(dhondt(&p), seats(&[3, 0]));
        let p = PartyListElection::from_votes(&[4, 4, 4], 3).unwrap();
        assert_eq!(largest_remainders(&p), seats(&[1, 1, 1]));
        assert_eq!(dhondt(&p), seats(&[1, 1, 1]));
    }

    #[test]
    fn closures() {
        let p = PartyListElection::from_votes(&[1, 1, 1], 2).unwrap();
        let all: BTreeSet<_> = [seats(&[1, 1, 0]), seats(&[1, 0, 1]), seats(&[0, 1, 1])].into();
        assert_eq!(largest_remainders_closure(&p), all);
        assert_eq!(dhondt_closure(&p), all);
        // Quotient 6/2 ties with 3/1 for the second seat.
        let p = PartyListElection::from_votes(&[6, 3], 2).unwrap();
        assert_eq!(dhondt_closure(&p), [seats(&[1, 1]), seats(&[2, 0])].into());
        assert!(dhondt_closure(&p).contains(&dhondt(&p)));
        let p = PartyListElection::from_votes(&[7, 5, 3], 5).unwrap();
        assert_eq!(largest_remainders_closure(&p).len(), 1);
        assert_eq!(dhondt_closure(&p).len(), 1);
    }

    #[test]
    fn rules_through_reduction() {
        let p = PartyListElection::from_votes(&[7, 5, 3], 5).unwrap();
        let e = reduce_party_list(&p);
        let tb = TieBreak::default();
        let lr = Rule::EjrLrEven.run(&e, &tb, Verification::On).unwrap();
        assert_eq!(
            committee_to_seats(&p, &lr.committee).unwrap(),
            largest_remainders(&p)
        );
        let rav = Rule::SejrRav.run(&e, &tb, Verification::On).unwrap();
        assert_eq!(committee_to_seats(&p, &rav.committee).unwrap(), dhondt(&p));

        let single = PartyListElection::from_votes(&[5], 3).unwrap();
        let e = reduce_party_list(&single);
        for rule in Rule::ALL {
            let out = rule.run(&e, &tb, Verification::On).unwrap();
            assert_eq!(
                committee_to_seats(&single, &out.committee).unwrap(),
                seats(&[3])
            );
        }
    }

    #[test]
    fn committee_outside_reduction() {
        let p = PartyListElection::from_votes(&[3, 2], 2).unwrap();
        let w = Committee {
            members: vec![0, 9],
        };
        assert!(matches!(
            committee_to_seats(&p, &w),
            Err(ApportionError::OutsideReduction(9))
        ));
    }

    #[test]
    fn parsing() {
        let p = parse_party_list(r#"{"parties":["a","b"],"votes":[3,2],"seats":2}"#).unwrap();
        assert_eq!(p.parties(), ["a", "b"]);
        assert!(parse_party_list(r#"{"parties":["a"],"votes":[-1],"seats":2}"#).is_err());
        assert!(parse_party_list(r#"{"parties":["a"],"votes":[1],"seats":0}"#).is_err());
        assert!(parse_party_list(r#"{"parties":[],"votes":[],"seats":1}"#).is_err());
        assert!(parse_party_list(r#"{"parties":["a","a"],"votes":[1,1],"seats":1}"#).is_err());
    }
}
