//! Election data model: candidates, committee size and weighted ballot groups.

use crate::rational::{self, Rational};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ElectionError {
    #[error("malformed election document: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("election has no candidates")]
    NoCandidates,
    #[error("duplicate candidate name {0:?}")]
    DuplicateCandidate(String),
    #[error("committee size {k} out of range [1, {m}]")]
    CommitteeSize { k: i64, m: usize },
    #[error("unknown candidate {0:?}")]
    UnknownCandidate(String),
    #[error("candidate index {0} out of range")]
    CandidateIndex(usize),
    #[error("ballot {ballot} has non-positive weight {weight}")]
    NonPositiveWeight { ballot: usize, weight: i64 },
    #[error("election has no voters")]
    NoVoters,
    #[error("committee has {got} members, expected {expected}")]
    WrongCommitteeSize { expected: usize, got: usize },
    #[error("candidate {0:?} appears twice in the committee")]
    DuplicateMember(String),
}

/// Identical approval ballots cast by `weight` voters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BallotGroup {
    /// Sorted, duplicate-free candidate indices.
    pub approves: Vec<usize>,
    pub weight: u64,
}

impl BallotGroup {
    pub fn new(mut approves: Vec<usize>, weight: u64) -> Self {
        approves.sort_unstable();
        approves.dedup();
        BallotGroup { approves, weight }
    }

    pub fn approves_candidate(&self, candidate: usize) -> bool {
        self.approves.binary_search(&candidate).is_ok()
    }
}

/// A validated approval-based multi-winner election.
///
/// Ballots with identical approval sets are merged into one group, in order
/// of first appearance. Immutable once built.
#[derive(Debug, Clone)]
pub struct Election {
    candidates: Vec<String>,
    k: usize,
    groups: Vec<BallotGroup>,
    n: u64,
    approvers: Vec<Vec<usize>>,
}

impl Election {
    /// Builds an election from candidate names, a committee size and
    /// `(approval set, weight)` pairs over candidate indices.
    pub fn new(
        candidates: Vec<String>,
        k: usize,
        ballots: impl IntoIterator<Item = (Vec<usize>, u64)>,
    ) -> Result<Self, ElectionError> {
        let m = candidates.len();
        if m == 0 {
            return Err(ElectionError::NoCandidates);
        }
        let mut seen = HashMap::new();
        for (i, name) in candidates.iter().enumerate() {
            if seen.insert(name.as_str(), i).is_some() {
                return Err(ElectionError::DuplicateCandidate(name.clone()));
            }
        }
        if k == 0 || k > m {
            return Err(ElectionError::CommitteeSize { k: k as i64, m });
        }

        let mut groups: Vec<BallotGroup> = Vec::new();
        let mut position: HashMap<Vec<usize>, usize> = HashMap::new();
        for (ballot, (approves, weight)) in ballots.into_iter().enumerate() {
            if weight == 0 {
                return Err(ElectionError::NonPositiveWeight { ballot, weight: 0 });
            }
            let group = BallotGroup::new(approves, weight);
            if let Some(&c) = group.approves.iter().find(|&&c| c >= m) {
                return Err(ElectionError::CandidateIndex(c));
            }
            match position.get(&group.approves) {
                Some(&at) => groups[at].weight += group.weight,
                None => {
                    position.insert(group.approves.clone(), groups.len());
                    groups.push(group);
                }
            }
        }
        let n: u64 = groups.iter().map(|g| g.weight).sum();
        if n == 0 {
            return Err(ElectionError::NoVoters);
        }

        let mut approvers = vec![Vec::new(); m];
        for (gi, g) in groups.iter().enumerate() {
            for &c in &g.approves {
                approvers[c].push(gi);
            }
        }
        Ok(Election {
            candidates,
            k,
            groups,
            n,
            approvers,
        })
    }

    pub fn candidates(&self) -> &[String] {
        &self.candidates
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    /// Target committee size.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Total number of voters.
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn groups(&self) -> &[BallotGroup] {
        &self.groups
    }

    /// Indices of the groups approving `candidate`.
    pub fn approvers(&self, candidate: usize) -> &[usize] {
        &self.approvers[candidate]
    }

    pub fn candidate_index(&self, name: &str) -> Option<usize> {
        self.candidates.iter().position(|c| c == name)
    }

    pub fn name(&self, candidate: usize) -> &str {
        &self.candidates[candidate]
    }

    /// Same profile with a different committee size.
    pub fn with_k(&self, k: usize) -> Result<Self, ElectionError> {
        Election::new(
            self.candidates.clone(),
            k,
            self.groups.iter().map(|g| (g.approves.clone(), g.weight)),
        )
    }

    pub fn to_document(&self) -> ElectionDocument {
        ElectionDocument {
            candidates: self.candidates.clone(),
            k: self.k as i64,
            ballots: self
                .groups
                .iter()
                .map(|g| BallotDocument {
                    approves: g
                        .approves
                        .iter()
                        .map(|&c| self.candidates[c].clone())
                        .collect(),
                    weight: Some(g.weight as i64),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("election serializes")
    }
}

/// On-disk JSON form of an election.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElectionDocument {
    pub candidates: Vec<String>,
    pub k: i64,
    pub ballots: Vec<BallotDocument>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BallotDocument {
    pub approves: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<i64>,
}

impl TryFrom<ElectionDocument> for Election {
    type Error = ElectionError;

    fn try_from(doc: ElectionDocument) -> Result<Self, ElectionError> {
        let m = doc.candidates.len();
        if doc.k < 1 || doc.k as usize > m {
            return Err(ElectionError::CommitteeSize { k: doc.k, m });
        }
        let index: HashMap<&str, usize> = doc
            .candidates
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_str(), i))
            .collect();
        let mut ballots = Vec::with_capacity(doc.ballots.len());
        for (bi, b) in doc.ballots.iter().enumerate() {
            let weight = b.weight.unwrap_or(1);
            if weight < 1 {
                return Err(ElectionError::NonPositiveWeight { ballot: bi, weight });
            }
            let approves = b
                .approves
                .iter()
                .map(|name| {
                    index
                        .get(name.as_str())
                        .copied()
                        .ok_or_else(|| ElectionError::UnknownCandidate(name.clone()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            ballots.push((approves, weight as u64));
        }
        Election::new(doc.candidates, doc.k as usize, ballots)
    }
}

/// Parses and validates an election from its JSON document.
pub fn parse_election(text: &str) -> Result<Election, ElectionError> {
    let doc: ElectionDocument = serde_json::from_str(text)?;
    Election::try_from(doc)
}

/// The exact quota `n / k`.
pub fn exact_quota(e: &Election) -> Rational {
    Rational::new(BigInt::from(e.n), BigInt::from(e.k as u64))
}

/// Number of voters approving `candidate`.
pub fn approver_weight(e: &Election, candidate: usize) -> u64 {
    e.approvers[candidate]
        .iter()
        .map(|&g| e.groups[g].weight)
        .sum()
}

/// The elected candidates, in order of election.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Committee {
    pub members: Vec<usize>,
}

impl Committee {
    /// Validates that `members` are distinct candidates of `e` and exactly `k`
    /// of them.
    pub fn new(e: &Election, members: Vec<usize>) -> Result<Self, ElectionError> {
        let m = e.num_candidates();
        let mut seen = vec![false; m];
        for &c in &members {
            if c >= m {
                return Err(ElectionError::CandidateIndex(c));
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(ElectionError::DuplicateMember(e.name(c).to_string()));
            }
        }
        if members.len() != e.k() {
            return Err(ElectionError::WrongCommitteeSize {
                expected: e.k(),
                got: members.len(),
            });
        }
        Ok(Committee { members })
    }

    pub fn from_names<S: AsRef<str>>(e: &Election, names: &[S]) -> Result<Self, ElectionError> {
        let members = names
            .iter()
            .map(|n| {
                let n = n.as_ref().trim();
                e.candidate_index(n)
                    .ok_or_else(|| ElectionError::UnknownCandidate(n.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Committee::new(e, members)
    }

    pub fn names<'e>(&self, e: &'e Election) -> Vec<&'e str> {
        self.members.iter().map(|&c| e.name(c)).collect()
    }

    pub fn contains(&self, candidate: usize) -> bool {
        self.members.contains(&candidate)
    }

    /// Members as a sorted list, for set comparisons.
    pub fn sorted(&self) -> Vec<usize> {
        let mut v = self.members.clone();
        v.sort_unstable();
        v
    }
}

/// The `"num/den"` text of `exact_quota`, for reports.
pub fn quota_string(e: &Election) -> String {
    rational::to_fraction_string(&exact_quota(e))
}
