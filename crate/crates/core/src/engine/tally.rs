use crate::election::Election;
use crate::rational::{self, Rational};
use num_traits::{One, Zero};

/// Remaining vote fraction per ballot group after `iteration` seats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalTally {
    fractions: Vec<Rational>,
    iteration: usize,
}

impl FractionalTally {
    /// Every voter starts with a whole vote.
    pub fn new(e: &Election) -> Self {
        FractionalTally {
            fractions: vec![Rational::one(); e.groups().len()],
            iteration: 0,
        }
    }

    pub fn fraction(&self, group: usize) -> &Rational {
        &self.fractions[group]
    }

    pub fn fractions(&self) -> &[Rational] {
        &self.fractions
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn set(&mut self, group: usize, value: Rational) {
        self.fractions[group] = value;
    }

    /// Replaces every fraction and advances the iteration counter.
    pub(crate) fn advance(&mut self, fractions: Vec<Rational>) {
        debug_assert_eq!(fractions.len(), self.fractions.len());
        self.fractions = fractions;
        self.iteration += 1;
    }

    pub(crate) fn bump(&mut self) {
        self.iteration += 1;
    }

    /// `s_c`: remaining vote mass of the voters approving `candidate`.
    pub fn support(&self, e: &Election, candidate: usize) -> Rational {
        e.approvers(candidate)
            .iter()
            .fold(Rational::zero(), |acc, &g| {
                acc + &self.fractions[g] * rational::from_int(e.groups()[g].weight)
            })
    }

    /// Remaining vote mass over all voters.
    pub fn total_mass(&self, e: &Election) -> Rational {
        self.fractions
            .iter()
            .zip(e.groups())
            .fold(Rational::zero(), |acc, (f, g)| {
                acc + f * rational::from_int(g.weight)
            })
    }
}

/// `W_j`: the winners so far, with `|A_i ∩ W_j|` cached per group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialCommittee {
    members: Vec<usize>,
    elected: Vec<bool>,
    hits: Vec<usize>,
}

impl PartialCommittee {
    pub fn new(e: &Election) -> Self {
        PartialCommittee {
            members: Vec::new(),
            elected: vec![false; e.num_candidates()],
            hits: vec![0; e.groups().len()],
        }
    }

    pub fn from_members(e: &Election, members: &[usize]) -> Self {
        let mut w = PartialCommittee::new(e);
        for &c in members {
            w.insert(e, c);
        }
        w
    }

    /// Adds `candidate`; no-op if it is already a member.
    pub fn insert(&mut self, e: &Election, candidate: usize) {
        if std::mem::replace(&mut self.elected[candidate], true) {
            return;
        }
        self.members.push(candidate);
        for &g in e.approvers(candidate) {
            self.hits[g] += 1;
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, candidate: usize) -> bool {
        self.elected[candidate]
    }

    /// `|A_i ∩ W|` for ballot group `group`.
    pub fn hits(&self, group: usize) -> usize {
        self.hits[group]
    }

    pub fn unelected(&self) -> impl Iterator<Item = usize> + '_ {
        self.elected
            .iter()
            .enumerate()
            .filter(|(_, &e)| !e)
            .map(|(c, _)| c)
    }
}
