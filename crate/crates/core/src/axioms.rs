//! Exhaustive checkers for JR, PJR and EJR.
//!
//! A violation of EJR at level `ℓ` is an `ℓ`-cohesive group whose members
//! each hold fewer than `ℓ` winners. Any such group shares some set `T` of
//! `ℓ` candidates, and then every voter who approves `T` and holds fewer than
//! `ℓ` winners together also forms a violating group. So it suffices to test,
//! for every `ℓ` and every `T`, the largest such voter set. `T` only ranges
//! over subsets of actual ballots whose members each have at least `ℓ·n/k`
//! approvers, which keeps the enumeration exact but small for real ballots.
//!
//! PJR adds the set `S` of winners the group may jointly touch: with `|S| =
//! ℓ − 1`, the voters approving `T` whose winners all lie in `S` form the
//! largest candidate group. Only winners approved by some of these voters
//! need to be considered for `S`.

use crate::election::Committee;
use crate::election::{approver_weight, Election};
use crate::engine::{level_from_definition, PartialCommittee};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Jr,
    Pjr,
    Ejr,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Jr => "jr",
            Axiom::Pjr => "pjr",
            Axiom::Ejr => "ejr",
        }
    }
}

impl std::str::FromStr for Axiom {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "jr" => Ok(Axiom::Jr),
            "pjr" => Ok(Axiom::Pjr),
            "ejr" => Ok(Axiom::Ejr),
            other => Err(format!("unknown axiom {other:?}")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AxiomError {
    #[error("enumeration exceeded the cap of {limit} evaluations")]
    CapExceeded { limit: u64 },
    #[error("committee has {got} members, expected {expected}")]
    CommitteeSize { expected: usize, got: usize },
}

pub const DEFAULT_EVALUATION_CAP: u64 = 20_000_000;

/// A cohesive group left under-represented.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub level: usize,
    /// The `ℓ` candidates every listed voter approves.
    pub candidates: Vec<usize>,
    /// Ballot groups forming the cohesive group.
    pub groups: Vec<usize>,
    pub weight: u64,
    /// `ℓ` minus the best representation the group reaches under the axiom.
    pub shortfall: usize,
}

impl Witness {
    /// Re-checks the witness against the raw profile and committee members,
    /// using the quota of `e`.
    pub fn validates(&self, e: &Election, members: &[usize], axiom: Axiom) -> bool {
        let level = self.level;
        if level == 0 || self.candidates.len() != level || self.groups.is_empty() {
            return false;
        }
        let w = PartialCommittee::from_members(e, members);
        let groups = e.groups();
        if !self.groups.iter().all(|&g| {
            self.candidates
                .iter()
                .all(|&c| groups[g].approves_candidate(c))
        }) {
            return false;
        }
        let weight: u64 = self.groups.iter().map(|&g| groups[g].weight).sum();
        if weight != self.weight || !cohesive(e, weight, level) {
            return false;
        }
        match axiom {
            Axiom::Ejr | Axiom::Jr => {
                (axiom == Axiom::Ejr || level == 1)
                    && self.groups.iter().all(|&g| w.hits(g) < level)
            }
            Axiom::Pjr => union_hits(e, &w, &self.groups) < level,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub satisfied: bool,
    pub witness: Option<Witness>,
}

impl AxiomReport {
    fn from_witness(axiom: Axiom, witness: Option<Witness>) -> Self {
        AxiomReport {
            axiom,
            satisfied: witness.is_none(),
            witness,
        }
    }
}

/// All candidates not in the committee have dissatisfaction level zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroLevelCertificate {
    pub committee: Vec<usize>,
    /// `(candidate, ℓ(c, W))` for every unelected candidate.
    pub levels: Vec<(usize, usize)>,
    pub all_levels_zero: bool,
}

/// `weight ≥ ℓ·n/k`, in integers.
fn cohesive(e: &Election, weight: u64, level: usize) -> bool {
    weight as u128 * e.k() as u128 >= level as u128 * e.n() as u128
}

fn union_hits(e: &Election, w: &PartialCommittee, groups: &[usize]) -> usize {
    let touched: BTreeSet<usize> = groups
        .iter()
        .flat_map(|&g| e.groups()[g].approves.iter().copied())
        .filter(|&c| w.contains(c))
        .collect();
    touched.len()
}

fn committee_state(e: &Election, w: &Committee) -> Result<PartialCommittee, AxiomError> {
    if w.members.len() != e.k() {
        return Err(AxiomError::CommitteeSize {
            expected: e.k(),
            got: w.members.len(),
        });
    }
    Ok(PartialCommittee::from_members(e, &w.members))
}

struct Budget {
    used: u64,
    limit: u64,
}

impl Budget {
    fn spend(&mut self) -> Result<(), AxiomError> {
        self.used += 1;
        if self.used > self.limit {
            Err(AxiomError::CapExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }
}

fn push_subsets(
    pool: &[usize],
    size: usize,
    start: usize,
    cur: &mut Vec<usize>,
    out: &mut BTreeSet<Vec<usize>>,
    budget: &mut Budget,
) -> Result<(), AxiomError> {
    if cur.len() == size {
        budget.spend()?;
        out.insert(cur.clone());
        return Ok(());
    }
    for i in start..pool.len() {
        if pool.len() - i < size - cur.len() {
            break;
        }
        cur.push(pool[i]);
        push_subsets(pool, size, i + 1, cur, out, budget)?;
        cur.pop();
    }
    Ok(())
}

/// Candidate sets `T` of size `level` drawn from ballots of groups holding
/// fewer than `level` winners, restricted to candidates with enough approvers.
fn shared_sets(
    e: &Election,
    w: &PartialCommittee,
    level: usize,
    budget: &mut Budget,
) -> Result<BTreeSet<Vec<usize>>, AxiomError> {
    let eligible: Vec<bool> = (0..e.num_candidates())
        .map(|c| cohesive(e, approver_weight(e, c), level))
        .collect();
    let mut out = BTreeSet::new();
    for (g, group) in e.groups().iter().enumerate() {
        if w.hits(g) >= level {
            continue;
        }
        let pool: Vec<usize> = group
            .approves
            .iter()
            .copied()
            .filter(|&c| eligible[c])
            .collect();
        if pool.len() >= level {
            push_subsets(&pool, level, 0, &mut Vec::new(), &mut out, budget)?;
        }
    }
    Ok(out)
}

/// Groups approving every candidate in `t` and holding fewer than `level`
/// winners.
fn supporters(e: &Election, w: &PartialCommittee, t: &[usize], level: usize) -> Vec<usize> {
    e.approvers(t[0])
        .iter()
        .copied()
        .filter(|&g| w.hits(g) < level && t.iter().all(|&c| e.groups()[g].approves_candidate(c)))
        .collect()
}

fn weight_of(e: &Election, groups: &[usize]) -> u64 {
    groups.iter().map(|&g| e.groups()[g].weight).sum()
}

fn ejr_witness(
    e: &Election,
    w: &PartialCommittee,
    max_level: usize,
    limit: u64,
) -> Result<Option<Witness>, AxiomError> {
    let mut budget = Budget { used: 0, limit };
    for level in 1..=max_level {
        for t in shared_sets(e, w, level, &mut budget)? {
            budget.spend()?;
            let groups = supporters(e, w, &t, level);
            let weight = weight_of(e, &groups);
            if cohesive(e, weight, level) {
                let best = groups.iter().map(|&g| w.hits(g)).max().unwrap_or(0);
                return Ok(Some(Witness {
                    level,
                    candidates: t,
                    groups,
                    weight,
                    shortfall: level - best,
                }));
            }
        }
    }
    Ok(None)
}

pub fn check_ejr(e: &Election, w: &Committee) -> Result<AxiomReport, AxiomError> {
    check_ejr_capped(e, w, DEFAULT_EVALUATION_CAP)
}

pub fn check_ejr_capped(
    e: &Election,
    w: &Committee,
    limit: u64,
) -> Result<AxiomReport, AxiomError> {
    let state = committee_state(e, w)?;
    Ok(AxiomReport::from_witness(
        Axiom::Ejr,
        ejr_witness(e, &state, e.k(), limit)?,
    ))
}

/// JR is EJR restricted to `ℓ = 1`.
pub fn check_jr(e: &Election, w: &Committee) -> Result<AxiomReport, AxiomError> {
    check_jr_capped(e, w, DEFAULT_EVALUATION_CAP)
}

pub fn check_jr_capped(e: &Election, w: &Committee, limit: u64) -> Result<AxiomReport, AxiomError> {
    let state = committee_state(e, w)?;
    Ok(AxiomReport::from_witness(
        Axiom::Jr,
        ejr_witness(e, &state, 1, limit)?,
    ))
}

pub fn check_pjr(e: &Election, w: &Committee) -> Result<AxiomReport, AxiomError> {
    check_pjr_capped(e, w, DEFAULT_EVALUATION_CAP)
}

pub fn check_pjr_capped(
    e: &Election,
    w: &Committee,
    limit: u64,
) -> Result<AxiomReport, AxiomError> {
    let state = committee_state(e, w)?;
    let mut budget = Budget { used: 0, limit };
    for level in 1..=e.k() {
        for t in shared_sets(e, &state, level, &mut budget)? {
            budget.spend()?;
            let pool = supporters(e, &state, &t, level);
            let touched: Vec<usize> = {
                let set: BTreeSet<usize> = pool
                    .iter()
                    .flat_map(|&g| e.groups()[g].approves.iter().copied())
                    .filter(|&c| state.contains(c))
                    .collect();
                set.into_iter().collect()
            };
            let choices = if touched.len() < level {
                BTreeSet::from([touched.clone()])
            } else {
                let mut out = BTreeSet::new();
                push_subsets(
                    &touched,
                    level - 1,
                    0,
                    &mut Vec::new(),
                    &mut out,
                    &mut budget,
                )?;
                out
            };
            for allowed in choices {
                budget.spend()?;
                let groups: Vec<usize> = pool
                    .iter()
                    .copied()
                    .filter(|&g| {
                        e.groups()[g]
                            .approves
                            .iter()
                            .all(|&c| !state.contains(c) || allowed.binary_search(&c).is_ok())
                    })
                    .collect();
                let weight = weight_of(e, &groups);
                if cohesive(e, weight, level) {
                    let reached = union_hits(e, &state, &groups);
                    return Ok(AxiomReport::from_witness(
                        Axiom::Pjr,
                        Some(Witness {
                            level,
                            candidates: t,
                            groups,
                            weight,
                            shortfall: level - reached,
                        }),
                    ));
                }
            }
        }
    }
    Ok(AxiomReport::from_witness(Axiom::Pjr, None))
}

pub fn check(e: &Election, w: &Committee, axiom: Axiom) -> Result<AxiomReport, AxiomError> {
    check_capped(e, w, axiom, DEFAULT_EVALUATION_CAP)
}

pub fn check_capped(
    e: &Election,
    w: &Committee,
    axiom: Axiom,
    limit: u64,
) -> Result<AxiomReport, AxiomError> {
    match axiom {
        Axiom::Jr => check_jr_capped(e, w, limit),
        Axiom::Pjr => check_pjr_capped(e, w, limit),
        Axiom::Ejr => check_ejr_capped(e, w, limit),
    }
}

/// Computes `ℓ(c, W)` for every unelected candidate; all zero certifies EJR
/// without enumeration.
pub fn zero_level_certificate(
    e: &Election,
    w: &Committee,
) -> Result<ZeroLevelCertificate, AxiomError> {
    let state = committee_state(e, w)?;
    let levels: Vec<(usize, usize)> = state
        .unelected()
        .map(|c| (c, level_from_definition(e, &state, c)))
        .collect();
    Ok(ZeroLevelCertificate {
        committee: w.members.clone(),
        all_levels_zero: levels.iter().all(|&(_, l)| l == 0),
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles;

    fn committee(e: &Election, names: &[&str]) -> Committee {
        Committee::from_names(e, names).unwrap()
    }

    #[test]
    fn hare_av_outcome_fails_at_level_four() {
        let e = profiles::hare_av_failure();
        let w = committee(&e, &["c1", "c2", "c3", "c4", "c5", "c6", "c7"]);
        let ejr = check_ejr(&e, &w).unwrap();
        let witness = ejr.witness.as_ref().unwrap();
        assert_eq!(witness.level, 4);
        assert_eq!(witness.candidates, vec![4, 5, 6, 7]);
        assert_eq!(witness.weight, 6);
        assert!(witness.validates(&e, &w.members, Axiom::Ejr));

        let pjr = check_pjr(&e, &w).unwrap();
        let witness = pjr.witness.unwrap();
        assert_eq!((witness.level, witness.shortfall), (4, 1));
        assert!(witness.validates(&e, &w.members, Axiom::Pjr));
        assert!(check_jr(&e, &w).unwrap().satisfied);
    }

    #[test]
    fn everyone_elected_satisfies_all() {
        let e = profiles::hare_av_failure().with_k(8).unwrap();
        let w = Committee::new(&e, (0..8).collect()).unwrap();
        for axiom in [Axiom::Jr, Axiom::Pjr, Axiom::Ejr] {
            assert!(check(&e, &w, axiom).unwrap().satisfied);
        }
        assert!(zero_level_certificate(&e, &w).unwrap().all_levels_zero);
    }

    #[test]
    fn jr_trivial_without_cohesive_groups() {
        let names = (0..6).map(|i| format!("c{i}")).collect();
        let e = Election::new(names, 2, (0..6).map(|c| (vec![c], 1))).unwrap();
        let w = Committee::new(&e, vec![0, 1]).unwrap();
        assert!(check_jr(&e, &w).unwrap().satisfied);
    }

    #[test]
    fn jr_flags_ignored_singleton_block() {
        // Three voters only approve c2, quota 3: they deserve a seat.
        let e = Election::new(
            vec!["c0".into(), "c1".into(), "c2".into()],
            2,
            [(vec![0, 1], 3), (vec![2], 3)],
        )
        .unwrap();
        let w = Committee::new(&e, vec![0, 1]).unwrap();
        let jr = check_jr(&e, &w).unwrap();
        assert!(!jr.satisfied);
        assert_eq!(jr.witness.unwrap().candidates, vec![2]);
        assert!(!zero_level_certificate(&e, &w).unwrap().all_levels_zero);
    }

    #[test]
    fn shared_profile_verdicts() {
        use crate::engine::Verification;
        use crate::rules::{Rule, TieBreak};
        let e = profiles::phragmen_stv_failure();
        let tb = TieBreak::default();
        let lr = Rule::EjrLrEven
            .run(&e, &tb, Verification::Off)
            .unwrap()
            .committee;
        assert!(check_ejr(&e, &lr).unwrap().satisfied);
        assert!(check_jr(&e, &lr).unwrap().satisfied);
        for rule in [Rule::Sejr, Rule::SejrRav] {
            let w = rule.run(&e, &tb, Verification::Off).unwrap().committee;
            assert!(zero_level_certificate(&e, &w).unwrap().all_levels_zero);
        }
        let stv = Rule::PhragmenStv
            .run(&e, &tb, Verification::Off)
            .unwrap()
            .committee;
        let witness = check_ejr(&e, &stv).unwrap().witness.unwrap();
        assert_eq!(
            (witness.level, witness.candidates, witness.weight),
            (2, vec![0, 1], 240)
        );
        let cert = zero_level_certificate(&e, &stv).unwrap();
        assert!(!cert.all_levels_zero);
    }

    #[test]
    fn wrong_size_rejected() {
        let e = profiles::hare_av_failure();
        let w = Committee { members: vec![0] };
        assert_eq!(
            check_ejr(&e, &w),
            Err(AxiomError::CommitteeSize {
                expected: 7,
                got: 1
            })
        );
    }

    #[test]
    fn cap_is_reported() {
        let e = profiles::hare_av_failure();
        let w = committee(&e, &["c1", "c2", "c3", "c4", "c5", "c6", "c7"]);
        assert_eq!(
            check_pjr_capped(&e, &w, 2),
            Err(AxiomError::CapExceeded { limit: 2 })
        );
    }
}
