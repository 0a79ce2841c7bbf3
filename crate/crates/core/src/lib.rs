//! Approval-based multi-winner voting rules built around exact-quota vote
//! transfers, together with exhaustive checkers for the JR, PJR and EJR
//! representation axioms.
//!
//! All arithmetic on vote mass is exact: fractions of votes are arbitrary
//! precision rationals and quota comparisons are done in integers.
//!
//! The main entry points are:
//!
//! - [`Election`] and [`parse_election`] for the data model,
//! - [`engine::run_ejr_exact`] for the generic two-stage driver,
//! - the concrete rules in [`rules`],
//! - the oracles in [`axioms`],
//! - the party-list reduction in [`apportionment`].

pub mod apportionment;
pub mod axioms;
pub mod election;
pub mod engine;
pub mod profiles;
pub mod rational;
pub mod rules;
pub mod trace;

pub use election::{
    approver_weight, exact_quota, parse_election, BallotGroup, Committee, Election, ElectionError,
};
pub use engine::{
    CandidateState, DissatisfactionTable, EngineError, FractionalTally, IterationKind,
    IterationLog, IterationRecord, PartialCommittee, Verification,
};
pub use rational::Rational;
pub use rules::{Rule, TieBreak, TiePolicy};
