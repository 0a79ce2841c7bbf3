//! JSON rendering of runs and axiom reports, with candidates by name and
//! rationals as `"num/den"` strings.

use crate::axioms::{AxiomReport, Witness, ZeroLevelCertificate};
use crate::election::Election;
use crate::engine::{CandidateState, IterationLog, IterationRecord, Outcome};
use crate::rational::{to_fraction_string, Rational};
use serde_json::{json, Map, Value};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TraceLevel {
    None,
    /// Kind and chosen candidate per iteration.
    #[default]
    Summary,
    /// Also fraction updates, levels and candidate states.
    Full,
}

impl FromStr for TraceLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(TraceLevel::None),
            "summary" => Ok(TraceLevel::Summary),
            "full" => Ok(TraceLevel::Full),
            other => Err(format!("unknown trace level {other:?}")),
        }
    }
}

fn fraction(r: &Rational) -> Value {
    Value::String(to_fraction_string(r))
}

pub fn names(e: &Election, cs: &[usize]) -> Value {
    cs.iter()
        .map(|&c| Value::String(e.name(c).to_string()))
        .collect()
}

pub fn state_json(s: &CandidateState) -> Value {
    let mut m = Map::new();
    m.insert(
        "state".into(),
        serde_json::to_value(s.tag).expect("tag serializes"),
    );
    m.insert("support".into(), fraction(&s.support));
    m.insert("removable".into(), fraction(&s.removable));
    if let Some(g) = s.starving_group {
        m.insert("starving_group".into(), json!(g));
    }
    Value::Object(m)
}

/// Groups whose fraction changed, as `{"group", "fraction"}` with the new value.
fn updates(r: &IterationRecord) -> Option<Value> {
    let (before, after) = (r.fractions_before.as_ref()?, r.fractions_after.as_ref()?);
    Some(
        before
            .iter()
            .zip(after)
            .enumerate()
            .filter(|(_, (b, a))| b != a)
            .map(|(g, (_, a))| json!({"group": g, "fraction": fraction(a)}))
            .collect(),
    )
}

fn record_json(e: &Election, i: usize, r: &IterationRecord, level: TraceLevel) -> Value {
    let mut m = Map::new();
    m.insert("iteration".into(), json!(i + 1));
    m.insert(
        "kind".into(),
        serde_json::to_value(r.kind).expect("kind serializes"),
    );
    m.insert("chosen".into(), json!(e.name(r.chosen)));
    if level == TraceLevel::Full {
        if let Some(u) = updates(r) {
            m.insert("updates".into(), u);
        }
        let levels: Map<String, Value> = r
            .levels
            .iter()
            .map(|&(c, l)| (e.name(c).to_string(), json!(l)))
            .collect();
        m.insert("levels".into(), Value::Object(levels));
        let states: Map<String, Value> = r
            .states
            .iter()
            .map(|(c, s)| (e.name(*c).to_string(), state_json(s)))
            .collect();
        m.insert("states".into(), Value::Object(states));
    }
    Value::Object(m)
}

pub fn log_json(e: &Election, log: &IterationLog, level: TraceLevel) -> Value {
    log.records
        .iter()
        .enumerate()
        .map(|(i, r)| record_json(e, i, r, level))
        .collect()
}

/// `{"rule", "winners", "trace"}`; the full level also lists the ballot
/// groups the updates refer to and the final fractions.
pub fn outcome_json(e: &Election, rule: &str, outcome: &Outcome, level: TraceLevel) -> Value {
    let mut m = Map::new();
    m.insert("rule".into(), json!(rule));
    m.insert("winners".into(), names(e, &outcome.log.winners()));
    if level == TraceLevel::None {
        return Value::Object(m);
    }
    m.insert("trace".into(), log_json(e, &outcome.log, level));
    if level == TraceLevel::Full {
        let groups: Vec<Value> = e
            .groups()
            .iter()
            .map(|g| json!({"approves": names(e, &g.approves), "weight": g.weight}))
            .collect();
        m.insert("groups".into(), Value::Array(groups));
        m.insert("quota".into(), json!(crate::election::quota_string(e)));
        let last = outcome
            .log
            .records
            .iter()
            .rev()
            .find_map(|r| r.fractions_after.as_ref());
        if let Some(f) = last {
            m.insert("final_fractions".into(), f.iter().map(fraction).collect());
        }
        let checks: Map<String, Value> = outcome
            .log
            .checks
            .iter()
            .map(|(c, n)| {
                (
                    serde_json::to_value(c)
                        .unwrap()
                        .as_str()
                        .unwrap()
                        .to_string(),
                    json!(n),
                )
            })
            .collect();
        m.insert("checks".into(), Value::Object(checks));
    }
    Value::Object(m)
}

pub fn witness_json(e: &Election, w: &Witness) -> Value {
    json!({
        "level": w.level,
        "candidates": names(e, &w.candidates),
        "groups": w.groups.iter().map(|&g| names(e, &e.groups()[g].approves)).collect::<Vec<_>>(),
        "weight": w.weight,
        "shortfall": w.shortfall,
    })
}

pub fn report_json(e: &Election, report: &AxiomReport) -> Value {
    let mut m = Map::new();
    m.insert("axiom".into(), json!(report.axiom.name()));
    m.insert("satisfied".into(), json!(report.satisfied));
    m.insert(
        "witness".into(),
        report
            .witness
            .as_ref()
            .map_or(Value::Null, |w| witness_json(e, w)),
    );
    Value::Object(m)
}

pub fn certificate_json(e: &Election, c: &ZeroLevelCertificate) -> Value {
    let levels: Map<String, Value> = c
        .levels
        .iter()
        .map(|&(cand, l)| (e.name(cand).to_string(), json!(l)))
        .collect();
    json!({"all_levels_zero": c.all_levels_zero, "levels": levels})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Verification;
    use crate::profiles;
    use crate::rational::parse_fraction;
    use crate::rules::{Rule, TieBreak};

    #[test]
    fn full_trace_replays_to_final_fractions() {
        let e = profiles::phragmen_stv_failure();
        let out = Rule::EjrLrEven
            .run(&e, &TieBreak::default(), Verification::On)
            .unwrap();
        let v = outcome_json(&e, "ejr-lr-even", &out, TraceLevel::Full);
        let mut f = vec![Rational::from_integer(1.into()); e.groups().len()];
        for rec in v["trace"].as_array().unwrap() {
            for u in rec["updates"].as_array().unwrap() {
                let g = u["group"].as_u64().unwrap() as usize;
                f[g] = parse_fraction(u["fraction"].as_str().unwrap()).unwrap();
            }
        }
        let last: Vec<Rational> = v["final_fractions"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| parse_fraction(s.as_str().unwrap()).unwrap())
            .collect();
        assert_eq!(f, last);
        assert_eq!(v["trace"][0]["chosen"], "c5");
        assert_eq!(v["trace"][0]["states"]["c5"]["removable"], "182/1");
    }

    #[test]
    fn levels_of_detail() {
        let e = profiles::unanimous(3, 2, 4);
        let out = Rule::Rav
            .run(&e, &TieBreak::default(), Verification::On)
            .unwrap();
        let none = outcome_json(&e, "rav", &out, TraceLevel::None);
        assert!(none.get("trace").is_none());
        let summary = outcome_json(&e, "rav", &out, TraceLevel::Summary);
        assert!(summary["trace"][0].get("levels").is_none());
        assert_eq!(summary["winners"], json!(["c1", "c2"]));
    }
}
