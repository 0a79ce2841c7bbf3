use ejr_core::apportionment::{
    committee_to_seats, dhondt, dhondt_closure, largest_remainders, largest_remainders_closure,
    parse_party_list, reduce_party_list,
};
use ejr_core::axioms::{self, Axiom, AxiomError};
use ejr_core::rules::hare_av_reachable;
use ejr_core::rules::HareRemovalStrategy;
use ejr_core::trace::{self, TraceLevel};
use ejr_core::{parse_election, Committee, Election, EngineError, Rule, TieBreak, Verification};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::path::Path;

/// Why a command did not finish with exit code 0.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Engine(String),
    /// The report was emitted; the committee violates the axiom.
    Violated,
    Cap(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Engine(_) => 2,
            Failure::Violated => 3,
            Failure::Cap(_) => 4,
        }
    }

    pub fn message(&self) -> Option<&str> {
        match self {
            Failure::Input(m) | Failure::Engine(m) | Failure::Cap(m) => Some(m),
            Failure::Violated => None,
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::SearchCap { .. } => Failure::Cap(e.to_string()),
            other => Failure::Engine(other.to_string()),
        }
    }
}

impl From<AxiomError> for Failure {
    fn from(e: AxiomError) -> Self {
        match e {
            AxiomError::CapExceeded { .. } => Failure::Cap(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome<T = ()> = Result<T, Failure>;

fn read(path: &Path) -> Outcome<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_election(path: &Path) -> Outcome<Election> {
    parse_election(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(value: &Value, output: Option<&Path>) -> Outcome {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verification(on: bool) -> Verification {
    if on {
        Verification::On
    } else {
        Verification::Off
    }
}

pub fn compute(
    path: &Path,
    rule: Rule,
    tb: &TieBreak,
    verify: bool,
    level: TraceLevel,
    hare_exhaustive: bool,
    output: Option<&Path>,
) -> Outcome {
    let e = load_election(path)?;
    if hare_exhaustive {
        if rule != Rule::HareAv {
            return Err(Failure::Input(
                "--hare-strategy exhaustive only applies to hare-av".into(),
            ));
        }
        let found = hare_av_reachable(&e, HareRemovalStrategy::DEFAULT_NODE_LIMIT)?;
        let committees: Vec<Value> = found.iter().map(|w| trace::names(&e, w)).collect();
        return emit(
            &json!({"rule": rule.name(), "committees": committees}),
            output,
        );
    }
    let out = rule.run(&e, tb, verification(verify))?;
    emit(&trace::outcome_json(&e, rule.name(), &out, level), output)
}

fn winners_from_file(path: &Path) -> Outcome<Vec<String>> {
    let v: Value = serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    v.get("winners")
        .and_then(Value::as_array)
        .and_then(|ws| ws.iter().map(|w| w.as_str().map(str::to_string)).collect())
        .ok_or_else(|| Failure::Input(format!("{}: no \"winners\" list of names", path.display())))
}

pub fn verify(
    path: &Path,
    winners: &[String],
    from: Option<&Path>,
    axiom: Axiom,
    limit: u64,
    output: Option<&Path>,
) -> Outcome {
    let e = load_election(path)?;
    let names = match from {
        Some(f) => winners_from_file(f)?,
        None => winners.to_vec(),
    };
    let w = Committee::from_names(&e, &names).map_err(|err| Failure::Input(err.to_string()))?;
    let report = axioms::check_capped(&e, &w, axiom, limit)?;
    emit(&trace::report_json(&e, &report), output)?;
    if report.satisfied {
        Ok(())
    } else {
        Err(Failure::Violated)
    }
}

fn compare_row(e: &Election, rule: Rule, tb: &TieBreak, verify: Verification) -> Outcome<Value> {
    let out = rule.run(e, tb, verify)?;
    let mut row = Map::new();
    row.insert("winners".into(), trace::names(e, &out.committee.members));
    for axiom in [Axiom::Jr, Axiom::Pjr, Axiom::Ejr] {
        let report = axioms::check(e, &out.committee, axiom)?;
        row.insert(axiom.name().into(), json!(report.satisfied));
    }
    Ok(Value::Object(row))
}

/// Rules run on separate threads; rows are keyed by rule name.
pub fn compare(
    path: &Path,
    rules: &[Rule],
    tb: &TieBreak,
    verify: bool,
    output: Option<&Path>,
) -> Outcome {
    let e = load_election(path)?;
    let rules: BTreeMap<&str, Rule> = rules.iter().map(|r| (r.name(), *r)).collect();
    if rules.len() < 2 {
        return Err(Failure::Input(
            "compare needs at least two distinct rules".into(),
        ));
    }
    let verify = verification(verify);
    let rows: Vec<(&str, Outcome<Value>)> = std::thread::scope(|s| {
        let handles: Vec<_> = rules
            .iter()
            .map(|(&name, &rule)| {
                let e = &e;
                (name, s.spawn(move || compare_row(e, rule, tb, verify)))
            })
            .collect();
        handles
            .into_iter()
            .map(|(name, h)| (name, h.join().expect("rule thread panicked")))
            .collect()
    });
    let mut table = Map::new();
    for (name, row) in rows {
        table.insert(name.to_string(), row?);
    }
    emit(&json!({"rules": table}), output)
}

pub fn apportion(path: &Path, methods: &[String], output: Option<&Path>) -> Outcome {
    let p = parse_party_list(&read(path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let e = reduce_party_list(&p);
    let mut allocations = Map::new();
    for method in methods {
        let seats = match method.as_str() {
            "lr" => largest_remainders(&p),
            "dhondt" => dhondt(&p),
            other => {
                let rule: Rule = other
                    .parse()
                    .map_err(|_| Failure::Input(format!("unknown method {other:?}")))?;
                let out = rule.run(&e, &TieBreak::default(), Verification::On)?;
                committee_to_seats(&p, &out.committee)
                    .map_err(|err| Failure::Input(err.to_string()))?
            }
        };
        allocations.insert(method.clone(), json!(seats.0));
    }
    emit(
        &json!({
            "parties": p.parties(),
            "votes": p.votes(),
            "seats": p.seats(),
            "allocations": allocations,
            "remainder_tie": largest_remainders_closure(&p).len() > 1,
            "quotient_tie": dhondt_closure(&p).len() > 1,
        }),
        output,
    )
}
