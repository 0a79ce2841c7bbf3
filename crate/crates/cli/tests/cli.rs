use ejr_core::rational::{parse_fraction, Rational};
use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn ejr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ejr"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

fn names(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap().to_string())
        .collect()
}

fn frac(v: &Value) -> Rational {
    parse_fraction(v.as_str().unwrap()).unwrap()
}

#[test]
fn compute_ejr_lr_even_order() {
    let out = ejr(&["compute", &data("example2.json"), "--rule", "ejr-lr-even"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["rule"], "ejr-lr-even");
    assert_eq!(names(&v["winners"])[..2], ["c5", "c8"]);
    assert_eq!(v["trace"][0]["kind"], "normal");
}

#[test]
fn compute_sejr_stage_one_in_trace() {
    let v = json(&ejr(&[
        "compute",
        &data("example2.json"),
        "--rule",
        "sejr",
        "--trace",
        "full",
    ]));
    let trace = v["trace"].as_array().unwrap();
    let stage1: Vec<&str> = trace
        .iter()
        .take_while(|r| r["kind"] == "normal")
        .map(|r| r["chosen"].as_str().unwrap())
        .collect();
    assert_eq!(stage1, ["c5", "c8", "c1", "c3"]);
    assert_eq!(trace[0]["levels"]["c5"], 2);
}

#[test]
fn compute_single_candidate() {
    let v = json(&ejr(&[
        "compute",
        &data("one_candidate.json"),
        "--rule",
        "phragmen-stv",
    ]));
    assert_eq!(names(&v["winners"]), ["solo"]);
}

#[test]
fn compute_hare_exhaustive_lists_committees() {
    let v = json(&ejr(&[
        "compute",
        &data("example1.json"),
        "--rule",
        "hare-av",
        "--hare-strategy",
        "exhaustive",
    ]));
    let committees = v["committees"].as_array().unwrap();
    assert_eq!(committees.len(), 4);
    for w in committees {
        let held = names(w)
            .iter()
            .filter(|c| ["c5", "c6", "c7", "c8"].contains(&c.as_str()))
            .count();
        assert_eq!(held, 3);
    }
    let out = ejr(&[
        "compute",
        &data("example1.json"),
        "--rule",
        "rav",
        "--hare-strategy",
        "exhaustive",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let saved = dir.path().join("phragmen.json");
    let saved = saved.to_str().unwrap();
    let out = ejr(&[
        "compute",
        &data("example2.json"),
        "--rule",
        "phragmen-stv",
        "--output",
        saved,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());

    let out = ejr(&[
        "verify",
        &data("example2.json"),
        "--from",
        saved,
        "--axiom",
        "ejr",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let report = json(&out);
    assert_eq!(report["satisfied"], false);
    assert_eq!(report["witness"]["level"], 2);
    assert_eq!(names(&report["witness"]["candidates"]), ["c1", "c2"]);

    let lr = json(&ejr(&[
        "compute",
        &data("example2.json"),
        "--rule",
        "ejr-lr-even",
        "--trace",
        "none",
    ]));
    let winners = names(&lr["winners"]).join(",");
    let out = ejr(&[
        "verify",
        &data("example2.json"),
        "--winners",
        &winners,
        "--axiom",
        "ejr",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["witness"], Value::Null);

    let out = ejr(&[
        "verify",
        &data("one_candidate.json"),
        "--winners",
        "solo",
        "--axiom",
        "jr",
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = ejr(&[
        "verify",
        &data("example2.json"),
        "--winners",
        &winners,
        "--max-evaluations",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn verify_rejects_bad_committees() {
    let out = ejr(&["verify", &data("example1.json"), "--winners", "c1,c2"]);
    assert_eq!(out.status.code(), Some(1));
    let out = ejr(&[
        "verify",
        &data("example1.json"),
        "--winners",
        "c1,c2,c3,c4,c5,c6,zz",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("zz"));
}

#[test]
fn compare_verdicts() {
    let v = json(&ejr(&[
        "compare",
        &data("example2.json"),
        "--rule",
        "phragmen-stv,ejr-lr-even",
    ]));
    assert_eq!(v["rules"]["phragmen-stv"]["ejr"], false);
    assert_eq!(v["rules"]["ejr-lr-even"]["ejr"], true);

    let v = json(&ejr(&[
        "compare",
        &data("example1.json"),
        "--rule",
        "sejr-rav",
        "--rule",
        "hare-av",
    ]));
    assert_eq!(v["rules"]["sejr-rav"]["ejr"], true);
    assert_eq!(v["rules"]["hare-av"]["ejr"], false);

    let all = "phragmen-stv,hare-av,ejr-lr-even,sejr,sejr-rav,rav,ejr-mwv-even";
    let v = json(&ejr(&["compare", &data("unanimous.json"), "--rule", all]));
    let rows = v["rules"].as_object().unwrap();
    assert_eq!(rows.len(), 7);
    for row in rows.values() {
        let mut w = names(&row["winners"]);
        w.sort();
        assert_eq!(w, ["c1", "c2", "c3"]);
    }

    let out = ejr(&["compare", &data("unanimous.json"), "--rule", "rav"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn apportion_methods() {
    let v = json(&ejr(&[
        "apportion",
        &data("party_753.json"),
        "--methods",
        "lr,dhondt",
    ]));
    assert_eq!(v["allocations"]["lr"], serde_json::json!([2, 2, 1]));
    assert_eq!(v["allocations"]["dhondt"], serde_json::json!([2, 2, 1]));

    let v = json(&ejr(&[
        "apportion",
        &data("party_753.json"),
        "--methods",
        "lr,ejr-lr-even",
    ]));
    assert_eq!(v["remainder_tie"], false);
    assert_eq!(v["allocations"]["ejr-lr-even"], v["allocations"]["lr"]);

    let methods = "lr,dhondt,phragmen-stv,hare-av,ejr-lr-even,sejr,sejr-rav,rav,ejr-mwv-even";
    let v = json(&ejr(&[
        "apportion",
        &data("single_party.json"),
        "--methods",
        methods,
    ]));
    for seats in v["allocations"].as_object().unwrap().values() {
        assert_eq!(seats, &serde_json::json!([3]));
    }
    let out = ejr(&[
        "apportion",
        &data("party_753.json"),
        "--methods",
        "sainte-lague",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_input_and_usage_errors() {
    let out = ejr(&["compute", &data("malformed.json"), "--rule", "rav"]);
    assert_eq!(out.status.code(), Some(1));
    let out = ejr(&["compute", &data("example1.json"), "--rule", "no-such-rule"]);
    assert_eq!(out.status.code(), Some(1));
    let out = ejr(&["compute", &data("missing.json"), "--rule", "rav"]);
    assert_eq!(out.status.code(), Some(1));
    let out = ejr(&["apportion", &data("example1.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(ejr(&["--help"]).status.code(), Some(0));
}

#[test]
fn identical_invocations_give_identical_bytes() {
    for rule in ["phragmen-stv", "ejr-mwv-even", "sejr-rav", "hare-av"] {
        let args = [
            "compute",
            &data("example2.json"),
            "--rule",
            rule,
            "--trace",
            "full",
        ];
        let a = ejr(&args);
        let b = ejr(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
    let args = [
        "compare",
        &data("example2.json"),
        "--rule",
        "rav,sejr,ejr-lr-even",
    ];
    assert_eq!(ejr(&args).stdout, ejr(&args).stdout);
}

/// Applying the recorded updates to whole votes reproduces the final
/// fractions, and every normal iteration removes exactly one quota.
#[test]
fn full_trace_replays_exactly() {
    for rule in ["phragmen-stv", "ejr-lr-even", "ejr-mwv-even"] {
        let v = json(&ejr(&[
            "compute",
            &data("example2.json"),
            "--rule",
            rule,
            "--trace",
            "full",
        ]));
        let weights: Vec<Rational> = v["groups"]
            .as_array()
            .unwrap()
            .iter()
            .map(|g| Rational::from_integer(g["weight"].as_u64().unwrap().into()))
            .collect();
        let quota = frac(&v["quota"]);
        let mut f = vec![Rational::from_integer(1.into()); weights.len()];
        for rec in v["trace"].as_array().unwrap() {
            let mut removed = Rational::from_integer(0.into());
            for u in rec["updates"].as_array().unwrap() {
                let g = u["group"].as_u64().unwrap() as usize;
                let new = frac(&u["fraction"]);
                removed += &weights[g] * (&f[g] - &new);
                f[g] = new;
            }
            if rec["kind"] == "normal" {
                assert_eq!(removed, quota, "{rule} iteration {}", rec["iteration"]);
            }
        }
        let last: Vec<Rational> = v["final_fractions"]
            .as_array()
            .unwrap()
            .iter()
            .map(frac)
            .collect();
        assert_eq!(f, last, "{rule}");
    }
}
