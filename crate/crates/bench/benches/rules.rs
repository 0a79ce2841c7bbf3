use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ejr_bench::{clustered_profile, random_profile};
use ejr_core::axioms::check_ejr;
use ejr_core::{Rule, TieBreak, Verification};
use std::hint::black_box;

fn rules(c: &mut Criterion) {
    let mut group = c.benchmark_group("rules");
    let tb = TieBreak::default();
    for &(m, k, groups) in &[(10, 4, 40), (20, 8, 120), (40, 12, 300)] {
        let e = random_profile(1, m, k, groups, 6, 20);
        for rule in [
            Rule::PhragmenStv,
            Rule::EjrLrEven,
            Rule::EjrMwvEven,
            Rule::Sejr,
            Rule::SejrRav,
            Rule::Rav,
        ] {
            let id = BenchmarkId::new(rule.name(), format!("m{m}-k{k}-g{groups}"));
            group.bench_with_input(id, &e, |b, e| {
                b.iter(|| rule.run(black_box(e), &tb, Verification::Off).unwrap())
            });
        }
    }
    group.finish();
}

fn verified_overhead(c: &mut Criterion) {
    let mut group = c.benchmark_group("verification");
    let e = clustered_profile(2, 24, 8, 150);
    let tb = TieBreak::default();
    for (label, verify) in [("off", Verification::Off), ("on", Verification::On)] {
        group.bench_function(label, |b| {
            b.iter(|| Rule::EjrLrEven.run(black_box(&e), &tb, verify).unwrap())
        });
    }
    group.finish();
}

fn axioms(c: &mut Criterion) {
    let e = random_profile(5, 12, 5, 40, 4, 10);
    let w = Rule::EjrLrEven
        .run(&e, &TieBreak::default(), Verification::Off)
        .unwrap()
        .committee;
    c.bench_function("check_ejr", |b| {
        b.iter(|| check_ejr(black_box(&e), &w).unwrap())
    });
}

criterion_group!(benches, rules, verified_overhead, axioms);
criterion_main!(benches);
