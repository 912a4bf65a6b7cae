//! Sequential against rayon-parallel scheduling of the two batch workloads:
//! catalog self-checks and independent reductions.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use recurrence_core::engine::reduce_batch;
use recurrence_core::verify::{random_integrand, rule_rng, selftest_rules};
use recurrence_core::{Catalog, Execution, FormTag, Integrand, Rat, ReduceOptions};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn batch() -> Vec<Integrand> {
    let tags = [
        FormTag::Q2,
        FormTag::LL,
        FormTag::EL,
        FormTag::QQ,
        FormTag::LLL,
        FormTag::LLQ,
    ];
    let mut out = Vec::new();
    let mut k = 0;
    while out.len() < 48 {
        let tag = tags[out.len() % tags.len()];
        let exps: Vec<Rat> = tag
            .slot_degrees()
            .iter()
            .enumerate()
            .map(|(s, _)| Rat::new(7 - 3 * s as i64, 2))
            .collect();
        if let Some(i) = random_integrand(tag, &mut rule_rng(11, k), &exps) {
            out.push(i);
        }
        k += 1;
    }
    out
}

fn selftest(c: &mut Criterion) {
    let mut g = c.benchmark_group("selftest_136_rules");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| selftest_rules(Catalog::builtin(), None, 2, 42, exec).unwrap())
        });
    }
    g.finish();
}

fn reduce(c: &mut Criterion) {
    let items = batch();
    let opts = ReduceOptions::default();
    let mut g = c.benchmark_group("reduce_batch_48");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| reduce_batch(&items, &opts, exec))
        });
    }
    g.finish();
}

criterion_group!(benches, selftest, reduce);
criterion_main!(benches);
