use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use trace_unfold::harness::{
    generate_instance, run_suite, suite_instances, GenParams, SuiteParams,
};
use trace_unfold::synthesis::process_reach_with;
use trace_unfold::trace::trace_closure_with;
use trace_unfold::{Strategy, Unfolder};

const STRATEGIES: [(&str, Strategy); 2] = [
    ("sequential", Strategy::Sequential),
    ("parallel", Strategy::Parallel),
];

fn reach(c: &mut Criterion) {
    // largest unfolding among the first seeds that stays below the piece limit
    let (inst, unf) = (0..60u64)
        .filter_map(|seed| {
            let inst = generate_instance(&GenParams::new(seed, 2, 3))
                .ok()?
                .validate()
                .ok()?;
            let unf = Unfolder::new(&inst.alphabet, &inst.automaton)
                .ok()?
                .with_state_limit(50_000)
                .unfolding()
                .ok()?;
            Some((inst, unf))
        })
        .max_by_key(|(_, u)| u.len())
        .expect("some instance unfolds");
    let mut group = c.benchmark_group("process_reach");
    for (name, s) in STRATEGIES {
        group.bench_with_input(BenchmarkId::new(name, unf.len()), &s, |b, &s| {
            b.iter(|| process_reach_with(&unf, &inst.distribution, 0, s))
        });
    }
    group.finish();
}

fn closure(c: &mut Criterion) {
    let inst = generate_instance(&GenParams::new(3, 3, 4))
        .unwrap()
        .validate()
        .unwrap();
    let words = inst.automaton.enumerate_language(7);
    let mut group = c.benchmark_group("trace_closure");
    for (name, s) in STRATEGIES {
        group.bench_with_input(BenchmarkId::new(name, words.len()), &s, |b, &s| {
            b.iter(|| trace_closure_with(&inst.alphabet, &words, s).unwrap())
        });
    }
    group.finish();
}

fn suite(c: &mut Criterion) {
    let params = SuiteParams::default();
    let suite = suite_instances(&params).unwrap();
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for (name, s) in STRATEGIES {
        group.bench_with_input(
            BenchmarkId::new(name, suite.instances.len()),
            &s,
            |b, &s| b.iter(|| run_suite(&suite.instances, &params, s)),
        );
    }
    group.finish();
}

criterion_group!(benches, reach, closure, suite);
criterion_main!(benches);
