use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use metacalc::automaton::{build_body_automaton, nfa_accepts_all};
use metacalc::engine::{enumerate_body, Bounds};
use metacalc::formula::{enumerate_wffs, print_formula, Alphabet, Connective};
use metacalc::library::{church_p1, is_tautology_with, kleene};
use metacalc::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn body(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_body");
    group.sample_size(10);
    for (name, calc, bounds) in [
        ("kleene", kleene(), Bounds::new(3, 17, 2_000_000, 3)),
        ("church_p1", church_p1(), Bounds::new(4, 13, 2_000_000, 3)),
    ] {
        for (mode, exec) in MODES {
            let b = bounds.with_execution(exec);
            group.bench_with_input(BenchmarkId::new(name, mode), &b, |bench, b| {
                bench.iter(|| enumerate_body(&calc, b).len())
            });
        }
    }
    group.finish();
}

fn tautologies(c: &mut Criterion) {
    let a = Alphabet::propositional(&["P", "Q", "R"], &[Connective::Not, Connective::Implies]);
    let pool = enumerate_wffs(&a, 8).unwrap();
    let mut group = c.benchmark_group("tautology_sweep");
    group.sample_size(10);
    for (mode, exec) in MODES {
        group.bench_function(mode, |bench| {
            bench.iter(|| pool.iter().filter(|f| is_tautology_with(f, exec).unwrap()).count())
        });
    }
    group.finish();
}

fn automaton(c: &mut Criterion) {
    let a = Alphabet::propositional(&["P", "Q"], &[Connective::Not, Connective::Implies]);
    let wffs = enumerate_wffs(&a, 7).unwrap();
    let nfa = build_body_automaton(wffs.iter().step_by(7));
    let inputs: Vec<String> = wffs.iter().map(print_formula).collect();
    let mut group = c.benchmark_group("nfa_accepts_all");
    group.sample_size(10);
    for (mode, exec) in MODES {
        group.bench_function(mode, |bench| bench.iter(|| nfa_accepts_all(&nfa, &inputs, exec)));
    }
    group.finish();
}

criterion_group!(benches, body, tautologies, automaton);
criterion_main!(benches);
