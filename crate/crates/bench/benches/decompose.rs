use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use bruhat_bench::{cell_fixtures, gl3_character, gl_fixtures};
use bruhat_core::checks::build_counterexample;
use bruhat_core::{bruhat_cell, eval_fw, rb_decompose, WeylElement};

fn decompose(c: &mut Criterion) {
    let mut group = c.benchmark_group("rb_decompose");
    for (n, prec) in [(3, 64), (4, 64), (5, 64), (3, 256)] {
        let gs = gl_fixtures(3, n, prec, 64);
        group.bench_with_input(BenchmarkId::new(format!("n{n}"), prec), &gs, |b, gs| {
            b.iter(|| {
                for g in gs {
                    black_box(rb_decompose(g).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn cells(c: &mut Criterion) {
    let gs = cell_fixtures(5, 4, 64, 64);
    c.bench_function("bruhat_cell/n4", |b| {
        b.iter(|| {
            for g in &gs {
                black_box(bruhat_cell(g).unwrap());
            }
        })
    });
}

fn evaluation(c: &mut Criterion) {
    let chi = gl3_character();
    let gs = gl_fixtures(3, 3, 64, 64);
    let w0 = WeylElement::longest(3);
    c.bench_function("eval_fw/n3", |b| {
        b.iter(|| {
            for g in &gs {
                black_box(eval_fw(&chi, &w0, g).unwrap());
            }
        })
    });

    let ce = build_counterexample(chi.clone(), 32).unwrap();
    let xs = cell_fixtures(3, 3, 32, 16);
    c.bench_function("counterexample/eval", |b| {
        b.iter(|| {
            for x in &xs {
                black_box(ce.f.eval(x).unwrap());
            }
        })
    });
    let mut slow = c.benchmark_group("counterexample");
    slow.sample_size(10);
    slow.bench_function("build", |b| b.iter(|| black_box(build_counterexample(chi.clone(), 32).unwrap())));
    slow.finish();
}

criterion_group!(benches, decompose, cells, evaluation);
criterion_main!(benches);
