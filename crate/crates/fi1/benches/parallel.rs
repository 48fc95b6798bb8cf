use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use fi1::analysis::{enumerate_closure, enumerate_closure_sequential, GeneratorSet};
use fi1::element::Element;
use fi1::ptrans::{schein_check, schein_check_sequential};

fn bench_schein(c: &mut Criterion) {
    let mut group = c.benchmark_group("schein_check");
    for &(n, max_ij) in &[(24usize, 48u64), (64, 128)] {
        group.bench_function(format!("dispatch/n{n}"), |b| {
            b.iter(|| schein_check(black_box(n), black_box(max_ij)))
        });
        group.bench_function(format!("sequential/n{n}"), |b| {
            b.iter(|| schein_check_sequential(black_box(n), black_box(max_ij)))
        });
    }
    group.finish();
}

fn bench_closure(c: &mut Criterion) {
    let set = GeneratorSet::new([
        Element::new(0, 1, 1).unwrap(),
        Element::new(1, -1, 0).unwrap(),
    ])
    .unwrap();
    let mut group = c.benchmark_group("enumerate_closure");
    group.sample_size(20);
    for dmax in [40i64, 70] {
        group.bench_function(format!("dispatch/d{dmax}"), |b| {
            b.iter(|| enumerate_closure(black_box(&set), black_box(dmax)).unwrap())
        });
        group.bench_function(format!("sequential/d{dmax}"), |b| {
            b.iter(|| enumerate_closure_sequential(black_box(&set), black_box(dmax)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_schein, bench_closure);
criterion_main!(benches);
