use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use phi_core::eisenstein::fourier_extract_many;
use phi_core::numerics::dec;
use phi_core::phi::PhiExpansion;
use phi_core::{Exec, FieldContext};

fn execs() -> [(&'static str, Exec); 2] {
    [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)]
}

fn direct_extraction(c: &mut Criterion) {
    let ctx = FieldContext::new(7, 96).unwrap();
    let v = dec(96, "1");
    let s = dec(96, "3");
    let ts: Vec<i64> = (-3..=4).filter(|&t| t != 0).collect();
    let mut g = c.benchmark_group("fourier_extract");
    g.sample_size(10);
    for (name, exec) in execs() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| fourier_extract_many(&ctx, &v, &s, &ts, 80, 16, e).unwrap())
        });
    }
    g.finish();
}

fn coefficient_table(c: &mut Criterion) {
    let ctx = FieldContext::new(11, 128).unwrap();
    let mut g = c.benchmark_group("phi_expansion");
    g.sample_size(10);
    for (name, exec) in execs() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| b.iter(|| PhiExpansion::new(&ctx, 5000, e).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, direct_extraction, coefficient_table);
criterion_main!(benches);
