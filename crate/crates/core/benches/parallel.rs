use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use relaxrev::gen::{self, GenConfig};
use relaxrev::oracle::model_set_in;
use relaxrev::par::Exec;
use relaxrev::revise::{find_partitions, Conflict};
use relaxrev::syntax::parse_kb;
use relaxrev::Dialect;

fn enumeration(c: &mut Criterion) {
    let cfg = GenConfig {
        max_depth: 1,
        max_size: 5,
        ..GenConfig::small(Dialect::ALC, 3, 1, 1)
    };
    let kb = gen::kb(&mut gen::rng(11), &cfg, 4, 4).unwrap();
    let sig = cfg.signature();
    let mut group = c.benchmark_group("model_set");
    group.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| model_set_in(&sig, black_box(&kb), 3, exec).unwrap())
        });
    }
    group.finish();
}

fn partitions(c: &mut Criterion) {
    let t1 = parse_kb(
        "dialect ALC\n\
         A [= B.\nB [= C.\nC [= D.\nD [= E.\nA [= some r.B.\nB [= only r.C.\n\
         a : A.\nb : B.\nc : C.\n(a, b) : r.\nE [= F.\nF [= some r.A.",
    )
    .unwrap();
    let t2 = parse_kb("dialect ALC\na : not E.\nb : not D.").unwrap();
    let mut group = c.benchmark_group("find_partitions");
    group.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| find_partitions(black_box(&t1), &t2, Conflict::Unsat, 16, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, enumeration, partitions);
criterion_main!(benches);
