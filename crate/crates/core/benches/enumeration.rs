use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use zn_parafermion::enumeration::{correlator, partition_function, DisorderString, EnumerationOptions};
use zn_parafermion::geometry::{build_square_covering, VertexKind};
use zn_parafermion::SectorIndex;

fn enumeration(c: &mut Criterion) {
    let lat = build_square_covering(3, 4, 1.1).unwrap().with_critical_weights(3).unwrap();
    let anchor = lat
        .ids_of(VertexKind::Dual)
        .into_iter()
        .find(|d| !lat.boundary().contains(d))
        .unwrap();
    let string = DisorderString::to_boundary(&lat, SectorIndex::new(3, 1).unwrap(), anchor).unwrap();
    let p = lat.ids_of(VertexKind::Primal);
    let spectators = [(p[1], 1), (p[p.len() - 1], 2)];

    let mut group = c.benchmark_group("square 3x4, N=3");
    group.sample_size(10);
    for (label, workers) in [("sequential", 1), ("parallel", 0)] {
        let opts = EnumerationOptions::with_workers(workers);
        group.bench_with_input(BenchmarkId::new("partition_function", label), &opts, |b, &o| {
            b.iter(|| partition_function(black_box(&lat), o).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("correlator", label), &opts, |b, &o| {
            b.iter(|| correlator(black_box(&lat), std::slice::from_ref(&string), &spectators, o).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, enumeration);
criterion_main!(benches);
