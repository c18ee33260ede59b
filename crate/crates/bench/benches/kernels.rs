use criterion::{black_box, criterion_group, criterion_main, Criterion};
use torusloop::cft::{u1_char, z_hv_direct, z_hv_u1, U1CharIndex};
use torusloop::lattice::{CensusTable, ModelKind, ModelSpec};
use torusloop::series::rat;
use torusloop::transfer::c_table;

fn series(c: &mut Criterion) {
    let cut = rat(12, 1);
    let idx = U1CharIndex::new(12, 5, -1).unwrap();
    c.bench_function("u1_char n=12 cutoff=12", |b| b.iter(|| u1_char(black_box(&idx), &cut)));
    let cut = rat(6, 1);
    c.bench_function("z_hv_direct (3,4) (1,1)", |b| {
        b.iter(|| z_hv_direct(3, 4, 1, 1, black_box(&cut)).unwrap())
    });
    c.bench_function("z_hv_u1 (3,4) (1,1)", |b| b.iter(|| z_hv_u1(3, 4, 1, 1, black_box(&cut)).unwrap()));
}

fn lattice(c: &mut Criterion) {
    let mut g = c.benchmark_group("lattice");
    g.sample_size(10);
    g.bench_function("census dense 3x3", |b| {
        b.iter(|| CensusTable::build(ModelKind::Dense, 3, 3).unwrap())
    });
    let spec = ModelSpec::isotropic(ModelKind::Dilute, 2, 3).unwrap();
    g.bench_function("c_table dilute N=4 M=4", |b| b.iter(|| c_table(&spec, 4, 4).unwrap()));
    g.finish();
}

criterion_group!(benches, series, lattice);
criterion_main!(benches);
