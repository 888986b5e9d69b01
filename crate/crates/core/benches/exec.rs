use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tropsym::joints::classify_rank3;
use tropsym::par::{self, Exec};
use tropsym::witnesses::witness13;
use tropsym::{symmetric_tropical_rank_with, SymMatrix, TropValue};

fn cube_matrix(k: usize) -> SymMatrix {
    let upper: Vec<TropValue> = (0..15)
        .map(|b| TropValue::int(((k >> b) & 1) as i64))
        .collect();
    SymMatrix::from_upper(5, &upper).unwrap()
}

fn rank_of_witness(c: &mut Criterion) {
    let a = witness13();
    let mut g = c.benchmark_group("symmetric_rank_13x13");
    g.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        g.bench_with_input(
            BenchmarkId::from_parameter(format!("{exec:?}")),
            &exec,
            |b, &exec| b.iter(|| symmetric_tropical_rank_with(&a, exec).unwrap()),
        );
    }
    g.finish();
}

fn classify_cube_slice(c: &mut Criterion) {
    let matrices: Vec<SymMatrix> = (0..2048).map(|k| cube_matrix(k * 16)).collect();
    let mut g = c.benchmark_group("classify_2048_cube_matrices");
    g.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        g.bench_with_input(
            BenchmarkId::from_parameter(format!("{exec:?}")),
            &exec,
            |b, &exec| b.iter(|| par::map(exec, &matrices, |a| classify_rank3(a).is_ok())),
        );
    }
    g.finish();
}

criterion_group!(benches, rank_of_witness, classify_cube_slice);
criterion_main!(benches);
