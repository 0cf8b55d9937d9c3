use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use jtrace::deriv::{cbar_lattice_via, satoh_trace, CbarRoute, LatticeBudget};
use jtrace::freegroup::{boundary_word, magnus};
use jtrace::golden::{ex412_automorphism, ex41_tree};
use jtrace::trbar::{trbar_direct, trbar_formula, trbar_formula_exact, ReduceMode};
use jtrace::trees::eta;
use jtrace::{counts, counts_brute, hnf, IntMatrix};
use jtrace_bench::witnesses;

fn formula(c: &mut Criterion) {
    let mut group = c.benchmark_group("trbar_formula");
    for (k, g, d) in witnesses() {
        group.bench_with_input(BenchmarkId::new("witness", format!("k{k}_g{g}")), &d, |b, d| {
            b.iter(|| trbar_formula_exact(black_box(d)).unwrap())
        });
    }
    let budget = LatticeBudget::default();
    group.bench_function("ex513_cbar", |b| {
        b.iter(|| trbar_formula(black_box(&ex41_tree()), ReduceMode::Cbar, &budget).unwrap())
    });
    group.finish();
}

fn direct(c: &mut Criterion) {
    let f = ex412_automorphism();
    let budget = LatticeBudget::default();
    c.bench_function("trbar_direct_ex412", |b| {
        b.iter(|| trbar_direct(black_box(&f), 2, ReduceMode::None, &budget, 8).unwrap())
    });
    let z = f.apply(&boundary_word(2));
    c.bench_function("magnus_boundary_deg5", |b| b.iter(|| magnus(black_box(&z), 5)));
}

fn trace(c: &mut Criterion) {
    let ds: Vec<_> = witnesses().into_iter().map(|(_, _, d)| eta(&d)).collect();
    c.bench_function("satoh_trace_witnesses", |b| {
        b.iter(|| ds.iter().map(|d| satoh_trace(black_box(d)).terms().len()).sum::<usize>())
    });
}

fn lattices(c: &mut Criterion) {
    let mut group = c.benchmark_group("cbar_lattice");
    group.sample_size(10);
    for (k, g) in [(3, 2), (3, 3), (4, 2)] {
        group.bench_function(BenchmarkId::new("kernel", format!("k{k}_g{g}")), |b| {
            b.iter(|| cbar_lattice_via(k, g, CbarRoute::Kernel).rank())
        });
    }
    group.finish();
    let rows: Vec<Vec<i64>> = (0..12).map(|i| (0..12).map(|j| ((i * 7 + j * 13) % 11) as i64 - 5).collect()).collect();
    let m = IntMatrix::from_dense(12, &rows);
    c.bench_function("hnf_12x12", |b| b.iter(|| hnf(black_box(&m)).rank()));
}

fn necklaces(c: &mut Criterion) {
    c.bench_function("counts_closed_form_k12_n4", |b| b.iter(|| counts(black_box(12), 4)));
    c.bench_function("counts_enumerated_k6_n4", |b| b.iter(|| counts_brute(black_box(6), 4)));
}

criterion_group!(benches, formula, direct, trace, lattices, necklaces);
criterion_main!(benches);
