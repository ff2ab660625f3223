use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use eigencm::eigenposet::{build_eigen_poset, reduce_poset};
use eigencm::groups::{GroupSpec, GroupTable, RootSpec};
use eigencm::homology::poset_homology;
use eigencm::par;

/// `None` uses the default pool; `Some(1)` runs on one worker.
const MODES: [(&str, Option<usize>); 2] = [("parallel", None), ("sequential", Some(1))];

fn enumerate(c: &mut Criterion) {
    let spec = GroupSpec::named("F4").unwrap();
    let mut g = c.benchmark_group("enumerate_F4");
    g.sample_size(10);
    for (name, threads) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| par::with_threads(threads, || GroupTable::enumerate(&spec).unwrap().order()))
        });
    }
    g.finish();
}

fn eigenposet(c: &mut Criterion) {
    let table = GroupTable::enumerate(&GroupSpec::named("K5").unwrap()).unwrap();
    let zeta = RootSpec::new(1, 3);
    let mut g = c.benchmark_group("eigenposet_K5_omega");
    g.sample_size(10);
    for (name, threads) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| par::with_threads(threads, || build_eigen_poset(&table, zeta).unwrap().len()))
        });
    }
    g.finish();
}

fn homology(c: &mut Criterion) {
    let table = GroupTable::enumerate(&GroupSpec::named("E6").unwrap()).unwrap();
    let reduced = reduce_poset(build_eigen_poset(&table, RootSpec::new(1, 3)).unwrap().poset());
    let mut g = c.benchmark_group("homology_E6_omega");
    g.sample_size(10);
    for (name, threads) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| par::with_threads(threads, || poset_homology(&reduced).unwrap().betti(2)))
        });
    }
    g.finish();
}

criterion_group!(benches, enumerate, eigenposet, homology);
criterion_main!(benches);
