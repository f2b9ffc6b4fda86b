use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qlab_core::category::{presheaf_tables, DEFAULT_CAP};
use qlab_core::completion::completeness_report;
use qlab_core::suite::{run_suite, SuiteConfig};
use qlab_core::{Exec, Loader, QCategory};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for (label, exec) in MODES {
        let config = SuiteConfig { exec, ..SuiteConfig::default() };
        group.bench_with_input(BenchmarkId::new("default", label), &config, |b, config| {
            b.iter(|| run_suite(config).unwrap())
        });
    }
    group.finish();
}

fn presheaves(c: &mut Criterion) {
    let loader = Loader::bundled();
    let q3 = loader.quantaloid("q3").unwrap();
    let p = QCategory::presheaf_py(q3, 0);
    let chain3 = loader.category("chain3@q2").unwrap();
    let mut group = c.benchmark_group("presheaves");
    for (label, exec) in MODES {
        group.bench_function(BenchmarkId::new("tables/chain3", label), |b| {
            b.iter(|| presheaf_tables(&chain3, 0, DEFAULT_CAP, exec).unwrap())
        });
        group.bench_function(BenchmarkId::new("report/Pq3", label), |b| {
            b.iter(|| completeness_report(&p, DEFAULT_CAP, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, suite, presheaves);
criterion_main!(benches);
