use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mubent::criteria::{FamilyEvaluator, WitnessOptions};
use mubent::explore::{scan_slice, SearchBox, Slice};
use mubent::mub::build_complete_mub;
use mubent::par::Execution;

fn slice_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan_slice");
    group.sample_size(10);
    for d in [3, 5] {
        let ev = FamilyEvaluator::new(&build_complete_mub(d).unwrap(), WitnessOptions::default(), 1e-10)
            .unwrap();
        let bx = SearchBox::for_dim(d);
        let slice = Slice {
            q3: 0.3,
            q: 0.0,
            grid: 40,
            q1_range: (bx.lo[0], bx.hi[0]),
            q2_range: (bx.lo[1], bx.hi[1]),
        };
        for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            group.bench_with_input(BenchmarkId::new(name, d), &slice, |b, s| {
                b.iter(|| scan_slice(&ev, s, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, slice_scan);
criterion_main!(benches);
