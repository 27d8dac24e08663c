use criterion::{black_box, criterion_group, criterion_main, Criterion};
use transship::discrete::{exhaustive_optimum, simulated_annealing, tsp_tour, Schedule, TourMode};
use transship::tessellation::{build, monte_carlo_cost, validate_partition};
use transship::{Metric, SystemParams};
use transship_bench::{grid_instance, scattered_points};

fn tours(c: &mut Criterion) {
    let pts = scattered_points(12);
    c.bench_function("tsp exact 12", |b| {
        b.iter(|| tsp_tour(black_box(&pts), Metric::Euclid, TourMode::Exact))
    });
    let pts = scattered_points(60);
    c.bench_function("tsp heuristic 60", |b| {
        b.iter(|| tsp_tour(black_box(&pts), Metric::Euclid, TourMode::Heuristic))
    });
}

fn grid(c: &mut Criterion) {
    let mut g = c.benchmark_group("grid");
    g.sample_size(10);
    let small = grid_instance(4, Metric::Euclid);
    g.bench_function("exhaustive 4x4", |b| b.iter(|| exhaustive_optimum(black_box(&small))));
    let s = Schedule::default();
    g.bench_function("annealing 4x4", |b| {
        b.iter(|| simulated_annealing(black_box(&small), &s, 1))
    });
    let mid = grid_instance(10, Metric::Euclid);
    let short = Schedule {
        iterations: 100,
        ..Schedule::default()
    };
    g.bench_function("annealing 10x10, 100 steps", |b| {
        b.iter(|| simulated_annealing(black_box(&mid), &short, 1))
    });
    g.finish();
}

fn tessellation(c: &mut Criterion) {
    let mut g = c.benchmark_group("tessellation");
    g.sample_size(10);
    let params = SystemParams::normalized(1.0).unwrap();
    for metric in [Metric::Euclid, Metric::L1] {
        let (t, _) = build(&params, metric, 6, 6).unwrap();
        g.bench_function(format!("validate_partition {metric} 1e5"), |b| {
            b.iter(|| validate_partition(black_box(&t), 100_000, 7))
        });
        g.bench_function(format!("monte_carlo_cost {metric} 1e5"), |b| {
            b.iter(|| monte_carlo_cost(black_box(&t), &params, 100_000, 7))
        });
    }
    g.finish();
}

criterion_group!(benches, tours, grid, tessellation);
criterion_main!(benches);
