use criterion::{black_box, criterion_group, criterion_main, Criterion};
use transship::analytic::{g_bar, g_cyclic, g_limit, solve_alpha_star, ALPHA_TOL};
use transship::bounds::{gap_analysis, r_grid, sensitivity_sweep, Spacing, SweepOptions};
use transship::SystemParams;

fn kernels(c: &mut Criterion) {
    c.bench_function("solve_alpha_star(6, 1)", |b| {
        b.iter(|| solve_alpha_star(6, black_box(1.0), ALPHA_TOL))
    });
    c.bench_function("g_cyclic(6, 1)", |b| b.iter(|| g_cyclic(6, black_box(1.0))));
    c.bench_function("g_limit(1)", |b| b.iter(|| g_limit(black_box(1.0))));
    c.bench_function("g_bar(1)", |b| b.iter(|| g_bar(black_box(1.0))));
}

fn sweeps(c: &mut Criterion) {
    let grid = r_grid(0.0, 20.0, 200, Spacing::Linear).unwrap();
    c.bench_function("gap_analysis 200 points", |b| b.iter(|| gap_analysis(black_box(&grid))));
    let template = SystemParams::normalized(0.0).unwrap();
    let opts = SweepOptions::default();
    c.bench_function("sensitivity_sweep default", |b| {
        b.iter(|| sensitivity_sweep(&template, black_box(&opts)))
    });
}

criterion_group!(benches, kernels, sweeps);
criterion_main!(benches);
