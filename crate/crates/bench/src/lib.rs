//! Shared fixtures for the criterion benchmarks under `benches/`.

use transship::discrete::GridInstance;
use transship::{Metric, Point};

/// A mid-range grid instance with the depot in the corner.
pub fn grid_instance(m: usize, metric: Metric) -> GridInstance {
    GridInstance::new(m, 3.0, 1.0, 0.8, metric, 0).expect("valid instance")
}

/// `n` scattered points on a 50×50 lattice, deterministic.
pub fn scattered_points(n: usize) -> Vec<Point> {
    (0..n)
        .map(|i| {
            let k = (i * 37 + 11) % 2500;
            Point::new((k % 50) as f64, (k / 50) as f64)
        })
        .collect()
}
