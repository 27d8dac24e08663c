use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Tessellation;
use crate::analytic::{CostBreakdown, SystemParams};
use crate::error::{Error, Result};
use crate::geometry::{cell_angles, convex_contains, CellAngles, Point, Rect};

/// Samples drawn from one RNG stream. Sample `i` always comes from stream
/// `i / SHARD` at offset `i % SHARD`, whatever the thread count.
const SHARD: usize = 1 << 16;

/// Relative slack, in units of the region size, when comparing the owner's
/// distance with the nearest distance.
const NEAREST_TOL: f64 = 1e-9;

fn shard_rng(seed: u64, shard: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard as u64);
    rng
}

/// Runs `per_shard(rng, count)` over the shards of `samples` in parallel
/// and returns the partial results in shard order.
fn sharded<T, F>(samples: usize, seed: u64, per_shard: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> T + Sync,
{
    let shards = samples.div_ceil(SHARD);
    (0..shards)
        .into_par_iter()
        .map(|s| per_shard(&mut shard_rng(seed, s), SHARD.min(samples - s * SHARD)))
        .collect()
}

fn uniform_in_rect(rng: &mut ChaCha8Rng, w: &Rect) -> Point {
    Point::new(rng.gen_range(w.x0..w.x1), rng.gen_range(w.y0..w.y1))
}

/// Area-weighted sampler over a set of convex polygons, via triangle fans.
struct PolygonSampler {
    /// (cumulative area, polygon index, fan apex, b, c)
    triangles: Vec<(f64, usize, Point, Point, Point)>,
}

impl PolygonSampler {
    fn new<'a>(polys: impl IntoIterator<Item = (usize, &'a [Point])>) -> Self {
        let mut triangles = Vec::new();
        let mut acc = 0.0;
        for (i, poly) in polys {
            for k in 1..poly.len().saturating_sub(1) {
                let (a, b, c) = (poly[0], poly[k], poly[k + 1]);
                acc += 0.5 * b.sub(a).cross(c.sub(a)).abs();
                triangles.push((acc, i, a, b, c));
            }
        }
        Self { triangles }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> (usize, Point) {
        let total = self.triangles.last().expect("non-empty sampler").0;
        let u = rng.gen_range(0.0..total);
        let k = self
            .triangles
            .partition_point(|t| t.0 <= u)
            .min(self.triangles.len() - 1);
        let (_, i, a, b, c) = self.triangles[k];
        let (mut s, mut t): (f64, f64) = (rng.gen(), rng.gen());
        if s + t > 1.0 {
            s = 1.0 - s;
            t = 1.0 - t;
        }
        (i, a.add(b.sub(a).scale(s)).add(c.sub(a).scale(t)))
    }
}

/// Index of the nearest facility, lowest index on ties.
fn nearest(t: &Tessellation, p: Point) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, &f) in t.facilities.iter().enumerate() {
        let d = t.metric.distance(p, f);
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

/// Regions containing `p`, at most two reported.
fn owners(t: &Tessellation, boxes: &[Rect], p: Point) -> (usize, Option<usize>, Option<usize>) {
    let mut count = 0;
    let mut first = None;
    let mut second = None;
    for (i, poly) in t.regions.iter().enumerate() {
        if boxes[i].contains(p) && convex_contains(poly, p, 0.0) {
            count += 1;
            if first.is_none() {
                first = Some(i);
            } else if second.is_none() {
                second = Some(i);
            }
        }
    }
    (count, first, second)
}

fn region_boxes(t: &Tessellation) -> Vec<Rect> {
    t.regions
        .iter()
        .map(|poly| Rect::bounding(poly.iter().copied()))
        .collect()
}

/// Outcome of sampling the interior window of a tessellation.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub samples: usize,
    pub window: Option<Rect>,
    /// Points in no region.
    pub uncovered: usize,
    /// Points in more than one region.
    pub overlapping: usize,
    /// Points whose region's facility is not a nearest facility.
    pub not_nearest: usize,
    /// Structural problems found before sampling.
    pub structural: Vec<String>,
}

impl PartitionReport {
    pub fn violations(&self) -> usize {
        self.uncovered + self.overlapping + self.not_nearest + self.structural.len()
    }

    pub fn is_valid(&self) -> bool {
        self.violations() == 0
    }
}

/// Checks by uniform sampling of the interior window that the regions
/// partition the plane and that every region is its facility's Voronoi
/// cell under the tessellation's metric. Never panics; problems are counted
/// in the report.
pub fn validate_partition(t: &Tessellation, samples: usize, seed: u64) -> PartitionReport {
    let mut report = PartitionReport::default();
    if t.regions.len() != t.facilities.len() {
        report.structural.push(format!(
            "{} regions for {} facilities",
            t.regions.len(),
            t.facilities.len()
        ));
        return report;
    }
    for (i, poly) in t.regions.iter().enumerate() {
        if !crate::geometry::is_convex_ccw(poly) {
            report
                .structural
                .push(format!("region {i} is not a convex counterclockwise polygon"));
        } else if !convex_contains(poly, t.facilities[i], 0.0) {
            report.structural.push(format!("facility {i} lies outside its region"));
        }
    }
    let window = t.interior_window();
    if window.is_empty() || samples == 0 || !report.structural.is_empty() {
        return report;
    }
    report.window = Some(window);
    let boxes = region_boxes(t);
    let (w, h) = t.region_extent();
    let tol = NEAREST_TOL * w.max(h);
    let partial = sharded(samples, seed, |rng, count| {
        let mut counts = [0usize; 4];
        for _ in 0..count {
            let p = uniform_in_rect(rng, &window);
            counts[0] += 1;
            let (n, first, _) = owners(t, &boxes, p);
            match (n, first) {
                (0, _) => counts[1] += 1,
                (1, Some(i)) => {
                    let (_, d_best) = nearest(t, p);
                    if t.metric.distance(p, t.facilities[i]) > d_best + tol {
                        counts[3] += 1;
                    }
                }
                _ => counts[2] += 1,
            }
        }
        counts
    });
    for c in partial {
        report.samples += c[0];
        report.uncovered += c[1];
        report.overlapping += c[2];
        report.not_nearest += c[3];
    }
    report
}

/// Monte-Carlo estimate of the per-area cost of the interior regions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub cost: CostBreakdown,
    /// Standard error of `cost.total`.
    pub standard_error: f64,
    pub samples: usize,
}

/// Per-area cost of the tessellation restricted to its interior regions,
/// estimated from points `x` drawn uniformly over their union. A sample in
/// region `i` is charged
///
/// - facility `f / A_i`,
/// - outbound `κ f · d(x, x_i)`,
/// - inbound `κ r f · l_i` with `l_i` the straight row tour inside region `i`,
///
/// so the mean converges to the area-weighted objective of those regions.
pub fn monte_carlo_cost(
    t: &Tessellation,
    params: &SystemParams,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if samples < 2 {
        return Err(Error::domain("Monte-Carlo samples", format!("{samples} is too few")));
    }
    let interior = t.interior_facilities();
    if interior.is_empty() {
        return Err(Error::domain(
            "Monte-Carlo window",
            "block too small: no interior region left after removing a one-region margin",
        ));
    }
    let sampler = PolygonSampler::new(interior.iter().map(|&i| (i, t.regions[i].as_slice())));
    let areas: Vec<f64> = (0..t.len()).map(|i| t.region_area(i)).collect();
    let lengths = t.row_tour_lengths();
    let f = params.facility_cost();
    let kf = params.kappa() * f;
    let krf = kf * params.r();
    // Sums of facility, outbound, inbound, total and total².
    let partial = sharded(samples, seed, |rng, count| {
        let mut s = [0.0f64; 5];
        for _ in 0..count {
            let (i, p) = sampler.sample(rng);
            let fac = f / areas[i];
            let out = kf * t.metric.distance(p, t.facilities[i]);
            let inb = krf * lengths[i];
            let tot = fac + out + inb;
            s[0] += fac;
            s[1] += out;
            s[2] += inb;
            s[3] += tot;
            s[4] += tot * tot;
        }
        s
    });
    let mut s = [0.0f64; 5];
    for part in partial {
        for k in 0..5 {
            s[k] += part[k];
        }
    }
    let n = samples as f64;
    let mean = s[3] / n;
    let var = ((s[4] / n - mean * mean) * n / (n - 1.0)).max(0.0);
    Ok(MonteCarloEstimate {
        cost: CostBreakdown::new(s[0] / n, s[1] / n, s[2] / n, 0.0),
        standard_error: (var / n).sqrt(),
        samples,
    })
}

/// Half basic angles of every interior region, measured from the geometry.
/// The tour-crossed edges are those hit by the tour's in-row directions.
pub fn recover_angles(t: &Tessellation) -> Vec<(usize, CellAngles)> {
    let pos = t.tour_positions();
    let n = t.tour.len();
    t.interior_facilities()
        .into_iter()
        .filter_map(|i| {
            let k = pos[i];
            if n < 3 || k == usize::MAX {
                return None;
            }
            let here = t.facilities[i];
            let prev = t.facilities[t.tour[(k + n - 1) % n]].sub(here);
            let next = t.facilities[t.tour[(k + 1) % n]].sub(here);
            cell_angles(here, &t.regions[i], &[prev, next]).map(|a| (i, a))
        })
        .collect()
}
