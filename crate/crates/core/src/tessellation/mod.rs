//! Finite windows of the optimal layouts with facility coordinates, region
//! polygons and the inbound tour, plus their numerical verification.
//!
//! Rows run along the x-axis, which is also the tour axis. Within a row the
//! tour is straight; consecutive rows are joined at alternating ends
//! (boustrophedon). Odd rows are shifted by half the in-row spacing so that
//! neighboring regions share full edges:
//!
//! - Euclidean: cyclic hexagons with corners `(±R cos α, ±R sin α)` and
//!   `(0, ±R)`, in-row spacing `2R cos α`, row pitch `R (1 + sin α)`.
//! - L1: the strip `|x| ≤ R cos α` cut by the diamond
//!   `|x| + |y| ≤ R (cos α + sin α)`, in-row spacing `2R cos α`, row pitch
//!   `R (cos α + 2 sin α)`.

mod export;
mod verify;

pub use export::{export_geometry, import_geometry, to_json, to_svg, GeometryFormat};
pub use verify::{monte_carlo_cost, recover_angles, validate_partition, MonteCarloEstimate, PartitionReport};

use serde::{Deserialize, Serialize};

use crate::analytic::SystemParams;
use crate::bounds::{euclidean_upper_bound, l1_optimum, Design};
use crate::error::{Error, Result};
use crate::geometry::{signed_area, Metric, Point, Rect};

/// An explicit block of service regions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tessellation {
    pub metric: Metric,
    pub facilities: Vec<Point>,
    /// Region `i` belongs to facility `i`; counterclockwise vertices.
    pub regions: Vec<Vec<Point>>,
    /// Facility indices in visiting order, starting at the depot.
    pub tour: Vec<usize>,
    pub window: Rect,
}

impl Tessellation {
    pub fn len(&self) -> usize {
        self.facilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facilities.is_empty()
    }

    pub fn region_area(&self, i: usize) -> f64 {
        signed_area(&self.regions[i])
    }

    /// Largest region extent along x and y.
    pub fn region_extent(&self) -> (f64, f64) {
        self.regions.iter().fold((0.0, 0.0), |(w, h), poly| {
            let b = Rect::bounding(poly.iter().copied());
            (f64::max(w, b.width()), f64::max(h, b.height()))
        })
    }

    /// The window with a one-region margin removed on every side.
    pub fn interior_window(&self) -> Rect {
        let (w, h) = self.region_extent();
        self.window.shrink(w, h)
    }

    /// Facilities whose whole region lies inside [`Self::interior_window`].
    pub fn interior_facilities(&self) -> Vec<usize> {
        let inner = self.interior_window();
        if inner.is_empty() {
            return Vec::new();
        }
        // Cells can touch the window edge exactly; allow for rounding.
        let (w, h) = self.region_extent();
        let eps = 1e-9 * w.max(h);
        let inner = inner.shrink(-eps, -eps);
        (0..self.len())
            .filter(|&i| self.regions[i].iter().all(|&p| inner.contains(p)))
            .collect()
    }

    /// Tour length attributed to each facility: half of the two adjacent
    /// tour segments.
    pub fn segment_lengths(&self) -> Vec<f64> {
        let n = self.tour.len();
        let mut l = vec![0.0; self.len()];
        if n < 2 {
            return l;
        }
        for k in 0..n {
            let here = self.tour[k];
            let prev = self.facilities[self.tour[(k + n - 1) % n]];
            let next = self.facilities[self.tour[(k + 1) % n]];
            let p = self.facilities[here];
            l[here] = 0.5 * (self.metric.distance(p, prev) + self.metric.distance(p, next));
        }
        l
    }

    /// Length of the straight row tour inside each region: the horizontal
    /// chord through the facility. Row-to-row connectors are not counted.
    pub fn row_tour_lengths(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| horizontal_chord(&self.regions[i], self.facilities[i].y))
            .collect()
    }

    /// Position of each facility in the tour.
    pub fn tour_positions(&self) -> Vec<usize> {
        let mut pos = vec![usize::MAX; self.len()];
        for (k, &i) in self.tour.iter().enumerate() {
            pos[i] = k;
        }
        pos
    }
}

/// Length of the intersection of a convex polygon with the line `y = y0`.
fn horizontal_chord(poly: &[Point], y0: f64) -> f64 {
    let n = poly.len();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 0..n {
        let a = poly[k];
        let b = poly[(k + 1) % n];
        if (a.y - y0) * (b.y - y0) <= 0.0 {
            let xs = if a.y == b.y {
                [a.x, b.x]
            } else {
                let x = a.x + (b.x - a.x) * (y0 - a.y) / (b.y - a.y);
                [x, x]
            };
            for x in xs {
                lo = lo.min(x);
                hi = hi.max(x);
            }
        }
    }
    if hi > lo {
        hi - lo
    } else {
        0.0
    }
}

/// Region template centered at the origin, with in-row spacing and row pitch.
struct Layout {
    cell: Vec<Point>,
    spacing: f64,
    pitch: f64,
}

fn euclidean_layout(alpha: f64, radius: f64) -> Layout {
    let (s, c) = (radius * alpha.sin(), radius * alpha.cos());
    Layout {
        cell: vec![
            Point::new(c, -s),
            Point::new(c, s),
            Point::new(0.0, radius),
            Point::new(-c, s),
            Point::new(-c, -s),
            Point::new(0.0, -radius),
        ],
        spacing: 2.0 * c,
        pitch: radius + s,
    }
}

fn l1_layout(alpha: f64, radius: f64) -> Layout {
    let (s, c) = (radius * alpha.sin(), radius * alpha.cos());
    let rho = c + s;
    let mut cell = vec![
        Point::new(c, -s),
        Point::new(c, s),
        Point::new(0.0, rho),
        Point::new(-c, s),
        Point::new(-c, -s),
        Point::new(0.0, -rho),
    ];
    // At α = 0 the strip corners coincide and the cell is a square.
    cell.dedup();
    Layout {
        cell,
        spacing: 2.0 * c,
        pitch: c + 2.0 * s,
    }
}

fn check_block(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::domain(
            "tessellation block",
            format!("{rows} x {cols} must have at least one region"),
        ));
    }
    Ok(())
}

fn assemble(metric: Metric, layout: &Layout, rows: usize, cols: usize) -> Tessellation {
    let mut facilities = Vec::with_capacity(rows * cols);
    let mut regions = Vec::with_capacity(rows * cols);
    for j in 0..rows {
        let shift = if j % 2 == 1 { 0.5 * layout.spacing } else { 0.0 };
        for k in 0..cols {
            let p = Point::new(shift + k as f64 * layout.spacing, j as f64 * layout.pitch);
            facilities.push(p);
            regions.push(layout.cell.iter().map(|v| v.add(p)).collect::<Vec<_>>());
        }
    }
    let mut tour = Vec::with_capacity(rows * cols);
    for j in 0..rows {
        if j % 2 == 0 {
            tour.extend((0..cols).map(|k| j * cols + k));
        } else {
            tour.extend((0..cols).rev().map(|k| j * cols + k));
        }
    }
    let window = Rect::bounding(regions.iter().flatten().copied());
    Tessellation {
        metric,
        facilities,
        regions,
        tour,
        window,
    }
}

/// `rows × cols` block of optimal cyclic hexagons (the Euclidean upper-bound
/// design) at the optimal facility density. Facilities are indexed row by
/// row; the depot is facility 0.
pub fn build_euclidean(params: &SystemParams, rows: usize, cols: usize) -> Result<Tessellation> {
    check_block(rows, cols)?;
    let d = euclidean_upper_bound(params)?;
    Ok(assemble(
        Metric::Euclid,
        &euclidean_layout(d.shape.alpha, d.shape.circumradius),
        rows,
        cols,
    ))
}

/// `rows × cols` block of the optimal L1 elongated hexagons.
pub fn build_l1(params: &SystemParams, rows: usize, cols: usize) -> Result<Tessellation> {
    check_block(rows, cols)?;
    let d = l1_optimum(params)?;
    Ok(assemble(
        Metric::L1,
        &l1_layout(d.shape.alpha, d.shape.circumradius),
        rows,
        cols,
    ))
}

/// Block for `metric` together with the design it realizes.
pub fn build(params: &SystemParams, metric: Metric, rows: usize, cols: usize) -> Result<(Tessellation, Design)> {
    Ok(match metric {
        Metric::Euclid => (build_euclidean(params, rows, cols)?, euclidean_upper_bound(params)?),
        Metric::L1 => (build_l1(params, rows, cols)?, l1_optimum(params)?),
    })
}
