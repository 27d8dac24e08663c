use std::collections::BTreeMap;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{evaluate, GridInstance, GridSolution};
use crate::error::{Error, Result};
use crate::geometry::{cell_angles, clip_half_plane, Metric, Point, Rect};
use crate::tessellation::Tessellation;

/// Interior cells lie inside the grid box shrunk by this many units.
const INTERIOR_MARGIN: f64 = 2.0;
/// Edges shorter than this fraction of the cell perimeter are merged away.
const MIN_EDGE_FRACTION: f64 = 0.01;
/// Tour segments deviating further from the edge normal are flagged.
const PERPENDICULARITY_LIMIT_DEG: f64 = 10.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellMeasurement {
    /// Grid index of the facility.
    pub facility: usize,
    pub alpha_deg: f64,
    pub alpha_bar_deg: f64,
    pub n_edges: usize,
    pub perpendicularity_error_deg: f64,
    /// `(k − 2)·ᾱ + 2α − 180°` for a `k`-edge cell.
    pub identity_residual_deg: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleReport {
    pub metric: Metric,
    /// Facilities whose cell lies inside the shrunk grid box.
    pub interior: usize,
    /// Interior cells whose angles could be measured.
    pub cells: Vec<CellMeasurement>,
    pub mean_alpha_deg: f64,
    pub std_alpha_deg: f64,
    pub mean_alpha_bar_deg: f64,
    pub std_alpha_bar_deg: f64,
    /// Share of interior cells with six edges.
    pub hexagonal_fraction: f64,
    /// Cells whose tour segments miss perpendicularity by more than 10°.
    pub perpendicularity_flags: usize,
    pub warnings: Vec<String>,
}

impl AngleReport {
    /// CSV with one row per measured cell; `preamble` lines become `#`
    /// comments.
    pub fn write_csv<W: Write>(&self, w: &mut W, preamble: &[String]) -> io::Result<()> {
        for line in preamble {
            writeln!(w, "# {line}")?;
        }
        writeln!(w, "facility_index,alpha_deg,alpha_bar_deg,n_edges")?;
        for c in &self.cells {
            writeln!(
                w,
                "{},{:.6},{:.6},{}",
                c.facility, c.alpha_deg, c.alpha_bar_deg, c.n_edges
            )?;
        }
        Ok(())
    }
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Removes repeated and collinear vertices, then merges edges shorter than
/// `MIN_EDGE_FRACTION` of the perimeter into their midpoint.
fn simplify(mut poly: Vec<Point>) -> Vec<Point> {
    loop {
        let n = poly.len();
        if n < 3 {
            return poly;
        }
        let perimeter: f64 = (0..n).map(|k| poly[(k + 1) % n].sub(poly[k]).norm()).sum();
        let tol = 1e-9 * perimeter;
        if let Some(k) = (0..n).find(|&k| {
            let (a, b, c) = (poly[(k + n - 1) % n], poly[k], poly[(k + 1) % n]);
            let (u, v) = (b.sub(a), c.sub(b));
            u.norm() <= tol || u.cross(v).abs() <= tol * (u.norm() + v.norm())
        }) {
            poly.remove(k);
            continue;
        }
        let short = (0..n)
            .map(|k| (k, poly[(k + 1) % n].sub(poly[k]).norm()))
            .filter(|&(_, l)| l < MIN_EDGE_FRACTION * perimeter)
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match short {
            Some((k, _)) => {
                let j = (k + 1) % n;
                poly[k] = poly[k].add(poly[j]).scale(0.5);
                poly.remove(j);
            }
            None => return poly,
        }
    }
}

/// Euclidean Voronoi cell of `sites[i]` inside `bbox`.
fn euclid_cell(sites: &[Point], i: usize, bbox: &Rect) -> Vec<Point> {
    let p = sites[i];
    let mut cell = bbox.corners();
    for (j, &q) in sites.iter().enumerate() {
        if j == i || cell.is_empty() {
            continue;
        }
        // |x − p| ≤ |x − q|  ⇔  (q − p)·x ≤ (|q|² − |p|²)/2
        cell = clip_half_plane(&cell, q.sub(p), 0.5 * (q.dot(q) - p.dot(p)));
    }
    cell
}

/// Straight edges between labelled regions: for every pair of facilities
/// that share grid neighbors, a total-least-squares line through the
/// midpoints of the differing neighbor pairs.
fn fitted_edges(inst: &GridInstance, labels: &[usize]) -> BTreeMap<(usize, usize), (Point, Point)> {
    let m = inst.m;
    let mut samples: BTreeMap<(usize, usize), Vec<Point>> = BTreeMap::new();
    for y in 0..m {
        for x in 0..m {
            let a = labels[inst.index(x, y)];
            for (u, v) in [(x + 1, y), (x, y + 1)] {
                if u >= m || v >= m {
                    continue;
                }
                let b = labels[inst.index(u, v)];
                if a != b {
                    let mid = Point::new((x + u) as f64 / 2.0, (y + v) as f64 / 2.0);
                    samples.entry((a.min(b), a.max(b))).or_default().push(mid);
                }
            }
        }
    }
    samples
        .into_iter()
        .filter(|(_, pts)| pts.len() >= 2)
        .map(|(key, pts)| {
            let n = pts.len() as f64;
            let c = pts.iter().fold(Point::new(0.0, 0.0), |s, p| s.add(*p)).scale(1.0 / n);
            let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
            for p in &pts {
                let d = p.sub(c);
                sxx += d.x * d.x;
                sxy += d.x * d.y;
                syy += d.y * d.y;
            }
            // Principal direction of the scatter matrix.
            let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
            (key, (c, Point::new(theta.cos(), theta.sin())))
        })
        .collect()
}

/// L1 cell of facility `i`: the box cut by the fitted edge lines of every
/// neighboring facility.
fn l1_cell(inst: &GridInstance, i: usize, edges: &BTreeMap<(usize, usize), (Point, Point)>, bbox: &Rect) -> Vec<Point> {
    let p = inst.point(i);
    let mut cell = bbox.corners();
    for (&(a, b), &(c, dir)) in edges {
        if a != i && b != i {
            continue;
        }
        let mut normal = Point::new(-dir.y, dir.x);
        if normal.dot(p.sub(c)) > 0.0 {
            normal = normal.scale(-1.0);
        }
        cell = clip_half_plane(&cell, normal, normal.dot(c));
        if cell.is_empty() {
            break;
        }
    }
    cell
}

/// Basic angles of the interior cells of a solution.
///
/// Euclidean cells are Voronoi cells of the open facilities clipped to the
/// grid box; L1 cells are rebuilt from the solution's assignment by fitting
/// a line to each shared boundary. The edges crossed by the rays toward the
/// tour's previous and next stops give α, the others ᾱ.
pub fn measure_basic_angles(inst: &GridInstance, sol: &GridSolution) -> Result<AngleReport> {
    evaluate(inst, sol)?;
    let hi = (inst.m - 1) as f64;
    let bbox = Rect::new(0.0, 0.0, hi, hi);
    let inner = bbox.shrink(INTERIOR_MARGIN, INTERIOR_MARGIN);
    let sites: Vec<Point> = sol.facilities.iter().map(|&j| inst.point(j)).collect();
    let edges = match inst.metric {
        Metric::L1 => fitted_edges(inst, &sol.assignment),
        Metric::Euclid => BTreeMap::new(),
    };
    let n_tour = sol.tour.len();
    let mut stop = vec![usize::MAX; inst.len()];
    for (k, &j) in sol.tour.iter().enumerate() {
        stop[j] = k;
    }
    let eps = 1e-9 * hi.max(1.0);

    let measured: Vec<(usize, std::result::Result<CellMeasurement, String>)> = (0..sites.len())
        .into_par_iter()
        .filter_map(|k| {
            let fac = sol.facilities[k];
            let raw = match inst.metric {
                Metric::Euclid => euclid_cell(&sites, k, &bbox),
                Metric::L1 => l1_cell(inst, fac, &edges, &bbox),
            };
            let interior = !raw.is_empty()
                && raw.iter().all(|v| {
                    v.x >= inner.x0 - eps && v.x <= inner.x1 + eps && v.y >= inner.y0 - eps && v.y <= inner.y1 + eps
                });
            if !interior {
                return None;
            }
            let cell = simplify(raw);
            if cell.len() < 4 {
                return Some((
                    fac,
                    Err(format!("facility {fac}: degenerate cell with {} edges", cell.len())),
                ));
            }
            let here = sites[k];
            let s = stop[fac];
            let dirs: Vec<Point> = if n_tour < 3 {
                Vec::new()
            } else {
                vec![
                    inst.point(sol.tour[(s + n_tour - 1) % n_tour]).sub(here),
                    inst.point(sol.tour[(s + 1) % n_tour]).sub(here),
                ]
            };
            let result = match cell_angles(here, &cell, &dirs) {
                Some(a) => {
                    let (alpha, alpha_bar) = (a.alpha.to_degrees(), a.alpha_bar.to_degrees());
                    Ok(CellMeasurement {
                        facility: fac,
                        alpha_deg: alpha,
                        alpha_bar_deg: alpha_bar,
                        n_edges: a.n_edges,
                        perpendicularity_error_deg: a.perpendicularity_error.to_degrees(),
                        identity_residual_deg: (a.n_edges as f64 - 2.0) * alpha_bar + 2.0 * alpha - 180.0,
                    })
                }
                None => Err(format!(
                    "facility {fac}: tour segments do not cross two distinct edges of its {}-edge cell",
                    cell.len()
                )),
            };
            Some((cell.len(), result))
        })
        .collect();

    let interior = measured.len();
    if interior < 4 {
        return Err(Error::domain(
            "angle measurement",
            format!("{interior} interior facilities; at least 4 are needed"),
        ));
    }
    let hexagonal = measured.iter().filter(|(edges, _)| *edges == 6).count();
    let mut cells = Vec::new();
    let mut warnings = Vec::new();
    for (_, r) in measured {
        match r {
            Ok(c) => cells.push(c),
            Err(w) => warnings.push(w),
        }
    }
    let perpendicularity_flags = cells
        .iter()
        .filter(|c| c.perpendicularity_error_deg > PERPENDICULARITY_LIMIT_DEG)
        .count();
    let (mean_alpha_deg, std_alpha_deg) = mean_std(&cells.iter().map(|c| c.alpha_deg).collect::<Vec<_>>());
    let (mean_alpha_bar_deg, std_alpha_bar_deg) = mean_std(&cells.iter().map(|c| c.alpha_bar_deg).collect::<Vec<_>>());
    Ok(AngleReport {
        metric: inst.metric,
        interior,
        cells,
        mean_alpha_deg,
        std_alpha_deg,
        mean_alpha_bar_deg,
        std_alpha_bar_deg,
        hexagonal_fraction: hexagonal as f64 / interior as f64,
        perpendicularity_flags,
        warnings,
    })
}

/// Rounds a tessellation onto an `m × m` grid: the window is scaled to fill
/// the grid less the interior margin, and each facility moves to its
/// nearest grid point. Costs of the returned instance are placeholders (all
/// one); only the geometry and the tour are meaningful.
pub fn sample_tessellation(t: &Tessellation, m: usize) -> Result<(GridInstance, GridSolution)> {
    if t.is_empty() || t.window.is_empty() {
        return Err(Error::domain("tessellation sampling", "empty tessellation"));
    }
    let span = (m as f64 - 1.0) - 2.0 * INTERIOR_MARGIN;
    let w = t.window;
    let scale = span / w.width().max(w.height());
    if !(scale > 0.0) {
        return Err(Error::domain(
            "tessellation sampling",
            format!("grid M = {m} is too small"),
        ));
    }
    let offset = Point::new(
        INTERIOR_MARGIN + 0.5 * (span - scale * w.width()),
        INTERIOR_MARGIN + 0.5 * (span - scale * w.height()),
    );
    let to_grid = |p: Point| {
        let q = p.sub(Point::new(w.x0, w.y0)).scale(scale).add(offset);
        (q.x.round() as usize, q.y.round() as usize)
    };
    let cells: Vec<(usize, usize)> = t.facilities.iter().map(|&p| to_grid(p)).collect();
    let index = |(x, y): (usize, usize)| y * m + x;
    let tour: Vec<usize> = t.tour.iter().map(|&i| index(cells[i])).collect();
    let inst = GridInstance::new(m, 1.0, 1.0, 1.0, t.metric, tour[0])?;
    let mut facilities: Vec<usize> = tour.clone();
    facilities.sort_unstable();
    facilities.dedup();
    if facilities.len() != tour.len() {
        return Err(Error::domain(
            "tessellation sampling",
            format!("grid M = {m} is too coarse: facilities collide after rounding"),
        ));
    }
    let sol = GridSolution::from_parts(&inst, facilities, tour)?;
    Ok((inst, sol))
}
