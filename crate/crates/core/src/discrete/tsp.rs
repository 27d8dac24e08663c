use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Metric, Point};

/// Largest point count accepted by the exact tour mode.
pub const EXACT_TOUR_CAP: usize = 15;

/// Improvements smaller than this are not taken by 2-opt.
const TWO_OPT_EPS: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TourMode {
    /// Held–Karp dynamic program; provably minimal.
    Exact,
    /// Nearest-neighbor construction improved by 2-opt to a local optimum.
    Heuristic,
}

/// A closed tour over a point list, as positions into that list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tour {
    /// Starts at position 0 (the depot).
    pub order: Vec<usize>,
    pub length: f64,
}

/// Length of the closed tour visiting `points` in order.
pub fn tour_length(points: &[Point], metric: Metric) -> f64 {
    let n = points.len();
    if n < 2 {
        return 0.0;
    }
    (0..n).map(|k| metric.distance(points[k], points[(k + 1) % n])).sum()
}

fn distance_matrix(points: &[Point], metric: Metric) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|&a| points.iter().map(|&b| metric.distance(a, b)).collect())
        .collect()
}

/// Shortest closed tour through `points`, starting at `points[0]`.
pub fn tsp_tour(points: &[Point], metric: Metric, mode: TourMode) -> Result<Tour> {
    if points.is_empty() {
        return Err(Error::domain("tour", "no points"));
    }
    let dist = distance_matrix(points, metric);
    match mode {
        TourMode::Exact => {
            if points.len() > EXACT_TOUR_CAP {
                return Err(Error::TooLarge {
                    what: "exact tour",
                    detail: format!("{} points, cap is {EXACT_TOUR_CAP}", points.len()),
                });
            }
            let hk = HeldKarp::new(&dist);
            let full = hk.full_mask();
            Ok(Tour {
                order: hk.tour(full),
                length: hk.length(full),
            })
        }
        TourMode::Heuristic => {
            let mut order = nearest_neighbor(&dist);
            two_opt(&mut order, &dist);
            let length = (0..order.len())
                .map(|k| dist[order[k]][order[(k + 1) % order.len()]])
                .sum();
            Ok(Tour { order, length })
        }
    }
}

fn nearest_neighbor(dist: &[Vec<f64>]) -> Vec<usize> {
    let n = dist.len();
    let mut used = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut cur = 0;
    used[0] = true;
    order.push(0);
    for _ in 1..n {
        let next = (0..n)
            .filter(|&j| !used[j])
            .min_by(|&a, &b| dist[cur][a].total_cmp(&dist[cur][b]))
            .expect("unvisited point");
        used[next] = true;
        order.push(next);
        cur = next;
    }
    order
}

/// 2-opt with first improvement until no exchange shortens the tour. The
/// first position (the depot) never moves.
fn two_opt(order: &mut [usize], dist: &[Vec<f64>]) {
    let n = order.len();
    if n < 4 {
        return;
    }
    let mut improved = true;
    while improved {
        improved = false;
        for i in 0..n - 1 {
            for j in i + 2..n {
                // Edges (i, i+1) and (j, j+1 mod n); adjacent when they
                // share the depot.
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a, b) = (order[i], order[i + 1]);
                let (c, d) = (order[j], order[(j + 1) % n]);
                let delta = dist[a][c] + dist[b][d] - dist[a][b] - dist[c][d];
                if delta < -TWO_OPT_EPS {
                    order[i + 1..=j].reverse();
                    improved = true;
                }
            }
        }
    }
}

/// Held–Karp table over every subset of the points that contains point 0.
///
/// Subsets are bitmasks over points `1..n`; `length(mask)` is the shortest
/// closed tour through point 0 and the points in `mask`.
pub struct HeldKarp {
    n: usize,
    /// `best[mask * (n-1) + j]`: shortest path from point 0 through `mask`
    /// ending at point `j + 1` (which must be in `mask`).
    best: Vec<f64>,
    parent: Vec<u8>,
    dist: Vec<Vec<f64>>,
}

impl HeldKarp {
    /// Builds the table; `dist` is a full symmetric matrix with at most 17
    /// points.
    pub fn new(dist: &[Vec<f64>]) -> Self {
        let n = dist.len();
        assert!((1..=17).contains(&n), "Held–Karp table needs 1..=17 points");
        let k = n - 1;
        let masks = 1usize << k;
        let mut best = vec![f64::INFINITY; masks * k.max(1)];
        let mut parent = vec![u8::MAX; masks * k.max(1)];
        for j in 0..k {
            best[(1 << j) * k + j] = dist[0][j + 1];
        }
        for mask in 1..masks {
            for j in 0..k {
                if mask & (1 << j) == 0 {
                    continue;
                }
                let cur = best[mask * k + j];
                if !cur.is_finite() {
                    continue;
                }
                for t in 0..k {
                    if mask & (1 << t) != 0 {
                        continue;
                    }
                    let next = mask | (1 << t);
                    let cand = cur + dist[j + 1][t + 1];
                    if cand < best[next * k + t] {
                        best[next * k + t] = cand;
                        parent[next * k + t] = j as u8;
                    }
                }
            }
        }
        Self {
            n,
            best,
            parent,
            dist: dist.to_vec(),
        }
    }

    pub fn full_mask(&self) -> usize {
        (1usize << (self.n - 1)) - 1
    }

    fn last(&self, mask: usize) -> Option<(usize, f64)> {
        let k = self.n - 1;
        (0..k)
            .filter(|&j| mask & (1 << j) != 0)
            .map(|j| (j, self.best[mask * k + j] + self.dist[j + 1][0]))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// Shortest closed tour through point 0 and the points of `mask`.
    pub fn length(&self, mask: usize) -> f64 {
        self.last(mask).map_or(0.0, |(_, l)| l)
    }

    /// Visiting order (point indices, starting with 0) of that tour.
    pub fn tour(&self, mask: usize) -> Vec<usize> {
        let k = self.n - 1;
        let mut rev = Vec::new();
        let mut m = mask;
        let mut cur = self.last(mask).map(|(j, _)| j);
        while let Some(j) = cur {
            rev.push(j + 1);
            let p = self.parent[m * k + j];
            m &= !(1 << j);
            cur = if p == u8::MAX { None } else { Some(p as usize) };
        }
        let mut order = vec![0];
        order.extend(rev.into_iter().rev());
        order
    }
}
