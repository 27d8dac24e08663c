//! Planar points, metrics and convex-polygon helpers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

#[allow(clippy::should_implement_trait)]
impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }

    pub fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }

    pub fn scale(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point::new(x, y)
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Euclid,
    L1,
}

impl Metric {
    pub fn distance(self, a: Point, b: Point) -> f64 {
        let d = a.sub(b);
        match self {
            Metric::Euclid => d.norm(),
            Metric::L1 => d.x.abs() + d.y.abs(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::Euclid => "euclid",
            Metric::L1 => "l1",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "euclid" | "euclidean" | "l2" => Ok(Metric::Euclid),
            "l1" | "manhattan" | "rectilinear" => Ok(Metric::L1),
            other => Err(format!("unknown metric '{other}' (expected euclid or l1)")),
        }
    }
}

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self { x0, y0, x1, y1 }
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn is_empty(&self) -> bool {
        !(self.x1 > self.x0 && self.y1 > self.y0)
    }

    pub fn area(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.width() * self.height()
        }
    }

    /// The rectangle shrunk by `dx` on the left and right and `dy` on the top
    /// and bottom. May come out empty.
    pub fn shrink(&self, dx: f64, dy: f64) -> Rect {
        Rect::new(self.x0 + dx, self.y0 + dy, self.x1 - dx, self.y1 - dy)
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }

    pub fn bounding(points: impl IntoIterator<Item = Point>) -> Rect {
        let mut r = Rect::new(f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            r.x0 = r.x0.min(p.x);
            r.y0 = r.y0.min(p.y);
            r.x1 = r.x1.max(p.x);
            r.y1 = r.y1.max(p.y);
        }
        r
    }

    /// Corners in counterclockwise order.
    pub fn corners(&self) -> Vec<Point> {
        vec![
            Point::new(self.x0, self.y0),
            Point::new(self.x1, self.y0),
            Point::new(self.x1, self.y1),
            Point::new(self.x0, self.y1),
        ]
    }
}

impl From<[f64; 4]> for Rect {
    fn from([x0, y0, x1, y1]: [f64; 4]) -> Self {
        Rect::new(x0, y0, x1, y1)
    }
}

impl From<Rect> for [f64; 4] {
    fn from(r: Rect) -> Self {
        [r.x0, r.y0, r.x1, r.y1]
    }
}

/// Shoelace area; positive for counterclockwise vertex order.
pub fn signed_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| poly[i].cross(poly[(i + 1) % n])).sum::<f64>() / 2.0
}

/// True when the polygon is strictly convex and counterclockwise, up to a
/// relative tolerance on the turn at each vertex.
pub fn is_convex_ccw(poly: &[Point]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    (0..n).all(|i| {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let c = poly[(i + 2) % n];
        let e1 = b.sub(a);
        let e2 = c.sub(b);
        e1.cross(e2) > 1e-12 * e1.norm() * e2.norm()
    })
}

/// Whether `p` lies in the convex counterclockwise polygon, allowing points
/// up to `eps` outside an edge.
pub fn convex_contains(poly: &[Point], p: Point, eps: f64) -> bool {
    let n = poly.len();
    (0..n).all(|i| {
        let a = poly[i];
        let e = poly[(i + 1) % n].sub(a);
        e.cross(p.sub(a)) >= -eps * e.norm()
    })
}

/// Keeps the part of a convex polygon where `normal · p ≤ offset`.
pub fn clip_half_plane(poly: &[Point], normal: Point, offset: f64) -> Vec<Point> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let da = normal.dot(a) - offset;
        let db = normal.dot(b) - offset;
        if da <= 0.0 {
            out.push(a);
        }
        if (da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0) {
            let t = da / (da - db);
            out.push(a.add(b.sub(a).scale(t)));
        }
    }
    out
}

/// Interior angle at the facility subtended by the edge `a → b`.
pub fn subtended_angle(center: Point, a: Point, b: Point) -> f64 {
    let u = a.sub(center);
    let v = b.sub(center);
    u.cross(v).atan2(u.dot(v)).abs()
}

/// Whether the closed segments `p1-p2` and `q1-q2` properly cross.
pub fn segments_cross(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = p2.sub(p1).cross(q1.sub(p1));
    let d2 = p2.sub(p1).cross(q2.sub(p1));
    let d3 = q2.sub(q1).cross(p1.sub(q1));
    let d4 = q2.sub(q1).cross(p2.sub(q1));
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Half basic angles of a convex cell seen from its facility.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellAngles {
    /// Mean half angle of the edges crossed by the tour.
    pub alpha: f64,
    /// Mean half angle of the remaining edges.
    pub alpha_bar: f64,
    pub n_edges: usize,
    /// Largest deviation, in radians, between a tour direction and the
    /// normal of the edge it crosses.
    pub perpendicularity_error: f64,
}

/// Splits the basic triangles of `cell` (counterclockwise, containing
/// `center`) into those crossed by rays from `center` along `tour_dirs` and
/// the rest. Returns `None` when the rays do not hit distinct edges.
pub fn cell_angles(center: Point, cell: &[Point], tour_dirs: &[Point]) -> Option<CellAngles> {
    let n = cell.len();
    if n < 3 || tour_dirs.is_empty() {
        return None;
    }
    let halves: Vec<f64> = (0..n)
        .map(|k| 0.5 * subtended_angle(center, cell[k], cell[(k + 1) % n]))
        .collect();
    let mut crossed = Vec::new();
    let mut perp: f64 = 0.0;
    for &dir in tour_dirs {
        let hit = (0..n).find(|&k| {
            let a = cell[k].sub(center);
            let b = cell[(k + 1) % n].sub(center);
            a.cross(dir) >= 0.0 && dir.cross(b) > 0.0
        })?;
        if crossed.contains(&hit) {
            return None;
        }
        let e = cell[(hit + 1) % n].sub(cell[hit]);
        let cos = (e.dot(dir) / (e.norm() * dir.norm())).abs().min(1.0);
        perp = perp.max(std::f64::consts::FRAC_PI_2 - cos.acos());
        crossed.push(hit);
    }
    let rest: Vec<f64> = (0..n).filter(|k| !crossed.contains(k)).map(|k| halves[k]).collect();
    if rest.is_empty() {
        return None;
    }
    Some(CellAngles {
        alpha: crossed.iter().map(|&k| halves[k]).sum::<f64>() / crossed.len() as f64,
        alpha_bar: rest.iter().sum::<f64>() / rest.len() as f64,
        n_edges: n,
        perpendicularity_error: perp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<Point> {
        Rect::new(0.0, 0.0, 2.0, 1.0).corners()
    }

    #[test]
    fn shoelace_and_convexity() {
        let sq = square();
        assert_eq!(signed_area(&sq), 2.0);
        assert!(is_convex_ccw(&sq));
        let mut cw = sq.clone();
        cw.reverse();
        assert_eq!(signed_area(&cw), -2.0);
        assert!(!is_convex_ccw(&cw));
    }

    #[test]
    fn half_plane_clip() {
        let clipped = clip_half_plane(&square(), Point::new(1.0, 0.0), 0.5);
        assert!((signed_area(&clipped) - 0.5).abs() < 1e-15);
        assert!(is_convex_ccw(&clipped));
        assert!(clip_half_plane(&square(), Point::new(1.0, 0.0), -1.0).is_empty());
    }

    #[test]
    fn metrics() {
        let a = Point::new(0.0, 0.0);
        let b = Point::new(3.0, -4.0);
        assert_eq!(Metric::Euclid.distance(a, b), 5.0);
        assert_eq!(Metric::L1.distance(a, b), 7.0);
        assert_eq!("L1".parse::<Metric>().unwrap(), Metric::L1);
        assert!("cosine".parse::<Metric>().is_err());
    }

    #[test]
    fn crossing() {
        let p = |x, y| Point::new(x, y);
        assert!(segments_cross(p(0., 0.), p(1., 1.), p(0., 1.), p(1., 0.)));
        assert!(!segments_cross(p(0., 0.), p(1., 0.), p(0., 1.), p(1., 1.)));
    }

    #[test]
    fn regular_hexagon_angles() {
        let hex: Vec<Point> = (0..6)
            .map(|k| {
                let t = (k as f64 * 60.0 - 30.0).to_radians();
                Point::new(t.cos(), t.sin())
            })
            .collect();
        let dirs = [Point::new(1.0, 0.0), Point::new(-1.0, 0.0)];
        let a = cell_angles(Point::default(), &hex, &dirs).unwrap();
        assert!((a.alpha - 30f64.to_radians()).abs() < 1e-12);
        assert!((a.alpha_bar - 30f64.to_radians()).abs() < 1e-12);
        assert!(a.perpendicularity_error < 1e-12);
        assert_eq!(a.n_edges, 6);
        assert!(cell_angles(Point::default(), &hex, &[dirs[0], dirs[0]]).is_none());
    }

    #[test]
    fn serde_shapes() {
        let s = serde_json::to_string(&Point::new(1.5, -2.0)).unwrap();
        assert_eq!(s, "[1.5,-2.0]");
        let r: Rect = serde_json::from_str("[0,1,2,3]").unwrap();
        assert_eq!(r.height(), 2.0);
        assert_eq!(serde_json::to_string(&Metric::L1).unwrap(), "\"l1\"");
    }
}
