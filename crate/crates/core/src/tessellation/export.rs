use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::Tessellation;
use crate::error::{Error, Result};
use crate::geometry::{Metric, Point, Rect};
use crate::numfmt::{round_sig, sig};

/// Significant digits of exported coordinates.
const DIGITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryFormat {
    Svg,
    Json,
}

impl FromStr for GeometryFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "svg" => Ok(GeometryFormat::Svg),
            "json" => Ok(GeometryFormat::Json),
            other => Err(format!("unknown geometry format '{other}' (expected svg or json)")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GeometryFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<Value>,
    metric: Metric,
    facilities: Vec<Point>,
    regions: Vec<Vec<Point>>,
    tour: Vec<usize>,
    window: Rect,
}

fn round_point(p: Point) -> Point {
    Point::new(round_sig(p.x, DIGITS), round_sig(p.y, DIGITS))
}

/// JSON document with coordinates rounded to 12 significant digits.
/// `meta`, when given, is stored under a leading `"meta"` key.
pub fn to_json(t: &Tessellation, meta: Option<&Value>) -> String {
    let w = t.window;
    let file = GeometryFile {
        meta: meta.cloned(),
        metric: t.metric,
        facilities: t.facilities.iter().copied().map(round_point).collect(),
        regions: t
            .regions
            .iter()
            .map(|poly| poly.iter().copied().map(round_point).collect())
            .collect(),
        tour: t.tour.clone(),
        window: Rect::new(
            round_sig(w.x0, DIGITS),
            round_sig(w.y0, DIGITS),
            round_sig(w.x1, DIGITS),
            round_sig(w.y1, DIGITS),
        ),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("geometry serializes");
    s.push('\n');
    s
}

/// Static SVG 1.1 drawing: regions, facilities and the tour polyline, with
/// y pointing up. `preamble` lines go into a leading XML comment.
pub fn to_svg(t: &Tessellation, preamble: &[String]) -> String {
    let w = if t.window.is_empty() {
        Rect::new(-1.0, -1.0, 1.0, 1.0)
    } else {
        t.window
    };
    let margin = 0.05 * w.width().max(w.height());
    let (vx, vy) = (w.x0 - margin, -(w.y1 + margin));
    let (vw, vh) = (w.width() + 2.0 * margin, w.height() + 2.0 * margin);
    let px = 800.0;
    let scale = px / vw;
    let (stroke, dot) = (1.0 / scale, 3.0 / scale);
    let c = |v: f64| sig(v, 9);
    let pt = |p: &Point| format!("{},{}", c(p.x), c(-p.y));

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    if !preamble.is_empty() {
        s.push_str("<!--\n");
        for line in preamble {
            let _ = writeln!(s, "  {}", line.replace("--", "- -"));
        }
        s.push_str("-->\n");
    }
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="{} {} {} {}">"#,
        c(px),
        c(vh * scale),
        c(vx),
        c(vy),
        c(vw),
        c(vh)
    );
    let _ = writeln!(
        s,
        r##"<g class="regions" fill="#f2f2f2" stroke="#555555" stroke-width="{}">"##,
        c(stroke)
    );
    for poly in &t.regions {
        let pts: Vec<String> = poly.iter().map(pt).collect();
        let _ = writeln!(s, r#"<polygon points="{}"/>"#, pts.join(" "));
    }
    s.push_str("</g>\n");
    if t.tour.len() > 1 {
        let mut pts: Vec<String> = t.tour.iter().map(|&i| pt(&t.facilities[i])).collect();
        pts.push(pt(&t.facilities[t.tour[0]]));
        let _ = writeln!(
            s,
            r##"<polyline class="tour" fill="none" stroke="#d62728" stroke-width="{}" points="{}"/>"##,
            c(1.5 * stroke),
            pts.join(" ")
        );
    }
    let _ = writeln!(s, r##"<g class="facilities" fill="#1f77b4">"##);
    for p in &t.facilities {
        let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="{}"/>"#, c(p.x), c(-p.y), c(dot));
    }
    s.push_str("</g>\n</svg>\n");
    s
}

/// Writes the tessellation to `path`.
pub fn export_geometry(t: &Tessellation, format: GeometryFormat, path: &Path, meta: Option<&Value>) -> Result<()> {
    let body = match format {
        GeometryFormat::Json => to_json(t, meta),
        GeometryFormat::Svg => {
            let preamble: Vec<String> = match meta {
                Some(Value::Object(map)) => map.iter().map(|(k, v)| format!("{k}: {v}")).collect(),
                Some(v) => vec![v.to_string()],
                None => Vec::new(),
            };
            to_svg(t, &preamble)
        }
    };
    fs::write(path, body).map_err(|e| Error::io(path, e))
}

/// Reads a JSON geometry file written by [`export_geometry`]. The optional
/// metadata block is ignored.
pub fn import_geometry(path: &Path) -> Result<Tessellation> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let file: GeometryFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
        what: "geometry JSON",
        detail: format!("{}: {e}", path.display()),
    })?;
    Ok(Tessellation {
        metric: file.metric,
        facilities: file.facilities,
        regions: file.regions,
        tour: file.tour,
        window: file.window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::SystemParams;
    use crate::tessellation::{build_euclidean, build_l1};

    fn block() -> Tessellation {
        build_euclidean(&SystemParams::normalized(1.0).unwrap(), 3, 4).unwrap()
    }

    #[test]
    fn json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.json");
        let t = block();
        let meta = serde_json::json!({"tool": "test"});
        export_geometry(&t, GeometryFormat::Json, &path, Some(&meta)).unwrap();
        let back = import_geometry(&path).unwrap();
        assert_eq!(back.tour, t.tour);
        for (a, b) in back.facilities.iter().zip(&t.facilities) {
            assert_eq!(*a, round_point(*b));
        }
        // Exported coordinates are already rounded, so a second pass is exact.
        let again = dir.path().join("u.json");
        export_geometry(&back, GeometryFormat::Json, &again, Some(&meta)).unwrap();
        assert_eq!(fs::read(&path).unwrap(), fs::read(&again).unwrap());
        assert_eq!(import_geometry(&again).unwrap(), back);
    }

    #[test]
    fn svg_is_deterministic_and_complete() {
        let t = build_l1(&SystemParams::normalized(0.5).unwrap(), 3, 3).unwrap();
        let a = to_svg(&t, &["x".into()]);
        assert_eq!(a, to_svg(&t, &["x".into()]));
        let vertices: usize = a
            .lines()
            .filter(|l| l.starts_with("<polygon"))
            .map(|l| l.split('"').nth(1).unwrap().split(' ').count())
            .sum();
        assert_eq!(vertices, t.regions.iter().map(Vec::len).sum::<usize>());
        assert_eq!(a.matches("<circle").count(), t.len());
        assert_eq!(a.matches("<polyline").count(), 1);
    }

    #[test]
    fn io_errors_name_the_path() {
        let err =
            export_geometry(&block(), GeometryFormat::Svg, Path::new("/nonexistent/dir/t.svg"), None).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/t.svg"));
        let dir = tempfile::tempdir().unwrap();
        let bad = dir.path().join("bad.json");
        fs::write(&bad, "{").unwrap();
        assert!(matches!(import_geometry(&bad), Err(Error::Parse { .. })));
    }
}
