use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{design, Design, DesignKind};
use crate::analytic::{Sides, SystemParams};
use crate::error::{Error, Result};
use crate::numfmt::sig;

pub const SWEEP_CSV_HEADER: &str = "label,r,alpha_deg,alpha_bar_deg,g,cost,area_per_facility";

/// Smallest positive `r` on a logarithmic grid that starts at zero.
const LOG_GRID_FLOOR: f64 = 1e-3;

/// The designs emitted by a sensitivity sweep, in output order.
const SWEEP_KINDS: [DesignKind; 3] = [DesignKind::Cyclic(6), DesignKind::Limit, DesignKind::L1Optimum];

/// One plotted point of a design at a given `r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub label: String,
    pub r: f64,
    pub alpha_deg: f64,
    pub alpha_bar_deg: f64,
    pub g: f64,
    pub cost: f64,
    pub area_per_facility: f64,
}

impl SweepRow {
    pub fn from_design(d: &Design) -> Self {
        Self {
            label: d.kind.label(),
            r: d.r,
            alpha_deg: d.shape.alpha.to_degrees(),
            alpha_bar_deg: d.shape.alpha_bar.to_degrees(),
            g: d.density.g_value,
            cost: d.density.cost.total,
            area_per_facility: d.density.area_per_facility,
        }
    }

    /// `(n − 2)ᾱ + 2α − 180°` for finite polygons; zero for the limit row.
    pub fn angle_identity_residual_deg(&self, sides: Sides) -> f64 {
        match sides {
            Sides::Finite(n) => (n as f64 - 2.0) * self.alpha_bar_deg + 2.0 * self.alpha_deg - 180.0,
            Sides::Infinite => 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    /// Log-spaced; a grid starting at `r = 0` keeps zero as its first point
    /// and log-spaces the rest from `1e-3`.
    Log,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub r_min: f64,
    pub r_max: f64,
    pub steps: usize,
    pub spacing: Spacing,
    /// Report costs and areas at `κ = f = 1` instead of the template's rates.
    pub normalize: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            r_min: 0.0,
            r_max: 20.0,
            steps: 201,
            spacing: Spacing::Log,
            normalize: true,
        }
    }
}

/// `steps` ascending values of `r` on `[r_min, r_max]`.
pub fn r_grid(r_min: f64, r_max: f64, steps: usize, spacing: Spacing) -> Result<Vec<f64>> {
    if !(r_min >= 0.0 && r_max > r_min && r_max.is_finite()) {
        return Err(Error::domain(
            "r range",
            format!("need 0 ≤ r_min < r_max, got [{r_min}, {r_max}]"),
        ));
    }
    if steps < 2 {
        return Err(Error::domain("r range", format!("steps = {steps} must be at least 2")));
    }
    let lin = |a: f64, b: f64, k: usize| -> Vec<f64> {
        (0..k)
            .map(|i| {
                if i + 1 == k {
                    b
                } else {
                    a + (b - a) * i as f64 / (k - 1) as f64
                }
            })
            .collect()
    };
    Ok(match spacing {
        Spacing::Linear => lin(r_min, r_max, steps),
        Spacing::Log => {
            let (head, lo, k) = if r_min == 0.0 {
                if r_max <= LOG_GRID_FLOOR {
                    return Err(Error::domain(
                        "r range",
                        format!("log grid from 0 needs r_max > {LOG_GRID_FLOOR}"),
                    ));
                }
                (vec![0.0], LOG_GRID_FLOOR, steps - 1)
            } else {
                (Vec::new(), r_min, steps)
            };
            let mut grid = head;
            if k == 1 {
                grid.push(r_max);
            } else {
                let start = grid.len();
                grid.extend(lin(lo.ln(), r_max.ln(), k).into_iter().map(f64::exp));
                grid[start] = lo;
                *grid.last_mut().expect("non-empty") = r_max;
            }
            grid
        }
    })
}

/// Upper bound, lower bound and L1 optimum along a grid of `r`, ordered by
/// ascending `r` and then by design.
pub fn sensitivity_sweep(template: &SystemParams, opts: &SweepOptions) -> Result<Vec<SweepRow>> {
    let grid = r_grid(opts.r_min, opts.r_max, opts.steps, opts.spacing)?;
    let per_r: Vec<Vec<SweepRow>> = grid
        .par_iter()
        .map(|&r| {
            let p = if opts.normalize {
                SystemParams::normalized(r)?
            } else {
                template.with_r(r)?
            };
            SWEEP_KINDS
                .iter()
                .map(|&k| design(&p, k).map(|d| SweepRow::from_design(&d)))
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(per_r.into_iter().flatten().collect())
}

/// Writes the rows as CSV with 12 significant digits.
pub fn write_sweep_csv<W: Write>(mut w: W, rows: &[SweepRow]) -> io::Result<()> {
    writeln!(w, "{SWEEP_CSV_HEADER}")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            row.label,
            sig(row.r, 12),
            sig(row.alpha_deg, 12),
            sig(row.alpha_bar_deg, 12),
            sig(row.g, 12),
            sig(row.cost, 12),
            sig(row.area_per_facility, 12)
        )?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlotQuantity {
    Alpha,
    AlphaBar,
    G,
    Cost,
}

impl PlotQuantity {
    fn value(self, row: &SweepRow) -> f64 {
        match self {
            PlotQuantity::Alpha => row.alpha_deg,
            PlotQuantity::AlphaBar => row.alpha_bar_deg,
            PlotQuantity::G => row.g,
            PlotQuantity::Cost => row.cost,
        }
    }

    fn axis_label(self) -> &'static str {
        match self {
            PlotQuantity::Alpha => "alpha (deg)",
            PlotQuantity::AlphaBar => "alpha bar (deg)",
            PlotQuantity::G => "g",
            PlotQuantity::Cost => "cost per area-time",
        }
    }
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Line plot of `quantity` against `r`, one polyline per label in order of
/// first appearance. `preamble` lines go into a leading XML comment.
pub fn write_sweep_svg<W: Write>(
    mut w: W,
    rows: &[SweepRow],
    quantity: PlotQuantity,
    preamble: &[String],
) -> io::Result<()> {
    const W_PX: f64 = 720.0;
    const H_PX: f64 = 440.0;
    const LEFT: f64 = 70.0;
    const RIGHT: f64 = 150.0;
    const TOP: f64 = 20.0;
    const BOTTOM: f64 = 50.0;

    let mut order: Vec<&str> = Vec::new();
    let mut series: BTreeMap<&str, Vec<(f64, f64)>> = BTreeMap::new();
    for row in rows {
        if !series.contains_key(row.label.as_str()) {
            order.push(&row.label);
        }
        series.entry(&row.label).or_default().push((row.r, quantity.value(row)));
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in series.values().flatten() {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if !(x1 > x0) {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if !(y1 > y0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);
    let pw = W_PX - LEFT - RIGHT;
    let ph = H_PX - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

    writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    if !preamble.is_empty() {
        writeln!(w, "<!--")?;
        for line in preamble {
            writeln!(w, "  {}", line.replace("--", "- -"))?;
        }
        writeln!(w, "-->")?;
    }
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W_PX}" height="{H_PX}" viewBox="0 0 {W_PX} {H_PX}" font-family="sans-serif" font-size="12">"#
    )?;
    writeln!(w, r#"<rect x="0" y="0" width="{W_PX}" height="{H_PX}" fill="white"/>"#)?;
    writeln!(
        w,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black" stroke-width="1"/>"#
    )?;
    for i in 0..=5 {
        let t = i as f64 / 5.0;
        let xv = x0 + t * (x1 - x0);
        let yv = y0 + t * (y1 - y0);
        let (px, py) = (sx(xv), sy(yv));
        writeln!(
            w,
            r#"<line x1="{px:.3}" y1="{:.3}" x2="{px:.3}" y2="{:.3}" stroke="black"/><text x="{px:.3}" y="{:.3}" text-anchor="middle">{}</text>"#,
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 20.0,
            sig(xv, 4)
        )?;
        writeln!(
            w,
            r#"<line x1="{:.3}" y1="{py:.3}" x2="{LEFT}" y2="{py:.3}" stroke="black"/><text x="{:.3}" y="{:.3}" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0,
            sig(yv, 4)
        )?;
    }
    writeln!(
        w,
        r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">r</text>"#,
        LEFT + pw / 2.0,
        H_PX - 10.0
    )?;
    writeln!(
        w,
        r#"<text x="15" y="{:.3}" text-anchor="middle" transform="rotate(-90 15 {:.3})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        quantity.axis_label()
    )?;
    for (k, label) in order.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut pts = String::new();
        for (i, &(x, y)) in series[label].iter().enumerate() {
            if i > 0 {
                pts.push(' ');
            }
            let _ = write!(pts, "{:.3},{:.3}", sx(x), sy(y));
        }
        writeln!(
            w,
            r#"<polyline class="series" data-label="{label}" fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>"#
        )?;
        let ly = TOP + 15.0 + 18.0 * k as f64;
        let lx = W_PX - RIGHT + 15.0;
        writeln!(
            w,
            r#"<line x1="{lx}" y1="{ly}" x2="{:.3}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{:.3}" y="{:.3}">{label}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0
        )?;
    }
    writeln!(w, "</svg>")
}
