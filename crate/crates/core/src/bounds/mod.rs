//! Headline designs built from the analytic kernel: the Euclidean cyclic
//! hexagon upper bound, the stadium lower bound, the exact L1 optimum, and
//! the comparisons and sweeps around them.

mod inventory;
mod sweep;

pub use inventory::{inventory_comparison, InventoryRow};
pub use sweep::{
    r_grid, sensitivity_sweep, write_sweep_csv, write_sweep_svg, PlotQuantity, Spacing, SweepOptions, SweepRow,
    SWEEP_CSV_HEADER,
};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::analytic::{
    g_bar, g_cyclic, g_limit, z_from_g, DensityResult, ShapeConfig, Sides, StadiumGeometry, SystemParams,
};
use crate::error::{Error, Result};
use crate::geometry::Metric;

/// Largest accepted relative cost gap between the hexagon upper bound and
/// the stadium lower bound.
pub const GAP_THRESHOLD: f64 = 0.0035;

/// Which design a result belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DesignKind {
    /// Optimal cyclic polygon with the given number of sides.
    Cyclic(u32),
    /// The `n → ∞` relaxation (Euclidean lower bound).
    Limit,
    /// The exact optimum under the L1 metric.
    L1Optimum,
}

impl DesignKind {
    pub fn label(&self) -> String {
        match self {
            DesignKind::Cyclic(3) => "tri".into(),
            DesignKind::Cyclic(4) => "quad".into(),
            DesignKind::Cyclic(6) => "hex-ub".into(),
            DesignKind::Cyclic(n) => format!("cyclic-{n}"),
            DesignKind::Limit => "inf-lb".into(),
            DesignKind::L1Optimum => "l1-opt".into(),
        }
    }

    pub fn metric(&self) -> Metric {
        match self {
            DesignKind::L1Optimum => Metric::L1,
            _ => Metric::Euclid,
        }
    }
}

impl fmt::Display for DesignKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// An optimal design: density, cost split and region shape.
///
/// For the L1 optimum `shape` holds the elongated hexagon's half angles
/// `(α, (π/2 − α)/2)` and corner radius; they satisfy the hexagon angle
/// identity but not the cyclic ordering `α ≥ π/6` at small `r`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Design {
    pub kind: DesignKind,
    pub r: f64,
    pub density: DensityResult,
    pub shape: ShapeConfig,
    /// Tour length inside one region.
    pub tour_length: f64,
    /// Region geometry of the lower bound, for reporting.
    pub stadium: Option<StadiumGeometry>,
}

/// Inbound cost per area-time for tour length `l` inside each region.
fn inbound_share(params: &SystemParams, l: f64) -> f64 {
    params.kappa() * params.r() * params.facility_cost() * l
}

/// Optimal `n`-sided cyclic polygon design.
pub fn cyclic_design(params: &SystemParams, n: u32) -> Result<Design> {
    if n < 3 {
        return Err(Error::domain("polygon sides", format!("n = {n} must be at least 3")));
    }
    let shape = g_cyclic(n, params.r())?;
    let density = z_from_g(params, shape.g)?;
    let a = density.area_per_facility;
    let l = shape.tour_length(a);
    Ok(Design {
        kind: DesignKind::Cyclic(n),
        r: params.r(),
        density: density.split_inbound(inbound_share(params, l)),
        shape: shape.shape_for_area(a),
        tour_length: l,
        stadium: None,
    })
}

/// The cyclic hexagon design, a feasible and near-tight upper bound.
pub fn euclidean_upper_bound(params: &SystemParams) -> Result<Design> {
    cyclic_design(params, 6)
}

/// The relaxed `n → ∞` design; its cost bounds every Euclidean layout from
/// below.
pub fn euclidean_lower_bound(params: &SystemParams) -> Result<Design> {
    let shape = g_limit(params.r())?;
    let density = z_from_g(params, shape.g)?;
    let stadium = shape.geometry(density.area_per_facility);
    let l = stadium.tour_length();
    Ok(Design {
        kind: DesignKind::Limit,
        r: params.r(),
        density: density.split_inbound(inbound_share(params, l)),
        shape: ShapeConfig {
            sides: Sides::Infinite,
            alpha: shape.alpha,
            alpha_bar: 0.0,
            circumradius: stadium.radius,
        },
        tour_length: l,
        stadium: Some(stadium),
    })
}

/// The exact optimum under the L1 metric.
pub fn l1_optimum(params: &SystemParams) -> Result<Design> {
    let shape = g_bar(params.r())?;
    let density = z_from_g(params, shape.g)?;
    let hex = shape.geometry(density.area_per_facility);
    let l = hex.tour_length();
    Ok(Design {
        kind: DesignKind::L1Optimum,
        r: params.r(),
        density: density.split_inbound(inbound_share(params, l)),
        shape: ShapeConfig {
            sides: Sides::Finite(6),
            alpha: hex.alpha,
            alpha_bar: hex.alpha_bar,
            circumradius: hex.radius,
        },
        tour_length: l,
        stadium: None,
    })
}

/// The design of `kind` at `params`.
pub fn design(params: &SystemParams, kind: DesignKind) -> Result<Design> {
    match kind {
        DesignKind::Cyclic(n) => cyclic_design(params, n),
        DesignKind::Limit => euclidean_lower_bound(params),
        DesignKind::L1Optimum => l1_optimum(params),
    }
}

/// One row per requested polygon, followed by the lower-bound row.
pub fn shape_comparison(params: &SystemParams, n_list: &[u32]) -> Result<Vec<SweepRow>> {
    let mut rows = n_list
        .iter()
        .map(|&n| cyclic_design(params, n).map(|d| SweepRow::from_design(&d)))
        .collect::<Result<Vec<_>>>()?;
    rows.push(SweepRow::from_design(&euclidean_lower_bound(params)?));
    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub r: f64,
    pub g_upper: f64,
    pub g_lower: f64,
    /// `(g(∞, r)/g(6, r))^{2/3} − 1`, the relative cost excess of the hexagon.
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapTable {
    pub rows: Vec<GapRow>,
    pub max_gap: f64,
    pub argmax_r: f64,
}

impl GapTable {
    /// Every gap positive and the largest within [`GAP_THRESHOLD`].
    pub fn within_threshold(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|row| row.gap > 0.0) && self.max_gap <= GAP_THRESHOLD
    }
}

/// Relative gap between the upper and lower bound at each `r`.
pub fn gap_analysis(r_grid: &[f64]) -> Result<GapTable> {
    let mut rows = Vec::with_capacity(r_grid.len());
    for &r in r_grid {
        let upper = g_cyclic(6, r)?.g;
        let lower = g_limit(r)?.g;
        rows.push(GapRow {
            r,
            g_upper: upper,
            g_lower: lower,
            gap: (lower / upper).powf(2.0 / 3.0) - 1.0,
        });
    }
    let (max_gap, argmax_r) = rows.iter().fold((f64::NEG_INFINITY, f64::NAN), |acc, row| {
        if row.gap > acc.0 {
            (row.gap, row.r)
        } else {
            acc
        }
    });
    Ok(GapTable {
        rows,
        max_gap,
        argmax_r,
    })
}
