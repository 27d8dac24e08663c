use serde::{Deserialize, Serialize};

use crate::analytic::{g_bar, g_cyclic, inventory_area_density, z_from_g, InventoryParams, SystemParams};
use crate::error::{Error, Result};
use crate::geometry::Metric;

/// Cost with and without EOQ inventory for one `(bh, r, metric)` cell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InventoryRow {
    pub bh: f64,
    pub r: f64,
    pub metric: Metric,
    pub g: f64,
    pub cost_without: f64,
    pub cost_with: f64,
    pub area_without: f64,
    pub area_with: f64,
    /// `cost_with / cost_without − 1`.
    pub relative_difference: f64,
}

/// Shape coefficient of the elongated-hexagon design for `metric`.
fn design_g(metric: Metric, r: f64) -> Result<f64> {
    Ok(match metric {
        Metric::Euclid => g_cyclic(6, r)?.g,
        Metric::L1 => g_bar(r)?.g,
    })
}

/// Relative cost increase from inventory over the grid, ordered by `bh`,
/// then `r`, then metric (Euclidean first).
pub fn inventory_comparison(
    params: &SystemParams,
    inv_grid: &[InventoryParams],
    r_grid: &[f64],
) -> Result<Vec<InventoryRow>> {
    if inv_grid.is_empty() || r_grid.is_empty() {
        return Err(Error::domain("inventory grid", "both grids must be non-empty"));
    }
    let mut rows = Vec::with_capacity(inv_grid.len() * r_grid.len() * 2);
    for inv in inv_grid {
        for &r in r_grid {
            let p = params.with_r(r)?;
            for metric in [Metric::Euclid, Metric::L1] {
                let g = design_g(metric, r)?;
                let without = z_from_g(&p, g)?;
                let with = inventory_area_density(&p, inv, g)?;
                rows.push(InventoryRow {
                    bh: inv.bh(),
                    r,
                    metric,
                    g,
                    cost_without: without.cost.total,
                    cost_with: with.cost.total,
                    area_without: without.area_per_facility,
                    area_with: with.area_per_facility,
                    relative_difference: with.cost.total / without.cost.total - 1.0,
                });
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_inventory_costs_nothing() {
        let p = SystemParams::normalized(0.0).unwrap();
        let rows = inventory_comparison(&p, &[InventoryParams::new(0.0, 0.0).unwrap()], &[0.0, 1.0, 5.0]).unwrap();
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|row| row.relative_difference == 0.0));
    }

    #[test]
    fn inventory_trends_on_grid() {
        let p = SystemParams::normalized(0.0).unwrap();
        let bhs: Vec<_> = (1..=10)
            .map(|i| InventoryParams::from_product(0.1 * i as f64).unwrap())
            .collect();
        let rs: Vec<f64> = (0..10).map(|i| 5.0 * i as f64 / 9.0).collect();
        let rows = inventory_comparison(&p, &bhs, &rs).unwrap();
        let at = |b: usize, r: usize, m: usize| rows[(b * rs.len() + r) * 2 + m].relative_difference;
        for m in 0..2 {
            for b in 0..bhs.len() {
                for r in 1..rs.len() {
                    assert!(at(b, r, m) < at(b, r - 1, m));
                }
            }
            for r in 0..rs.len() {
                for b in 1..bhs.len() {
                    assert!(at(b, r, m) > at(b - 1, r, m));
                }
            }
        }
    }

    #[test]
    fn empty_grid_rejected() {
        let p = SystemParams::normalized(0.0).unwrap();
        assert!(inventory_comparison(&p, &[], &[1.0]).is_err());
    }
}
