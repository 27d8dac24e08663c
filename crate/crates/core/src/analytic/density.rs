use super::{CostBreakdown, DensityResult, InventoryParams, SystemParams};
use crate::error::{Error, Result};
use crate::roots::safeguarded_newton;

fn check_g(g: f64) -> Result<()> {
    if !(g > 0.0 && g.is_finite()) {
        return Err(Error::domain("shape coefficient", format!("g = {g} must be positive")));
    }
    Ok(())
}

/// Optimal density and cost for shape coefficient `g`.
///
/// The transport share (outbound plus inbound) is reported in
/// `cost.outbound`; callers that know the tour geometry move the inbound
/// part out with [`DensityResult::split_inbound`].
pub fn z_from_g(params: &SystemParams, g: f64) -> Result<DensityResult> {
    check_g(g)?;
    let kappa = params.kappa();
    let f = params.facility_cost();
    let area = (kappa / 2.0).powf(-2.0 / 3.0) * g.powf(2.0 / 3.0);
    let facility = f / area;
    let transport = kappa * f * area.sqrt() / g;
    Ok(DensityResult {
        area_per_facility: area,
        g_value: g,
        cost: CostBreakdown::new(facility, transport, 0.0, 0.0),
    })
}

/// Per-area cost with EOQ inventory at facility area `area`.
fn inventory_cost(params: &SystemParams, inv: &InventoryParams, g: f64, area: f64) -> CostBreakdown {
    let kappa = params.kappa();
    let f = params.facility_cost();
    CostBreakdown::new(
        f / area,
        kappa * f * area.sqrt() / g,
        0.0,
        f * (2.0 * inv.bh() * area).sqrt() * kappa.cbrt() / area,
    )
}

/// Density minimizing facility, transport and EOQ inventory cost.
///
/// Solves the stationarity condition `(κ/2g)u³ − (√(2bh)/2)κ^{1/3}u − 1 = 0`
/// for `u = (A/N)^{1/2}`. The cubic has exactly one positive root and the
/// per-area cost is convex in `u` on both sides of it.
pub fn inventory_area_density(params: &SystemParams, inv: &InventoryParams, g: f64) -> Result<DensityResult> {
    check_g(g)?;
    let bh = inv.bh();
    if bh == 0.0 {
        return z_from_g(params, g);
    }
    let kappa = params.kappa();
    let k3 = kappa / (2.0 * g);
    let k1 = (2.0 * bh).sqrt() * kappa.cbrt() / 2.0;
    let cubic = |u: f64| (k3 * u * u * u - k1 * u - 1.0, 3.0 * k3 * u * u - k1);
    // The no-inventory root is a strict lower bound.
    let lo = (1.0 / k3).cbrt();
    let mut hi = 2.0 * lo;
    while cubic(hi).0 <= 0.0 {
        hi *= 2.0;
    }
    let u = safeguarded_newton("inventory cubic", cubic, lo, hi, hi, 1e-15)?;
    let area = u * u;
    Ok(DensityResult {
        area_per_facility: area,
        g_value: g,
        cost: inventory_cost(params, inv, g, area),
    })
}

/// Trigonometric closed form for the inventory density. Only defined when
/// `(2bh/9)^{-3/4} g^{-1/2} ≤ 1`, i.e. when the cubic has three real roots.
pub fn closed_form_inventory_area(kappa: f64, g: f64, inv: &InventoryParams) -> Option<f64> {
    let bh = inv.bh();
    if bh <= 0.0 || g <= 0.0 {
        return None;
    }
    let arg = (2.0 * bh / 9.0).powf(-0.75) / g.sqrt();
    if arg > 1.0 {
        return None;
    }
    let c = (arg.acos() / 3.0).cos();
    Some(4.0 * 2f64.sqrt() / 3.0 * kappa.powf(-2.0 / 3.0) * g * bh.sqrt() * c * c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::g_regular;

    fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..300 {
            let c = b - phi * (b - a);
            let d = a + phi * (b - a);
            if f(c) < f(d) {
                b = d;
            } else {
                a = c;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn hexagon_density_values() {
        let p = SystemParams::normalized(0.0).unwrap();
        let g = g_regular(6.0).unwrap();
        let d = z_from_g(&p, g).unwrap();
        let direct = golden_min(|a| 1.0 / a + a.sqrt() / g, 0.1, 20.0);
        assert!((d.area_per_facility - direct).abs() < 1e-7);
        assert!((d.cost.total - 0.986_612_335_770_089_3).abs() < 1e-12);
        assert!((d.area_per_facility - 3.040_707_977_422_948_6).abs() < 1e-12);
        assert!((d.cost.facility - d.cost.total / 3.0).abs() < 1e-12 * d.cost.total);
    }

    #[test]
    fn scaling_in_kappa_and_f() {
        let g = 1.3;
        let base = z_from_g(&SystemParams::normalized(0.0).unwrap(), g).unwrap();
        for (f, c, lam) in [(2.0, 1.0, 1.0), (0.5, 3.0, 2.0), (7.0, 0.2, 5.0)] {
            let p = SystemParams::new(f, c, lam, 0.0).unwrap();
            let k: f64 = p.kappa();
            let d = z_from_g(&p, g).unwrap();
            assert!((d.cost.total - k.powf(2.0 / 3.0) * f * base.cost.total).abs() < 1e-12 * d.cost.total);
            assert!((d.area_per_facility - k.powf(-2.0 / 3.0) * base.area_per_facility).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_nonpositive_g() {
        let p = SystemParams::normalized(1.0).unwrap();
        assert!(z_from_g(&p, 0.0).is_err());
        assert!(inventory_area_density(&p, &InventoryParams::new(1.0, 1.0).unwrap(), -1.0).is_err());
    }

    #[test]
    fn zero_inventory_is_plain_density() {
        let p = SystemParams::new(2.0, 1.5, 1.0, 1.0).unwrap();
        let inv = InventoryParams::new(0.0, 3.0).unwrap();
        assert_eq!(
            inventory_area_density(&p, &inv, 0.9).unwrap(),
            z_from_g(&p, 0.9).unwrap()
        );
    }

    #[test]
    fn tiny_inventory_is_continuous() {
        let p = SystemParams::normalized(1.0).unwrap();
        let inv = InventoryParams::from_product(1e-12).unwrap();
        let a0 = z_from_g(&p, 0.97).unwrap().area_per_facility;
        let a1 = inventory_area_density(&p, &inv, 0.97).unwrap().area_per_facility;
        assert!(((a1 - a0) / a0).abs() < 1e-6);
        assert!(a1 > a0);
    }

    #[test]
    fn cubic_root_minimizes_cost() {
        for (kappa, g, bh) in [(1.0, 2.65, 1.0), (0.3, 0.9, 4.0), (5.0, 0.3, 0.2)] {
            let p = SystemParams::new(1.0, kappa, 1.0, 0.0).unwrap();
            let inv = InventoryParams::from_product(bh).unwrap();
            let d = inventory_area_density(&p, &inv, g).unwrap();
            let direct = golden_min(|a| inventory_cost(&p, &inv, g, a).total, 1e-3, 1e3);
            assert!((d.area_per_facility - direct).abs() < 1e-5 * direct);
        }
    }

    #[test]
    fn closed_form_agrees_where_defined() {
        let mut checked = 0;
        for kappa in [0.5, 1.0, 3.0] {
            for g in [0.3, 1.0, 2.65] {
                for bh in [0.5, 1.0, 3.0, 10.0, 50.0] {
                    let p = SystemParams::new(1.0, kappa, 1.0, 0.0).unwrap();
                    let inv = InventoryParams::from_product(bh).unwrap();
                    if let Some(a) = closed_form_inventory_area(kappa, g, &inv) {
                        let d = inventory_area_density(&p, &inv, g).unwrap();
                        assert!(((d.area_per_facility - a) / a).abs() < 1e-8);
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked >= 10);
        // frozen from an independent root bracket of the same cubic
        let inv = InventoryParams::from_product(3.0).unwrap();
        let a = closed_form_inventory_area(1.0, 2.65, &inv).unwrap();
        assert!((a - 8.327_738_322_541_824).abs() < 1e-9);
        assert!(closed_form_inventory_area(1.0, 2.65, &InventoryParams::from_product(1.0).unwrap()).is_none());
    }
}
