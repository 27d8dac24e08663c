//! Closed-form kernel: special functions, shape coefficients, and the
//! density/cost relations for every design the crate knows about.
//!
//! Every design reduces to a dimensionless shape coefficient `g`; the optimal
//! per-area cost is then `3 (κ² f³ / (4 g²))^{1/3}` at facility density
//! `A/N = (κ/2)^{-2/3} g^{2/3}`. Larger `g` means a better shape.

mod cyclic;
mod density;
mod l1;
mod limit;
mod special;

pub use cyclic::{g_cyclic, h_function, solve_alpha_star, CyclicShape, ALPHA_TOL};
pub use density::{closed_form_inventory_area, inventory_area_density, z_from_g};
pub use l1::{alpha_star_l1, g_bar, l1_region_cost, L1Hexagon, L1Shape};
pub use limit::{alpha_star_limit, g_limit, limit_h, limit_h_bracket, LimitShape, StadiumGeometry};
pub use special::{g_regular, sec_cubed_integral, sec_cubed_symmetric, secant_integral, triangle_cost};

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cost rates of the continuous system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemParams {
    facility_cost: f64,
    outbound_rate: f64,
    demand_density: f64,
    inbound_rate: f64,
}

impl SystemParams {
    /// `f` per facility-time, `c` per demand-distance, `λ` demand per
    /// area-time, `C` per inbound distance. `C = 0` models a negligible
    /// inbound cost; the other three must be strictly positive.
    pub fn new(facility_cost: f64, outbound_rate: f64, demand_density: f64, inbound_rate: f64) -> Result<Self> {
        for (name, v) in [
            ("facility cost f", facility_cost),
            ("outbound rate c", outbound_rate),
            ("demand density λ", demand_density),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(
                    "system parameter",
                    format!("{name} = {v} must be positive"),
                ));
            }
        }
        if !(inbound_rate.is_finite() && inbound_rate >= 0.0) {
            return Err(Error::domain(
                "system parameter",
                format!("inbound rate C = {inbound_rate} must be non-negative"),
            ));
        }
        Ok(Self {
            facility_cost,
            outbound_rate,
            demand_density,
            inbound_rate,
        })
    }

    /// The dimensionless system with `κ = f = 1` and the given `r`.
    pub fn normalized(r: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, r)
    }

    /// Same `κ` and `f`, different inbound ratio `r`.
    pub fn with_r(&self, r: f64) -> Result<Self> {
        Self::new(
            self.facility_cost,
            self.outbound_rate,
            self.demand_density,
            r * self.outbound_rate * self.demand_density,
        )
    }

    pub fn facility_cost(&self) -> f64 {
        self.facility_cost
    }
    pub fn outbound_rate(&self) -> f64 {
        self.outbound_rate
    }
    pub fn demand_density(&self) -> f64 {
        self.demand_density
    }
    pub fn inbound_rate(&self) -> f64 {
        self.inbound_rate
    }

    /// `κ = cλ/f`.
    pub fn kappa(&self) -> f64 {
        self.outbound_rate * self.demand_density / self.facility_cost
    }

    /// `r = C/(cλ)`.
    pub fn r(&self) -> f64 {
        self.inbound_rate / (self.outbound_rate * self.demand_density)
    }
}

/// Number of polygon sides; `Infinite` is the limiting stadium region.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sides {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Sides {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sides::Finite(n) => write!(f, "{n}"),
            Sides::Infinite => f.write_str("inf"),
        }
    }
}

/// A cyclic service polygon: two tour-crossed basic triangles with half
/// basic angle `alpha`, the remaining `n - 2` with half angle `alpha_bar`,
/// all radial sides of length `circumradius`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeConfig {
    pub sides: Sides,
    pub alpha: f64,
    pub alpha_bar: f64,
    pub circumradius: f64,
}

impl ShapeConfig {
    /// `(n-2)·ᾱ + 2α - π`; zero for a closed cyclic polygon.
    pub fn angle_identity_residual(&self) -> f64 {
        match self.sides {
            Sides::Finite(n) => (n as f64 - 2.0) * self.alpha_bar + 2.0 * self.alpha - PI,
            Sides::Infinite => self.alpha_bar,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |detail: String| Err(Error::domain("shape", detail));
        if !(self.circumradius > 0.0 && self.circumradius.is_finite()) {
            return bad(format!("circumradius {} must be positive", self.circumradius));
        }
        match self.sides {
            Sides::Finite(n) => {
                if n < 3 {
                    return bad(format!("{n} sides"));
                }
                if self.angle_identity_residual().abs() > 1e-12 {
                    return bad(format!(
                        "angle identity violated by {:e}",
                        self.angle_identity_residual()
                    ));
                }
                if !(self.alpha >= PI / n as f64 - 1e-12 && self.alpha < PI / 2.0) {
                    return bad(format!("alpha {} outside [π/{n}, π/2)", self.alpha));
                }
                if self.alpha < self.alpha_bar - 1e-12 {
                    return bad("alpha smaller than alpha_bar".into());
                }
            }
            Sides::Infinite => {
                if self.alpha_bar != 0.0 || !(0.0..PI / 2.0).contains(&self.alpha) {
                    return bad(format!(
                        "limit shape needs alpha_bar = 0 and alpha in [0, π/2), got ({}, {})",
                        self.alpha, self.alpha_bar
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Per area-time cost components.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub facility: f64,
    pub outbound: f64,
    pub inbound: f64,
    pub inventory: f64,
    pub total: f64,
}

impl CostBreakdown {
    pub fn new(facility: f64, outbound: f64, inbound: f64, inventory: f64) -> Self {
        Self {
            facility,
            outbound,
            inbound,
            inventory,
            total: facility + outbound + inbound + inventory,
        }
    }

    /// Multiplies every component by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self::new(
            self.facility * s,
            self.outbound * s,
            self.inbound * s,
            self.inventory * s,
        )
    }
}

/// Optimal facility density for a shape coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityResult {
    pub area_per_facility: f64,
    pub g_value: f64,
    pub cost: CostBreakdown,
}

impl DensityResult {
    /// Moves `inbound` out of the combined transport share held in
    /// `cost.outbound`. The total is unchanged.
    pub fn split_inbound(mut self, inbound: f64) -> Self {
        let c = self.cost;
        self.cost = CostBreakdown::new(c.facility, c.outbound - inbound, c.inbound + inbound, c.inventory);
        self
    }
}

/// Normalized EOQ coefficients: fixed order cost `b·fκ^{1/3}/λ` and holding
/// cost `h·fκ^{1/3}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InventoryParams {
    pub order_cost: f64,
    pub holding_cost: f64,
}

impl InventoryParams {
    pub fn new(order_cost: f64, holding_cost: f64) -> Result<Self> {
        if !(order_cost >= 0.0 && holding_cost >= 0.0 && order_cost.is_finite() && holding_cost.is_finite()) {
            return Err(Error::domain(
                "inventory parameters",
                format!("b = {order_cost}, h = {holding_cost} must be non-negative"),
            ));
        }
        Ok(Self {
            order_cost,
            holding_cost,
        })
    }

    /// Parameters with the given product `b·h` (only the product matters).
    pub fn from_product(bh: f64) -> Result<Self> {
        Self::new(bh, 1.0)
    }

    pub fn bh(&self) -> f64 {
        self.order_cost * self.holding_cost
    }
}
