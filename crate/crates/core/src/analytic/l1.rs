use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_r(r: f64) -> Result<()> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::domain("L1 design", format!("r = {r} must be non-negative")));
    }
    Ok(())
}

/// Optimal half basic angle under the rectilinear metric:
/// `arctan(2r + √(2r + 4r²))`.
pub fn alpha_star_l1(r: f64) -> Result<f64> {
    check_r(r)?;
    Ok((2.0 * r + (2.0 * r + 4.0 * r * r).sqrt()).atan())
}

/// Transport cost (outbound plus inbound, per region, in units of `κf`) of
/// the elongated L1 hexagon with area `area` and half angle `alpha`.
pub fn l1_region_cost(r: f64, alpha: f64, area: f64) -> Result<f64> {
    check_r(r)?;
    if !(0.0..FRAC_PI_2).contains(&alpha) || !(area > 0.0) {
        return Err(Error::domain(
            "L1 region cost",
            format!("alpha = {alpha}, area = {area}"),
        ));
    }
    let (s, c) = alpha.sin_cos();
    let radius = (area / (2.0 * (c * c + (2.0 * alpha).sin()))).sqrt();
    Ok(2.0 / 3.0 * radius.powi(3) * c * (2.0 + s * s + 6.0 * s * c) + 2.0 * r * radius * area * c)
}

/// The optimal L1 design: an axis-aligned strip intersected with a
/// 45°-rotated square, crossed by a straight tour along the x-axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct L1Shape {
    pub r: f64,
    pub alpha: f64,
    pub g: f64,
}

impl L1Shape {
    pub fn geometry(&self, area: f64) -> L1Hexagon {
        L1Hexagon::new(self.alpha, area)
    }
}

/// Geometry of the elongated L1 hexagon centered on its facility.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct L1Hexagon {
    pub alpha: f64,
    /// Half angle of the four remaining basic triangles, `(π/2 − α)/2`.
    pub alpha_bar: f64,
    /// Distance from the facility to the two corners at angle `±α`.
    pub radius: f64,
    /// Half width of the strip, `R cos α`.
    pub half_width: f64,
    /// L1 radius of the diamond, `R (cos α + sin α)`.
    pub diamond_radius: f64,
    pub area: f64,
}

impl L1Hexagon {
    pub fn new(alpha: f64, area: f64) -> Self {
        let (s, c) = alpha.sin_cos();
        let radius = (area / (2.0 * (c * c + (2.0 * alpha).sin()))).sqrt();
        Self {
            alpha,
            alpha_bar: 0.5 * (FRAC_PI_2 - alpha),
            radius,
            half_width: radius * c,
            diamond_radius: radius * (c + s),
            area,
        }
    }

    pub fn tour_length(&self) -> f64 {
        2.0 * self.half_width
    }
}

/// `ḡ(r)`, the shape coefficient of the optimal L1 design.
pub fn g_bar(r: f64) -> Result<L1Shape> {
    let a = alpha_star_l1(r)?;
    let (s, c) = a.sin_cos();
    let g = 3.0 * (2.0 * c).sqrt() * (2.0 * s + c).powf(1.5) / (3.0 * (2.0 * a).sin() - 2.0 * (2.0 * a).cos() + 4.0);
    Ok(L1Shape { r, alpha: a, g })
}
