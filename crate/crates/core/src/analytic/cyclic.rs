use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::special::log_tan;
use super::{ShapeConfig, Sides};
use crate::error::{Error, Result};
use crate::roots::bisect;

/// Default bracket tolerance on `α` for [`solve_alpha_star`].
pub const ALPHA_TOL: f64 = 1e-13;

const BRACKET_TOP_GAP: f64 = 1e-9;

fn check_sides(n: u32) -> Result<()> {
    if n < 3 {
        return Err(Error::domain("cyclic polygon", format!("n = {n} must be at least 3")));
    }
    Ok(())
}

#[inline]
fn alpha_bar_of(n: u32, alpha: f64) -> f64 {
    (PI - 2.0 * alpha) / (n as f64 - 2.0)
}

/// First-order condition of the cyclic-polygon cost in `α` with `ᾱ`
/// eliminated through `(n-2)ᾱ + 2α = π`.
///
/// Non-positive at `α = π/n`, strictly increasing on `[π/n, π/2)`.
pub fn h_function(n: u32, r: f64, alpha: f64) -> Result<f64> {
    check_sides(n)?;
    let lo = PI / n as f64;
    if !(alpha >= lo && alpha < FRAC_PI_2) {
        return Err(Error::domain("H", format!("alpha = {alpha} not in [π/{n}, π/2)")));
    }
    if !(r >= 0.0) {
        return Err(Error::domain("H", format!("r = {r} must be non-negative")));
    }
    Ok(h_unchecked(n as f64, r, alpha))
}

pub(crate) fn h_unchecked(n: f64, r: f64, alpha: f64) -> f64 {
    let ab = (PI - 2.0 * alpha) / (n - 2.0);
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = ab.sin_cos();
    sa * cb * cb * log_tan(ab)
        - ca * ca * sb * log_tan(alpha)
        - r * (2.0 * alpha).sin() * sb
        - r * (n - 2.0) * cb * sb * sb
}

/// The unique root `α*(n, r)` of [`h_function`] in `[π/n, π/2)`.
///
/// At `r = 0` the root is exactly `π/n` (the regular polygon).
pub fn solve_alpha_star(n: u32, r: f64, tol: f64) -> Result<f64> {
    check_sides(n)?;
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::domain("alpha*", format!("r = {r} must be non-negative")));
    }
    if !(tol > 0.0) {
        return Err(Error::domain("alpha*", format!("tolerance {tol} must be positive")));
    }
    let lo = PI / n as f64;
    if r == 0.0 {
        return Ok(lo);
    }
    let nf = n as f64;
    bisect(
        "H(n, r, ·)",
        |a| h_unchecked(nf, r, a),
        lo,
        FRAC_PI_2 - BRACKET_TOP_GAP,
        tol,
    )
}

/// Optimal cyclic polygon with `n` sides at inbound ratio `r`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CyclicShape {
    pub sides: u32,
    pub r: f64,
    pub alpha: f64,
    pub alpha_bar: f64,
    pub g: f64,
}

impl CyclicShape {
    /// Circumradius of the polygon with area `area`.
    pub fn circumradius(&self, area: f64) -> f64 {
        let n = self.sides as f64;
        (area / ((n - 2.0) * self.alpha_bar.sin() * self.alpha_bar.cos() + (2.0 * self.alpha).sin())).sqrt()
    }

    pub fn shape_for_area(&self, area: f64) -> ShapeConfig {
        ShapeConfig {
            sides: Sides::Finite(self.sides),
            alpha: self.alpha,
            alpha_bar: self.alpha_bar,
            circumradius: self.circumradius(area),
        }
    }

    /// Inbound tour length inside one region of area `area`.
    pub fn tour_length(&self, area: f64) -> f64 {
        2.0 * self.circumradius(area) * self.alpha.cos()
    }
}

/// Shape coefficient `g(n, r)` of the optimal `n`-sided cyclic polygon.
pub fn g_cyclic(n: u32, r: f64) -> Result<CyclicShape> {
    let alpha = solve_alpha_star(n, r, ALPHA_TOL)?;
    let alpha_bar = alpha_bar_of(n, alpha);
    let nf = n as f64;
    let (sb, cb) = alpha_bar.sin_cos();
    let g = 3.0 * sb * ((2.0 * alpha).sin() + (nf - 2.0) * cb * sb).sqrt()
        / (sb + cb * cb * log_tan(alpha_bar) + 4.0 * r * sb * alpha.cos());
    Ok(CyclicShape {
        sides: n,
        r,
        alpha,
        alpha_bar,
        g,
    })
}
