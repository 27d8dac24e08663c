use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::special::log_tan;
use crate::error::{Error, Result};
use crate::roots::bisect;

/// Bracketed factor of the `n → ∞` first-order condition:
/// `sin α − cos²α·L(α) − r·sin 2α − r(π − 2α)`.
pub fn limit_h_bracket(r: f64, alpha: f64) -> f64 {
    let (s, c) = alpha.sin_cos();
    s - c * c * log_tan(alpha) - r * (2.0 * alpha).sin() - r * (PI - 2.0 * alpha)
}

/// `lim (n−2)·H(n, r, α)` as `n → ∞`, obtained by expanding
/// `ᾱ = (π − 2α)/(n − 2)` to first order.
pub fn limit_h(r: f64, alpha: f64) -> Result<f64> {
    if !(0.0..FRAC_PI_2).contains(&alpha) {
        return Err(Error::domain("limit H", format!("alpha = {alpha} not in [0, π/2)")));
    }
    Ok((PI - 2.0 * alpha) * limit_h_bracket(r, alpha))
}

/// Root of [`limit_h`] in `[0, π/2)`; zero when `r = 0`.
pub fn alpha_star_limit(r: f64) -> Result<f64> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::domain("limit alpha*", format!("r = {r} must be non-negative")));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    bisect(
        "lim (n-2)H",
        |a| limit_h_bracket(r, a),
        0.0,
        FRAC_PI_2 - 1e-12,
        super::ALPHA_TOL,
    )
}

/// The limiting (infeasible) region: two basic triangles crossed by a
/// straight tour plus two circular pie sectors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StadiumGeometry {
    pub alpha: f64,
    pub radius: f64,
    /// Distance from the facility to each boundary line crossing the tour.
    pub half_spacing: f64,
    /// Opening angle of each pie sector, `π − 2α`.
    pub pie_angle: f64,
    pub area: f64,
}

impl StadiumGeometry {
    pub fn tour_length(&self) -> f64 {
        2.0 * self.half_spacing
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitShape {
    pub r: f64,
    pub alpha: f64,
    pub g: f64,
}

impl LimitShape {
    pub fn geometry(&self, area: f64) -> StadiumGeometry {
        let radius = (area / ((2.0 * self.alpha).sin() + PI - 2.0 * self.alpha)).sqrt();
        StadiumGeometry {
            alpha: self.alpha,
            radius,
            half_spacing: radius * self.alpha.cos(),
            pie_angle: PI - 2.0 * self.alpha,
            area,
        }
    }
}

/// `g(∞, r) = 3 (sin 2α* + π − 2α*)^{1/2} / (2 + 4r cos α*)`.
pub fn g_limit(r: f64) -> Result<LimitShape> {
    let alpha = alpha_star_limit(r)?;
    let g = 3.0 * ((2.0 * alpha).sin() + PI - 2.0 * alpha).sqrt() / (2.0 + 4.0 * r * alpha.cos());
    Ok(LimitShape { r, alpha, g })
}

#[cfg(test)]
mod tests {
    use super::super::cyclic::{g_cyclic, h_unchecked};
    use super::super::special::sec_cubed_symmetric;
    use super::*;

    #[test]
    fn closed_form_matches_large_n() {
        let n = 1e6;
        for r in [0.0, 1.0, 10.0] {
            for i in 1..40 {
                let a = 1.5 * i as f64 / 40.0;
                let big = (n - 2.0) * h_unchecked(n, r, a);
                let lim = limit_h(r, a).unwrap();
                assert!(
                    (big - lim).abs() < 1e-6 * lim.abs().max(1.0),
                    "r={r} a={a}: {big} vs {lim}"
                );
            }
        }
    }

    #[test]
    fn bracket_is_monotone() {
        for r in [0.0, 0.1, 1.0, 10.0] {
            let mut prev = f64::NEG_INFINITY;
            for i in 0..1000 {
                let v = limit_h_bracket(r, (FRAC_PI_2 - 1e-6) * i as f64 / 999.0);
                assert!(v > prev);
                prev = v;
            }
        }
    }

    #[test]
    fn alpha_star_limit_values() {
        assert_eq!(alpha_star_limit(0.0).unwrap(), 0.0);
        let a1 = alpha_star_limit(1.0).unwrap();
        assert!((a1 - 1.349_736_753_192_364_5).abs() < 1e-11, "{a1}");
        let big = 1e6f64;
        let cross = bisect("n=1e6", |a| h_unchecked(big, 1.0, a), 1e-9, FRAC_PI_2 - 1e-9, 1e-14).unwrap();
        assert!((a1 - cross).abs() < 1e-5);
        let rs = [0.001, 0.01, 0.1, 1.0, 5.0, 20.0];
        let alphas: Vec<f64> = rs.iter().map(|&r| alpha_star_limit(r).unwrap()).collect();
        assert!(alphas.windows(2).all(|w| w[1] > w[0]));
    }

    /// Per-area transport cost of the limit region at unit area, direct from
    /// the relaxed lower-bound program.
    fn stadium_cost(r: f64, a: f64) -> f64 {
        let radius = (1.0 / ((2.0 * a).sin() + PI - 2.0 * a)).sqrt();
        2.0 / 3.0 * radius.powi(3) * a.cos().powi(3) * sec_cubed_symmetric(a)
            + 2.0 / 3.0 * (PI - 2.0 * a) * radius.powi(3)
            + 2.0 * r * radius * a.cos()
    }

    #[test]
    fn g_limit_matches_relaxed_program() {
        let circle = 3.0 * PI.sqrt() / 2.0;
        assert!((g_limit(0.0).unwrap().g - circle).abs() < 1e-15);
        for r in [0.0, 0.5, 1.0, 10.0] {
            let s = g_limit(r).unwrap();
            let direct = 1.0 / stadium_cost(r, s.alpha);
            assert!((s.g - direct).abs() < 1e-12 * direct, "r={r}");
            // no better angle exists
            for i in 0..500 {
                let a = (FRAC_PI_2 - 1e-6) * i as f64 / 499.0;
                assert!(1.0 / stadium_cost(r, a) <= direct * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn g_limit_consistent_with_large_polygons() {
        for r in [0.0, 1.0, 10.0] {
            let lim = g_limit(r).unwrap().g;
            let big = g_cyclic(10_000, r).unwrap().g;
            assert!((lim - big).abs() < 1e-3, "r={r}: {lim} vs {big}");
        }
    }

    #[test]
    fn geometry_area() {
        let s = g_limit(1.0).unwrap();
        let geo = s.geometry(3.0);
        let area = geo.radius.powi(2) * ((2.0 * geo.alpha).sin() + geo.pie_angle);
        assert!((area - 3.0).abs() < 1e-12);
    }
}
