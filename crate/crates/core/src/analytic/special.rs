use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// `L(x) = log tan(x/2 + π/4) = ∫₀ˣ sec t dt` for `x ∈ [0, π/2)`.
pub fn secant_integral(x: f64) -> Result<f64> {
    if !(0.0..FRAC_PI_2).contains(&x) {
        return Err(Error::domain("secant integral", format!("x = {x} not in [0, π/2)")));
    }
    Ok(log_tan(x))
}

#[inline]
pub(crate) fn log_tan(x: f64) -> f64 {
    x.tan().asinh()
}

/// `∫₀ˣ sec³ t dt = (sec x tan x + L(x)) / 2`, odd in `x`, `|x| < π/2`.
pub fn sec_cubed_integral(x: f64) -> f64 {
    let s = x.signum();
    let x = x.abs();
    s * 0.5 * (x.tan() / x.cos() + log_tan(x))
}

/// `∫₋ₓˣ sec³ t dt = tan x / cos x + L(x)`.
pub fn sec_cubed_symmetric(x: f64) -> f64 {
    x.tan() / x.cos() + log_tan(x)
}

/// Outbound cost of a basic triangle with full basic angle `theta` at the
/// facility, area `area`, whose foot of the perpendicular from the facility
/// splits the basic angle into `alpha` and `theta - alpha`.
pub fn triangle_cost(alpha: f64, theta: f64, area: f64, kappa: f64, f: f64) -> Result<f64> {
    if !(theta > 0.0 && theta <= PI) {
        return Err(Error::domain(
            "triangle cost",
            format!("basic angle {theta} not in (0, π]"),
        ));
    }
    if !(alpha > 0.0 && alpha < theta) {
        return Err(Error::domain(
            "triangle cost",
            format!("split {alpha} not in (0, {theta})"),
        ));
    }
    if !(area > 0.0) {
        return Err(Error::domain("triangle cost", format!("area {area} must be positive")));
    }
    let other = theta - alpha;
    if alpha >= FRAC_PI_2 || other >= FRAC_PI_2 {
        return Err(Error::domain(
            "triangle cost",
            format!("split ({alpha}, {other}) reaches π/2; the sec³ integral diverges"),
        ));
    }
    let integral = sec_cubed_integral(alpha) + sec_cubed_integral(other);
    Ok(kappa * f / 3.0
        * theta.sin().powf(-1.5)
        * area.powf(1.5)
        * (theta.cos() + (theta - 2.0 * alpha).cos()).powf(1.5)
        * integral)
}

/// Shape coefficient of the regular `n`-gon when inbound cost is ignored.
///
/// Defined for real `n ≥ 3`; `g²` is increasing and concave in `n` and tends
/// to the circle value `3√π/2`.
pub fn g_regular(n: f64) -> Result<f64> {
    if !(n >= 3.0 && n.is_finite()) {
        return Err(Error::domain("regular polygon", format!("n = {n} must be at least 3")));
    }
    let a = PI / n;
    Ok(3.0 * n.sqrt() * a.tan().powf(1.5) / (log_tan(a) + a.tan() / a.cos()))
}
