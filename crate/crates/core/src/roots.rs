//! Scalar root finders shared by the angle and density solvers.

use crate::error::{Error, Result};

/// Bisection on `[lo, hi]` for a function with `f(lo) < 0 < f(hi)`.
///
/// Stops once the bracket is narrower than `tol`, or when the midpoint can no
/// longer be separated from an endpoint in `f64`. An exact zero at an endpoint
/// is returned immediately.
pub fn bisect<F>(what: &'static str, mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::NoBracket {
            what,
            lo,
            hi,
            f_lo,
            f_hi,
        });
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Newton's method kept inside a shrinking sign bracket; any step that leaves
/// the bracket (or fails to halve it) falls back to bisection.
///
/// Requires `f(lo) < 0 < f(hi)`.
pub fn safeguarded_newton<F>(what: &'static str, mut f: F, lo: f64, hi: f64, start: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> (f64, f64),
{
    let (f_lo, _) = f(lo);
    let (f_hi, _) = f(hi);
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::NoBracket {
            what,
            lo,
            hi,
            f_lo,
            f_hi,
        });
    }
    let (mut a, mut b) = (lo, hi);
    let mut x = start.clamp(a, b);
    let mut last_width = b - a;
    for _ in 0..200 {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            a = x;
        } else {
            b = x;
        }
        if b - a <= tol * x.abs().max(1.0) {
            return Ok(0.5 * (a + b));
        }
        let newton = x - fx / dfx;
        let width = b - a;
        let step_ok = dfx.is_finite() && dfx != 0.0 && newton > a && newton < b;
        if step_ok && (newton - x).abs() <= tol * x.abs().max(1.0) {
            return Ok(newton);
        }
        let stalled = width > 0.5 * last_width;
        x = if step_ok && !stalled { newton } else { 0.5 * (a + b) };
        last_width = width;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let x = bisect("x^2-2", |x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((x - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn bisect_rejects_same_sign() {
        let err = bisect("x^2+1", |x| x * x + 1.0, -1.0, 1.0, 1e-12).unwrap_err();
        assert!(matches!(err, Error::NoBracket { .. }));
    }

    #[test]
    fn newton_matches_bisect_on_cubic() {
        let f = |u: f64| (u * u * u - 3.0 * u - 5.0, 3.0 * u * u - 3.0);
        let n = safeguarded_newton("cubic", f, 0.0, 10.0, 0.5, 1e-15).unwrap();
        let b = bisect("cubic", |u| u * u * u - 3.0 * u - 5.0, 0.0, 10.0, 1e-15).unwrap();
        assert!((n - b).abs() < 1e-12, "{n} vs {b}");
    }
}
