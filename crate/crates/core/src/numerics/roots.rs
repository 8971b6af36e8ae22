use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 200;

/// Root of `f` in `[a, b]` by bisection with secant acceleration.
///
/// The secant step is taken whenever it lands strictly inside the current
/// bracket and the bracket shrank by at least half over the last two steps;
/// otherwise the step falls back to bisection. Terminates when the bracket is
/// no wider than `tol` or `f` vanishes exactly.
pub fn find_root_bracketed(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    try_find_root_bracketed(|x| Ok(f(x)), a, b, tol)
}

/// Fallible variant of [`find_root_bracketed`]: errors from `f` abort the search.
pub fn try_find_root_bracketed(
    mut f: impl FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64> {
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut f_lo = f(lo)?;
    let mut f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::NoBracket { fa: f_lo, fb: f_hi });
    }

    let mut width_two_steps_ago = f64::INFINITY;
    let mut width_last = hi - lo;
    for _ in 0..MAX_ITERATIONS {
        let width = hi - lo;
        if width <= tol {
            break;
        }
        let secant = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        let use_secant =
            secant > lo && secant < hi && secant.is_finite() && width <= 0.5 * width_two_steps_ago;
        let mut x = if use_secant { secant } else { 0.5 * (lo + hi) };
        // Keep the probe away from the endpoints so the bracket always shrinks.
        let guard = 0.25 * tol.min(width);
        x = x.clamp(lo + guard, hi - guard);

        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
        width_two_steps_ago = width_last;
        width_last = width;
    }
    // Return the endpoint with the smaller residual.
    Ok(if f_lo.abs() <= f_hi.abs() { lo } else { hi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::bessel::bessel_i0;

    #[test]
    fn square_root_of_two() {
        let x = find_root_bracketed(|x| x * x - 2.0, 1.0, 2.0, 1e-12).unwrap();
        assert!((x - std::f64::consts::SQRT_2).abs() < 1e-11);
    }

    #[test]
    fn linear_through_origin() {
        let x = find_root_bracketed(|x| x, -1.0, 1.0, 1e-14).unwrap();
        assert!(x.abs() < 1e-14);
    }

    #[test]
    fn bessel_level_crossing() {
        // I0 is increasing on [0, 3] with I0(0) = 1 < 2 < I0(3).
        let x = find_root_bracketed(|x| bessel_i0(x).unwrap() - 2.0, 0.0, 3.0, 1e-13).unwrap();
        assert!((bessel_i0(x).unwrap() - 2.0).abs() < 1e-12);
        // Independent reference: scipy brentq on scipy.special.i0.
        assert!((x - 1.807_896_751_069_1).abs() < 1e-11);
    }

    #[test]
    fn same_sign_is_an_error() {
        assert!(matches!(
            find_root_bracketed(|x| x * x + 1.0, -1.0, 1.0, 1e-10),
            Err(Error::NoBracket { .. })
        ));
    }

    #[test]
    fn discontinuous_sign_change_is_localised() {
        let x = find_root_bracketed(|x| if x < 0.3 { -1.0 } else { 1.0 }, 0.0, 1.0, 1e-10).unwrap();
        assert!((x - 0.3).abs() < 1e-9);
    }
}
