//! Shooting integrator for the radial problem
//!
//! ```text
//! -q'' - q'/r + q = Λ e^q,   q(0) = A,   q'(0) = 0
//! ```
//!
//! The `1/r` singularity is removed with the Taylor start
//! `q = A + a r² + b r⁴`, `a = (A - Λe^A)/4`, `b = (1 - Λe^A) a / 16`, after
//! which an embedded Dormand–Prince 5(4) pair marches to `r = R`. Grid values
//! are recovered by quintic Hermite interpolation between accepted steps,
//! using the ODE itself for the second derivatives.

use crate::error::{Error, Result};
use crate::numerics::grid::{RadialFunction, RadialGrid};

/// Profiles with `|q|` above this level are outside the computable branch.
pub const BLOW_UP_LEVEL: f64 = 50.0;

const START_RADIUS: f64 = 1e-3;
const MAX_STEPS: usize = 200_000;

/// Output of [`solve_radial_ivp`].
#[derive(Debug, Clone, PartialEq)]
pub struct IvpSolution {
    pub q: RadialFunction,
    /// `q'` sampled on the same grid.
    pub dq: RadialFunction,
    /// `q'(R)` taken directly from the integrator.
    pub dq_end: f64,
}

#[derive(Debug, Clone, Copy)]
struct Rhs {
    lambda: f64,
}

#[derive(Debug, Clone, Copy)]
struct Point {
    r: f64,
    q: f64,
    p: f64,
}

impl Rhs {
    /// `q''` from the ODE.
    fn accel(&self, r: f64, q: f64, p: f64) -> f64 {
        -p / r + q - self.lambda * q.exp()
    }

    /// `q'''` from differentiating the ODE once.
    fn jerk(&self, r: f64, q: f64, p: f64) -> f64 {
        let a = self.accel(r, q, p);
        p / (r * r) - a / r + p - self.lambda * q.exp() * p
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 1e-14 && tol < 1e-4 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "ivp tolerance {tol} outside (1e-14, 1e-4)"
        )))
    }
}

fn taylor_start(lambda: f64, a: f64, r: f64) -> (f64, f64) {
    let forcing = lambda * a.exp();
    let c2 = (a - forcing) / 4.0;
    let c4 = (1.0 - forcing) * c2 / 16.0;
    let r2 = r * r;
    (a + c2 * r2 + c4 * r2 * r2, 2.0 * c2 * r + 4.0 * c4 * r2 * r)
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Single Dormand–Prince step; returns the fifth-order point and the
/// weighted error estimate.
fn dopri_step(rhs: &Rhs, y: Point, h: f64, tol: f64) -> (Point, f64) {
    let mut kq = [0.0; 7];
    let mut kp = [0.0; 7];
    for s in 0..7 {
        let mut q = y.q;
        let mut p = y.p;
        for j in 0..s {
            q += h * A[s][j] * kq[j];
            p += h * A[s][j] * kp[j];
        }
        let r = y.r + C[s] * h;
        kq[s] = p;
        kp[s] = rhs.accel(r, q, p);
    }
    let mut q5 = y.q;
    let mut p5 = y.p;
    let mut eq = 0.0;
    let mut ep = 0.0;
    for s in 0..7 {
        q5 += h * B5[s] * kq[s];
        p5 += h * B5[s] * kp[s];
        eq += h * (B5[s] - B4[s]) * kq[s];
        ep += h * (B5[s] - B4[s]) * kp[s];
    }
    let err_q = eq.abs() / (tol * (1.0 + y.q.abs().max(q5.abs())));
    let err_p = ep.abs() / (tol * (1.0 + y.p.abs().max(p5.abs())));
    (
        Point {
            r: y.r + h,
            q: q5,
            p: p5,
        },
        err_q.max(err_p),
    )
}

/// Adaptive march from the Taylor start to `radius`, calling `visit` on every
/// accepted step. Returns the end point.
fn march(
    lambda: f64,
    a: f64,
    radius: f64,
    tol: f64,
    mut visit: impl FnMut(&Rhs, Point, Point),
) -> Result<Point> {
    let rhs = Rhs { lambda };
    let r0 = START_RADIUS.min(0.25 * radius);
    let (q0, p0) = taylor_start(lambda, a, r0);
    let mut y = Point {
        r: r0,
        q: q0,
        p: p0,
    };
    let h_max = radius / 16.0;
    let mut h = (0.01 * radius).min(h_max);

    for _ in 0..MAX_STEPS {
        if y.r >= radius {
            return Ok(y);
        }
        let last = y.r + h >= radius;
        let step = if last { radius - y.r } else { h };
        let (next, err) = dopri_step(&rhs, y, step, tol);
        if !next.q.is_finite() || !next.p.is_finite() {
            h *= 0.25;
            continue;
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        if err <= 1.0 {
            let next = if last {
                Point { r: radius, ..next }
            } else {
                next
            };
            visit(&rhs, y, next);
            if next.q.abs() > BLOW_UP_LEVEL {
                return Err(Error::ProfileBlowUp {
                    radius: next.r,
                    value: next.q,
                });
            }
            y = next;
        }
        h = (step * factor).min(h_max);
        if h < 1e-14 * radius {
            return Err(Error::InvalidData(format!(
                "step size underflow at r = {}",
                y.r
            )));
        }
    }
    Err(Error::InvalidData("too many integration steps".into()))
}

/// `q(R)` of the shooting problem, without resampling.
///
/// A profile that crosses the blow-up level yields
/// [`Error::ProfileBlowUp`], whose `value` carries the sign of the
/// divergence.
pub fn shoot_endpoint(lambda: f64, a: f64, radius: f64, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    march(lambda, a, radius, tol, |_, _, _| {}).map(|y| y.q)
}

/// Integrates the shooting problem and resamples `q`, `q'` on `grid`.
pub fn solve_radial_ivp(lambda: f64, a: f64, grid: &RadialGrid, tol: f64) -> Result<IvpSolution> {
    check_tol(tol)?;
    if !(lambda.is_finite() && lambda >= 0.0 && a.is_finite()) {
        return Err(Error::Domain(format!(
            "invalid shooting data lambda = {lambda}, A = {a}"
        )));
    }
    let n = grid.len();
    let mut q = vec![0.0; n];
    let mut dq = vec![0.0; n];
    let r0 = START_RADIUS.min(0.25 * grid.radius());

    let mut next_node = 0;
    while next_node < n && grid.node(next_node) <= r0 {
        let (qv, pv) = taylor_start(lambda, a, grid.node(next_node));
        q[next_node] = qv;
        dq[next_node] = pv;
        next_node += 1;
    }

    let end = march(lambda, a, grid.radius(), tol, |rhs, y0, y1| {
        let h = y1.r - y0.r;
        let a0 = rhs.accel(y0.r, y0.q, y0.p);
        let a1 = rhs.accel(y1.r, y1.q, y1.p);
        let j0 = rhs.jerk(y0.r, y0.q, y0.p);
        let j1 = rhs.jerk(y1.r, y1.q, y1.p);
        while next_node < n && grid.node(next_node) <= y1.r {
            let t = (grid.node(next_node) - y0.r) / h;
            q[next_node] = quintic_hermite(t, h, [y0.q, y0.p, a0], [y1.q, y1.p, a1]);
            dq[next_node] = quintic_hermite(t, h, [y0.p, a0, j0], [y1.p, a1, j1]);
            next_node += 1;
        }
    })?;
    q[n - 1] = end.q;
    dq[n - 1] = end.p;

    Ok(IvpSolution {
        q: RadialFunction::new(*grid, q)?,
        dq: RadialFunction::new(*grid, dq)?,
        dq_end: end.p,
    })
}

/// Quintic Hermite interpolant on `[0, 1]` from value, first and second
/// derivative at both ends.
fn quintic_hermite(t: f64, h: f64, left: [f64; 3], right: [f64; 3]) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t3 * t;
    let t5 = t4 * t;
    let h00 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    let h10 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    let h20 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
    let h01 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    let h11 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    let h21 = 0.5 * (t3 - 2.0 * t4 + t5);
    left[0] * h00
        + h * left[1] * h10
        + h * h * left[2] * h20
        + right[0] * h01
        + h * right[1] * h11
        + h * h * right[2] * h21
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::bessel::bessel_i0;

    #[test]
    fn zero_data_gives_zero_profile() {
        let grid = RadialGrid::new(4.0, 128).unwrap();
        let sol = solve_radial_ivp(0.0, 0.0, &grid, 1e-10).unwrap();
        assert_eq!(sol.q.sup_norm(), 0.0);
        assert_eq!(sol.dq_end, 0.0);
    }

    #[test]
    fn fixed_point_of_the_nonlinearity() {
        let grid = RadialGrid::new(4.0, 128).unwrap();
        let lambda = (-1.0_f64).exp();
        let sol = solve_radial_ivp(lambda, 1.0, &grid, 1e-10).unwrap();
        assert!(sol.q.map(|_, v| v - 1.0).sup_norm() < 1e-12);
        assert!(sol.dq_end.abs() < 1e-12);
    }

    #[test]
    fn linear_problem_matches_scaled_i0() {
        let grid = RadialGrid::new(1.0, 64).unwrap();
        let a = 1.0;
        let sol = solve_radial_ivp(0.0, a, &grid, 1e-11).unwrap();
        let exact = grid.sample(|r| a * bessel_i0(r).unwrap());
        assert!(sol.q.distance(&exact) < 1e-10, "{}", sol.q.distance(&exact));
        assert!((sol.q.last() - 1.266_065_877_752_008).abs() < 1e-10);
    }

    #[test]
    fn positive_blow_up_is_reported_with_sign() {
        let err = shoot_endpoint(0.0, 10.0, 4.0, 1e-10).unwrap_err();
        match err {
            Error::ProfileBlowUp { value, .. } => assert!(value > 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tolerance_outside_range_is_rejected() {
        assert!(shoot_endpoint(0.1, 1.0, 4.0, 1e-3).is_err());
        assert!(shoot_endpoint(0.1, 1.0, 4.0, 1e-15).is_err());
    }

    #[test]
    fn halving_tolerance_barely_moves_the_endpoint() {
        for tol in [1e-8, 1e-9, 1e-10] {
            let coarse = shoot_endpoint(0.4, 1.0, 4.0, tol).unwrap();
            let fine = shoot_endpoint(0.4, 1.0, 4.0, 0.5 * tol).unwrap();
            assert!(
                (coarse - fine).abs() < 10.0 * tol,
                "tol {tol}: {coarse} vs {fine}"
            );
        }
    }

    #[test]
    fn resampled_derivative_is_consistent() {
        let grid = RadialGrid::new(4.0, 512).unwrap();
        let sol = solve_radial_ivp(0.4, 1.0, &grid, 1e-11).unwrap();
        // Central differences of q against the interpolated q'.
        let h = grid.step();
        for i in 1..grid.intervals() {
            let d = (sol.q.at(i + 1) - sol.q.at(i - 1)) / (2.0 * h);
            assert!((d - sol.dq.at(i)).abs() < 1e-5, "node {i}");
        }
    }
}
