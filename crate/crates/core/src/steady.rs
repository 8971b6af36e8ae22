//! Radially symmetric steady states
//!
//! ```text
//! -(1/r)(r Φ')' + Φ = Λ e^Φ,   0 < r < R,   Φ'(0) = Φ(R) = 0
//! ```
//!
//! The branch of solutions is parametrized by the central value `A = Φ(0)`.
//! For each `A` the eigenvalue `Λ` is found by shooting: the endpoint `q(R)`
//! of the initial value problem is scanned over `Λ ∈ [0, 1 + μ_D]`, where
//! `μ_D = (j_{0,1}/R)²` is the first Dirichlet eigenvalue of the disk. No
//! solution exists above that bound.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::bessel::J0_FIRST_ZERO;
use crate::numerics::grid::{integrate_radial, RadialFunction, RadialGrid, DEFAULT_NODES};
use crate::numerics::ivp::{shoot_endpoint, solve_radial_ivp, BLOW_UP_LEVEL};
use crate::numerics::mode::eig_sturm_liouville;
use crate::numerics::roots::try_find_root_bracketed;

/// Largest central value accepted by [`SteadySolver::solve_for_lambda`].
pub const DEFAULT_A_MAX: f64 = 12.0;

/// Number of sub-brackets in the `Λ` scan.
pub const LAMBDA_SCAN_BRACKETS: usize = 64;

/// Default local error tolerance of the shooting integrator.
pub const DEFAULT_IVP_TOL: f64 = 1e-11;

/// Step of the coarse `A` scan used to locate the fold.
const A_SCAN_STEP: f64 = 0.125;

/// One point `(Λ, Φ)` on the steady-state branch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialSteadyState {
    pub radius: f64,
    pub lambda: f64,
    /// Central value `A = Φ(0)`.
    pub central: f64,
    pub phi: RadialFunction,
    /// `Φ'` sampled on the same grid.
    pub dphi: RadialFunction,
    /// `Φ'(R)`.
    pub dphi_r: f64,
    /// `Φ''(R) = -Λ - Φ'(R)/R`.
    pub d2phi_r: f64,
}

impl RadialSteadyState {
    /// The trivial solution `(Λ, Φ) = (0, 0)`.
    pub fn zero(grid: &RadialGrid) -> Self {
        Self {
            radius: grid.radius(),
            lambda: 0.0,
            central: 0.0,
            phi: grid.zeros(),
            dphi: grid.zeros(),
            dphi_r: 0.0,
            d2phi_r: 0.0,
        }
    }

    pub fn grid(&self) -> &RadialGrid {
        self.phi.grid()
    }

    pub fn is_trivial(&self) -> bool {
        self.lambda == 0.0 && self.central == 0.0
    }

    /// `Λ e^Φ`, the potential of every linearized problem around this state.
    pub fn potential(&self) -> RadialFunction {
        let lambda = self.lambda;
        self.phi.map(|_, v| lambda * v.exp())
    }

    /// Checks the structural invariants: `Φ(R) = 0`, `Φ(0) = A`, `Φ`
    /// strictly decreasing with `Φ'(R) < 0`, and the ODE at `r = R`.
    pub fn check_invariants(&self, tol: f64) -> std::result::Result<(), String> {
        if self.is_trivial() {
            return Ok(());
        }
        if self.phi.last().abs() > tol {
            return Err(format!("Φ(R) = {:e}", self.phi.last()));
        }
        if (self.phi.first() - self.central).abs() > tol {
            return Err(format!(
                "Φ(0) = {} but A = {}",
                self.phi.first(),
                self.central
            ));
        }
        if self.dphi_r >= 0.0 {
            return Err(format!("Φ'(R) = {} is not negative", self.dphi_r));
        }
        let v = self.phi.values();
        if let Some(i) = v.windows(2).position(|w| w[1] >= w[0]) {
            return Err(format!("Φ not strictly decreasing at node {i}"));
        }
        if let Some(i) = self.dphi.values().iter().skip(1).position(|&d| d >= 0.0) {
            return Err(format!("Φ'(r) >= 0 at node {}", i + 1));
        }
        let ode = self.d2phi_r + self.lambda + self.dphi_r / self.radius;
        if ode.abs() > 1e-8 {
            return Err(format!("Φ''(R) inconsistent with the ODE by {ode:e}"));
        }
        Ok(())
    }
}

/// Maximum of `Λ(A)` along the branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FoldPoint {
    pub central: f64,
    pub lambda: f64,
}

/// A branch point that could not be computed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailedPoint {
    pub central: f64,
    pub error: String,
}

/// A solved branch point with its first two radial eigenvalues.
type PointResult = Result<(RadialSteadyState, [f64; 2])>;

/// Ordered states `A_j = j A_max / steps`, `j = 1..=steps`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Branch {
    pub radius: f64,
    pub points: Vec<RadialSteadyState>,
    /// First two eigenvalues `(σ₁, σ₂)` of `-Δw + w - Λe^Φ w` on radial modes.
    pub sigma: Vec<[f64; 2]>,
    pub lambda_max: f64,
    pub failures: Vec<FailedPoint>,
}

impl Branch {
    /// Sign of `σ₂` at each point.
    pub fn sigma2_flags(&self) -> Vec<bool> {
        self.sigma.iter().map(|s| s[1] > 0.0).collect()
    }

    /// Indices of the minimal sub-branch (`σ₁ > 0`).
    pub fn minimal_indices(&self) -> Vec<usize> {
        (0..self.points.len())
            .filter(|&i| self.sigma[i][0] > 0.0)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Solver configuration shared by all branch computations at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadySolver {
    pub grid: RadialGrid,
    pub tol: f64,
    pub a_max: f64,
}

impl SteadySolver {
    pub fn new(radius: f64) -> Result<Self> {
        Self::with_intervals(radius, DEFAULT_NODES)
    }

    pub fn with_intervals(radius: f64, intervals: usize) -> Result<Self> {
        Ok(Self {
            grid: RadialGrid::new(radius, intervals)?,
            tol: DEFAULT_IVP_TOL,
            a_max: DEFAULT_A_MAX,
        })
    }

    pub fn radius(&self) -> f64 {
        self.grid.radius()
    }

    /// `1 + μ_D`, the a-priori upper bound on `Λ`.
    pub fn lambda_bound(&self) -> f64 {
        let mu = J0_FIRST_ZERO / self.radius();
        1.0 + mu * mu
    }

    /// `q(R)` for the shooting data, with divergent profiles mapped to a
    /// large value of the matching sign.
    fn endpoint(&self, lambda: f64, a: f64) -> Result<f64> {
        match shoot_endpoint(lambda, a, self.radius(), self.tol) {
            Ok(v) => Ok(v),
            Err(Error::ProfileBlowUp { value, .. }) => Ok(2.0 * BLOW_UP_LEVEL * value.signum()),
            Err(e) => Err(e),
        }
    }

    /// Steady state with central value `a`.
    pub fn solve_for_lambda(&self, a: f64) -> Result<RadialSteadyState> {
        if a == 0.0 {
            return Ok(RadialSteadyState::zero(&self.grid));
        }
        if !(a > 0.0 && a <= self.a_max) {
            return Err(Error::Domain(format!(
                "central value {a} outside (0, {}]",
                self.a_max
            )));
        }
        let upper = self.lambda_bound();
        let nodes: Vec<f64> = (0..=LAMBDA_SCAN_BRACKETS)
            .map(|k| upper * k as f64 / LAMBDA_SCAN_BRACKETS as f64)
            .collect();
        let values = nodes
            .iter()
            .map(|&l| self.endpoint(l, a))
            .collect::<Result<Vec<_>>>()?;
        let brackets: Vec<usize> = (0..LAMBDA_SCAN_BRACKETS)
            .filter(|&k| values[k] == 0.0 || values[k].signum() != values[k + 1].signum())
            .collect();
        let k = match brackets.as_slice() {
            [] => return Err(Error::NoSteadyState(a)),
            [k] => *k,
            many => {
                return Err(Error::MultipleRoots {
                    a,
                    count: many.len(),
                })
            }
        };
        let lambda = try_find_root_bracketed(
            |l| self.endpoint(l, a),
            nodes[k],
            nodes[k + 1],
            1e-15 * upper,
        )?;
        self.state_at(lambda, a)
    }

    fn state_at(&self, lambda: f64, a: f64) -> Result<RadialSteadyState> {
        let sol = solve_radial_ivp(lambda, a, &self.grid, self.tol)?;
        let radius = self.radius();
        Ok(RadialSteadyState {
            radius,
            lambda,
            central: a,
            phi: sol.q,
            dphi: sol.dq,
            dphi_r: sol.dq_end,
            d2phi_r: -lambda - sol.dq_end / radius,
        })
    }

    fn lambda_of(&self, a: f64) -> Result<f64> {
        Ok(self.solve_for_lambda(a)?.lambda)
    }

    /// Locates the maximum of `Λ(A)` by a coarse scan followed by golden
    /// section refinement.
    pub fn fold(&self) -> Result<FoldPoint> {
        let mut prev = (0.0, 0.0);
        let mut best = (0.0, 0.0);
        let mut a = A_SCAN_STEP;
        while a <= self.a_max {
            let lambda = self.lambda_of(a)?;
            if lambda < best.1 {
                return self.refine_fold(prev.0, a);
            }
            prev = best;
            best = (a, lambda);
            a += A_SCAN_STEP;
        }
        Ok(FoldPoint {
            central: best.0,
            lambda: best.1,
        })
    }

    fn refine_fold(&self, lo: f64, hi: f64) -> Result<FoldPoint> {
        let ratio = 0.5 * (5.0_f64.sqrt() - 1.0);
        let (mut lo, mut hi) = (lo, hi);
        let mut x1 = hi - ratio * (hi - lo);
        let mut x2 = lo + ratio * (hi - lo);
        let mut f1 = self.lambda_of(x1)?;
        let mut f2 = self.lambda_of(x2)?;
        while hi - lo > 1e-7 {
            if f1 < f2 {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + ratio * (hi - lo);
                f2 = self.lambda_of(x2)?;
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - ratio * (hi - lo);
                f1 = self.lambda_of(x1)?;
            }
        }
        let (central, lambda) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
        Ok(FoldPoint { central, lambda })
    }

    /// The pointwise minimal solution at `lambda`: the smallest `A` with
    /// `Λ(A) = lambda`, found on the rising part of the branch.
    pub fn minimal_solution(&self, lambda: f64) -> Result<RadialSteadyState> {
        if lambda == 0.0 {
            return Ok(RadialSteadyState::zero(&self.grid));
        }
        if lambda.is_nan() || lambda < 0.0 {
            return Err(Error::Domain(format!(
                "lambda = {lambda} must be non-negative"
            )));
        }
        let fold = self.fold()?;
        if lambda >= fold.lambda {
            return Err(Error::BeyondFold {
                lambda,
                lambda_max: fold.lambda,
            });
        }
        let mut lo = 0.0;
        let mut a = A_SCAN_STEP.min(fold.central);
        loop {
            if self.lambda_of(a)? >= lambda {
                break;
            }
            lo = a;
            if a >= fold.central {
                break;
            }
            a = (a + A_SCAN_STEP).min(fold.central);
        }
        self.root_in_a(lambda, lo, a)
    }

    /// Second solution at `lambda` on the falling part of the branch, if it
    /// exists for `A <= a_max`.
    pub fn upper_solution(&self, lambda: f64) -> Result<RadialSteadyState> {
        let fold = self.fold()?;
        if lambda >= fold.lambda {
            return Err(Error::BeyondFold {
                lambda,
                lambda_max: fold.lambda,
            });
        }
        let mut lo = fold.central;
        let mut a = fold.central;
        while a < self.a_max {
            a = (a + A_SCAN_STEP).min(self.a_max);
            if self.lambda_of(a)? <= lambda {
                return self.root_in_a(lambda, lo, a);
            }
            lo = a;
        }
        Err(Error::NoSteadyState(lambda))
    }

    fn root_in_a(&self, lambda: f64, lo: f64, hi: f64) -> Result<RadialSteadyState> {
        let a = try_find_root_bracketed(|a| Ok(self.lambda_of(a)? - lambda), lo, hi, 1e-13)?;
        self.solve_for_lambda(a)
    }

    /// Traces the branch at `A_j = j a_max / steps`, `j = 1..=steps`.
    ///
    /// Points are solved independently (in parallel); a point that fails is
    /// listed in `failures` rather than dropped silently.
    pub fn trace_branch(&self, a_max: f64, steps: usize) -> Result<Branch> {
        if steps < 32 {
            return Err(Error::Domain(format!(
                "trace_branch needs at least 32 steps, got {steps}"
            )));
        }
        if !(a_max > 0.0 && a_max <= self.a_max) {
            return Err(Error::Domain(format!(
                "A_max = {a_max} outside (0, {}]",
                self.a_max
            )));
        }
        let results: Vec<(f64, PointResult)> = (1..=steps)
            .into_par_iter()
            .map(|j| {
                let a = a_max * j as f64 / steps as f64;
                let point = self.solve_for_lambda(a).and_then(|s| {
                    let sigma = eig_sturm_liouville(0, &s.potential(), 2)?;
                    Ok((s, [sigma[0], sigma[1]]))
                });
                (a, point)
            })
            .collect();

        let mut points = Vec::with_capacity(steps);
        let mut sigma = Vec::with_capacity(steps);
        let mut failures = Vec::new();
        for (a, r) in results {
            match r {
                Ok((s, sg)) => {
                    points.push(s);
                    sigma.push(sg);
                }
                Err(e) => failures.push(FailedPoint {
                    central: a,
                    error: e.to_string(),
                }),
            }
        }
        let lambda_max = points.iter().map(|s| s.lambda).fold(0.0, f64::max);
        Ok(Branch {
            radius: self.radius(),
            points,
            sigma,
            lambda_max,
            failures,
        })
    }
}

/// Integrals shared by the identities below.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateIntegrals {
    /// `∫ Φ r dr`
    pub phi: f64,
    /// `∫ Φ² r dr`
    pub phi_sq: f64,
    /// `∫ e^Φ r dr`
    pub exp: f64,
    /// `∫ e^Φ Φ' r² dr`
    pub exp_dphi: f64,
}

impl StateIntegrals {
    pub fn of(s: &RadialSteadyState) -> Result<Self> {
        let exp = s.phi.map(|_, v| v.exp());
        Ok(Self {
            phi: integrate_radial(&s.phi, 1)?,
            phi_sq: integrate_radial(&s.phi.map(|_, v| v * v), 1)?,
            exp: integrate_radial(&exp, 1)?,
            exp_dphi: integrate_radial(&exp.zip_map(&s.dphi, |_, e, d| e * d), 2)?,
        })
    }
}

/// Relative residuals of the two Pohozhaev equalities
/// `½(RΦ'(R))² + ∫Φ² r = -Λ∫e^Φ Φ' r² = 2Λ∫e^Φ r - ΛR²`.
pub fn pohozhaev_residuals(s: &RadialSteadyState) -> Result<(f64, f64)> {
    let int = StateIntegrals::of(s)?;
    let rd = s.radius * s.dphi_r;
    let left = 0.5 * rd * rd + int.phi_sq;
    let middle = -s.lambda * int.exp_dphi;
    let right = 2.0 * s.lambda * int.exp - s.lambda * s.radius * s.radius;
    let scale = 1.0 + left.abs();
    Ok(((left - middle).abs() / scale, (left - right).abs() / scale))
}

/// Relative residual of `Λ∫e^Φ r dr = ∫Φ r dr - RΦ'(R)`.
pub fn mass_identity_residual(s: &RadialSteadyState) -> Result<f64> {
    let int = StateIntegrals::of(s)?;
    let mass = s.lambda * int.exp;
    let other = int.phi - s.radius * s.dphi_r;
    Ok((mass - other).abs() / (1.0 + mass.abs()))
}

/// `M = Λ∫e^Φ r dr`.
pub fn suzuki_mass(s: &RadialSteadyState) -> Result<f64> {
    Ok(s.lambda * StateIntegrals::of(s)?.exp)
}

/// Second radial eigenvalue of `-Δv - Λe^Φ v` with Dirichlet data; when it is
/// negative the mass bound `M >= 4` applies.
pub fn second_eigenvalue_without_reaction(s: &RadialSteadyState) -> Result<f64> {
    Ok(eig_sturm_liouville(0, &s.potential(), 2)?[1] - 1.0)
}

/// `g = 1 - I₀(r)/I₀(R)`, the small-`Λ` profile `Φ ≈ Λ g`.
pub fn small_lambda_profile(grid: &RadialGrid) -> Result<RadialFunction> {
    use crate::numerics::bessel::bessel_i0;
    let i0r = bessel_i0(grid.radius())?;
    let values = grid
        .nodes()
        .map(|r| bessel_i0(r).map(|v| 1.0 - v / i0r))
        .collect::<Result<Vec<_>>>()?;
    RadialFunction::new(*grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solver() -> SteadySolver {
        SteadySolver::with_intervals(4.0, 512).unwrap()
    }

    #[test]
    fn zero_central_value_is_trivial() {
        let s = solver().solve_for_lambda(0.0).unwrap();
        assert!(s.is_trivial());
        assert_eq!(pohozhaev_residuals(&s).unwrap(), (0.0, 0.0));
        assert_eq!(mass_identity_residual(&s).unwrap(), 0.0);
        assert_eq!(suzuki_mass(&s).unwrap(), 0.0);
    }

    #[test]
    fn tiny_central_value_gives_tiny_lambda() {
        let s = solver().solve_for_lambda(1e-4).unwrap();
        assert!(s.lambda > 0.0 && s.lambda < 1e-3, "{}", s.lambda);
        s.check_invariants(1e-9).unwrap();
    }

    #[test]
    fn state_invariants_hold() {
        let sv = solver();
        for a in [0.5, 1.0, 3.0, 6.0] {
            let s = sv.solve_for_lambda(a).unwrap();
            s.check_invariants(1e-9).unwrap();
            assert!(s.lambda < sv.lambda_bound());
        }
    }

    #[test]
    fn out_of_range_central_value() {
        assert!(matches!(
            solver().solve_for_lambda(-1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            solver().solve_for_lambda(13.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn minimal_solution_at_zero_and_beyond_fold() {
        let sv = solver();
        assert!(sv.minimal_solution(0.0).unwrap().is_trivial());
        assert!(matches!(
            sv.minimal_solution(0.9),
            Err(Error::BeyondFold { .. })
        ));
    }

    #[test]
    fn minimal_solution_reproduces_lambda() {
        let sv = solver();
        let s = sv.minimal_solution(0.2).unwrap();
        assert!((s.lambda - 0.2).abs() < 1e-10);
        let fold = sv.fold().unwrap();
        assert!(s.central < fold.central);
    }

    #[test]
    fn short_branches_are_rejected() {
        assert!(solver().trace_branch(6.0, 16).is_err());
    }
}
