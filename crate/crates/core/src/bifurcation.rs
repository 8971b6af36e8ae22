//! Where radial steady states lose or exchange stability.
//!
//! Traveling waves can only branch off a radial state where
//!
//! ```text
//! B = R Φ'(R) - Λ ∫ e^Φ Φ' r² dr = 0,
//! ```
//!
//! equivalently `∫Φ r dr - ΛR² + Λ∫e^Φ r dr = 0` or
//! `RΦ'(R) + ½(RΦ'(R))² + ∫Φ² r dr = 0`. `B` is negative near the trivial
//! state and positive far up the branch, so a root always exists.
//!
//! Non-radial steady states branch off where the mode-`l` steady eigenvalue
//! crosses 1, i.e. where `β = R² ψ_l'(R) / (l² - 1)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::bessel::{bessel_i0, bessel_i1};
use crate::numerics::grid::{integrate_radial, RadialFunction, RadialGrid, DEFAULT_NODES};
use crate::numerics::roots::try_find_root_bracketed;
use crate::spectral::{
    exceptional_beta, exceptional_beta_from_psi, solve_phi_tilde, steady_eig_el,
    traveling_discriminant, traveling_eigs_e01, StateSummary,
};
use crate::steady::{Branch, FailedPoint, RadialSteadyState, StateIntegrals, SteadySolver};

/// Default surface tension for reports.
pub const DEFAULT_BETA: f64 = 0.625;

/// A supplied `β` closer than this to some `β_l` triggers a warning.
pub const EXCEPTIONAL_BETA_GAP: f64 = 1e-3;

/// Modes whose exceptional `β_l` are listed in a [`BifurcationReport`].
pub const REPORTED_MODES: std::ops::RangeInclusive<usize> = 2..=6;

/// The three algebraically equivalent forms of the bifurcation functional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BifurcationFunctional {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
}

impl BifurcationFunctional {
    /// Largest pairwise difference, scaled by `1 + |RΦ'(R)|`.
    pub fn spread(&self, s: &RadialSteadyState) -> f64 {
        let d = (self.b1 - self.b2)
            .abs()
            .max((self.b1 - self.b3).abs())
            .max((self.b2 - self.b3).abs());
        d / (1.0 + (s.radius * s.dphi_r).abs())
    }

    pub fn max_abs(&self) -> f64 {
        self.b1.abs().max(self.b2.abs()).max(self.b3.abs())
    }
}

pub fn bifurcation_functional(s: &RadialSteadyState) -> Result<BifurcationFunctional> {
    let int = StateIntegrals::of(s)?;
    let rd = s.radius * s.dphi_r;
    Ok(BifurcationFunctional {
        b1: rd - s.lambda * int.exp_dphi,
        b2: int.phi - s.lambda * s.radius * s.radius + s.lambda * int.exp,
        b3: rd + 0.5 * rd * rd + int.phi_sq,
    })
}

/// Traveling-wave bifurcation point on a traced branch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BifurcationReport {
    pub state: StateSummary,
    #[serde(skip)]
    pub root_state: RadialSteadyState,
    pub functional: BifurcationFunctional,
    /// `φ̃'(R)` at the root; equals 1 there.
    pub phi_tilde_slope: f64,
    /// Central values of the branch points bracketing the root.
    pub a_left: f64,
    pub a_right: f64,
    pub b_left: f64,
    pub b_right: f64,
    pub beta: f64,
    /// `[re, im]` pairs of the translation-mode eigenvalues either side.
    pub e01_left: [[f64; 2]; 2],
    pub e01_right: [[f64; 2]; 2],
    /// `β_l` at the root for `l = 2..=6`.
    pub beta_exceptional: Vec<f64>,
    pub warnings: Vec<String>,
}

/// Locates the first sign change of `B` along `branch` and refines it in `A`
/// to a bracket of width `tol`.
pub fn find_tw_bifurcation(
    solver: &SteadySolver,
    branch: &Branch,
    tol: f64,
    beta: f64,
) -> Result<BifurcationReport> {
    let values = branch
        .points
        .par_iter()
        .map(|s| bifurcation_functional(s).map(|b| b.b1))
        .collect::<Result<Vec<_>>>()?;
    let i = (0..values.len().saturating_sub(1))
        .find(|&i| values[i] != 0.0 && values[i].signum() != values[i + 1].signum())
        .ok_or(Error::ExtendBranch)?;
    let (left, right) = (&branch.points[i], &branch.points[i + 1]);

    let a = try_find_root_bracketed(
        |a| Ok(bifurcation_functional(&solver.solve_for_lambda(a)?)?.b1),
        left.central,
        right.central,
        tol,
    )?;
    let root = solver.solve_for_lambda(a)?;
    let functional = bifurcation_functional(&root)?;
    let phi_tilde_slope = solve_phi_tilde(&root)?.dprofile_r;

    let beta_exceptional = REPORTED_MODES
        .map(|l| exceptional_beta(&root, l))
        .collect::<Result<Vec<_>>>()?;
    let warnings = REPORTED_MODES
        .zip(&beta_exceptional)
        .filter(|(_, &b)| (b - beta).abs() < EXCEPTIONAL_BETA_GAP)
        .map(|(l, &b)| format!("β = {beta} is within {EXCEPTIONAL_BETA_GAP:e} of β_{l} = {b:.6}"))
        .collect();

    let pair = |s: &RadialSteadyState| traveling_eigs_e01(s, beta).map(|e| e.map(|z| [z.re, z.im]));
    Ok(BifurcationReport {
        state: (&root).into(),
        functional,
        phi_tilde_slope,
        a_left: left.central,
        a_right: right.central,
        b_left: values[i],
        b_right: values[i + 1],
        beta,
        e01_left: pair(left)?,
        e01_right: pair(right)?,
        beta_exceptional,
        warnings,
        root_state: root,
    })
}

/// Sign of the translation-mode discriminant either side of a root.
pub fn discriminant_flip(report: &BifurcationReport, solver: &SteadySolver) -> Result<(f64, f64)> {
    let left = solver.solve_for_lambda(report.a_left)?;
    let right = solver.solve_for_lambda(report.a_right)?;
    Ok((
        traveling_discriminant(&left)?,
        traveling_discriminant(&right)?,
    ))
}

/// The comparison function of the lower bound on the fold:
/// `w(r) = (1 - I₀(θr)/I₀(θR)) / (e - 1)`, `θ = √(1 - 1/e)`, and
/// `J(R) = ∫ w² r dr`, evaluated both by quadrature and in closed form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BesselLemma {
    pub radius: f64,
    pub j_quadrature: f64,
    pub j_closed_form: f64,
    #[serde(skip)]
    pub w: RadialFunction,
}

impl BesselLemma {
    pub fn j(&self) -> f64 {
        self.j_closed_form
    }
}

fn theta() -> f64 {
    (1.0 - (-1.0_f64).exp()).sqrt()
}

/// `w` sampled on `grid`.
pub fn comparison_profile(grid: &RadialGrid) -> Result<RadialFunction> {
    let th = theta();
    let c = 1.0 / (std::f64::consts::E - 1.0);
    let edge = bessel_i0(th * grid.radius())?;
    let values = grid
        .nodes()
        .map(|r| Ok(c * (1.0 - bessel_i0(th * r)? / edge)))
        .collect::<Result<Vec<_>>>()?;
    RadialFunction::new(*grid, values)
}

pub fn bessel_lemma_j(radius: f64) -> Result<BesselLemma> {
    let grid = RadialGrid::new(radius, DEFAULT_NODES)?;
    let w = comparison_profile(&grid)?;
    let j_quadrature = integrate_radial(&w.map(|_, v| v * v), 1)?;

    // ∫ I₀(θr) r dr = R I₁(θR)/θ and ∫ I₀(θr)² r dr = ½R²(I₀² - I₁²).
    let th = theta();
    let c = 1.0 / (std::f64::consts::E - 1.0);
    let x = th * radius;
    let ratio = bessel_i1(x)? / bessel_i0(x)?;
    let r2 = radius * radius;
    let j_closed_form =
        c * c * (0.5 * r2 - 2.0 * radius * ratio / th + 0.5 * r2 * (1.0 - ratio * ratio));
    Ok(BesselLemma {
        radius,
        j_quadrature,
        j_closed_form,
        w,
    })
}

/// Whether `Φ >= w - 1e-6` at every node, i.e. the comparison function is
/// below the given state.
pub fn subsolution_check(s: &RadialSteadyState) -> Result<bool> {
    let w = comparison_profile(s.grid())?;
    Ok(s.phi
        .values()
        .iter()
        .zip(w.values())
        .all(|(p, w)| *p >= w - 1e-6))
}

/// One point of a non-radial threshold curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaPoint {
    pub central: f64,
    pub beta: f64,
    /// Whether the state lies on the minimal sub-branch.
    pub minimal: bool,
}

/// `β(A) = R² ψ_l'(R) / (l² - 1)` along a branch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaCurve {
    pub l: usize,
    pub points: Vec<BetaPoint>,
    pub skipped: Vec<FailedPoint>,
}

pub fn nonradial_bifurcation_beta(branch: &Branch, l: usize) -> Result<BetaCurve> {
    if l < 2 {
        return Err(Error::Domain(format!(
            "mode index l = {l} must be at least 2"
        )));
    }
    let results: Vec<_> = branch
        .points
        .par_iter()
        .zip(&branch.sigma)
        .map(|(s, sigma)| (s.central, sigma[0] > 0.0, exceptional_beta_from_psi(s, l)))
        .collect();
    // The trivial state has β = 0 exactly; including it lets crossings with
    // small β below the first traced point be bracketed.
    let mut points = Vec::new();
    if branch.points.first().is_some_and(|s| s.central > 0.0) {
        points.push(BetaPoint {
            central: 0.0,
            beta: 0.0,
            minimal: true,
        });
    }
    let mut skipped = Vec::new();
    for (central, minimal, beta) in results {
        match beta {
            Ok(beta) => points.push(BetaPoint {
                central,
                beta,
                minimal,
            }),
            Err(e) => skipped.push(FailedPoint {
                central,
                error: e.to_string(),
            }),
        }
    }
    Ok(BetaCurve { l, points, skipped })
}

/// A state where the mode-`l` steady eigenvalue equals 1 for the given `β`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonradialCrossing {
    pub l: usize,
    pub beta: f64,
    pub central: f64,
    pub lambda: f64,
    pub minimal: bool,
    /// `E_l` at the crossing, from the `h_l` route.
    pub steady_eigenvalue: f64,
}

/// Refines every sign change of `β(A) - beta` on `curve` to a crossing.
pub fn nonradial_crossings(
    solver: &SteadySolver,
    curve: &BetaCurve,
    beta: f64,
) -> Result<Vec<NonradialCrossing>> {
    let l = curve.l;
    let mut out = Vec::new();
    for w in curve.points.windows(2) {
        let (f0, f1) = (w[0].beta - beta, w[1].beta - beta);
        if f0 == 0.0 || f0.signum() == f1.signum() {
            continue;
        }
        let a = try_find_root_bracketed(
            |a| Ok(exceptional_beta_from_psi(&solver.solve_for_lambda(a)?, l)? - beta),
            w[0].central,
            w[1].central,
            1e-12,
        )?;
        let s = solver.solve_for_lambda(a)?;
        out.push(NonradialCrossing {
            l,
            beta,
            central: a,
            lambda: s.lambda,
            minimal: w[0].minimal && w[1].minimal,
            steady_eigenvalue: steady_eig_el(&s, beta, l)?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_state_functional_vanishes() {
        let s = RadialSteadyState::zero(&RadialGrid::new(4.0, 256).unwrap());
        let b = bifurcation_functional(&s).unwrap();
        assert_eq!((b.b1, b.b2, b.b3), (0.0, 0.0, 0.0));
    }

    #[test]
    fn functional_forms_agree() {
        let sv = SteadySolver::with_intervals(4.0, 1024).unwrap();
        for a in [0.2, 1.0, 4.0] {
            let s = sv.solve_for_lambda(a).unwrap();
            let b = bifurcation_functional(&s).unwrap();
            assert!(b.spread(&s) < 1e-6, "A={a}: {b:?}");
        }
    }

    #[test]
    fn bessel_lemma_matches_reference() {
        // Adaptive quadrature of w² r with scipy's i0: 0.78321318046280...
        let j = bessel_lemma_j(4.0).unwrap();
        assert!((j.j_closed_form - 0.783_213_180_462_80).abs() < 1e-12);
        assert!((j.j_quadrature - j.j_closed_form).abs() < 1e-8);
        assert!(j.w.last().abs() < 1e-15);
        let w0 = (1.0 - 1.0 / bessel_i0(4.0 * theta()).unwrap()) / (std::f64::consts::E - 1.0);
        assert!((j.w.first() - w0).abs() < 1e-15 && w0 > 0.0);
    }

    #[test]
    fn zero_state_is_not_above_w() {
        let s = RadialSteadyState::zero(&RadialGrid::new(4.0, 256).unwrap());
        assert!(!subsolution_check(&s).unwrap());
    }
}
