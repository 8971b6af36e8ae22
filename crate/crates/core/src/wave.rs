//! Shape of the traveling wave near its bifurcation point.
//!
//! At a root of the bifurcation functional the boundary of a slowly moving
//! cell is, to third order in the speed `V`,
//!
//! ```text
//! R + ρ(φ),   ρ = -V² S̃₂(R)/Φ'(R) cos 2φ - V³ S̃₃(R)/Φ'(R) cos 3φ,
//! ```
//!
//! where `S̃₂` and `S̃₃` solve the `l = 2` and `l = 3` mode problems with
//! Robin conditions. There is no `cos φ` term and no change of `Λ` at first
//! order, since `∂_Λ φ̃'(R) > 0` along the minimal branch.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::bessel::{bessel_i0, bessel_i1};
use crate::numerics::grid::{integrate_radial, RadialFunction, RadialGrid, DEFAULT_NODES};
use crate::numerics::mode::{solve_mode_bvp, BoundaryCondition, ModeKind, ModeSolution};
use crate::spectral::{exceptional_beta, solve_phi_tilde};
use crate::steady::{Branch, RadialSteadyState};

/// Largest `|V|` for which the truncated expansion is evaluated.
pub const MAX_SPEED: f64 = 0.5;

/// Minimal distance of `β` from the exceptional `β₂`, `β₃`.
pub const EXCEPTIONAL_GAP: f64 = 1e-3;

fn guard_exceptional(root: &RadialSteadyState, beta: f64, l: usize) -> Result<()> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::Domain(format!(
            "surface tension β = {beta} must be positive"
        )));
    }
    let beta_l = exceptional_beta(root, l)?;
    if (beta - beta_l).abs() < EXCEPTIONAL_GAP {
        return Err(Error::ExceptionalBeta {
            l,
            beta,
            beta_l,
            gap: EXCEPTIONAL_GAP,
        });
    }
    Ok(())
}

/// Robin condition `Φ'(R) f'(R) = (Φ''(R) - k β/R²) f(R) + q`, which turns
/// into a Dirichlet condition when `Φ'(R) = 0`.
fn shape_condition(root: &RadialSteadyState, beta: f64, k: f64, q: f64) -> BoundaryCondition {
    let a = root.d2phi_r - k * beta / (root.radius * root.radius);
    if root.dphi_r == 0.0 {
        BoundaryCondition::Dirichlet(-q / a)
    } else {
        BoundaryCondition::Robin {
            coefficient: a / root.dphi_r,
            offset: q / root.dphi_r,
        }
    }
}

/// `S̃₂`: the `cos 2φ` stress coefficient at second order.
pub fn solve_s2(
    root: &RadialSteadyState,
    beta: f64,
    phi_tilde: &ModeSolution,
) -> Result<ModeSolution> {
    guard_exceptional(root, beta, 2)?;
    let potential = root.potential();
    let rhs = potential.zip_map(&phi_tilde.profile, |r, v, p| 0.25 * v * (p - r) * (p - r));
    let bc = shape_condition(root, beta, 3.0, 0.0);
    Ok(solve_mode_bvp(2, &potential, &rhs, bc)?.with_kind(ModeKind::S2))
}

/// `S̃₃`: the `cos 3φ` stress coefficient at third order.
pub fn solve_s3(
    root: &RadialSteadyState,
    beta: f64,
    phi_tilde: &ModeSolution,
    s2: &ModeSolution,
) -> Result<ModeSolution> {
    guard_exceptional(root, beta, 3)?;
    let potential = root.potential();
    // (Λ/2) e^Φ (φ̃ - r) S̃₂ + (Λ/24) e^Φ (φ̃ - r)³
    let weighted = potential.zip_map(&phi_tilde.profile, |r, v, p| v * (p - r));
    let cubic = weighted.zip_map(&phi_tilde.profile, |r, m, p| m * (p - r) * (p - r) / 24.0);
    let rhs = weighted
        .zip_map(&s2.profile, |_, m, s| 0.5 * m * s)
        .zip_map(&cubic, |_, a, b| a + b);
    // φ̃(R) = 0, so the mode equation at the boundary gives φ̃''(R) directly.
    let curvature = root.lambda * root.radius - phi_tilde.dprofile_r / root.radius;
    let q = 0.5 * (curvature - 2.0 / root.radius) * s2.value_r;
    let bc = shape_condition(root, beta, 8.0, q);
    Ok(solve_mode_bvp(3, &potential, &rhs, bc)?.with_kind(ModeKind::S3))
}

/// The mode solutions entering the third-order shape.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionFields {
    pub beta: f64,
    pub phi_tilde: ModeSolution,
    pub s2: ModeSolution,
    pub s3: ModeSolution,
    /// First-order change of `Λ`; zero whenever `∂_Λ φ̃'(R) ≠ 0`.
    pub lambda1: f64,
    /// `Φ'(R)` of the root state.
    pub dphi_r: f64,
    pub radius: f64,
}

impl ExpansionFields {
    pub fn compute(root: &RadialSteadyState, beta: f64) -> Result<Self> {
        let phi_tilde = solve_phi_tilde(root)?;
        let s2 = solve_s2(root, beta, &phi_tilde)?;
        let s3 = solve_s3(root, beta, &phi_tilde, &s2)?;
        Ok(Self {
            beta,
            phi_tilde,
            s2,
            s3,
            lambda1: 0.0,
            dphi_r: root.dphi_r,
            radius: root.radius,
        })
    }

    /// `-S̃₂(R)/Φ'(R)`.
    pub fn rho2(&self) -> Result<f64> {
        self.coefficient(self.s2.value_r)
    }

    /// `-S̃₃(R)/Φ'(R)`.
    pub fn rho3(&self) -> Result<f64> {
        self.coefficient(self.s3.value_r)
    }

    fn coefficient(&self, value: f64) -> Result<f64> {
        if self.dphi_r == 0.0 {
            return Err(Error::Domain("shape coefficients need Φ'(R) ≠ 0".into()));
        }
        Ok(-value / self.dphi_r)
    }
}

/// One sample of the boundary curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundarySample {
    pub phi: f64,
    pub radius: f64,
    pub x: f64,
    pub y: f64,
}

/// Boundary `r = R + ρ(φ)` of the traveling wave at speed `V`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveShape {
    #[serde(rename = "V")]
    pub speed: f64,
    pub beta: f64,
    pub radius: f64,
    pub rho2: f64,
    pub rho3: f64,
    /// Area multiplier at leading order, `β/R - Φ'(R)`.
    pub lambda0: f64,
    pub boundary: Vec<BoundarySample>,
}

impl WaveShape {
    pub fn from_fields(fields: &ExpansionFields, speed: f64, samples: usize) -> Result<Self> {
        if !speed.is_finite() {
            return Err(Error::Domain(format!("speed {speed} is not finite")));
        }
        if speed.abs() > MAX_SPEED {
            return Err(Error::ValidityCap(speed.abs()));
        }
        if samples < 8 {
            return Err(Error::InsufficientPoints(format!(
                "{samples} boundary samples, need at least 8"
            )));
        }
        let rho2 = fields.rho2()?;
        let rho3 = fields.rho3()?;
        let radius = fields.radius;
        let (v2, v3) = (speed * speed, speed * speed * speed);
        let boundary = (0..samples)
            .map(|j| {
                let phi = 2.0 * PI * j as f64 / samples as f64;
                let r = radius + v2 * rho2 * (2.0 * phi).cos() + v3 * rho3 * (3.0 * phi).cos();
                BoundarySample {
                    phi,
                    radius: r,
                    x: r * phi.cos(),
                    y: r * phi.sin(),
                }
            })
            .collect();
        Ok(Self {
            speed,
            beta: fields.beta,
            radius,
            rho2,
            rho3,
            lambda0: fields.beta / radius - fields.dphi_r,
            boundary,
        })
    }

    /// `ρ` at each sample.
    pub fn rho(&self) -> impl Iterator<Item = f64> + '_ {
        self.boundary.iter().map(move |b| b.radius - self.radius)
    }

    /// Discrete Fourier projection `(1/n) Σ ρ(φ_j) cos(k φ_j)`.
    pub fn cosine_projection(&self, k: usize) -> f64 {
        let n = self.boundary.len() as f64;
        self.boundary
            .iter()
            .zip(self.rho())
            .map(|(b, r)| r * (k as f64 * b.phi).cos())
            .sum::<f64>()
            / n
    }

    /// `max_j |ρ(φ_j) - ρ(-φ_j)|`.
    pub fn evenness_defect(&self) -> f64 {
        let rho: Vec<f64> = self.rho().collect();
        let n = rho.len();
        (1..n).fold(0.0_f64, |m, j| m.max((rho[j] - rho[n - j]).abs()))
    }

    /// `½∮(R + ρ)² dφ - πR²`, the area change of the truncated shape.
    pub fn area_defect(&self) -> f64 {
        let n = self.boundary.len() as f64;
        let sum: f64 = self
            .boundary
            .iter()
            .map(|b| 0.5 * b.radius * b.radius)
            .sum();
        sum * 2.0 * PI / n - PI * self.radius * self.radius
    }
}

/// Third-order traveling-wave shape at a bifurcation root.
pub fn shape(root: &RadialSteadyState, beta: f64, speed: f64, samples: usize) -> Result<WaveShape> {
    if speed.abs() > MAX_SPEED {
        return Err(Error::ValidityCap(speed.abs()));
    }
    WaveShape::from_fields(&ExpansionFields::compute(root, beta)?, speed, samples)
}

/// `∂_Λ φ̃'(R)` at one point of the minimal branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sensitivity {
    pub central: f64,
    pub lambda: f64,
    pub value: f64,
}

/// Centered differences of `φ̃'(R)` with respect to `Λ` along the minimal
/// (`σ₁ > 0`) part of the branch.
///
/// Both `φ̃'(R)` and `Λ` are differenced in `A`, where they are smooth, and
/// the ratio is returned; differencing directly in `Λ` degrades near the fold
/// where `dΛ/dA → 0`. The trivial state, where `φ̃ ≡ 0`, serves as the left
/// neighbour of the first point.
pub fn lambda_sensitivity(branch: &Branch) -> Result<Vec<Sensitivity>> {
    let minimal: Vec<&RadialSteadyState> = branch
        .minimal_indices()
        .into_iter()
        .map(|i| &branch.points[i])
        .collect();
    if minimal.len() < 2 {
        return Err(Error::InsufficientPoints(format!(
            "{} minimal-branch points, need at least 2 besides the trivial state",
            minimal.len()
        )));
    }
    let slopes = minimal
        .par_iter()
        .map(|s| solve_phi_tilde(s).map(|m| (s.central, s.lambda, m.dprofile_r)))
        .collect::<Result<Vec<_>>>()?;
    let mut pts = vec![(0.0, 0.0, 0.0)];
    pts.extend(slopes);

    let mut out = Vec::with_capacity(pts.len() - 2);
    for w in pts.windows(3) {
        let (a0, a1, a2) = (w[0].0, w[1].0, w[2].0);
        let (h0, h1) = (a1 - a0, a2 - a1);
        if h0 <= 0.0 || h1 <= 0.0 {
            return Err(Error::InvalidData(format!(
                "minimal branch not ordered in A near A = {a1}"
            )));
        }
        // Second-order derivative in A on a possibly non-uniform stencil.
        let d = |y0: f64, y1: f64, y2: f64| {
            -h1 / (h0 * (h0 + h1)) * y0 + (h1 - h0) / (h0 * h1) * y1 + h0 / (h1 * (h0 + h1)) * y2
        };
        let dlambda = d(w[0].1, w[1].1, w[2].1);
        if dlambda <= 0.0 {
            return Err(Error::InvalidData(format!(
                "Λ not increasing on the minimal branch near A = {a1}"
            )));
        }
        let value = d(w[0].2, w[1].2, w[2].2) / dlambda;
        out.push(Sensitivity {
            central: a1,
            lambda: w[1].1,
            value,
        });
    }
    Ok(out)
}

/// `∂_Λ φ̃'(R)` from the linearized problems: `u = ∂_Λ Φ` solves the radial
/// mode problem with source `e^Φ`, and `∂_Λ φ̃` the `l = 1` problem with
/// source `e^Φ (1 + Λu)(φ̃ - r)`. Fails near the fold, where the radial
/// problem is resonant.
pub fn lambda_sensitivity_linearized(s: &RadialSteadyState) -> Result<f64> {
    let potential = s.potential();
    let exp = s.phi.map(|_, v| v.exp());
    let u = solve_mode_bvp(0, &potential, &exp, BoundaryCondition::Dirichlet(0.0))?;
    let phi_tilde = solve_phi_tilde(s)?;
    let lambda = s.lambda;
    let rhs = exp
        .zip_map(&u.profile, |_, e, u| e * (1.0 + lambda * u))
        .zip_map(&phi_tilde.profile, |r, a, p| a * (p - r));
    Ok(solve_mode_bvp(1, &potential, &rhs, BoundaryCondition::Dirichlet(0.0))?.dprofile_r)
}

/// Limit of `∂_Λ φ̃'(R)` as `Λ → 0`: with `Φ ≈ Λ g`, `g = 1 - I₀(r)/I₀(R)`,
/// the slope identity gives `∫ g' r² dr / (R g'(R))`, evaluated by quadrature.
pub fn small_lambda_sensitivity(radius: f64) -> Result<f64> {
    let grid = RadialGrid::new(radius, DEFAULT_NODES)?;
    let i0r = bessel_i0(radius)?;
    let dg = grid
        .nodes()
        .map(|r| bessel_i1(r).map(|v| -v / i0r))
        .collect::<Result<Vec<_>>>()?;
    let dg = RadialFunction::new(grid, dg)?;
    Ok(integrate_radial(&dg, 2)? / (radius * dg.last()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steady::SteadySolver;

    #[test]
    fn zero_state_fields_vanish() {
        let s = RadialSteadyState::zero(&RadialGrid::new(4.0, 256).unwrap());
        let f = ExpansionFields::compute(&s, 0.625).unwrap();
        assert_eq!(f.s2.profile.sup_norm(), 0.0);
        assert_eq!(f.s3.profile.sup_norm(), 0.0);
        assert!(f.rho2().is_err());
    }

    #[test]
    fn robin_conditions_hold() {
        let sv = SteadySolver::with_intervals(4.0, 1024).unwrap();
        let s = sv.solve_for_lambda(0.38).unwrap();
        let f = ExpansionFields::compute(&s, 0.625).unwrap();
        let c2 = (s.d2phi_r - 3.0 * 0.625 / 16.0) / s.dphi_r;
        let res = f.s2.dprofile_r - c2 * f.s2.value_r;
        assert!(res.abs() <= 1e-6 * (1.0 + f.s2.value_r.abs()), "{res}");
    }

    #[test]
    fn guards() {
        let sv = SteadySolver::with_intervals(4.0, 512).unwrap();
        let s = sv.solve_for_lambda(0.38).unwrap();
        let beta2 = exceptional_beta(&s, 2).unwrap();
        assert!(matches!(
            ExpansionFields::compute(&s, beta2 + 1e-4),
            Err(Error::ExceptionalBeta { l: 2, .. })
        ));
        assert!(matches!(
            shape(&s, 0.625, 0.8, 64),
            Err(Error::ValidityCap(_))
        ));
    }

    #[test]
    fn zero_speed_is_a_circle() {
        let sv = SteadySolver::with_intervals(4.0, 512).unwrap();
        let s = sv.solve_for_lambda(0.38).unwrap();
        let w = shape(&s, 0.625, 0.0, 90).unwrap();
        assert!(w.boundary.iter().all(|b| b.radius == 4.0));
    }

    #[test]
    fn small_lambda_limit_closed_form() {
        // ∫ r² I₁ dr = R² I₂(R) and I₂ = I₀ - 2I₁/R.
        let r = 4.0;
        let exact = r * bessel_i0(r).unwrap() / bessel_i1(r).unwrap() - 2.0;
        assert!((small_lambda_sensitivity(r).unwrap() - exact).abs() < 1e-10);
        assert!((exact - 2.632_189_069_437_44).abs() < 1e-12);
    }
}
