//! Linearized spectra around a radial steady state.
//!
//! Every problem here is one angular mode of
//!
//! ```text
//! -(1/r)(r f')' + (l²/r² + 1 - Λe^Φ) f = s(r)
//! ```
//!
//! with different data:
//!
//! | mode          | l     | source `s`            | value at `R` |
//! |---------------|-------|-----------------------|--------------|
//! | `h_l`         | `l`   | 0                     | `-Φ'(R)`     |
//! | `φ̃`           | 1     | `-Λ e^Φ r`            | 0            |
//! | `ψ_l`         | `l`   | `(l² - 1) Φ' / r²`    | 0            |
//!
//! `ψ_l = h_l + Φ'` identically, which gives two independent routes to the
//! exceptional surface tensions `β_l`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::grid::{integrate_radial, RadialFunction};
use crate::numerics::mode::{
    eig_sturm_liouville, solve_mode_bvp, BoundaryCondition, ModeKind, ModeSolution,
};
use crate::steady::{RadialSteadyState, StateIntegrals};

/// `σ_{n,k}` for `n = 0..=n_max` (rows) and `k = 1..=k_max` (columns).
///
/// Rows `n >= 1` must be strictly positive; a nonpositive entry there means
/// the discretization has failed and is reported as an error.
pub fn sigma_table(s: &RadialSteadyState, n_max: usize, k_max: usize) -> Result<Vec<Vec<f64>>> {
    let potential = s.potential();
    let mut table = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let row = eig_sturm_liouville(n, &potential, k_max)?;
        if n >= 1 {
            if let Some((k, &sigma)) = row.iter().enumerate().find(|(_, &v)| v <= 0.0) {
                return Err(Error::PositivityViolation { n, l: k + 1, sigma });
            }
        }
        table.push(row);
    }
    Ok(table)
}

/// `h_l`: response of the stress to a `cos lφ` boundary perturbation.
pub fn solve_h_mode(s: &RadialSteadyState, l: usize) -> Result<ModeSolution> {
    if l == 0 {
        return Err(Error::Domain("h_l needs l >= 1".into()));
    }
    let rhs = s.grid().zeros();
    let sol = solve_mode_bvp(
        l,
        &s.potential(),
        &rhs,
        BoundaryCondition::Dirichlet(-s.dphi_r),
    )?;
    Ok(sol.with_kind(ModeKind::H))
}

/// `φ̃`: first-order stress response to the velocity.
pub fn solve_phi_tilde(s: &RadialSteadyState) -> Result<ModeSolution> {
    let potential = s.potential();
    let rhs = potential.map(|r, v| -v * r);
    let sol = solve_mode_bvp(1, &potential, &rhs, BoundaryCondition::Dirichlet(0.0))?;
    Ok(sol.with_kind(ModeKind::PhiTilde))
}

/// `ψ_l = h_l + Φ'`, solved directly with homogeneous boundary data.
pub fn solve_psi_mode(s: &RadialSteadyState, l: usize) -> Result<ModeSolution> {
    if l < 2 {
        return Err(Error::Domain("ψ_l needs l >= 2".into()));
    }
    let factor = (l * l - 1) as f64;
    // The source behaves like Φ''(0)/r at the origin, where the profile is
    // pinned; the sample there is never used.
    let rhs = s
        .dphi
        .map(|r, d| if r == 0.0 { 0.0 } else { factor * d / (r * r) });
    let sol = solve_mode_bvp(l, &s.potential(), &rhs, BoundaryCondition::Dirichlet(0.0))?;
    Ok(sol.with_kind(ModeKind::Psi))
}

/// `β_l = R² (h_l'(R) + Φ''(R)) / (l² - 1)`: the surface tension at which
/// the mode-`l` steady eigenvalue equals 1.
pub fn exceptional_beta(s: &RadialSteadyState, l: usize) -> Result<f64> {
    check_mode_index(l)?;
    let h = solve_h_mode(s, l)?;
    Ok(beta_from_slope(s, l, h.dprofile_r + s.d2phi_r))
}

/// Same number as [`exceptional_beta`], computed from `ψ_l'(R)`.
pub fn exceptional_beta_from_psi(s: &RadialSteadyState, l: usize) -> Result<f64> {
    let psi = solve_psi_mode(s, l)?;
    Ok(beta_from_slope(s, l, psi.dprofile_r))
}

fn beta_from_slope(s: &RadialSteadyState, l: usize, slope: f64) -> f64 {
    s.radius * s.radius * slope / (l * l - 1) as f64
}

fn check_mode_index(l: usize) -> Result<()> {
    if l < 2 {
        Err(Error::Domain(format!(
            "mode index l = {l} must be at least 2"
        )))
    } else {
        Ok(())
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "surface tension β = {beta} must be positive"
        )))
    }
}

/// Left-hand side `L = π (Λ∫e^Φ Φ' r² dr / (R Φ'(R)) - 1)` of the quadratic
/// `β (E - 1)² / R⁴ = L` for the translation-mode eigenvalues.
///
/// `L` has the sign of the bifurcation functional. At the trivial state the
/// ratio is replaced by its limit 0 as `Λ → 0`.
pub fn traveling_discriminant(s: &RadialSteadyState) -> Result<f64> {
    if s.is_trivial() {
        return Ok(-std::f64::consts::PI);
    }
    if s.dphi_r == 0.0 {
        return Err(Error::Domain("Φ'(R) = 0 on a nontrivial state".into()));
    }
    let int = StateIntegrals::of(s)?;
    let ratio = s.lambda * int.exp_dphi / (s.radius * s.dphi_r);
    Ok(std::f64::consts::PI * (ratio - 1.0))
}

/// The eigenvalue pair `E = 1 ± √(R⁴ L / β)`: complex conjugates when
/// `L < 0`, real and straddling 1 when `L > 0`.
pub fn traveling_eigs_e01(s: &RadialSteadyState, beta: f64) -> Result<[Complex64; 2]> {
    check_beta(beta)?;
    let l = traveling_discriminant(s)?;
    let r2 = s.radius * s.radius;
    let d = r2 * (l.abs() / beta).sqrt();
    Ok(if l < 0.0 {
        [Complex64::new(1.0, -d), Complex64::new(1.0, d)]
    } else {
        [Complex64::new(1.0 - d, 0.0), Complex64::new(1.0 + d, 0.0)]
    })
}

/// `E_l = 1/l² + R² (h_l'(R) + Φ''(R)) / (β l²)`.
pub fn steady_eig_el(s: &RadialSteadyState, beta: f64, l: usize) -> Result<f64> {
    check_beta(beta)?;
    check_mode_index(l)?;
    let h = solve_h_mode(s, l)?;
    Ok(el_from_slope(s, beta, l, h.dprofile_r + s.d2phi_r))
}

fn el_from_slope(s: &RadialSteadyState, beta: f64, l: usize, slope: f64) -> f64 {
    let l2 = (l * l) as f64;
    1.0 / l2 + s.radius * s.radius * slope / (beta * l2)
}

/// `E_l` for `l = 2..=l_max`, sharing one `h_l` solve per mode.
pub fn steady_eigs(s: &RadialSteadyState, beta: f64, l_max: usize) -> Result<Vec<f64>> {
    check_beta(beta)?;
    (2..=l_max)
        .map(|l| {
            Ok(el_from_slope(
                s,
                beta,
                l,
                solve_h_mode(s, l)?.dprofile_r + s.d2phi_r,
            ))
        })
        .collect()
}

/// Smallest integer `k >= 0` with `2 l k + k² >= max_r r² (1 - Λe^Φ)`.
///
/// For such `k` the power `(r/R)^{l+k}` is a subsolution of the `h_l`
/// problem, so `h_l(r) >= -Φ'(R) (r/R)^{l+k}`.
pub fn comparison_exponent(s: &RadialSteadyState, l: usize) -> usize {
    let potential = s.potential();
    let target = potential
        .values()
        .iter()
        .zip(s.grid().nodes())
        .fold(0.0_f64, |m, (&v, r)| m.max(r * r * (1.0 - v)));
    let l = l as f64;
    // Positive root of k² + 2lk - target = 0.
    let k = (l * l + target).sqrt() - l;
    let mut k = k.ceil().max(0.0) as usize;
    while k > 0 && (2.0 * l * (k - 1) as f64 + ((k - 1) * (k - 1)) as f64) >= target {
        k -= 1;
    }
    k
}

/// `(r/R)^{l+k} · (-Φ'(R))`, the lower barrier for `h_l`.
pub fn h_mode_barrier(s: &RadialSteadyState, l: usize) -> RadialFunction {
    let k = comparison_exponent(s, l);
    let scale = -s.dphi_r;
    let radius = s.radius;
    s.grid()
        .sample(|r| scale * (r / radius).powi((l + k) as i32))
}

/// A constant `C` with `E_l <= C (1/(βl) + 1/l²)` for every `l >= 2` and
/// every `β > 0`, obtained from the barrier: `R² h_l'(R) <= R|Φ'(R)|(l + k)`.
///
/// `k` is the comparison exponent at `l = 1`, which also works for all
/// larger `l`.
pub fn steady_eig_bound_constant(s: &RadialSteadyState) -> f64 {
    let k = comparison_exponent(s, 1) as f64;
    let slope_part =
        s.radius * s.dphi_r.abs() * (1.0 + k) + s.radius * s.radius * s.d2phi_r.max(0.0);
    slope_part.max(1.0)
}

/// `(A, Λ, R)` of the state a report was computed at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StateSummary {
    #[serde(rename = "A")]
    pub central: f64,
    pub lambda: f64,
    #[serde(rename = "R")]
    pub radius: f64,
}

impl From<&RadialSteadyState> for StateSummary {
    fn from(s: &RadialSteadyState) -> Self {
        Self {
            central: s.central,
            lambda: s.lambda,
            radius: s.radius,
        }
    }
}

/// σ table plus boundary-operator eigenvalues at one state and one `β`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub sigma: Vec<Vec<f64>>,
    /// `[re, im]` of each translation-mode eigenvalue.
    #[serde(rename = "E01")]
    pub e01: [[f64; 2]; 2],
    /// `E_l` for `l = 2..=l_max`.
    #[serde(rename = "El")]
    pub el: Vec<f64>,
    /// `β_l` for `l = 2..=l_max`.
    pub beta_exceptional: Vec<f64>,
    pub beta: f64,
    pub state: StateSummary,
}

impl SpectrumReport {
    pub fn compute(s: &RadialSteadyState, beta: f64, n_max: usize, l_max: usize) -> Result<Self> {
        check_beta(beta)?;
        let sigma = sigma_table(s, n_max, l_max)?;
        let e01 = traveling_eigs_e01(s, beta)?.map(|e| [e.re, e.im]);
        let mut el = Vec::new();
        let mut beta_exceptional = Vec::new();
        for l in 2..=l_max {
            let slope = solve_h_mode(s, l)?.dprofile_r + s.d2phi_r;
            el.push(el_from_slope(s, beta, l, slope));
            beta_exceptional.push(beta_from_slope(s, l, slope));
        }
        Ok(Self {
            sigma,
            e01,
            el,
            beta_exceptional,
            beta,
            state: s.into(),
        })
    }
}

/// Whether `0 > ψ_{l+1}/((l+1)² - 1) > ψ_l/(l² - 1)` at every interior node
/// for `l = 2..l_max`.
///
/// The normalized modes all solve the same problem with source `Φ'/r²` and
/// a potential increasing in `l`, which orders them. The unnormalized `ψ_l`
/// are not ordered: near the origin they differ by `h_l ~ r^l`.
pub fn psi_ordering_holds(s: &RadialSteadyState, l_max: usize) -> Result<bool> {
    let normalized = (2..=l_max)
        .map(|l| {
            let k = (l * l - 1) as f64;
            solve_psi_mode(s, l).map(|m| m.profile.map(|_, v| v / k))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = s.grid().intervals();
    Ok((1..n).all(|i| {
        normalized.iter().all(|p| p.at(i) < 0.0)
            && normalized.windows(2).all(|w| w[1].at(i) > w[0].at(i))
    }))
}

/// `Λ∫e^Φ Φ' r² dr / (R Φ'(R))`, which equals `φ̃'(R)` on exact solutions.
pub fn phi_tilde_slope_identity(s: &RadialSteadyState) -> Result<f64> {
    if s.is_trivial() {
        return Ok(0.0);
    }
    let exp_dphi = integrate_radial(&s.phi.zip_map(&s.dphi, |_, p, d| p.exp() * d), 2)?;
    Ok(s.lambda * exp_dphi / (s.radius * s.dphi_r))
}
