//! The comparison integral J(R) behind the lower bound Λ₀ ≥ 1/e, and the
//! pointwise subsolution check it rests on.

use liouville::bifurcation::{bessel_lemma_j, subsolution_check};
use liouville::steady::SteadySolver;

fn main() -> liouville::Result<()> {
    for radius in [3.0, 4.0, 5.0, 6.0] {
        let lemma = bessel_lemma_j(radius)?;
        println!(
            "R = {radius}: J = {:.12} (quadrature {:.12}), J > 1/2: {}",
            lemma.j(),
            lemma.j_quadrature,
            lemma.j() > 0.5
        );
    }
    for radius in [4.0, 5.0] {
        let s = SteadySolver::new(radius)?.minimal_solution((-1.0_f64).exp())?;
        println!(
            "R = {radius}: minimal state at Λ = 1/e has A = {:.6}, Φ ≥ w: {}",
            s.central,
            subsolution_check(&s)?
        );
    }
    Ok(())
}
