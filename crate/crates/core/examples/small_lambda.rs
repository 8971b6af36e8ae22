//! Minimal solutions for small Λ approach Λ g with g = 1 - I₀(r)/I₀(R).

use liouville::steady::{small_lambda_profile, SteadySolver};

fn main() -> liouville::Result<()> {
    let solver = SteadySolver::new(4.0)?;
    let g = small_lambda_profile(&solver.grid)?;
    for lambda in [0.08, 0.04, 0.02, 0.01] {
        let s = solver.minimal_solution(lambda)?;
        let gap = s.phi.zip_map(&g, |_, p, g| p - lambda * g).sup_norm();
        println!(
            "Λ = {lambda}: ‖Φ - Λg‖∞ / Λ² = {:.6}",
            gap / (lambda * lambda)
        );
    }
    Ok(())
}
