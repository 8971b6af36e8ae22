//! Linearized spectrum of one steady state: σ table, translation-mode pair,
//! higher boundary eigenvalues and the exceptional surface tensions.

use liouville::io::to_json;
use liouville::spectral::{psi_ordering_holds, steady_eig_bound_constant, SpectrumReport};
use liouville::steady::SteadySolver;

fn main() -> liouville::Result<()> {
    let solver = SteadySolver::new(4.0)?;
    for central in [0.0, 0.3, 1.0] {
        let s = if central == 0.0 {
            liouville::steady::RadialSteadyState::zero(&solver.grid)
        } else {
            solver.solve_for_lambda(central)?
        };
        let report = SpectrumReport::compute(&s, 0.625, 4, 6)?;
        print!("{}", to_json(&report)?);
        if !s.is_trivial() {
            println!("normalized ψ ordering: {}", psi_ordering_holds(&s, 6)?);
            println!("E_l bound constant: {:.4}", steady_eig_bound_constant(&s));
        }
    }
    Ok(())
}
