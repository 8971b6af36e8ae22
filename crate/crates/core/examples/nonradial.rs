//! Surface-tension thresholds for non-radial steady bifurcations, and the
//! states where a given β crosses them.

use liouville::bifurcation::{nonradial_bifurcation_beta, nonradial_crossings};
use liouville::steady::SteadySolver;

fn main() -> liouville::Result<()> {
    let solver = SteadySolver::new(4.0)?;
    let branch = solver.trace_branch(6.0, 64)?;
    for l in 2..=6 {
        let curve = nonradial_bifurcation_beta(&branch, l)?;
        let peak = curve.points.iter().fold(0.0_f64, |m, p| m.max(p.beta));
        println!("l = {l}: {} points, max β = {peak:.6}", curve.points.len());
        for c in nonradial_crossings(&solver, &curve, 0.1)? {
            println!(
                "  β = 0.1 crossed at A = {:.10}, Λ = {:.8} (minimal: {}), E_l = {:.12}",
                c.central, c.lambda, c.minimal, c.steady_eigenvalue
            );
        }
    }
    Ok(())
}
