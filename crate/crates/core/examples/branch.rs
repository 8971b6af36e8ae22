//! Trace the radial steady-state branch, locate the fold and check the
//! integral identities at every point.

use liouville::io::{branch_csv, branch_rows};
use liouville::steady::{mass_identity_residual, pohozhaev_residuals, SteadySolver};

fn main() -> liouville::Result<()> {
    let solver = SteadySolver::new(4.0)?;
    let branch = solver.trace_branch(6.0, 64)?;
    let fold = solver.fold()?;
    println!(
        "fold: A = {:.8}, Λ = {:.10}; bound 1 + μ_D = {:.6}",
        fold.central,
        fold.lambda,
        solver.lambda_bound()
    );

    let mut worst = 0.0_f64;
    for s in &branch.points {
        let (p1, p2) = pohozhaev_residuals(s)?;
        worst = worst.max(p1).max(p2).max(mass_identity_residual(s)?);
    }
    println!(
        "worst identity residual over {} points: {worst:.2e}",
        branch.len()
    );
    println!(
        "minimal sub-branch: {} points",
        branch.minimal_indices().len()
    );

    let csv = branch_csv(&branch_rows(&branch)?);
    for line in csv.lines().take(6) {
        println!("{line}");
    }
    Ok(())
}
