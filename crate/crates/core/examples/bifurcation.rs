//! Locate the steady-state to traveling-wave bifurcation on the branch and
//! show the translation-mode pair changing type across it.

use liouville::bifurcation::{discriminant_flip, find_tw_bifurcation, DEFAULT_BETA};
use liouville::io::to_json;
use liouville::steady::SteadySolver;

fn main() -> liouville::Result<()> {
    let solver = SteadySolver::new(4.0)?;
    let branch = solver.trace_branch(6.0, 64)?;
    let report = find_tw_bifurcation(&solver, &branch, 1e-12, DEFAULT_BETA)?;
    print!("{}", to_json(&report)?);
    let (left, right) = discriminant_flip(&report, &solver)?;
    println!("discriminant either side of the root: {left:.4e}, {right:.4e}");
    Ok(())
}
