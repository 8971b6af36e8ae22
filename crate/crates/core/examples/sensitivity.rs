//! How fast φ̃'(R) responds to Λ along the minimal branch, compared with the
//! exact linearization and the small-Λ limit.

use liouville::steady::SteadySolver;
use liouville::wave::{
    lambda_sensitivity, lambda_sensitivity_linearized, small_lambda_sensitivity,
};

fn main() -> liouville::Result<()> {
    let solver = SteadySolver::new(4.0)?;
    let branch = solver.trace_branch(6.0, 64)?;
    for p in lambda_sensitivity(&branch)?.iter().step_by(3) {
        let s = solver.solve_for_lambda(p.central)?;
        println!(
            "A = {:.4}, Λ = {:.6}: difference {:.6}, linearized {:.6}",
            p.central,
            p.lambda,
            p.value,
            lambda_sensitivity_linearized(&s)?
        );
    }
    println!("small-Λ limit: {:.12}", small_lambda_sensitivity(4.0)?);
    Ok(())
}
