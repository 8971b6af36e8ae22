//! Third-order traveling-wave boundary at the bifurcation point, written as
//! CSV and SVG into the system temp directory.

use liouville::bifurcation::{find_tw_bifurcation, DEFAULT_BETA};
use liouville::io::{shape_csv, shape_svg, write_file};
use liouville::steady::SteadySolver;
use liouville::wave::shape;

fn main() -> liouville::Result<()> {
    let solver = SteadySolver::new(4.0)?;
    let branch = solver.trace_branch(6.0, 64)?;
    let root = find_tw_bifurcation(&solver, &branch, 1e-12, DEFAULT_BETA)?.root_state;

    let wave = shape(&root, DEFAULT_BETA, 0.22, 720)?;
    println!(
        "rho2 = {:.9}, rho3 = {:.9}, lambda0 = {:.9}",
        wave.rho2, wave.rho3, wave.lambda0
    );
    println!(
        "evenness defect {:.1e}, mean {:.1e}, cos φ {:.1e}",
        wave.evenness_defect(),
        wave.cosine_projection(0),
        wave.cosine_projection(1)
    );

    let small = shape(&root, DEFAULT_BETA, 0.1, 720)?.area_defect();
    let large = shape(&root, DEFAULT_BETA, 0.2, 720)?.area_defect();
    println!(
        "area defect {small:.4e} -> {large:.4e}, order {:.2}",
        (large / small).log2()
    );

    let dir = std::env::temp_dir();
    write_file(dir.join("wave_shape.csv"), &shape_csv(&wave))?;
    write_file(dir.join("wave_shape.svg"), &shape_svg(&wave))?;
    println!("wrote {}", dir.join("wave_shape.{csv,svg}").display());
    Ok(())
}
