//! Plain-text serialization: branch CSV, JSON reports, shape CSV and SVG.
//!
//! Everything is formatted with fixed precision so that identical inputs
//! give byte-identical files.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::steady::{mass_identity_residual, pohozhaev_residuals, Branch};
use crate::wave::WaveShape;

pub const BRANCH_HEADER: &str =
    "A,lambda,dphi_R,d2phi_R,sigma1,sigma2,pohozhaev_res1,pohozhaev_res2,mass_res";

/// One row of the branch table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchRow {
    #[serde(rename = "A")]
    pub central: f64,
    pub lambda: f64,
    pub dphi_r: f64,
    pub d2phi_r: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub pohozhaev_res1: f64,
    pub pohozhaev_res2: f64,
    pub mass_res: f64,
}

pub fn branch_rows(branch: &Branch) -> Result<Vec<BranchRow>> {
    branch
        .points
        .par_iter()
        .zip(&branch.sigma)
        .map(|(s, sigma)| {
            let (pohozhaev_res1, pohozhaev_res2) = pohozhaev_residuals(s)?;
            Ok(BranchRow {
                central: s.central,
                lambda: s.lambda,
                dphi_r: s.dphi_r,
                d2phi_r: s.d2phi_r,
                sigma1: sigma[0],
                sigma2: sigma[1],
                pohozhaev_res1,
                pohozhaev_res2,
                mass_res: mass_identity_residual(s)?,
            })
        })
        .collect()
}

/// `v` with 12 significant digits.
fn sig12(v: f64) -> String {
    format!("{v:.11e}")
}

pub fn branch_csv(rows: &[BranchRow]) -> String {
    let mut out = String::from(BRANCH_HEADER);
    out.push('\n');
    for r in rows {
        let fields = [
            r.central,
            r.lambda,
            r.dphi_r,
            r.d2phi_r,
            r.sigma1,
            r.sigma2,
            r.pohozhaev_res1,
            r.pohozhaev_res2,
            r.mass_res,
        ];
        let line: Vec<String> = fields.iter().map(|&v| sig12(v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::InvalidData(format!("serialization failed: {e}")))
}

pub fn shape_csv(shape: &WaveShape) -> String {
    let mut out = String::from("phi,radius,x,y\n");
    for b in &shape.boundary {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            sig12(b.phi),
            sig12(b.radius),
            sig12(b.x),
            sig12(b.y)
        );
    }
    out
}

/// Closed boundary polyline over the dashed reference circle `r = R`.
pub fn shape_svg(shape: &WaveShape) -> String {
    let extent = 1.2 * shape.radius;
    let size = 2.0 * extent;
    let mut points: Vec<String> = shape
        .boundary
        .iter()
        .map(|b| format!("{:.6},{:.6}", b.x, -b.y))
        .collect();
    if let Some(first) = points.first().cloned() {
        points.push(first);
    }
    let stroke = size / 400.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.6} {:.6} {:.6} {:.6}" width="600" height="600">"#,
        -extent, -extent, size, size
    );
    let _ = writeln!(
        out,
        r#"  <circle cx="0" cy="0" r="{:.6}" fill="none" stroke="gray" stroke-width="{stroke:.6}" stroke-dasharray="{:.6}"/>"#,
        shape.radius,
        4.0 * stroke
    );
    let _ = writeln!(
        out,
        r#"  <polyline points="{}" fill="none" stroke="black" stroke-width="{:.6}"/>"#,
        points.join(" "),
        2.0 * stroke
    );
    out.push_str("</svg>\n");
    out
}

pub fn write_file(path: impl AsRef<Path>, contents: &str) -> Result<()> {
    std::fs::write(path.as_ref(), contents).map_err(|e| Error::io(path, e))
}
