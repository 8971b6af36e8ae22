use serde::Serialize;

use crate::error::{Error, Result};

/// Smallest interior node count accepted by [`RadialGrid::new`].
pub const MIN_NODES: usize = 64;

/// Default resolution used throughout the crate.
pub const DEFAULT_NODES: usize = 2048;

/// Uniform grid `r_i = i R / N`, `i = 0..=N`, on the disk radius `[0, R]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialGrid {
    radius: f64,
    intervals: usize,
}

impl RadialGrid {
    pub fn new(radius: f64, intervals: usize) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::Domain(format!(
                "radius must be positive, got {radius}"
            )));
        }
        if intervals < MIN_NODES {
            return Err(Error::Domain(format!(
                "grid needs at least {MIN_NODES} intervals, got {intervals}"
            )));
        }
        Ok(Self { radius, intervals })
    }

    /// Grid with every other node removed. Used for Richardson extrapolation,
    /// so the usual lower bound on the node count is not enforced.
    pub(crate) fn coarsened(&self) -> Option<Self> {
        (self.intervals.is_multiple_of(2) && self.intervals >= 8).then_some(Self {
            radius: self.radius,
            intervals: self.intervals / 2,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Number of intervals `N`; the grid has `N + 1` nodes.
    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        self.radius / self.intervals as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i == self.intervals {
            self.radius
        } else {
            i as f64 * self.step()
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.node(i))
    }

    /// Samples `f` at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> RadialFunction {
        RadialFunction {
            grid: *self,
            values: self.nodes().map(f).collect(),
        }
    }

    pub fn zeros(&self) -> RadialFunction {
        RadialFunction {
            grid: *self,
            values: vec![0.0; self.len()],
        }
    }
}

/// Real function sampled on a [`RadialGrid`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialFunction {
    grid: RadialGrid,
    values: Vec<f64>,
}

impl RadialFunction {
    pub fn new(grid: RadialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidData(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidData(format!("non-finite sample at node {i}")));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn at(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        self.values[self.grid.intervals]
    }

    /// Pointwise map keeping the grid.
    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> RadialFunction {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| f(self.grid.node(i), v))
            .collect();
        RadialFunction {
            grid: self.grid,
            values,
        }
    }

    /// Pointwise combination of two functions on the same grid.
    pub fn zip_map(
        &self,
        other: &RadialFunction,
        f: impl Fn(f64, f64, f64) -> f64,
    ) -> RadialFunction {
        debug_assert_eq!(self.grid, other.grid);
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .enumerate()
            .map(|(i, (&a, &b))| f(self.grid.node(i), a, b))
            .collect();
        RadialFunction {
            grid: self.grid,
            values,
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Sup-norm of `self - other`.
    pub fn distance(&self, other: &RadialFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Restriction to the grid with every other node removed.
    pub(crate) fn restricted(&self) -> Option<RadialFunction> {
        let grid = self.grid.coarsened()?;
        let values = self.values.iter().step_by(2).copied().collect();
        Some(RadialFunction { grid, values })
    }

    /// One-sided third-order estimate of `f'(R)` from the last four nodes.
    pub fn derivative_at_end(&self) -> f64 {
        let n = self.grid.intervals;
        let f = &self.values;
        (11.0 * f[n] - 18.0 * f[n - 1] + 9.0 * f[n - 2] - 2.0 * f[n - 3]) / (6.0 * self.grid.step())
    }

    /// One-sided five-point estimate of `f''(R)`.
    pub fn second_derivative_at_end(&self) -> f64 {
        let n = self.grid.intervals;
        let f = &self.values;
        let h = self.grid.step();
        (35.0 * f[n] - 104.0 * f[n - 1] + 114.0 * f[n - 2] - 56.0 * f[n - 3] + 11.0 * f[n - 4])
            / (12.0 * h * h)
    }
}

/// Composite Simpson approximation of `∫_0^R f(r) r^p dr`.
pub fn integrate_radial(f: &RadialFunction, weight_power: u32) -> Result<f64> {
    let grid = f.grid();
    let n = grid.intervals();
    if !n.is_multiple_of(2) {
        return Err(Error::GridParity(n));
    }
    if let Some(i) = f.values().iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidData(format!("non-finite sample at node {i}")));
    }
    let mut sum = 0.0;
    for (i, &v) in f.values().iter().enumerate() {
        let w = match i {
            0 => 1.0,
            i if i == n => 1.0,
            i if i % 2 == 1 => 4.0,
            _ => 2.0,
        };
        sum += w * v * grid.node(i).powi(weight_power as i32);
    }
    Ok(sum * grid.step() / 3.0)
}
