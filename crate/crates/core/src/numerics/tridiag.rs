//! Tridiagonal linear algebra: pivoted solve and Sturm-sequence bisection.

use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix stored as its diagonal and off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        debug_assert_eq!(off.len() + 1, diag.len());
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x`, from the signs of the LDLᵀ
    /// pivots of `T - x I`.
    pub fn count_below(&self, x: f64) -> usize {
        let n = self.len();
        if n == 0 {
            return 0;
        }
        let mut count = 0;
        let mut pivot = self.diag[0] - x;
        for i in 0..n {
            if i > 0 {
                let prev = if pivot == 0.0 {
                    f64::EPSILON * (1.0 + x.abs())
                } else {
                    pivot
                };
                pivot = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / prev;
            }
            if pivot < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection on the Sturm count.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs()).max(1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 4.0 * f64::EPSILON * scale.min(1.0 + mid.abs()) || mid == lo || mid == hi
            {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// The `k` smallest eigenvalues in ascending order.
    pub fn smallest_eigenvalues(&self, k: usize) -> Vec<f64> {
        (0..k.min(self.len())).map(|i| self.eigenvalue(i)).collect()
    }

    /// Eigenvalue closest to zero if one lies in `(-band, band)`.
    pub fn eigenvalue_near_zero(&self, band: f64) -> Option<f64> {
        let below = self.count_below(-band);
        let inside = self.count_below(band) - below;
        (inside > 0).then(|| self.eigenvalue(below))
    }

    /// Solves `T x = b` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        solve_tridiagonal(&self.off, &self.diag, &self.off, rhs)
    }
}

/// General tridiagonal solve with partial pivoting (LAPACK `gtsv` scheme).
///
/// `lower[i]` couples row `i + 1` to column `i`, `upper[i]` couples row `i` to
/// column `i + 1`.
pub fn solve_tridiagonal(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &[f64],
) -> Result<Vec<f64>> {
    let n = diag.len();
    if rhs.len() != n || lower.len() + 1 != n.max(1) || upper.len() + 1 != n.max(1) {
        return Err(Error::InvalidData(
            "tridiagonal dimensions do not match".into(),
        ));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut d = diag.to_vec();
    let mut du = upper.to_vec();
    let mut dl = lower.to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut b = rhs.to_vec();

    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                return Err(Error::InvalidData("singular tridiagonal system".into()));
            }
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
            dl[i] = 0.0;
        } else {
            // Swap rows i and i + 1.
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 1 < n - 1 {
                dl[i] = du[i + 1];
                du[i + 1] = -fact * dl[i];
            }
            du[i] = temp;
            b.swap(i, i + 1);
            b[i + 1] -= fact * b[i];
            if i < n - 2 {
                du2[i] = dl[i];
            }
            dl[i] = 0.0;
        }
    }
    if d[n - 1] == 0.0 {
        return Err(Error::InvalidData("singular tridiagonal system".into()));
    }

    b[n - 1] /= d[n - 1];
    if n > 1 {
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
    if b.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidData(
            "tridiagonal solve produced non-finite values".into(),
        ));
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn laplacian(n: usize) -> SymTridiagonal {
        SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1])
    }

    #[test]
    fn discrete_laplacian_spectrum() {
        let n = 50;
        let t = laplacian(n);
        let eig = t.smallest_eigenvalues(5);
        for (k, &e) in eig.iter().enumerate() {
            let theta = (k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64;
            let exact = 2.0 - 2.0 * theta.cos();
            assert!((e - exact).abs() < 1e-13, "{k}: {e} vs {exact}");
        }
        assert!(eig.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn zero_band_detection() {
        let t = SymTridiagonal::new(vec![1.0, 0.0, 3.0], vec![0.0, 0.0]);
        assert!(t.eigenvalue_near_zero(1e-6).unwrap().abs() < 1e-14);
        assert_eq!(laplacian(10).eigenvalue_near_zero(1e-6), None);
    }

    #[test]
    fn pivoting_handles_zero_leading_diagonal() {
        // [[0, 1], [1, 1]] x = [1, 2] -> x = [1, 1]
        let x = solve_tridiagonal(&[1.0], &[0.0, 1.0], &[1.0], &[1.0, 2.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn solve_reproduces_rhs(
            diag in prop::collection::vec(-5.0f64..5.0, 12),
            lower in prop::collection::vec(-3.0f64..3.0, 11),
            upper in prop::collection::vec(-3.0f64..3.0, 11),
            rhs in prop::collection::vec(-1.0f64..1.0, 12),
        ) {
            if let Ok(x) = solve_tridiagonal(&lower, &diag, &upper, &rhs) {
                let n = diag.len();
                let scale = x.iter().fold(1.0f64, |m, v| m.max(v.abs()));
                for i in 0..n {
                    let mut ax = diag[i] * x[i];
                    if i > 0 { ax += lower[i - 1] * x[i - 1]; }
                    if i + 1 < n { ax += upper[i] * x[i + 1]; }
                    prop_assert!((ax - rhs[i]).abs() < 1e-8 * scale);
                }
            }
        }
    }
}
