//! Cumulative composite Simpson quadrature on arbitrary (strictly increasing) grids.
//!
//! Panels of three consecutive nodes are integrated exactly for the
//! interpolating quadratic. Even nodes therefore carry the classical composite
//! Simpson value; odd nodes take the partial integral of the same quadratic up
//! to the middle node. An odd number of intervals closes with the quadratic
//! through the last three nodes.

use crate::error::{Error, Result};

/// Running integral of `f` sampled on `x`, starting at zero at `x[0]`.
pub fn cumulative_simpson(x: &[f64], f: &[f64]) -> Result<Vec<f64>> {
    if x.len() != f.len() {
        return Err(Error::GridMismatch(format!(
            "{} abscissae for {} ordinates",
            x.len(),
            f.len()
        )));
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::GridMismatch("quadrature needs at least two nodes".into()));
    }
    if x.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::GridMismatch("quadrature nodes must be strictly increasing".into()));
    }

    let mut out = vec![0.0; n];
    if n == 2 {
        out[1] = 0.5 * (x[1] - x[0]) * (f[0] + f[1]);
        return Ok(out);
    }

    let mut i = 0;
    while i + 2 < n {
        let h0 = x[i + 1] - x[i];
        let h1 = x[i + 2] - x[i + 1];
        let (first, second) = panel(h0, h1, f[i], f[i + 1], f[i + 2]);
        out[i + 1] = out[i] + first;
        out[i + 2] = out[i + 1] + second;
        i += 2;
    }
    if i + 1 < n {
        // one interval left: reuse the quadratic through the last three nodes
        let h0 = x[n - 2] - x[n - 3];
        let h1 = x[n - 1] - x[n - 2];
        let (_, second) = panel(h0, h1, f[n - 3], f[n - 2], f[n - 1]);
        out[n - 1] = out[n - 2] + second;
    }
    Ok(out)
}

/// Integral of `f` over the whole grid.
pub fn simpson(x: &[f64], f: &[f64]) -> Result<f64> {
    Ok(*cumulative_simpson(x, f)?.last().expect("non-empty"))
}

/// Integrals of the quadratic through three nodes over `[x0, x1]` and `[x1, x2]`.
fn panel(h0: f64, h1: f64, f0: f64, f1: f64, f2: f64) -> (f64, f64) {
    let h = h0 + h1;
    let first = h0 * (2.0 * h0 + 3.0 * h1) / (6.0 * h) * f0 + h0 * (h0 + 3.0 * h1) / (6.0 * h1) * f1
        - h0 * h0 * h0 / (6.0 * h1 * h) * f2;
    let second = -h1 * h1 * h1 / (6.0 * h0 * h) * f0 + h1 * (3.0 * h0 + h1) / (6.0 * h0) * f1
        + h1 * (3.0 * h0 + 2.0 * h1) / (6.0 * h) * f2;
    (first, second)
}

/// `n + 1` equally spaced nodes from `a` to `b`.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / n as f64;
    (0..=n)
        .map(|k| if k == n { b } else { a + h * k as f64 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exact_for_cubics_on_uniform_grid() {
        let x = uniform_grid(0.0, 2.0, 8);
        let f: Vec<f64> = x.iter().map(|t| t * t * t - 2.0 * t + 1.0).collect();
        let c = cumulative_simpson(&x, &f).unwrap();
        for (k, (&xi, &ci)) in x.iter().zip(&c).enumerate() {
            let exact = xi.powi(4) / 4.0 - xi * xi + xi;
            if k % 2 == 0 {
                assert_abs_diff_eq!(ci, exact, epsilon = 1e-13);
            } else {
                assert_abs_diff_eq!(ci, exact, epsilon = 1e-3);
            }
        }
    }

    #[test]
    fn exact_for_quadratics_on_nonuniform_grid() {
        let x = vec![0.0, 0.1, 0.35, 0.4, 0.9, 1.0, 1.7];
        let f: Vec<f64> = x.iter().map(|t| 3.0 * t * t - t + 2.0).collect();
        let c = cumulative_simpson(&x, &f).unwrap();
        for (&xi, &ci) in x.iter().zip(&c) {
            assert_abs_diff_eq!(ci, xi.powi(3) - 0.5 * xi * xi + 2.0 * xi, epsilon = 1e-13);
        }
    }

    #[test]
    fn fourth_order_convergence() {
        let err = |n: usize| {
            let x = uniform_grid(0.0, 1.0, n);
            let f: Vec<f64> = x.iter().map(|t| t.exp()).collect();
            (simpson(&x, &f).unwrap() - (1f64.exp() - 1.0)).abs()
        };
        let ratio = err(16) / err(32);
        assert!((14.0..18.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(cumulative_simpson(&[0.0], &[1.0]).is_err());
        assert!(cumulative_simpson(&[0.0, 1.0], &[1.0]).is_err());
        assert!(cumulative_simpson(&[0.0, 0.0, 1.0], &[1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn two_nodes_fall_back_to_trapezoid() {
        let c = cumulative_simpson(&[1.0, 3.0], &[2.0, 4.0]).unwrap();
        assert_abs_diff_eq!(c[1], 6.0, epsilon = 1e-15);
    }
}
