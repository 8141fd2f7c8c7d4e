//! Piecewise cubic Hermite interpolation, with PCHIP (Fritsch–Carlson) slopes
//! for shape-preserving interpolation of plain tables.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CubicHermite {
    x: Vec<f64>,
    y: Vec<f64>,
    dy: Vec<f64>,
}

impl CubicHermite {
    /// Interpolant through `(x, y)` with prescribed slopes `dy`.
    pub fn new(x: Vec<f64>, y: Vec<f64>, dy: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.len() != dy.len() {
            return Err(Error::GridMismatch("hermite table columns differ in length".into()));
        }
        if x.len() < 2 {
            return Err(Error::GridMismatch("hermite table needs at least two nodes".into()));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::GridMismatch("hermite nodes must be strictly increasing".into()));
        }
        if x.iter().chain(&y).chain(&dy).any(|v| !v.is_finite()) {
            return Err(Error::GridMismatch("hermite table contains non-finite values".into()));
        }
        Ok(Self { x, y, dy })
    }

    /// Shape-preserving interpolant with PCHIP slopes.
    pub fn pchip(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::GridMismatch("pchip columns differ in length".into()));
        }
        let dy = pchip_slopes(&x, &y);
        Self::new(x, y, dy)
    }

    /// Applies the Fritsch–Carlson limiter so that the interpolant is monotone
    /// on every interval where the data are. Slopes that already satisfy the
    /// condition are left untouched.
    pub fn monotone(mut self) -> Self {
        let n = self.x.len();
        for k in 0..n - 1 {
            let delta = (self.y[k + 1] - self.y[k]) / (self.x[k + 1] - self.x[k]);
            if delta == 0.0 {
                self.dy[k] = 0.0;
                self.dy[k + 1] = 0.0;
                continue;
            }
            if self.dy[k].signum() != delta.signum() {
                self.dy[k] = 0.0;
            }
            if self.dy[k + 1].signum() != delta.signum() {
                self.dy[k + 1] = 0.0;
            }
            let alpha = self.dy[k] / delta;
            let beta = self.dy[k + 1] / delta;
            let r2 = alpha * alpha + beta * beta;
            if r2 > 9.0 {
                let tau = 3.0 / r2.sqrt();
                self.dy[k] = tau * alpha * delta;
                self.dy[k + 1] = tau * beta * delta;
            }
        }
        self
    }

    pub fn nodes(&self) -> &[f64] {
        &self.x
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn slopes(&self) -> &[f64] {
        &self.dy
    }

    pub fn range(&self) -> (f64, f64) {
        (self.x[0], *self.x.last().expect("non-empty"))
    }

    /// Value and derivative at `t`; `None` outside the node range (a relative
    /// slack of 1e-12 absorbs rounding at the ends).
    pub fn eval(&self, t: f64) -> Option<(f64, f64)> {
        let (lo, hi) = self.range();
        let slack = 1e-12 * (hi - lo).max(1.0);
        if !(t >= lo - slack && t <= hi + slack) {
            return None;
        }
        let k = match self.x.partition_point(|&xi| xi <= t) {
            0 => 0,
            i => (i - 1).min(self.x.len() - 2),
        };
        let h = self.x[k + 1] - self.x[k];
        let u = (t - self.x[k]) / h;
        let (y0, y1, m0, m1) = (self.y[k], self.y[k + 1], self.dy[k] * h, self.dy[k + 1] * h);
        let u2 = u * u;
        let u3 = u2 * u;
        let value = (2.0 * u3 - 3.0 * u2 + 1.0) * y0
            + (u3 - 2.0 * u2 + u) * m0
            + (-2.0 * u3 + 3.0 * u2) * y1
            + (u3 - u2) * m1;
        let deriv = ((6.0 * u2 - 6.0 * u) * y0
            + (3.0 * u2 - 4.0 * u + 1.0) * m0
            + (-6.0 * u2 + 6.0 * u) * y1
            + (3.0 * u2 - 2.0 * u) * m1)
            / h;
        Some((value, deriv))
    }

    pub fn value(&self, t: f64) -> Option<f64> {
        self.eval(t).map(|(v, _)| v)
    }
}

/// PCHIP slopes: weighted harmonic means of adjacent secants, zero at local
/// extrema, one-sided three-point formulas at the ends.
pub fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n < 2 {
        return vec![0.0; n];
    }
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn end_slope(h0: f64, h1: f64, del0: f64, del1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if d.signum() != del0.signum() {
        0.0
    } else if del0.signum() != del1.signum() && d.abs() > 3.0 * del0.abs() {
        3.0 * del0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn reproduces_cubics_with_exact_slopes() {
        let x: Vec<f64> = (0..7).map(|k| 0.3 * k as f64 - 0.5).collect();
        let f = |t: f64| t * t * t - t + 2.0;
        let df = |t: f64| 3.0 * t * t - 1.0;
        let h = CubicHermite::new(
            x.clone(),
            x.iter().map(|&t| f(t)).collect(),
            x.iter().map(|&t| df(t)).collect(),
        )
        .unwrap();
        for k in 0..50 {
            let t = -0.5 + 1.8 * k as f64 / 49.0;
            let (v, d) = h.eval(t).unwrap();
            assert_abs_diff_eq!(v, f(t), epsilon = 1e-13);
            assert_abs_diff_eq!(d, df(t), epsilon = 1e-12);
        }
        assert!(h.eval(1.4).is_none());
    }

    #[test]
    fn pchip_flattens_at_extrema() {
        let x = vec![0.0, 1.0, 2.0, 3.0];
        let y = vec![0.0, 1.0, 0.5, 0.7];
        let d = pchip_slopes(&x, &y);
        assert_eq!(d[1], 0.0);
        assert_eq!(d[2], 0.0);
    }

    #[test]
    fn limiter_keeps_good_slopes() {
        let x = vec![0.0, 1.0, 2.0];
        let y = vec![0.0, 1.0, 4.0];
        let h = CubicHermite::new(x, y, vec![0.0, 2.0, 4.0]).unwrap();
        assert_eq!(h.clone().monotone(), h);
    }

    proptest! {
        #[test]
        fn pchip_is_monotone_on_monotone_data(
            steps in proptest::collection::vec((0.05f64..2.0, 0.0f64..3.0), 3..12),
        ) {
            let mut x = vec![0.0];
            let mut y = vec![0.0];
            for (dx, dy) in &steps {
                x.push(x.last().unwrap() + dx);
                y.push(y.last().unwrap() + dy);
            }
            let h = CubicHermite::pchip(x.clone(), y).unwrap();
            let (lo, hi) = h.range();
            let mut prev = f64::NEG_INFINITY;
            for k in 0..=400 {
                let t = lo + (hi - lo) * k as f64 / 400.0;
                let v = h.value(t).unwrap();
                prop_assert!(v >= prev - 1e-12);
                prev = v;
            }
        }

        #[test]
        fn monotone_limiter_enforces_monotonicity(
            y1 in 0.01f64..1.0, d0 in -5.0f64..20.0, d1 in -5.0f64..20.0,
        ) {
            let h = CubicHermite::new(vec![0.0, 1.0], vec![0.0, y1], vec![d0, d1]).unwrap().monotone();
            let mut prev = f64::NEG_INFINITY;
            for k in 0..=200 {
                let v = h.value(k as f64 / 200.0).unwrap();
                prop_assert!(v >= prev - 1e-12);
                prev = v;
            }
        }
    }
}
