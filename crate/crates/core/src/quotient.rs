//! Orbit-space geometry: the quotient metric and orthogonal invariant pairs
//! `(ω, θ)` used as coordinates on the orbit space.

mod characteristics;

use std::sync::Arc;

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

pub use characteristics::{solve_orthogonal_invariant, TraceOptions, TracedInvariant};

use crate::chart::{AdaptedChart3, InvariantFunction, Point2};
use crate::error::{Error, Result};

/// Quotient metric `g̃` on the orbit space, in the `(x1, x2)` coordinates of an
/// adapted chart.
#[derive(Debug, Clone)]
pub struct QuotientMetric2 {
    chart: AdaptedChart3,
}

pub fn quotient_metric(chart: &AdaptedChart3) -> QuotientMetric2 {
    QuotientMetric2 { chart: chart.clone() }
}

impl QuotientMetric2 {
    /// `[q_ij] = [[g²², −g¹²], [−g¹², g¹¹]] / (g¹¹g²² − (g¹²)²)`.
    pub fn at(&self, p: Point2) -> Result<Matrix2<f64>> {
        let h = self.chart.invariant_block(p)?;
        let det = h[(0, 0)] * h[(1, 1)] - h[(0, 1)] * h[(0, 1)];
        if !(det > 0.0) {
            return Err(Error::SingularMetric { x1: p[0], x2: p[1], det });
        }
        Ok(Matrix2::new(h[(1, 1)], -h[(0, 1)], -h[(0, 1)], h[(0, 0)]) / det)
    }

    /// Squared quotient length of a coordinate velocity `v` at `p`.
    pub fn speed_sq(&self, p: Point2, v: Point2) -> Result<f64> {
        let q = self.at(p)?;
        let v = Vector2::from(v);
        Ok(v.dot(&(q * v)))
    }
}

/// Axis-aligned region of the `(ω, θ)` plane on which a frame is trusted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub omega: [f64; 2],
    pub theta: [f64; 2],
}

impl Rect {
    pub const UNBOUNDED: Rect = Rect {
        omega: [f64::NEG_INFINITY, f64::INFINITY],
        theta: [f64::NEG_INFINITY, f64::INFINITY],
    };

    pub fn contains(&self, omega: f64, theta: f64) -> bool {
        omega >= self.omega[0] && omega <= self.omega[1] && theta >= self.theta[0] && theta <= self.theta[1]
    }

    pub fn is_finite(&self) -> bool {
        self.omega.iter().chain(&self.theta).all(|v| v.is_finite())
    }
}

/// Orthogonal invariant coordinates `(ω, θ)` on the orbit space.
///
/// In these coordinates the quotient metric is
/// `dω²/‖∇ω‖² + dθ²/‖∇θ‖²`, which is all the profile ODE needs.
pub trait QuotientFrame: Send + Sync {
    fn label(&self) -> String;

    fn rect(&self) -> Rect;

    fn omega(&self, p: Point2) -> Result<f64>;

    fn theta(&self, p: Point2) -> Result<f64>;

    /// Rows are the coordinate gradients of ω and θ at `p`.
    fn jacobian(&self, p: Point2) -> Result<Matrix2<f64>>;

    /// `(ω, θ) ↦ (x1, x2)`.
    fn invert(&self, omega: f64, theta: f64) -> Result<Point2>;

    fn grad_omega_sq(&self, omega: f64, theta: f64) -> Result<f64>;

    fn grad_theta_sq(&self, omega: f64, theta: f64) -> Result<f64>;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeedGrid {
    pub x1: [f64; 2],
    pub x2: [f64; 2],
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 50 }
    }
}

/// Frame for an arbitrary chart and invariant θ; the inverse map is computed
/// by damped Newton iteration seeded from a precomputed grid.
#[derive(Clone)]
pub struct NumericFrame {
    chart: AdaptedChart3,
    theta: Arc<dyn InvariantFunction>,
    rect: Rect,
    seeds: Vec<(Point2, [f64; 2])>,
    newton: NewtonOptions,
}

/// Builds a [`NumericFrame`], checking on the seed grid that
/// `(x1, x2) ↦ (ω, θ)` has full rank wherever it lands in `rect`.
pub fn build_frame(
    chart: &AdaptedChart3,
    theta: Arc<dyn InvariantFunction>,
    rect: Rect,
    seeds: &SeedGrid,
) -> Result<NumericFrame> {
    if !rect.is_finite() {
        return Err(Error::Params("numeric frames need a finite (omega, theta) rectangle".into()));
    }
    if seeds.n < 2 {
        return Err(Error::Params("seed grid needs at least 2 points per axis".into()));
    }
    let mut kept = Vec::new();
    let omega = chart.volume();
    for i in 0..seeds.n {
        for j in 0..seeds.n {
            let p = [
                seeds.x1[0] + (seeds.x1[1] - seeds.x1[0]) * i as f64 / (seeds.n - 1) as f64,
                seeds.x2[0] + (seeds.x2[1] - seeds.x2[0]) * j as f64 / (seeds.n - 1) as f64,
            ];
            if !chart.contains(p) {
                continue;
            }
            let (Ok(w), Ok(t)) = (omega.value(p), theta.value(p)) else {
                continue;
            };
            if !rect.contains(w, t) {
                continue;
            }
            let (Ok(dw), Ok(dt)) = (chart.gradient(&omega, p), chart.gradient(theta.as_ref(), p)) else {
                continue;
            };
            let det = dw[0] * dt[1] - dw[1] * dt[0];
            let scale = (dw[0].hypot(dw[1]) * dt[0].hypot(dt[1])).max(f64::MIN_POSITIVE);
            if !(det.abs() > 1e-8 * scale) {
                return Err(Error::RankDeficiency { x1: p[0], x2: p[1], det });
            }
            kept.push((p, [w, t]));
        }
    }
    if kept.is_empty() {
        return Err(Error::EmptySeedGrid);
    }
    Ok(NumericFrame {
        chart: chart.clone(),
        theta,
        rect,
        seeds: kept,
        newton: NewtonOptions::default(),
    })
}

impl NumericFrame {
    pub fn with_newton(mut self, newton: NewtonOptions) -> Self {
        self.newton = newton;
        self
    }

    pub fn chart(&self) -> &AdaptedChart3 {
        &self.chart
    }

    pub fn seed_count(&self) -> usize {
        self.seeds.len()
    }

    fn nearest_seed(&self, omega: f64, theta: f64) -> Point2 {
        let sw = (self.rect.omega[1] - self.rect.omega[0]).max(f64::EPSILON);
        let st = (self.rect.theta[1] - self.rect.theta[0]).max(f64::EPSILON);
        self.seeds
            .iter()
            .min_by(|a, b| {
                let da = ((a.1[0] - omega) / sw).powi(2) + ((a.1[1] - theta) / st).powi(2);
                let db = ((b.1[0] - omega) / sw).powi(2) + ((b.1[1] - theta) / st).powi(2);
                da.total_cmp(&db)
            })
            .map(|s| s.0)
            .expect("seed grid is non-empty")
    }

    fn residual(&self, p: Point2, omega: f64, theta: f64) -> Result<Vector2<f64>> {
        Ok(Vector2::new(
            self.chart.volume_at(p)? - omega,
            self.theta.value(p)? - theta,
        ))
    }

    /// Newton inversion that also returns the residual (max-norm) after every
    /// iteration, starting with the seed's residual.
    pub fn invert_with_history(&self, omega: f64, theta: f64) -> Result<(Point2, Vec<f64>)> {
        let mut p = self.nearest_seed(omega, theta);
        let mut r = self.residual(p, omega, theta)?;
        let mut history = vec![r.amax()];
        for _ in 0..self.newton.max_iter {
            if r.amax() <= self.newton.tol {
                return Ok((p, history));
            }
            let j = self.jacobian(p)?;
            let Some(step) = j.lu().solve(&r) else {
                return Err(Error::RankDeficiency { x1: p[0], x2: p[1], det: j.determinant() });
            };
            let mut lambda = 1.0;
            let mut accepted = None;
            for _ in 0..30 {
                let q = [p[0] - lambda * step[0], p[1] - lambda * step[1]];
                if self.chart.contains(q) {
                    if let Ok(rq) = self.residual(q, omega, theta) {
                        if rq.amax() < r.amax() {
                            accepted = Some((q, rq));
                            break;
                        }
                    }
                }
                lambda *= 0.5;
            }
            match accepted {
                Some((q, rq)) => {
                    p = q;
                    r = rq;
                    history.push(r.amax());
                }
                None => break,
            }
        }
        if r.amax() <= self.newton.tol {
            return Ok((p, history));
        }
        Err(Error::NewtonDivergence { omega, theta, residual: r.amax() })
    }
}

impl QuotientFrame for NumericFrame {
    fn label(&self) -> String {
        format!("{} (numeric frame)", self.chart.label())
    }

    fn rect(&self) -> Rect {
        self.rect
    }

    fn omega(&self, p: Point2) -> Result<f64> {
        self.chart.volume_at(p)
    }

    fn theta(&self, p: Point2) -> Result<f64> {
        self.theta.value(p)
    }

    fn jacobian(&self, p: Point2) -> Result<Matrix2<f64>> {
        let dw = self.chart.volume_gradient_at(p)?;
        let dt = self.chart.gradient(self.theta.as_ref(), p)?;
        Ok(Matrix2::new(dw[0], dw[1], dt[0], dt[1]))
    }

    fn invert(&self, omega: f64, theta: f64) -> Result<Point2> {
        self.invert_with_history(omega, theta).map(|(p, _)| p)
    }

    fn grad_omega_sq(&self, omega: f64, theta: f64) -> Result<f64> {
        let p = self.invert(omega, theta)?;
        let dw = self.chart.volume_gradient_at(p)?;
        self.chart.pair_gradients(dw, dw, p)
    }

    fn grad_theta_sq(&self, omega: f64, theta: f64) -> Result<f64> {
        let p = self.invert(omega, theta)?;
        let dt = self.chart.gradient(self.theta.as_ref(), p)?;
        self.chart.pair_gradients(dt, dt, p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameGridPoint {
    pub omega: f64,
    pub theta: f64,
    pub x1: f64,
    pub x2: f64,
}

/// Samples the inverse map on an `n_omega x n_theta` grid of the frame's
/// rectangle; points that fail to invert are skipped.
pub fn frame_grid_dump(frame: &dyn QuotientFrame, n_omega: usize, n_theta: usize) -> Result<Vec<FrameGridPoint>> {
    let rect = frame.rect();
    if !rect.is_finite() || n_omega < 2 || n_theta < 2 {
        return Err(Error::Params("grid dump needs a finite rectangle and at least 2x2 points".into()));
    }
    let mut out = Vec::with_capacity(n_omega * n_theta);
    for i in 0..n_omega {
        let omega = rect.omega[0] + (rect.omega[1] - rect.omega[0]) * i as f64 / (n_omega - 1) as f64;
        for j in 0..n_theta {
            let theta = rect.theta[0] + (rect.theta[1] - rect.theta[0]) * j as f64 / (n_theta - 1) as f64;
            if let Ok([x1, x2]) = frame.invert(omega, theta) {
                out.push(FrameGridPoint { omega, theta, x1, x2 });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::MetricCoefficients;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn helicoidal(a: f64) -> AdaptedChart3 {
        AdaptedChart3::new(
            "test helicoidal",
            move |x1, x2| MetricCoefficients {
                g11: 1.0,
                g12: 0.0,
                g13: x2,
                g22: 1.0,
                g23: -x1,
                g33: x1 * x1 + x2 * x2 + a * a,
            },
            |x1, _| x1 > 0.0,
        )
    }

    fn slope_frame(a: f64) -> NumericFrame {
        build_frame(
            &helicoidal(a),
            Arc::new(|x1: f64, x2: f64| x2 / x1),
            Rect { omega: [1.05, 3.0], theta: [-2.0, 2.0] },
            &SeedGrid { x1: [0.05, 3.0], x2: [-3.0, 3.0], n: 40 },
        )
        .unwrap()
    }

    #[test]
    fn quotient_metric_examples() {
        let q = quotient_metric(&helicoidal(1.0));
        let m = q.at([1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(m[(0, 0)], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(m[(0, 1)], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(m[(1, 1)], 0.5, epsilon = 1e-14);
        let axis = quotient_metric(&AdaptedChart3::new(
            "helicoidal with axis",
            |x1, x2| MetricCoefficients { g11: 1.0, g12: 0.0, g13: x2, g22: 1.0, g23: -x1, g33: x1 * x1 + x2 * x2 + 1.0 },
            |_, _| true,
        ));
        let m0 = axis.at([0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(m0, Matrix2::identity(), epsilon = 1e-15);
    }

    #[test]
    fn quotient_metric_matches_three_routes() {
        // route 1: formula in terms of the inverse block; route 2: plain 2x2
        // inverse of the block; route 3: closed form printed for the
        // helicoidal chart, ((x1²+a²)dx1² + 2x1x2 dx1dx2 + (x2²+a²)dx2²)/(r²+a²).
        let a = 0.7;
        let chart = helicoidal(a);
        let q = quotient_metric(&chart);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let p = [rng.gen_range(0.1..3.0), rng.gen_range(-3.0..3.0)];
            let via_formula = q.at(p).unwrap();
            let via_inverse = chart.invariant_block(p).unwrap().try_inverse().unwrap();
            let w2 = p[0] * p[0] + p[1] * p[1] + a * a;
            let printed = Matrix2::new(p[0] * p[0] + a * a, p[0] * p[1], p[0] * p[1], p[1] * p[1] + a * a) / w2;
            assert_abs_diff_eq!(via_formula, via_inverse, epsilon = 1e-10);
            assert_abs_diff_eq!(via_formula, printed, epsilon = 1e-10);
        }
    }

    #[test]
    fn newton_frame_inverts_helicoidal_example() {
        let frame = slope_frame(1.0);
        let p = frame.invert(2f64.sqrt(), 0.0).unwrap();
        assert_abs_diff_eq!(p[0], 1.0, epsilon = 1e-11);
        assert_abs_diff_eq!(p[1], 0.0, epsilon = 1e-11);
        assert_abs_diff_eq!(frame.grad_omega_sq(2f64.sqrt(), 0.0).unwrap(), 0.5, epsilon = 1e-8);
        assert_abs_diff_eq!(frame.grad_theta_sq(2f64.sqrt(), 0.0).unwrap(), 2.0, epsilon = 1e-7);
    }

    #[test]
    fn newton_frame_is_a_right_inverse_with_positive_gradients() {
        let frame = slope_frame(1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let w = rng.gen_range(1.1..2.9);
            let t = rng.gen_range(-1.9..1.9);
            let p = frame.invert(w, t).unwrap();
            assert_abs_diff_eq!(frame.omega(p).unwrap(), w, epsilon = 1e-10);
            assert_abs_diff_eq!(frame.theta(p).unwrap(), t, epsilon = 1e-10);
            assert!(frame.grad_omega_sq(w, t).unwrap() > 0.0);
            assert!(frame.grad_theta_sq(w, t).unwrap() > 0.0);
        }
    }

    #[test]
    fn newton_converges_quadratically() {
        let frame = slope_frame(1.0);
        let (_, history) = frame.invert_with_history(2.2, 0.77).unwrap();
        assert!(history.len() >= 3, "{history:?}");
        // once in the asymptotic regime, e_{k+1} <= C e_k^2
        let mut checked = 0;
        for w in history.windows(2) {
            if w[0] < 1e-2 && w[1] > 1e-14 {
                assert!(w[1] <= 10.0 * w[0] * w[0], "{history:?}");
                checked += 1;
            }
        }
        assert!(checked >= 1, "{history:?}");
    }

    #[test]
    fn rank_deficient_pair_is_rejected() {
        let chart = helicoidal(1.0);
        // θ = ω² is functionally dependent on ω
        let theta = Arc::new(|x1: f64, x2: f64| x1 * x1 + x2 * x2 + 1.0);
        let err = build_frame(
            &chart,
            theta,
            Rect { omega: [1.05, 3.0], theta: [-100.0, 100.0] },
            &SeedGrid { x1: [0.1, 2.0], x2: [-2.0, 2.0], n: 10 },
        )
        .err()
        .unwrap();
        assert!(matches!(err, Error::RankDeficiency { .. }), "{err}");
    }

    #[test]
    fn empty_seed_grid_is_rejected() {
        let err = build_frame(
            &helicoidal(1.0),
            Arc::new(|x1: f64, x2: f64| x2 / x1),
            Rect { omega: [10.0, 11.0], theta: [0.0, 1.0] },
            &SeedGrid { x1: [0.1, 1.0], x2: [-1.0, 1.0], n: 5 },
        )
        .err()
        .unwrap();
        assert_eq!(err, Error::EmptySeedGrid);
    }

    #[test]
    fn unreachable_target_reports_divergence() {
        let frame = slope_frame(1.0);
        // ω < a is not attained by the helicoidal volume function
        match frame.invert(0.5, 0.0) {
            Err(Error::NewtonDivergence { residual, .. }) => assert!(residual > 0.1),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn grid_dump_covers_rect() {
        let frame = slope_frame(1.0);
        let dump = frame_grid_dump(&frame, 4, 5).unwrap();
        assert_eq!(dump.len(), 20);
        let json = serde_json::to_string(&dump).unwrap();
        assert!(json.contains("\"omega\""));
    }
}
