//! Riemannian 3-metrics in coordinates adapted to a Killing field.
//!
//! In adapted coordinates `(x1, x2, x3)` the Killing field is `∂/∂x3`, so the
//! metric coefficients are functions of `(x1, x2)` only. [`AdaptedChart3`]
//! exposes no `x3` argument at all, which is how the Killing condition is
//! enforced. Functions invariant under the flow are likewise functions on the
//! `(x1, x2)` plane, and pairings `g(∇f, ∇h)` between them only involve the
//! upper 2x2 block of the inverse metric.

use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix2, Matrix3};

use crate::error::{Error, Result};
use crate::fd::relative_step;

pub type Point2 = [f64; 2];
pub type Point3 = [f64; 3];

/// The six independent coefficients of a symmetric 3x3 metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricCoefficients {
    pub g11: f64,
    pub g12: f64,
    pub g13: f64,
    pub g22: f64,
    pub g23: f64,
    pub g33: f64,
}

impl MetricCoefficients {
    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::new(
            self.g11, self.g12, self.g13, //
            self.g12, self.g22, self.g23, //
            self.g13, self.g23, self.g33,
        )
    }

    pub fn leading_minors(&self) -> [f64; 3] {
        [
            self.g11,
            self.g11 * self.g22 - self.g12 * self.g12,
            self.matrix().determinant(),
        ]
    }

    /// `g(v, w)` for coordinate vectors.
    pub fn inner(&self, v: Point3, w: Point3) -> f64 {
        let m = self.matrix();
        let (v, w) = (nalgebra::Vector3::from(v), nalgebra::Vector3::from(w));
        v.dot(&(m * w))
    }
}

pub type CoefficientFn = Arc<dyn Fn(f64, f64) -> MetricCoefficients + Send + Sync>;
pub type DomainFn = Arc<dyn Fn(f64, f64) -> bool + Send + Sync>;
pub type GradientFn = Arc<dyn Fn(f64, f64) -> Point2 + Send + Sync>;

/// A scalar function on the orbit space, i.e. a function of `(x1, x2)`.
pub trait InvariantFunction: Send + Sync {
    fn value(&self, p: Point2) -> Result<f64>;

    /// Analytic gradient `(∂1 f, ∂2 f)` when available.
    fn gradient(&self, _p: Point2) -> Option<Result<Point2>> {
        None
    }
}

impl<F> InvariantFunction for F
where
    F: Fn(f64, f64) -> f64 + Send + Sync,
{
    fn value(&self, p: Point2) -> Result<f64> {
        Ok(self(p[0], p[1]))
    }
}

/// Ambient metric in Killing-adapted coordinates.
#[derive(Clone)]
pub struct AdaptedChart3 {
    label: String,
    coefficients: CoefficientFn,
    domain: DomainFn,
    volume_gradient: Option<GradientFn>,
    fd_step: f64,
}

impl fmt::Debug for AdaptedChart3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AdaptedChart3")
            .field("label", &self.label)
            .field("fd_step", &self.fd_step)
            .finish_non_exhaustive()
    }
}

pub const DEFAULT_FD_STEP: f64 = 1e-6;

impl AdaptedChart3 {
    pub fn new(
        label: impl Into<String>,
        coefficients: impl Fn(f64, f64) -> MetricCoefficients + Send + Sync + 'static,
        domain: impl Fn(f64, f64) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            coefficients: Arc::new(coefficients),
            domain: Arc::new(domain),
            volume_gradient: None,
            fd_step: DEFAULT_FD_STEP,
        }
    }

    /// Supplies `(∂1 ω, ∂2 ω)` analytically instead of by finite differences.
    pub fn with_volume_gradient(
        mut self,
        gradient: impl Fn(f64, f64) -> Point2 + Send + Sync + 'static,
    ) -> Self {
        self.volume_gradient = Some(Arc::new(gradient));
        self
    }

    /// Relative step for central differences (default 1e-6).
    pub fn with_fd_step(mut self, h: f64) -> Self {
        self.fd_step = h;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    pub fn contains(&self, p: Point2) -> bool {
        p[0].is_finite() && p[1].is_finite() && (self.domain)(p[0], p[1])
    }

    fn check(&self, p: Point2) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::Domain { x1: p[0], x2: p[1] })
        }
    }

    pub fn coefficients_at(&self, p: Point2) -> Result<MetricCoefficients> {
        self.check(p)?;
        Ok((self.coefficients)(p[0], p[1]))
    }

    pub fn metric_at(&self, p: Point2) -> Result<Matrix3<f64>> {
        Ok(self.coefficients_at(p)?.matrix())
    }

    pub fn inverse_metric_at(&self, p: Point2) -> Result<Matrix3<f64>> {
        let g = self.metric_at(p)?;
        let det = g.determinant();
        if !(det > 0.0) {
            return Err(Error::SingularMetric { x1: p[0], x2: p[1], det });
        }
        g.try_inverse()
            .ok_or(Error::SingularMetric { x1: p[0], x2: p[1], det })
    }

    /// Upper-left 2x2 block of the inverse metric: `g(∇xi, ∇xj)` for i, j = 1, 2.
    pub fn invariant_block(&self, p: Point2) -> Result<Matrix2<f64>> {
        let inv = self.inverse_metric_at(p)?;
        Ok(inv.fixed_view::<2, 2>(0, 0).into_owned())
    }

    /// `ω = ‖X‖ = √g33`.
    pub fn volume_at(&self, p: Point2) -> Result<f64> {
        let g33 = self.coefficients_at(p)?.g33;
        if !(g33 > 0.0) {
            return Err(Error::SingularMetric { x1: p[0], x2: p[1], det: g33 });
        }
        Ok(g33.sqrt())
    }

    /// The volume function as an [`InvariantFunction`].
    pub fn volume(&self) -> Volume<'_> {
        Volume(self)
    }

    /// `(∂1 ω, ∂2 ω)`, analytic when the chart provides it.
    pub fn volume_gradient_at(&self, p: Point2) -> Result<Point2> {
        match &self.volume_gradient {
            Some(grad) => {
                self.check(p)?;
                Ok(grad(p[0], p[1]))
            }
            None => self.fd_gradient(&|q: Point2| self.volume_at(q), p),
        }
    }

    /// Coordinate gradient of an invariant function.
    pub fn gradient(&self, f: &dyn InvariantFunction, p: Point2) -> Result<Point2> {
        match f.gradient(p) {
            Some(g) => g,
            None => self.fd_gradient(&|q| f.value(q), p),
        }
    }

    fn fd_gradient(&self, f: &dyn Fn(Point2) -> Result<f64>, p: Point2) -> Result<Point2> {
        let mut out = [0.0; 2];
        for i in 0..2 {
            let h = relative_step(self.fd_step, p[i]);
            let mut plus = p;
            let mut minus = p;
            plus[i] += h;
            minus[i] -= h;
            self.check(plus)?;
            self.check(minus)?;
            out[i] = (f(plus)? - f(minus)?) / (plus[i] - minus[i]);
        }
        Ok(out)
    }

    /// `g(∇f, ∇h)` for invariant functions: `Σ_{i,j≤2} g^{ij} ∂i f ∂j h`.
    pub fn invariant_pairing(
        &self,
        f: &dyn InvariantFunction,
        h: &dyn InvariantFunction,
        p: Point2,
    ) -> Result<f64> {
        let block = self.invariant_block(p)?;
        let df = nalgebra::Vector2::from(self.gradient(f, p)?);
        let dh = nalgebra::Vector2::from(self.gradient(h, p)?);
        Ok(df.dot(&(block * dh)))
    }

    /// `g(∇f, ∇h)` from known coordinate gradients.
    pub fn pair_gradients(&self, df: Point2, dh: Point2, p: Point2) -> Result<f64> {
        let block = self.invariant_block(p)?;
        Ok(nalgebra::Vector2::from(df).dot(&(block * nalgebra::Vector2::from(dh))))
    }

    /// Checks positive definiteness (all leading minors > 0) on a user grid.
    /// Points outside the domain are skipped.
    pub fn validate(&self, grid: &[Point2]) -> Result<usize> {
        let mut checked = 0;
        for &p in grid {
            if !self.contains(p) {
                continue;
            }
            let c = (self.coefficients)(p[0], p[1]);
            let minors = c.leading_minors();
            if minors.iter().any(|m| !(*m > 0.0)) {
                return Err(Error::SingularMetric { x1: p[0], x2: p[1], det: minors[2] });
            }
            checked += 1;
        }
        Ok(checked)
    }
}

/// ω viewed as an invariant function (carries the chart's analytic gradient).
#[derive(Clone, Copy)]
pub struct Volume<'a>(&'a AdaptedChart3);

impl InvariantFunction for Volume<'_> {
    fn value(&self, p: Point2) -> Result<f64> {
        self.0.volume_at(p)
    }

    fn gradient(&self, p: Point2) -> Option<Result<Point2>> {
        self.0.volume_gradient.as_ref()?;
        Some(self.0.volume_gradient_at(p))
    }
}

/// Flat metric `dx1² + dx2² + dx3²` with the translation field `∂/∂x3`.
pub fn flat_translation_chart() -> AdaptedChart3 {
    AdaptedChart3::new(
        "flat translation",
        |_, _| MetricCoefficients { g11: 1.0, g12: 0.0, g13: 0.0, g22: 1.0, g23: 0.0, g33: 1.0 },
        |_, _| true,
    )
    .with_volume_gradient(|_, _| [0.0, 0.0])
}
