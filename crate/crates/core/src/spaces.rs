//! Built-in ambient spaces: Euclidean space with a helicoidal or rotational
//! Killing field, and the BCV spaces `g_{κ,τ}` with a helicoidal one. Each
//! comes with an analytic orthogonal frame `(ω, θ)` and, for the closed-form
//! families, explicit `ρ`, `λ` and vertical shift.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::bour::{BourParams, Branch, RADICAND_CLAMP};
use crate::chart::{AdaptedChart3, InvariantFunction, MetricCoefficients, Point2, Point3};
use crate::error::{Error, Result};
use crate::fd::sample_derivatives;
use crate::interp::CubicHermite;
use crate::natural::Generatrix;
use crate::quadrature::cumulative_simpson;
use crate::quotient::{QuotientFrame, Rect};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    EuclideanHelicoidal,
    EuclideanRotational,
    BcvHelicoidal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub kind: SpaceKind,
    #[serde(default)]
    pub a: f64,
    #[serde(default)]
    pub kappa: f64,
    #[serde(default)]
    pub tau: f64,
}

impl SpaceSpec {
    pub fn euclidean_helicoidal(a: f64) -> Self {
        Self { kind: SpaceKind::EuclideanHelicoidal, a, kappa: 0.0, tau: 0.0 }
    }

    pub fn euclidean_rotational() -> Self {
        Self { kind: SpaceKind::EuclideanRotational, a: 0.0, kappa: 0.0, tau: 0.0 }
    }

    pub fn bcv(kappa: f64, tau: f64, a: f64) -> Self {
        Self { kind: SpaceKind::BcvHelicoidal, a, kappa, tau }
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.a, self.kappa, self.tau].iter().all(|v| v.is_finite()) {
            return Err(Error::Spec("parameters must be finite".into()));
        }
        match self.kind {
            SpaceKind::EuclideanHelicoidal | SpaceKind::BcvHelicoidal if self.a == 0.0 => Err(Error::Spec(
                "helicoidal spaces need a nonzero pitch a (use euclidean_rotational for a = 0)".into(),
            )),
            SpaceKind::EuclideanRotational if self.a != 0.0 => {
                Err(Error::Spec("euclidean_rotational has no pitch; a must be 0".into()))
            }
            SpaceKind::EuclideanHelicoidal | SpaceKind::EuclideanRotational if self.kappa != 0.0 || self.tau != 0.0 => {
                Err(Error::Spec("kappa and tau only apply to bcv_helicoidal".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self.kind {
            SpaceKind::EuclideanHelicoidal => format!("euclidean helicoidal (a = {})", self.a),
            SpaceKind::EuclideanRotational => "euclidean rotational".into(),
            SpaceKind::BcvHelicoidal => {
                format!("bcv helicoidal (kappa = {}, tau = {}, a = {})", self.kappa, self.tau, self.a)
            }
        }
    }
}

/// Euclidean metric in helicoidal adapted coordinates
/// `x = x1 cos x3 + x2 sin x3`, `y = x2 cos x3 − x1 sin x3`, `z = a x3`.
fn euclidean_helicoidal_chart(a: f64) -> AdaptedChart3 {
    AdaptedChart3::new(
        format!("euclidean helicoidal (a = {a})"),
        move |x1, x2| MetricCoefficients {
            g11: 1.0,
            g12: 0.0,
            g13: x2,
            g22: 1.0,
            g23: -x1,
            g33: x1 * x1 + x2 * x2 + a * a,
        },
        |_, _| true,
    )
    .with_volume_gradient(move |x1, x2| {
        let w = (x1 * x1 + x2 * x2 + a * a).sqrt();
        [x1 / w, x2 / w]
    })
}

/// `(r, z, ϑ)`: `dr² + dz² + r² dϑ²` on `r > 0`.
fn euclidean_rotational_chart() -> AdaptedChart3 {
    AdaptedChart3::new(
        "euclidean rotational",
        |x1, _| MetricCoefficients { g11: 1.0, g12: 0.0, g13: 0.0, g22: 1.0, g23: 0.0, g33: x1 * x1 },
        |x1, _| x1 > 0.0,
    )
    .with_volume_gradient(|_, _| [1.0, 0.0])
}

struct Bcv {
    kappa: f64,
    tau: f64,
    a: f64,
}

impl Bcv {
    fn b(&self, r2: f64) -> f64 {
        1.0 + 0.25 * self.kappa * r2
    }

    fn c(&self, r2: f64) -> f64 {
        self.a * self.b(r2) - r2 * self.tau
    }

    fn coefficients(&self, x1: f64, x2: f64) -> MetricCoefficients {
        let r2 = x1 * x1 + x2 * x2;
        let b2 = self.b(r2).powi(2);
        let c = self.c(r2);
        let t2 = self.tau * self.tau;
        let mixed = (self.tau * c - 1.0) / b2;
        MetricCoefficients {
            g11: (1.0 + t2 * x2 * x2) / b2,
            g12: -x1 * x2 * t2 / b2,
            g13: mixed * x2,
            g22: (1.0 + t2 * x1 * x1) / b2,
            g23: -mixed * x1,
            g33: (c * c + r2) / b2,
        }
    }

    /// dω/d(r²).
    fn domega_dr2(&self, r2: f64) -> f64 {
        let b = self.b(r2);
        let c = self.c(r2);
        let n = (c * c + r2).sqrt();
        let dc = 0.25 * self.a * self.kappa - self.tau;
        ((2.0 * c * dc + 1.0) / (2.0 * n) * b - n * 0.25 * self.kappa) / (b * b)
    }

    fn delta(&self, omega: f64) -> f64 {
        (1.0 - 2.0 * self.a * self.tau).powi(2) + (4.0 * self.tau * self.tau - self.kappa) * (omega * omega - self.a * self.a)
    }

    /// `r² = 4(ω² − a²)/((1 + √Δ)² − 4τ²ω²)`.
    fn radius_sq(&self, omega: f64) -> Option<f64> {
        let delta = self.delta(omega);
        if !(delta >= 0.0) {
            return None;
        }
        let den = (1.0 + delta.sqrt()).powi(2) - 4.0 * self.tau * self.tau * omega * omega;
        let r2 = 4.0 * (omega * omega - self.a * self.a) / den;
        (den > 0.0 && r2 > 0.0 && self.b(r2) > 0.0).then_some(r2)
    }
}

/// BCV metric in helicoidal adapted coordinates
/// `r = √(x1² + x2²)`, `ϑ = x3 + arctan(x2/x1)`, `z = a x3`, on `B > 0`.
fn bcv_chart(kappa: f64, tau: f64, a: f64) -> AdaptedChart3 {
    let bcv = Arc::new(Bcv { kappa, tau, a });
    let (coef, dom, grad) = (bcv.clone(), bcv.clone(), bcv);
    AdaptedChart3::new(
        format!("bcv helicoidal (kappa = {kappa}, tau = {tau}, a = {a})"),
        move |x1, x2| coef.coefficients(x1, x2),
        move |x1, x2| dom.b(x1 * x1 + x2 * x2) > 0.0,
    )
    .with_volume_gradient(move |x1, x2| {
        let d = 2.0 * grad.domega_dr2(x1 * x1 + x2 * x2);
        [d * x1, d * x2]
    })
}

/// Adapted chart of a built-in space, with analytic `∇ω`.
pub fn make_chart(spec: &SpaceSpec) -> Result<AdaptedChart3> {
    spec.validate()?;
    Ok(match spec.kind {
        SpaceKind::EuclideanHelicoidal => euclidean_helicoidal_chart(spec.a),
        SpaceKind::EuclideanRotational => euclidean_rotational_chart(),
        SpaceKind::BcvHelicoidal => bcv_chart(spec.kappa, spec.tau, spec.a),
    })
}

/// Choice of orthogonal invariant θ for the helicoidal spaces. Both are
/// functions of the polar angle, so they have the same level sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gauge {
    /// `θ = x2/x1`, on the half plane `x1 > 0`.
    Slope,
    /// `θ = atan2(x2, x1)`; the inverse map is periodic in θ.
    #[default]
    Polar,
}

/// θ of a built-in frame as an invariant function with analytic gradient.
#[derive(Debug, Clone, Copy)]
pub struct AnalyticTheta {
    kind: SpaceKind,
    gauge: Gauge,
}

impl AnalyticTheta {
    fn eval(&self, p: Point2) -> Result<f64> {
        match (self.kind, self.gauge) {
            (SpaceKind::EuclideanRotational, _) => Ok(p[1]),
            (_, Gauge::Slope) if p[0] > 0.0 => Ok(p[1] / p[0]),
            (_, Gauge::Slope) => Err(Error::Domain { x1: p[0], x2: p[1] }),
            (_, Gauge::Polar) => Ok(p[1].atan2(p[0])),
        }
    }

    fn grad(&self, p: Point2) -> Result<Point2> {
        let [x1, x2] = p;
        match (self.kind, self.gauge) {
            (SpaceKind::EuclideanRotational, _) => Ok([0.0, 1.0]),
            (_, Gauge::Slope) if x1 > 0.0 => Ok([-x2 / (x1 * x1), 1.0 / x1]),
            (_, Gauge::Slope) => Err(Error::Domain { x1, x2 }),
            (_, Gauge::Polar) => {
                let r2 = x1 * x1 + x2 * x2;
                if r2 > 0.0 {
                    Ok([-x2 / r2, x1 / r2])
                } else {
                    Err(Error::Domain { x1, x2 })
                }
            }
        }
    }
}

impl InvariantFunction for AnalyticTheta {
    fn value(&self, p: Point2) -> Result<f64> {
        self.eval(p)
    }

    fn gradient(&self, p: Point2) -> Option<Result<Point2>> {
        Some(self.grad(p))
    }
}

/// Closed-form orthogonal frame of a built-in space.
#[derive(Debug, Clone)]
pub struct AnalyticFrame {
    spec: SpaceSpec,
    chart: AdaptedChart3,
    theta: AnalyticTheta,
    rect: Rect,
}

pub fn analytic_frame(spec: &SpaceSpec, gauge: Gauge) -> Result<AnalyticFrame> {
    let chart = make_chart(spec)?;
    let omega_lo = match spec.kind {
        SpaceKind::EuclideanHelicoidal => spec.a.abs(),
        _ => 0.0,
    };
    Ok(AnalyticFrame {
        spec: *spec,
        chart,
        theta: AnalyticTheta { kind: spec.kind, gauge },
        rect: Rect { omega: [omega_lo, f64::INFINITY], theta: [f64::NEG_INFINITY, f64::INFINITY] },
    })
}

impl AnalyticFrame {
    pub fn with_rect(mut self, rect: Rect) -> Self {
        self.rect = rect;
        self
    }

    pub fn spec(&self) -> &SpaceSpec {
        &self.spec
    }

    pub fn chart(&self) -> &AdaptedChart3 {
        &self.chart
    }

    pub fn gauge(&self) -> Gauge {
        self.theta.gauge
    }

    pub fn theta_function(&self) -> AnalyticTheta {
        self.theta
    }

    fn radius_sq(&self, omega: f64) -> Option<f64> {
        let a = self.spec.a;
        match self.spec.kind {
            SpaceKind::EuclideanHelicoidal => {
                let r2 = omega * omega - a * a;
                (r2 > 0.0).then_some(r2)
            }
            SpaceKind::EuclideanRotational => None,
            SpaceKind::BcvHelicoidal => Bcv { kappa: self.spec.kappa, tau: self.spec.tau, a }.radius_sq(omega),
        }
    }

    fn pair_at(&self, omega: f64, theta: f64, grads: impl Fn(Point2) -> Result<(Point2, Point2)>) -> Result<f64> {
        let p = self.invert(omega, theta)?;
        let (u, v) = grads(p)?;
        self.chart.pair_gradients(u, v, p)
    }
}

impl QuotientFrame for AnalyticFrame {
    fn label(&self) -> String {
        format!("{} ({:?} gauge)", self.spec.label(), self.theta.gauge).to_lowercase()
    }

    fn rect(&self) -> Rect {
        self.rect
    }

    fn omega(&self, p: Point2) -> Result<f64> {
        self.chart.volume_at(p)
    }

    fn theta(&self, p: Point2) -> Result<f64> {
        self.theta.eval(p)
    }

    fn jacobian(&self, p: Point2) -> Result<Matrix2<f64>> {
        let dw = self.chart.volume_gradient_at(p)?;
        let dt = self.theta.grad(p)?;
        Ok(Matrix2::new(dw[0], dw[1], dt[0], dt[1]))
    }

    fn invert(&self, omega: f64, theta: f64) -> Result<Point2> {
        let fail = Error::NotInvertible { omega, theta };
        if self.spec.kind == SpaceKind::EuclideanRotational {
            return if omega > 0.0 { Ok([omega, theta]) } else { Err(fail) };
        }
        let r2 = self.radius_sq(omega).ok_or(fail.clone())?;
        let r = r2.sqrt();
        let p = match self.theta.gauge {
            Gauge::Slope => {
                let x1 = r / (1.0 + theta * theta).sqrt();
                [x1, theta * x1]
            }
            Gauge::Polar => [r * theta.cos(), r * theta.sin()],
        };
        let back = self.chart.volume_at(p)?;
        if !((back - omega).abs() <= 1e-10 * omega.abs().max(1.0)) {
            return Err(fail);
        }
        Ok(p)
    }

    fn grad_omega_sq(&self, omega: f64, theta: f64) -> Result<f64> {
        match self.spec.kind {
            SpaceKind::EuclideanHelicoidal => {
                let a2 = self.spec.a * self.spec.a;
                if !(omega * omega > a2) {
                    return Err(Error::NotInvertible { omega, theta });
                }
                Ok((omega * omega - a2) / (omega * omega))
            }
            SpaceKind::EuclideanRotational => Ok(1.0),
            SpaceKind::BcvHelicoidal => self.pair_at(omega, theta, |p| {
                let g = self.chart.volume_gradient_at(p)?;
                Ok((g, g))
            }),
        }
    }

    fn grad_theta_sq(&self, omega: f64, theta: f64) -> Result<f64> {
        match self.spec.kind {
            SpaceKind::EuclideanHelicoidal => {
                let a2 = self.spec.a * self.spec.a;
                let w2 = omega * omega;
                if !(w2 > a2) {
                    return Err(Error::NotInvertible { omega, theta });
                }
                let base = w2 / (a2 * (w2 - a2));
                Ok(match self.theta.gauge {
                    Gauge::Slope => base * (1.0 + theta * theta).powi(2),
                    Gauge::Polar => base,
                })
            }
            SpaceKind::EuclideanRotational => Ok(1.0),
            SpaceKind::BcvHelicoidal => self.pair_at(omega, theta, |p| {
                let g = self.theta.grad(p)?;
                Ok((g, g))
            }),
        }
    }
}

/// Ambient coordinates: cartesian `(x, y, z)` for the Euclidean helicoidal
/// chart, cylindrical `(r, ϑ, z)` for the rotational and BCV charts.
pub fn to_ambient_coords(spec: &SpaceSpec, p: Point3) -> Point3 {
    let [x1, x2, x3] = p;
    match spec.kind {
        SpaceKind::EuclideanHelicoidal => {
            let (s, c) = x3.sin_cos();
            [x1 * c + x2 * s, x2 * c - x1 * s, spec.a * x3]
        }
        SpaceKind::EuclideanRotational => [x1, x3, x2],
        SpaceKind::BcvHelicoidal => [x1.hypot(x2), x3 + x2.atan2(x1), spec.a * x3],
    }
}

/// Cartesian coordinates for display; BCV points are drawn through their
/// cylindrical coordinates.
pub fn to_cartesian(spec: &SpaceSpec, p: Point3) -> Point3 {
    let q = to_ambient_coords(spec, p);
    match spec.kind {
        SpaceKind::EuclideanHelicoidal => q,
        SpaceKind::EuclideanRotational | SpaceKind::BcvHelicoidal => {
            let (s, c) = q[1].sin_cos();
            [q[0] * c, q[0] * s, q[2]]
        }
    }
}

/// Comparison quantities of a profile point against the closed forms:
/// `(ρ, angle)` where the angle plays the role of `λ`. For the helicoidal
/// spaces `λ = a φ` with `φ` the polar angle (callers unwrap it); for the
/// rotational chart `λ` is the height `x2`.
pub fn closed_form_coordinates(spec: &SpaceSpec, p: Point2) -> (f64, f64) {
    match spec.kind {
        SpaceKind::EuclideanRotational => (p[0], p[1]),
        _ => (p[0].hypot(p[1]), p[1].atan2(p[0])),
    }
}

/// Sign `σ` with `Vclosed = V + σ φ` (up to a constant) between the
/// closed-form shift and the generic vertical quadrature.
pub fn shift_sign(spec: &SpaceSpec) -> f64 {
    match spec.kind {
        SpaceKind::EuclideanHelicoidal => -1.0,
        SpaceKind::EuclideanRotational => 0.0,
        SpaceKind::BcvHelicoidal => 1.0,
    }
}

/// Adds multiples of 2π so consecutive angles differ by less than π.
pub fn unwrap_angles(angles: &mut [f64]) {
    for k in 1..angles.len() {
        let mut d = angles[k] - angles[k - 1];
        while d > PI {
            angles[k] -= 2.0 * PI;
            d -= 2.0 * PI;
        }
        while d < -PI {
            angles[k] += 2.0 * PI;
            d += 2.0 * PI;
        }
    }
}

/// Explicit Bour family of a built-in space on the grid of its parameters:
/// `ρ(s)`, `λ(s)` and the vertical shift `Vclosed(s)` with
/// `λ(s_min) = Vclosed(s_min) = 0`.
#[derive(Debug, Clone)]
pub struct ClosedFormFamily {
    pub space: SpaceSpec,
    pub m: f64,
    pub epsilon: Branch,
    pub s: Vec<f64>,
    pub rho: Vec<f64>,
    pub lambda: Vec<f64>,
    pub v: Vec<f64>,
    rho_h: CubicHermite,
    lambda_h: CubicHermite,
    v_h: CubicHermite,
}

impl ClosedFormFamily {
    fn assemble(
        space: SpaceSpec,
        params: &BourParams,
        s: Vec<f64>,
        rho: Vec<f64>,
        dlambda: Vec<f64>,
        dv: Vec<f64>,
    ) -> Result<Self> {
        let lambda = cumulative_simpson(&s, &dlambda)?;
        let v = cumulative_simpson(&s, &dv)?;
        let drho = sample_derivatives(&s, &rho);
        Ok(Self {
            space,
            m: params.m,
            epsilon: params.epsilon,
            rho_h: CubicHermite::new(s.clone(), rho.clone(), drho)?,
            lambda_h: CubicHermite::new(s.clone(), lambda.clone(), dlambda)?,
            v_h: CubicHermite::new(s.clone(), v.clone(), dv)?,
            s,
            rho,
            lambda,
            v,
        })
    }

    /// `(ρ, λ, Vclosed)` at `s`.
    pub fn eval(&self, s: f64) -> Result<(f64, f64, f64)> {
        let range = Error::Range { s, t: 0.0, h: 0.0 };
        Ok((
            self.rho_h.value(s).ok_or(range.clone())?,
            self.lambda_h.value(s).ok_or(range.clone())?,
            self.v_h.value(s).ok_or(range)?,
        ))
    }

    /// Cylindrical `(ρ, v, ±λ + a v)` with `v = t/m + Vclosed(s)`; the sign of
    /// `λ` is + for Euclidean space and − for BCV.
    pub fn surface_point(&self, s: f64, t: f64) -> Result<Point3> {
        let (rho, lambda, shift) = self.eval(s)?;
        let v = t / self.m + shift;
        let sign = if self.space.kind == SpaceKind::BcvHelicoidal { -1.0 } else { 1.0 };
        Ok([rho, v, sign * lambda + self.space.a * v])
    }
}

fn clamp_radicand(r: f64) -> f64 {
    if r.abs() < RADICAND_CLAMP {
        0.0
    } else {
        r
    }
}

/// Euclidean family:
/// `ρ = √(m²U² − a²)`,
/// `λ = ε∫ mU√(m²U²(1 − m²U'²) − a²)/(m²U² − a²) ds`,
/// `Vclosed = −ε∫ a√(…)/(mU(m²U² − a²)) ds`.
pub fn r3_closed_form(u: &Generatrix, params: &BourParams, a: f64) -> Result<ClosedFormFamily> {
    params.validate()?;
    let m = params.m;
    let eps = params.epsilon.sign();
    let s = params.grid();
    let (mut rho, mut dl, mut dv) = (Vec::new(), Vec::new(), Vec::new());
    for &si in &s {
        let (uu, du) = u.eval(si)?;
        let mu2 = (m * uu).powi(2);
        let base = mu2 - a * a;
        if !(base > 0.0) {
            return Err(Error::DomainViolation { s: si, which: "m^2 U^2 - a^2", value: base });
        }
        let rad = clamp_radicand(mu2 * (1.0 - (m * du).powi(2)) - a * a);
        if rad < 0.0 {
            return Err(Error::DomainViolation { s: si, which: "m^2 U^2 (1 - m^2 U'^2) - a^2", value: rad });
        }
        rho.push(base.sqrt());
        dl.push(eps * m * uu * rad.sqrt() / base);
        dv.push(-eps * a * rad.sqrt() / (m * uu * base));
    }
    let space = if a == 0.0 { SpaceSpec::euclidean_rotational() } else { SpaceSpec::euclidean_helicoidal(a) };
    ClosedFormFamily::assemble(space, params, s, rho, dl, dv)
}

/// BCV family, with `Δ = (1 − 2aτ)² + (4τ² − κ)(m²U² − a²)`,
/// `ρ = 2√((m²U² − a²)/((1 + √Δ)² − 4τ²m²U²))`,
/// `λ = ε∫ mU(4 + κρ²)/(4ρ²) √I ds`,
/// `Vclosed = −ε∫ ((4τ − aκ)ρ² − 4a)/(4mUρ²) √I ds`,
/// `I = ρ² − m⁴U²U'²(4 + κρ²)²/(16Δ)`.
pub fn bcv_closed_form(u: &Generatrix, params: &BourParams, kappa: f64, tau: f64, a: f64) -> Result<ClosedFormFamily> {
    params.validate()?;
    let m = params.m;
    let eps = params.epsilon.sign();
    let s = params.grid();
    let (mut rho, mut dl, mut dv) = (Vec::new(), Vec::new(), Vec::new());
    for &si in &s {
        let (uu, du) = u.eval(si)?;
        let mu2 = (m * uu).powi(2);
        let num = mu2 - a * a;
        if !(num > 0.0) {
            return Err(Error::DomainViolation { s: si, which: "m^2 U^2 - a^2", value: num });
        }
        let delta = (1.0 - 2.0 * a * tau).powi(2) + (4.0 * tau * tau - kappa) * num;
        if !(delta > 0.0) {
            return Err(Error::DomainViolation { s: si, which: "Delta", value: delta });
        }
        let den = (1.0 + delta.sqrt()).powi(2) - 4.0 * tau * tau * mu2;
        if !(den > 0.0) {
            return Err(Error::DomainViolation { s: si, which: "(1 + sqrt(Delta))^2 - 4 tau^2 m^2 U^2", value: den });
        }
        let r2 = 4.0 * num / den;
        let b = 1.0 + 0.25 * kappa * r2;
        if !(b > 0.0) {
            return Err(Error::DomainViolation { s: si, which: "B", value: b });
        }
        let k = 4.0 + kappa * r2;
        let inner = clamp_radicand(r2 - m.powi(4) * uu * uu * du * du * k * k / (16.0 * delta));
        if inner < 0.0 {
            return Err(Error::DomainViolation { s: si, which: "rho^2 - m^4 U^2 U'^2 (4 + kappa rho^2)^2 / (16 Delta)", value: inner });
        }
        rho.push(r2.sqrt());
        dl.push(eps * m * uu * k / (4.0 * r2) * inner.sqrt());
        dv.push(-eps * ((4.0 * tau - a * kappa) * r2 - 4.0 * a) / (4.0 * m * uu * r2) * inner.sqrt());
    }
    ClosedFormFamily::assemble(SpaceSpec::bcv(kappa, tau, a), params, s, rho, dl, dv)
}

/// Closed-form family of a built-in space.
pub fn closed_form(spec: &SpaceSpec, u: &Generatrix, params: &BourParams) -> Result<ClosedFormFamily> {
    spec.validate()?;
    match spec.kind {
        SpaceKind::EuclideanHelicoidal | SpaceKind::EuclideanRotational => r3_closed_form(u, params, spec.a),
        SpaceKind::BcvHelicoidal => bcv_closed_form(u, params, spec.kappa, spec.tau, spec.a),
    }
}
