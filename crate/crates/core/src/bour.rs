//! Bour families: the profile ODE in an orthogonal frame, the vertical
//! quadrature and the member map `ψ_m(s, t) = (x1(s), x2(s), t/m + V(s))`.
//!
//! With `ω(γ̃(s)) = mU(s)` and `γ̃` unit speed for the quotient metric
//! `dω²/‖∇ω‖² + dθ²/‖∇θ‖²`, θ solves
//! `θ' = ε ‖∇θ‖ √(‖∇ω‖² − m²U'²) / ‖∇ω‖`.
//!
//! Only `m > 0` is used: ω and U are both positive, so the sign in
//! `ω = ±mU` is forced.

use serde::{Deserialize, Serialize};

use crate::chart::{AdaptedChart3, Point2, Point3};
use crate::error::{Error, Result};
use crate::fd::sample_derivatives;
use crate::interp::CubicHermite;
use crate::natural::LiftedCurve;
use crate::quadrature::cumulative_simpson;
use crate::quotient::{quotient_metric, QuotientFrame};
use crate::surface::ParametrizedSurface;

/// Branch `ε = ±1` of the profile ODE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }
}

impl TryFrom<i8> for Branch {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Branch::Plus),
            -1 => Ok(Branch::Minus),
            other => Err(format!("epsilon must be 1 or -1, got {other}")),
        }
    }
}

impl From<Branch> for i8 {
    fn from(b: Branch) -> i8 {
        match b {
            Branch::Plus => 1,
            Branch::Minus => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    Euler,
    #[default]
    Rk4,
}

pub const DEFAULT_STEP: f64 = 0.005;

/// Radicands within this distance of zero are treated as zero.
pub const RADICAND_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BourParams {
    pub m: f64,
    pub epsilon: Branch,
    pub s_range: [f64; 2],
    pub step: f64,
    pub integrator: Integrator,
}

impl BourParams {
    pub fn new(m: f64, epsilon: Branch, s_range: [f64; 2]) -> Result<Self> {
        let p = Self { m, epsilon, s_range, step: DEFAULT_STEP, integrator: Integrator::Rk4 };
        p.validate()?;
        Ok(p)
    }

    pub fn with_step(mut self, step: f64) -> Result<Self> {
        self.step = step;
        self.validate()?;
        Ok(self)
    }

    pub fn with_integrator(mut self, integrator: Integrator) -> Self {
        self.integrator = integrator;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m > 0.0 && self.m.is_finite()) {
            return Err(Error::Params(format!("m must be positive, got {}", self.m)));
        }
        let [lo, hi] = self.s_range;
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::Params(format!("invalid s range [{lo}, {hi}]")));
        }
        if !(self.step > 0.0 && self.step <= (hi - lo) / 10.0) {
            return Err(Error::Params(format!(
                "step must be positive and at most a tenth of the s range, got {}",
                self.step
            )));
        }
        Ok(())
    }

    /// Uniform grid over `s_range` with spacing at most `step` (the step is
    /// shortened when it does not divide the range).
    pub fn grid(&self) -> Vec<f64> {
        let [lo, hi] = self.s_range;
        let len = hi - lo;
        let ratio = len / self.step;
        let n = if (ratio - ratio.round()).abs() < 1e-9 * ratio { ratio.round() } else { ratio.ceil() } as usize;
        (0..=n).map(|k| if k == n { hi } else { lo + len * k as f64 / n as f64 }).collect()
    }
}

/// `θ'(s)` of the profile ODE.
pub fn ode_rhs(
    s: f64,
    theta: f64,
    u: &crate::natural::Generatrix,
    params: &BourParams,
    frame: &dyn QuotientFrame,
) -> Result<f64> {
    let (uu, du) = u.eval(s)?;
    let omega = params.m * uu;
    if !frame.rect().contains(omega, theta) {
        return Err(Error::RectExit { s, omega, theta });
    }
    let gw = frame.grad_omega_sq(omega, theta)?;
    let gt = frame.grad_theta_sq(omega, theta)?;
    let mut radicand = gw - (params.m * du).powi(2);
    if radicand.abs() < RADICAND_CLAMP {
        radicand = 0.0;
    }
    if radicand < 0.0 {
        return Err(Error::RadicandNegative { s, radicand });
    }
    Ok(params.epsilon.sign() * (gt * radicand / gw).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub s: f64,
    pub x1: f64,
    pub x2: f64,
    pub omega: f64,
    pub theta: Option<f64>,
    pub dx1: f64,
    pub dx2: f64,
}

/// Arc-length samples of the profile curve in the orbit space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileCurve {
    pub frame: String,
    pub samples: Vec<ProfileSample>,
}

impl ProfileCurve {
    pub fn s_values(&self) -> Vec<f64> {
        self.samples.iter().map(|p| p.s).collect()
    }

    pub fn points(&self) -> Vec<Point2> {
        self.samples.iter().map(|p| [p.x1, p.x2]).collect()
    }

    /// `max |‖γ̃'‖² − 1|` over interior samples, with `γ̃'` from five-point
    /// differences of the samples.
    pub fn unit_speed_residual(&self, chart: &AdaptedChart3) -> Result<f64> {
        let s = self.s_values();
        let d1 = sample_derivatives(&s, &self.samples.iter().map(|p| p.x1).collect::<Vec<_>>());
        let d2 = sample_derivatives(&s, &self.samples.iter().map(|p| p.x2).collect::<Vec<_>>());
        let q = quotient_metric(chart);
        let mut worst: f64 = 0.0;
        for k in 1..self.samples.len().saturating_sub(1) {
            let p = &self.samples[k];
            worst = worst.max((q.speed_sq([p.x1, p.x2], [d1[k], d2[k]])? - 1.0).abs());
        }
        Ok(worst)
    }
}

/// Integrates θ from `theta0` on the grid of `params` and maps every sample
/// through the frame. `ω(s) = mU(s)` holds by construction.
pub fn integrate_profile(
    u: &crate::natural::Generatrix,
    params: &BourParams,
    frame: &dyn QuotientFrame,
    theta0: f64,
) -> Result<ProfileCurve> {
    params.validate()?;
    let s = params.grid();
    let n = s.len();
    let mut theta = vec![theta0; n];
    let mut slope = vec![0.0; n];
    let stage = |si: f64, th: f64| match ode_rhs(si, th, u, params, frame) {
        Err(Error::RectExit { s, .. }) => Err(Error::StepTooLarge { s }),
        other => other,
    };
    for k in 0..n - 1 {
        let h = s[k + 1] - s[k];
        let k1 = ode_rhs(s[k], theta[k], u, params, frame)?;
        slope[k] = k1;
        theta[k + 1] = match params.integrator {
            Integrator::Euler => theta[k] + h * k1,
            Integrator::Rk4 => {
                let mid = s[k] + 0.5 * h;
                let k2 = stage(mid, theta[k] + 0.5 * h * k1)?;
                let k3 = stage(mid, theta[k] + 0.5 * h * k2)?;
                let k4 = stage(s[k + 1], theta[k] + h * k3)?;
                theta[k] + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            }
        };
    }
    slope[n - 1] = ode_rhs(s[n - 1], theta[n - 1], u, params, frame)?;

    let mut samples = Vec::with_capacity(n);
    for k in 0..n {
        let (uu, du) = u.eval(s[k])?;
        let omega = params.m * uu;
        let [x1, x2] = frame.invert(omega, theta[k])?;
        let j = frame.jacobian([x1, x2])?;
        let rhs = nalgebra::Vector2::new(params.m * du, slope[k]);
        let d = j.lu().solve(&rhs).ok_or(Error::RankDeficiency { x1, x2, det: j.determinant() })?;
        samples.push(ProfileSample { s: s[k], x1, x2, omega, theta: Some(theta[k]), dx1: d[0], dx2: d[1] });
    }
    Ok(ProfileCurve { frame: frame.label(), samples })
}

/// Samples of `V(s)` and `V'(s)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerticalShift {
    pub s: Vec<f64>,
    pub v: Vec<f64>,
    pub dv: Vec<f64>,
}

/// `V(s) = −Σ_{i=1,2} ∫ xi' g_i3 / (m²U²) ds`, `V(s_min) = 0`.
pub fn vertical_quadrature(
    profile: &ProfileCurve,
    chart: &AdaptedChart3,
    params: &BourParams,
    u: &crate::natural::Generatrix,
) -> Result<VerticalShift> {
    let s = profile.s_values();
    let mut dv = Vec::with_capacity(s.len());
    for p in &profile.samples {
        let c = chart.coefficients_at([p.x1, p.x2])?;
        let mu = params.m * u.value(p.s)?;
        dv.push(-(p.dx1 * c.g13 + p.dx2 * c.g23) / (mu * mu));
    }
    let v = cumulative_simpson(&s, &dv)?;
    Ok(VerticalShift { s, v, dv })
}

/// One member `ψ_m` of a Bour family.
#[derive(Debug, Clone)]
pub struct SurfaceMember {
    pub m: f64,
    pub epsilon: Branch,
    pub chart_label: String,
    pub profile: ProfileCurve,
    pub shift: VerticalShift,
    x1: CubicHermite,
    x2: CubicHermite,
    v: CubicHermite,
}

pub fn assemble_member(
    profile: ProfileCurve,
    shift: VerticalShift,
    params: &BourParams,
    chart_label: &str,
) -> Result<SurfaceMember> {
    let s = profile.s_values();
    if s != shift.s {
        return Err(Error::GridMismatch("profile and vertical shift use different s samples".into()));
    }
    let col = |f: fn(&ProfileSample) -> f64| profile.samples.iter().map(f).collect::<Vec<_>>();
    let x1 = CubicHermite::new(s.clone(), col(|p| p.x1), col(|p| p.dx1))?;
    let x2 = CubicHermite::new(s.clone(), col(|p| p.x2), col(|p| p.dx2))?;
    let v = CubicHermite::new(s, shift.v.clone(), shift.dv.clone())?;
    Ok(SurfaceMember {
        m: params.m,
        epsilon: params.epsilon,
        chart_label: chart_label.to_string(),
        profile,
        shift,
        x1,
        x2,
        v,
    })
}

/// Integrates, shifts and assembles one member.
pub fn generate_member(
    chart: &AdaptedChart3,
    frame: &dyn QuotientFrame,
    u: &crate::natural::Generatrix,
    params: &BourParams,
    theta0: f64,
) -> Result<SurfaceMember> {
    let profile = integrate_profile(u, params, frame, theta0)?;
    let shift = vertical_quadrature(&profile, chart, params, u)?;
    assemble_member(profile, shift, params, chart.label())
}

impl SurfaceMember {
    /// `(x1(s), x2(s), V(s))` with derivatives, interpolated.
    pub fn profile_at(&self, s: f64) -> Option<[(f64, f64); 3]> {
        Some([self.x1.eval(s)?, self.x2.eval(s)?, self.v.eval(s)?])
    }

    pub fn s_values(&self) -> &[f64] {
        &self.shift.s
    }
}

impl ParametrizedSurface for SurfaceMember {
    fn point(&self, s: f64, t: f64) -> Result<Point3> {
        let [(x1, _), (x2, _), (v, _)] = self.profile_at(s).ok_or(Error::Range { s, t, h: 0.0 })?;
        Ok([x1, x2, t / self.m + v])
    }

    fn s_range(&self) -> [f64; 2] {
        let s = self.s_values();
        [s[0], s[s.len() - 1]]
    }
}

/// Relative variation below which ω counts as constant.
pub const CONSTANT_VOLUME_TOL: f64 = 1e-10;

/// The single member over a unit-speed profile when `ω ≡ 1`: the metric is
/// `ds² + dt²` and the third coordinate is `t − Σ ∫ xi' g_i3 ds`.
pub fn constant_volume_member(chart: &AdaptedChart3, curve: &LiftedCurve) -> Result<SurfaceMember> {
    let pts = curve.points();
    let omegas = pts.iter().map(|p| chart.volume_at([p[0], p[1]])).collect::<Result<Vec<_>>>()?;
    let (lo, hi) = omegas.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), w| (l.min(*w), h.max(*w)));
    let mean = omegas.iter().sum::<f64>() / omegas.len() as f64;
    let variation = (hi - lo) / mean;
    if !(variation < CONSTANT_VOLUME_TOL) {
        return Err(Error::NonConstantVolume { variation });
    }
    if (mean - 1.0).abs() > CONSTANT_VOLUME_TOL {
        return Err(Error::Params(format!(
            "volume function is constant but equal to {mean}; rescale the Killing field to unit length first"
        )));
    }
    let d = curve.derivatives();
    let s = curve.params().to_vec();
    let samples = pts
        .iter()
        .zip(&d)
        .zip(&s)
        .zip(&omegas)
        .map(|(((p, dp), &s), &omega)| ProfileSample { s, x1: p[0], x2: p[1], omega, theta: None, dx1: dp[0], dx2: dp[1] })
        .collect();
    let profile = ProfileCurve { frame: "constant volume".into(), samples };
    let unit = BourParams {
        m: 1.0,
        epsilon: Branch::Plus,
        s_range: [s[0], s[s.len() - 1]],
        step: s[1] - s[0],
        integrator: Integrator::Rk4,
    };
    let u = crate::natural::Generatrix::from_table_with_slopes(vec![s[0], s[s.len() - 1]], vec![1.0; 2], vec![0.0; 2])?;
    let shift = vertical_quadrature(&profile, chart, &unit, &u)?;
    assemble_member(profile, shift, &unit, chart.label())
}

/// The chart for the Killing field `X/ω0` when ω is the constant `ω0` near
/// `sample`: `x3` is rescaled by `ω0`.
pub fn rescale_killing_field(chart: &AdaptedChart3, sample: Point2) -> Result<AdaptedChart3> {
    let w0 = chart.volume_at(sample)?;
    let inner = chart.clone();
    let domain = chart.clone();
    Ok(AdaptedChart3::new(
        format!("{} (Killing field / {w0})", chart.label()),
        move |x1, x2| {
            let mut c = inner.coefficients_at([x1, x2]).expect("domain checked by the rescaled chart");
            c.g13 /= w0;
            c.g23 /= w0;
            c.g33 /= w0 * w0;
            c
        },
        move |x1, x2| domain.contains([x1, x2]),
    ))
}
