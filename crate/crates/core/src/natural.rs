//! Natural parameters of invariant surfaces.
//!
//! An invariant surface `ψ(u, v) = φ_v(γ(u))` has first fundamental form
//! `E du² + 2F du dv + G dv²` with coefficients depending on `u` only. The
//! change `s = ∫ √(E − F²/G) du`, `t = v + ∫ F/G du` turns it into
//! `ds² + U(s)² dt²` with `U(s)² = G(u(s))`.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::chart::{AdaptedChart3, Point3};
use crate::error::{Error, Result};
use crate::expr::Expression;
use crate::fd::sample_derivatives;
use crate::interp::CubicHermite;
use crate::quadrature::cumulative_simpson;
use crate::surface::ParametrizedSurface;

/// Samples of a lift `γ(u) = (x1, x2, x3)` of a profile curve.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedCurve {
    u: Vec<f64>,
    x: Vec<Point3>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct CurveRow {
    u: f64,
    x1: f64,
    x2: f64,
    x3: f64,
}

impl LiftedCurve {
    pub fn new(u: Vec<f64>, x: Vec<Point3>) -> Result<Self> {
        if u.len() != x.len() {
            return Err(Error::GridMismatch("curve parameter and point columns differ in length".into()));
        }
        if u.len() < 4 {
            return Err(Error::GridMismatch(format!("a lifted curve needs at least 4 samples, got {}", u.len())));
        }
        if u.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::GridMismatch("curve samples must be strictly increasing in u".into()));
        }
        if x.iter().flatten().chain(&u).any(|v| !v.is_finite()) {
            return Err(Error::GridMismatch("curve contains non-finite values".into()));
        }
        Ok(Self { u, x })
    }

    /// Samples `f` on `u_grid`.
    pub fn sample(u_grid: &[f64], f: impl Fn(f64) -> Point3) -> Result<Self> {
        Self::new(u_grid.to_vec(), u_grid.iter().map(|&u| f(u)).collect())
    }

    /// Reads CSV with header `u,x1,x2,x3`.
    pub fn read_csv(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut u = Vec::new();
        let mut x = Vec::new();
        for row in rdr.deserialize::<CurveRow>() {
            let row = row?;
            u.push(row.u);
            x.push([row.x1, row.x2, row.x3]);
        }
        Self::new(u, x)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::read_csv(file)
    }

    pub fn write_csv(&self, writer: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for (u, x) in self.u.iter().zip(&self.x) {
            w.serialize(CurveRow { u: *u, x1: x[0], x2: x[1], x3: x[2] })?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn params(&self) -> &[f64] {
        &self.u
    }

    pub fn points(&self) -> &[Point3] {
        &self.x
    }

    /// `γ'(u)` at every sample, by five-point differences.
    pub fn derivatives(&self) -> Vec<Point3> {
        let cols: Vec<Vec<f64>> = (0..3)
            .map(|i| sample_derivatives(&self.u, &self.x.iter().map(|p| p[i]).collect::<Vec<_>>()))
            .collect();
        (0..self.u.len()).map(|k| [cols[0][k], cols[1][k], cols[2][k]]).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PullbackSample {
    pub u: f64,
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "G")]
    pub g: f64,
}

/// `E = g(γ', γ')`, `F = g(γ', X) = Σ γi' g_i3`, `G = g33` along the curve.
pub fn pullback_coefficients(chart: &AdaptedChart3, curve: &LiftedCurve) -> Result<Vec<PullbackSample>> {
    let d = curve.derivatives();
    curve
        .u
        .iter()
        .zip(&curve.x)
        .zip(&d)
        .map(|((&u, x), dx)| {
            let c = chart.coefficients_at([x[0], x[1]])?;
            Ok(PullbackSample {
                u,
                e: c.inner(*dx, *dx),
                f: dx[0] * c.g13 + dx[1] * c.g23 + dx[2] * c.g33,
                g: c.g33,
            })
        })
        .collect()
}

#[derive(Debug, Clone)]
enum Repr {
    Expression(Expression),
    /// Hermite interpolant of `U²`.
    Table { squared: CubicHermite, exact_slopes: bool },
}

/// The target metric `ds² + U(s)² dt²`, through `U`.
#[derive(Debug, Clone)]
pub struct Generatrix {
    repr: Repr,
    s_range: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratrixRecord {
    Expression { text: String, s_range: [f64; 2] },
    Table { s: Vec<f64>, u: Vec<f64>, du: Option<Vec<f64>> },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct GeneratrixRow {
    s: f64,
    #[serde(rename = "U")]
    u: f64,
}

const CHECK_POINTS: usize = 1000;

impl Generatrix {
    /// `U` given by an expression in `s`; checked positive and finite on a
    /// dense grid of `s_range`.
    pub fn from_expression(text: &str, s_range: [f64; 2]) -> Result<Self> {
        let expr = Expression::parse(text)?;
        if !(s_range[0].is_finite() && s_range[1].is_finite() && s_range[1] > s_range[0]) {
            return Err(Error::Generatrix(format!("invalid range [{}, {}]", s_range[0], s_range[1])));
        }
        let g = Self { repr: Repr::Expression(expr), s_range };
        for k in 0..=CHECK_POINTS {
            let s = s_range[0] + (s_range[1] - s_range[0]) * k as f64 / CHECK_POINTS as f64;
            g.eval(s)?;
        }
        Ok(g)
    }

    /// Tabulated `U` without derivatives: `U²` is interpolated by PCHIP, so
    /// `U'` (and every radicand that uses it) is only approximate.
    pub fn from_table(s: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        Self::check_table(&s, &u)?;
        let sq: Vec<f64> = u.iter().map(|v| v * v).collect();
        let squared = CubicHermite::pchip(s, sq)?;
        Ok(Self::table(squared, false))
    }

    /// Tabulated `U` and `U'`; Hermite interpolation of `U²` with the exact
    /// slopes `2UU'`.
    pub fn from_table_with_slopes(s: Vec<f64>, u: Vec<f64>, du: Vec<f64>) -> Result<Self> {
        Self::check_table(&s, &u)?;
        let sq: Vec<f64> = u.iter().map(|v| v * v).collect();
        let dsq: Vec<f64> = u.iter().zip(&du).map(|(v, d)| 2.0 * v * d).collect();
        let squared = CubicHermite::new(s, sq, dsq)?;
        Ok(Self::table(squared, true))
    }

    fn check_table(s: &[f64], u: &[f64]) -> Result<()> {
        if s.len() != u.len() || s.len() < 2 {
            return Err(Error::Generatrix("table needs matching s and U columns with at least 2 rows".into()));
        }
        if let Some((k, v)) = u.iter().enumerate().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::Generatrix(format!("U must be positive, got {v} at s = {}", s[k])));
        }
        Ok(())
    }

    fn table(squared: CubicHermite, exact_slopes: bool) -> Self {
        let (lo, hi) = squared.range();
        Self { repr: Repr::Table { squared, exact_slopes }, s_range: [lo, hi] }
    }

    pub fn from_record(record: &GeneratrixRecord) -> Result<Self> {
        match record {
            GeneratrixRecord::Expression { text, s_range } => Self::from_expression(text, *s_range),
            GeneratrixRecord::Table { s, u, du: Some(du) } => Self::from_table_with_slopes(s.clone(), u.clone(), du.clone()),
            GeneratrixRecord::Table { s, u, du: None } => Self::from_table(s.clone(), u.clone()),
        }
    }

    pub fn record(&self) -> GeneratrixRecord {
        match &self.repr {
            Repr::Expression(e) => GeneratrixRecord::Expression { text: e.text().to_string(), s_range: self.s_range },
            Repr::Table { squared, exact_slopes } => {
                let u: Vec<f64> = squared.values().iter().map(|v| v.sqrt()).collect();
                let du = exact_slopes
                    .then(|| squared.slopes().iter().zip(&u).map(|(d, v)| d / (2.0 * v)).collect());
                GeneratrixRecord::Table { s: squared.nodes().to_vec(), u, du }
            }
        }
    }

    /// Reads CSV with header `s,U`.
    pub fn read_csv(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let (mut s, mut u) = (Vec::new(), Vec::new());
        for row in rdr.deserialize::<GeneratrixRow>() {
            let row = row?;
            s.push(row.s);
            u.push(row.u);
        }
        Self::from_table(s, u)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::read_csv(file)
    }

    /// Writes `n + 1` equally spaced samples as CSV `s,U`.
    pub fn write_csv(&self, writer: impl Write, n: usize) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let [lo, hi] = self.s_range;
        for k in 0..=n.max(1) {
            let s = if k == n.max(1) { hi } else { lo + (hi - lo) * k as f64 / n.max(1) as f64 };
            w.serialize(GeneratrixRow { s, u: self.value(s)? })?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn s_range(&self) -> [f64; 2] {
        self.s_range
    }

    /// Whether `U'` is only approximate (table without slopes).
    pub fn approximate_derivative(&self) -> bool {
        matches!(self.repr, Repr::Table { exact_slopes: false, .. })
    }

    /// `(U(s), U'(s))`.
    pub fn eval(&self, s: f64) -> Result<(f64, f64)> {
        let (u, du) = match &self.repr {
            Repr::Expression(e) => e.eval_with_derivative(s),
            Repr::Table { squared, .. } => {
                let (g, dg) = squared
                    .eval(s)
                    .ok_or_else(|| Error::Generatrix(format!("s = {s} is outside the table range")))?;
                let u = g.sqrt();
                (u, dg / (2.0 * u))
            }
        };
        if !(u > 0.0 && u.is_finite() && du.is_finite()) {
            return Err(Error::Generatrix(format!("U must be positive and finite, got U({s}) = {u}, U' = {du}")));
        }
        Ok((u, du))
    }

    pub fn value(&self, s: f64) -> Result<f64> {
        self.eval(s).map(|(u, _)| u)
    }
}

/// Result of the parameter change to natural parameters.
#[derive(Debug, Clone)]
pub struct NaturalParameters {
    pub u: Vec<f64>,
    pub s: Vec<f64>,
    pub t_shift: Vec<f64>,
    u_of_s: CubicHermite,
    t_shift_of_u: CubicHermite,
    pub generatrix: Generatrix,
}

/// Lower bound for `E − F²/G`; below it the curve is treated as tangent to
/// the orbits.
pub const ORBIT_TANGENCY_EPS: f64 = 1e-10;

/// Natural parameters from pull-back coefficients.
///
/// `s(u)` starts at 0 at the first sample and `t_shift(u) = ∫ F/G du` likewise.
pub fn to_natural(coeffs: &[PullbackSample]) -> Result<NaturalParameters> {
    if coeffs.len() < 4 {
        return Err(Error::GridMismatch("natural parameters need at least 4 samples".into()));
    }
    let u: Vec<f64> = coeffs.iter().map(|c| c.u).collect();
    let mut speed = Vec::with_capacity(coeffs.len());
    let mut twist = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        if !(c.g > 0.0) {
            return Err(Error::DegenerateParametrization { u: c.u, value: c.g });
        }
        let q = c.e - c.f * c.f / c.g;
        if !(q > ORBIT_TANGENCY_EPS) {
            return Err(Error::DegenerateParametrization { u: c.u, value: q });
        }
        speed.push(q.sqrt());
        twist.push(c.f / c.g);
    }
    let s = cumulative_simpson(&u, &speed)?;
    let t_shift = cumulative_simpson(&u, &twist)?;
    let inv_speed: Vec<f64> = speed.iter().map(|v| 1.0 / v).collect();
    let u_of_s = CubicHermite::new(s.clone(), u.clone(), inv_speed)?.monotone();
    let t_shift_of_u = CubicHermite::new(u.clone(), t_shift.clone(), twist)?;

    let g: Vec<f64> = coeffs.iter().map(|c| c.g).collect();
    let dg_du = sample_derivatives(&u, &g);
    let big_u: Vec<f64> = g.iter().map(|v| v.sqrt()).collect();
    let du_ds: Vec<f64> = dg_du
        .iter()
        .zip(&speed)
        .zip(&big_u)
        .map(|((dg, sp), bu)| dg / sp / (2.0 * bu))
        .collect();
    let generatrix = Generatrix::from_table_with_slopes(s.clone(), big_u, du_ds)?;
    Ok(NaturalParameters { u, s, t_shift, u_of_s, t_shift_of_u, generatrix })
}

impl NaturalParameters {
    pub fn u_of_s(&self, s: f64) -> Option<f64> {
        self.u_of_s.value(s)
    }

    pub fn t_shift_at(&self, u: f64) -> Option<f64> {
        self.t_shift_of_u.value(u)
    }
}

/// `ψ(s, t) = φ_v(γ(u(s)))` with `v = t − t_shift(u(s))`.
#[derive(Debug, Clone)]
pub struct NaturalSurface {
    curve: [CubicHermite; 3],
    params: NaturalParameters,
}

impl NaturalSurface {
    pub fn new(curve: &LiftedCurve, params: NaturalParameters) -> Result<Self> {
        if curve.u != params.u {
            return Err(Error::GridMismatch("curve and natural parameters use different u samples".into()));
        }
        let d = curve.derivatives();
        let build = |i: usize| {
            CubicHermite::new(
                curve.u.clone(),
                curve.x.iter().map(|p| p[i]).collect(),
                d.iter().map(|p| p[i]).collect(),
            )
        };
        Ok(Self { curve: [build(0)?, build(1)?, build(2)?], params })
    }

    /// Convenience: pull back, change parameters and wrap.
    pub fn from_curve(chart: &AdaptedChart3, curve: &LiftedCurve) -> Result<Self> {
        let params = to_natural(&pullback_coefficients(chart, curve)?)?;
        Self::new(curve, params)
    }

    pub fn parameters(&self) -> &NaturalParameters {
        &self.params
    }

    pub fn generatrix(&self) -> &Generatrix {
        &self.params.generatrix
    }
}

impl ParametrizedSurface for NaturalSurface {
    fn point(&self, s: f64, t: f64) -> Result<Point3> {
        let range = Error::Range { s, t, h: 0.0 };
        let u = self.params.u_of_s(s).ok_or(range.clone())?;
        let shift = self.params.t_shift_at(u).ok_or(range.clone())?;
        let x = |i: usize| self.curve[i].value(u).ok_or(range.clone());
        Ok([x(0)?, x(1)?, x(2)? + t - shift])
    }

    fn s_range(&self) -> [f64; 2] {
        [self.params.s[0], *self.params.s.last().expect("non-empty")]
    }
}
