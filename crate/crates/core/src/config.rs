//! JSON run configuration and the model (chart + frame) it describes.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bour::{BourParams, Branch, Integrator, DEFAULT_STEP};
use crate::chart::{AdaptedChart3, InvariantFunction, MetricCoefficients, Point2};
use crate::error::{Error, Result};
use crate::expr::Expression;
use crate::natural::Generatrix;
use crate::quotient::{build_frame, solve_orthogonal_invariant, QuotientFrame, Rect, SeedGrid, TraceOptions};
use crate::spaces::{analytic_frame, make_chart, Gauge, SpaceKind, SpaceSpec};
use crate::verify::{Grid, SampleRegion, DEFAULT_FD_STEP, DEFAULT_TOL};

/// Ambient space: a built-in kind or `custom` with metric expressions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceConfig {
    pub kind: SpaceConfigKind,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub a: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub kappa: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub tau: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom: Option<CustomSpace>,
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceConfigKind {
    EuclideanHelicoidal,
    EuclideanRotational,
    BcvHelicoidal,
    Custom,
}

/// Metric coefficients as expressions in `x1, x2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricExpressions {
    pub g11: String,
    #[serde(default = "zero_text")]
    pub g12: String,
    #[serde(default = "zero_text")]
    pub g13: String,
    pub g22: String,
    #[serde(default = "zero_text")]
    pub g23: String,
    pub g33: String,
}

fn zero_text() -> String {
    "0".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomSpace {
    pub metric: MetricExpressions,
    /// Coordinate box `x1 × x2` of the chart domain.
    pub domain: [[f64; 2]; 2],
    pub theta: ThetaConfig,
    /// Region of the `(ω, θ)` plane the frame is trusted on.
    pub rect: Rect,
    pub seeds: SeedGrid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ThetaConfig {
    /// θ given in closed form, in `x1, x2`.
    Expression(String),
    /// θ traced along characteristics from a Cauchy curve `(x1(σ), x2(σ))`.
    Cauchy(CauchyConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CauchyConfig {
    pub x1: String,
    pub x2: String,
    pub sigma_range: [f64; 2],
    #[serde(default = "default_cauchy_samples")]
    pub samples: usize,
    pub omega_range: [f64; 2],
    #[serde(default = "default_trace_steps")]
    pub steps: usize,
}

fn default_cauchy_samples() -> usize {
    201
}

fn default_trace_steps() -> usize {
    400
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratrixConfig {
    Expression(String),
    /// Path to a CSV `s,U`, relative to the config file.
    Csv(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_count")]
    pub s_count: usize,
    #[serde(default = "default_count")]
    pub t_count: usize,
    #[serde(default = "default_t_range")]
    pub t_range: [f64; 2],
}

fn default_count() -> usize {
    21
}

fn default_t_range() -> [f64; 2] {
    [0.0, 1.0]
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { s_count: default_count(), t_count: default_count(), t_range: default_t_range() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_tol")]
    pub isometry: f64,
    #[serde(default = "default_tol")]
    pub cross_check: f64,
    /// Defaults to 1e-8 for closed-form θ and 1e-6 for traced θ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orthogonality: Option<f64>,
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

fn default_fd_step() -> f64 {
    DEFAULT_FD_STEP
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            isometry: DEFAULT_TOL,
            cross_check: DEFAULT_TOL,
            orthogonality: None,
            fd_step: DEFAULT_FD_STEP,
        }
    }
}

fn default_epsilon() -> Branch {
    Branch::Plus
}

fn default_step() -> f64 {
    DEFAULT_STEP
}

fn default_seed() -> u64 {
    1
}

fn default_orth_samples() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub space: SpaceConfig,
    pub generatrix: GeneratrixConfig,
    /// Required for expressions; defaults to the table range for CSV.
    #[serde(default)]
    pub s_range: Option<[f64; 2]>,
    pub m: Vec<f64>,
    #[serde(default = "default_epsilon")]
    pub epsilon: Branch,
    #[serde(default)]
    pub theta0: f64,
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default)]
    pub integrator: Integrator,
    #[serde(default)]
    pub gauge: Gauge,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_orth_samples")]
    pub orthogonality_samples: usize,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

/// Configuration of the `natural` command: a lifted curve in a space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NaturalConfig {
    pub space: SpaceConfig,
    /// CSV `u,x1,x2,x3`, relative to the config file.
    pub curve: PathBuf,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn config_error(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| config_error(format!("{}: {e}", path.display())))
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.parent().unwrap_or(Path::new(".")).join(p)
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<()> {
        if self.s_count < 2 || self.t_count < 2 {
            return Err(config_error("grid counts must be at least 2"));
        }
        let [a, b] = self.t_range;
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(config_error("grid t_range must be an increasing finite interval"));
        }
        Ok(())
    }

    pub fn over(&self, s_range: [f64; 2]) -> Grid {
        Grid { s_range, t_range: self.t_range, s_count: self.s_count, t_count: self.t_count }
    }
}

impl Tolerances {
    pub fn orthogonality_for(&self, traced: bool) -> f64 {
        self.orthogonality.unwrap_or(if traced { 1e-6 } else { 1e-8 })
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("isometry", self.isometry),
            ("cross_check", self.cross_check),
            ("orthogonality", self.orthogonality.unwrap_or(1.0)),
            ("fd_step", self.fd_step),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(config_error(format!("tolerance {name} must be positive")));
            }
        }
        Ok(())
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| config_error(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads and validates a config file; relative paths inside it are
    /// resolved against its directory.
    pub fn from_path(path: &Path) -> Result<Self> {
        let mut cfg: Self = read_json(path)?;
        if let GeneratrixConfig::Csv(p) = &cfg.generatrix {
            cfg.generatrix = GeneratrixConfig::Csv(resolve(path, p));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m.is_empty() {
            return Err(config_error("m list is empty"));
        }
        for (k, m) in self.m.iter().enumerate() {
            if !(*m > 0.0 && m.is_finite()) {
                return Err(config_error("m must be positive"));
            }
            if self.m[..k].contains(m) {
                return Err(config_error(format!("m values must be distinct ({m} repeats)")));
            }
        }
        if let GeneratrixConfig::Expression(text) = &self.generatrix {
            Expression::parse(text)?;
            if self.s_range.is_none() {
                return Err(config_error("s_range is required for an expression generatrix"));
            }
        }
        if !self.theta0.is_finite() {
            return Err(config_error("theta0 must be finite"));
        }
        self.grid.validate()?;
        self.tolerances.validate()?;
        self.space.validate()
    }

    pub fn generatrix(&self) -> Result<Generatrix> {
        match &self.generatrix {
            GeneratrixConfig::Expression(text) => {
                Generatrix::from_expression(text, self.s_range.expect("validated"))
            }
            GeneratrixConfig::Csv(path) => Generatrix::from_path(path),
        }
    }

    pub fn s_range(&self, u: &Generatrix) -> [f64; 2] {
        self.s_range.unwrap_or(u.s_range())
    }

    pub fn params(&self, m: f64, s_range: [f64; 2]) -> Result<BourParams> {
        Ok(BourParams::new(m, self.epsilon, s_range)?.with_step(self.step)?.with_integrator(self.integrator))
    }
}

/// Names accepted by [`RunConfig::demo`].
pub const DEMOS: [&str; 3] = ["catenoid", "helicoid", "bcv"];

impl RunConfig {
    fn preset(space: SpaceSpec, u: &str, s_range: [f64; 2], theta0: f64) -> Self {
        Self {
            space: SpaceConfig::builtin(space),
            generatrix: GeneratrixConfig::Expression(u.into()),
            s_range: Some(s_range),
            m: vec![1.0],
            epsilon: Branch::Plus,
            theta0,
            step: DEFAULT_STEP,
            integrator: Integrator::Rk4,
            gauge: Gauge::Polar,
            grid: GridConfig { s_count: 41, t_count: 41, t_range: [0.0, 2.0 * std::f64::consts::PI] },
            tolerances: Tolerances::default(),
            seed: default_seed(),
            orthogonality_samples: default_orth_samples(),
            output: None,
        }
    }

    /// Built-in demos: the catenoid and the helicoid over `U = √(s² + 1)`,
    /// and a BCV member over `U = √(s² + 4)`.
    pub fn demo(name: &str) -> Result<Self> {
        match name {
            "catenoid" => Ok(Self::preset(SpaceSpec::euclidean_rotational(), "sqrt(s^2+1)", [-2.0, 2.0], (-2f64).asinh())),
            "helicoid" => Ok(Self::preset(SpaceSpec::euclidean_helicoidal(1.0), "sqrt(s^2+1)", [0.5, 2.0], 0.0)),
            "bcv" => Ok(Self::preset(SpaceSpec::bcv(1.0, 1.0, 1.0), "sqrt(s^2+4)", [0.0, 1.0], 0.0)),
            other => Err(config_error(format!("unknown demo `{other}` (expected one of {})", DEMOS.join(", ")))),
        }
    }
}

impl NaturalConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let mut cfg: Self = read_json(path)?;
        cfg.curve = resolve(path, &cfg.curve);
        cfg.grid.validate()?;
        cfg.tolerances.validate()?;
        cfg.space.validate()?;
        Ok(cfg)
    }
}

/// Orthogonal frame of a model; the analytic variant keeps its concrete type
/// for the closed forms.
#[derive(Clone)]
pub struct Model {
    pub spec: Option<SpaceSpec>,
    pub chart: AdaptedChart3,
    pub frame: Arc<dyn QuotientFrame>,
    pub theta: Arc<dyn InvariantFunction>,
    /// Region for seeded orthogonality samples.
    pub sample_region: SampleRegion,
    /// Whether θ was traced along characteristics.
    pub traced: bool,
}

impl std::fmt::Debug for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Model").field("spec", &self.spec).field("frame", &self.frame.label()).finish()
    }
}

/// Expression in `x1, x2` with forward-mode gradient.
#[derive(Debug, Clone)]
pub struct PlaneExpression(Expression);

impl PlaneExpression {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(Self(Expression::parse_with_vars(text, &["x1", "x2"])?))
    }

    pub fn eval(&self, p: Point2) -> f64 {
        self.0.eval(&p)
    }
}

impl InvariantFunction for PlaneExpression {
    fn value(&self, p: Point2) -> Result<f64> {
        let v = self.eval(p);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain { x1: p[0], x2: p[1] })
        }
    }

    fn gradient(&self, p: Point2) -> Option<Result<Point2>> {
        let (_, d1) = self.0.eval_dual(&p, 0);
        let (_, d2) = self.0.eval_dual(&p, 1);
        Some(if d1.is_finite() && d2.is_finite() { Ok([d1, d2]) } else { Err(Error::Domain { x1: p[0], x2: p[1] }) })
    }
}

impl SpaceConfig {
    pub fn builtin(spec: SpaceSpec) -> Self {
        let kind = match spec.kind {
            SpaceKind::EuclideanHelicoidal => SpaceConfigKind::EuclideanHelicoidal,
            SpaceKind::EuclideanRotational => SpaceConfigKind::EuclideanRotational,
            SpaceKind::BcvHelicoidal => SpaceConfigKind::BcvHelicoidal,
        };
        Self { kind, a: spec.a, kappa: spec.kappa, tau: spec.tau, custom: None }
    }

    pub fn spec(&self) -> Option<SpaceSpec> {
        let kind = match self.kind {
            SpaceConfigKind::EuclideanHelicoidal => SpaceKind::EuclideanHelicoidal,
            SpaceConfigKind::EuclideanRotational => SpaceKind::EuclideanRotational,
            SpaceConfigKind::BcvHelicoidal => SpaceKind::BcvHelicoidal,
            SpaceConfigKind::Custom => return None,
        };
        Some(SpaceSpec { kind, a: self.a, kappa: self.kappa, tau: self.tau })
    }

    pub fn validate(&self) -> Result<()> {
        match (self.spec(), &self.custom) {
            (Some(spec), None) => spec.validate(),
            (Some(_), Some(_)) => Err(config_error("only a custom space takes a `custom` block")),
            (None, None) => Err(config_error("a custom space needs a `custom` block")),
            (None, Some(c)) => {
                if self.a != 0.0 || self.kappa != 0.0 || self.tau != 0.0 {
                    return Err(config_error("a, kappa and tau do not apply to a custom space"));
                }
                let [x1, x2] = c.domain;
                if !(x1[0] < x1[1] && x2[0] < x2[1]) {
                    return Err(config_error("custom domain must be two increasing intervals"));
                }
                if !c.rect.is_finite() {
                    return Err(config_error("custom rect must be finite"));
                }
                for text in [&c.metric.g11, &c.metric.g12, &c.metric.g13, &c.metric.g22, &c.metric.g23, &c.metric.g33] {
                    PlaneExpression::parse(text)?;
                }
                match &c.theta {
                    ThetaConfig::Expression(t) => {
                        PlaneExpression::parse(t)?;
                    }
                    ThetaConfig::Cauchy(cc) => {
                        Expression::parse_with_vars(&cc.x1, &["sigma"])?;
                        Expression::parse_with_vars(&cc.x2, &["sigma"])?;
                        if cc.samples < 4 || cc.steps < 2 {
                            return Err(config_error("cauchy needs at least 4 samples and 2 steps"));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// The chart alone, without building a frame.
    pub fn chart(&self) -> Result<AdaptedChart3> {
        self.validate()?;
        match (self.spec(), &self.custom) {
            (Some(spec), _) => make_chart(&spec),
            (None, Some(c)) => custom_chart(c),
            (None, None) => unreachable!("validated"),
        }
    }

    pub fn model(&self, gauge: Gauge) -> Result<Model> {
        self.validate()?;
        if let Some(spec) = self.spec() {
            let frame = analytic_frame(&spec, gauge)?;
            let chart = frame.chart().clone();
            let theta = Arc::new(frame.theta_function());
            return Ok(Model { spec: Some(spec), chart, frame: Arc::new(frame), theta, sample_region: builtin_region(&spec), traced: false });
        }
        let c = self.custom.as_ref().expect("validated");
        let chart = custom_chart(c)?;
        let traced = matches!(c.theta, ThetaConfig::Cauchy(_));
        let theta: Arc<dyn InvariantFunction> = match &c.theta {
            ThetaConfig::Expression(t) => Arc::new(PlaneExpression::parse(t)?),
            ThetaConfig::Cauchy(cc) => {
                let x1 = Expression::parse_with_vars(&cc.x1, &["sigma"])?;
                let x2 = Expression::parse_with_vars(&cc.x2, &["sigma"])?;
                let n = cc.samples;
                let [lo, hi] = cc.sigma_range;
                let arc: Vec<f64> =
                    (0..n).map(|k| if k == n - 1 { hi } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 }).collect();
                let curve = move |s: f64| [x1.eval(&[s]), x2.eval(&[s])];
                let opts = TraceOptions { omega_range: cc.omega_range, steps: cc.steps };
                Arc::new(solve_orthogonal_invariant(&chart, &curve, &arc, opts)?)
            }
        };
        let frame = build_frame(&chart, theta.clone(), c.rect, &c.seeds)?;
        let sample_region = SampleRegion::Frame { omega: c.rect.omega, theta: c.rect.theta };
        Ok(Model { spec: None, chart, frame: Arc::new(frame), theta, sample_region, traced })
    }
}

fn custom_chart(c: &CustomSpace) -> Result<AdaptedChart3> {
    let m = &c.metric;
    let g: Vec<PlaneExpression> = [&m.g11, &m.g12, &m.g13, &m.g22, &m.g23, &m.g33]
        .into_iter()
        .map(|t| PlaneExpression::parse(t))
        .collect::<Result<_>>()?;
    let [bx1, bx2] = c.domain;
    Ok(AdaptedChart3::new(
        "custom",
        move |x1, x2| {
            let v = |k: usize| g[k].eval([x1, x2]);
            MetricCoefficients { g11: v(0), g12: v(1), g13: v(2), g22: v(3), g23: v(4), g33: v(5) }
        },
        move |x1, x2| x1 >= bx1[0] && x1 <= bx1[1] && x2 >= bx2[0] && x2 <= bx2[1],
    ))
}

/// Sample region of a built-in space, kept inside `1 + κr²/4 > 0` for `κ < 0`.
fn builtin_region(spec: &SpaceSpec) -> SampleRegion {
    let scale = if spec.kind == SpaceKind::BcvHelicoidal && spec.kappa < 0.0 {
        (0.7 * 2.0 / (-spec.kappa).sqrt() / 2.0).min(1.0)
    } else {
        1.0
    };
    SampleRegion::Coordinates { x1: [0.1 * scale, 1.4 * scale], x2: [-1.4 * scale, 1.4 * scale] }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{
        "space": {"kind": "euclidean_helicoidal", "a": 1},
        "generatrix": {"expression": "sqrt(s^2+2)"},
        "s_range": [0.5, 2],
        "m": [1, 1.5, 2]
    }"#;

    #[test]
    fn defaults() {
        let cfg = RunConfig::from_json(BASE).unwrap();
        assert_eq!(cfg.epsilon, Branch::Plus);
        assert_eq!(cfg.step, DEFAULT_STEP);
        assert_eq!(cfg.grid, GridConfig::default());
        assert_eq!(cfg.tolerances.isometry, 1e-5);
        assert_eq!(cfg.gauge, Gauge::Polar);
        assert_eq!(cfg.space.spec(), Some(SpaceSpec::euclidean_helicoidal(1.0)));
        let u = cfg.generatrix().unwrap();
        assert_eq!(cfg.s_range(&u), [0.5, 2.0]);
        let p = cfg.params(1.5, [0.5, 2.0]).unwrap();
        assert_eq!(p.m, 1.5);
    }

    #[test]
    fn demos_are_valid() {
        for name in DEMOS {
            RunConfig::demo(name).unwrap().validate().unwrap();
        }
        assert!(RunConfig::demo("torus").unwrap_err().to_string().contains("unknown demo"));
    }

    #[test]
    fn rejections() {
        let bad = |from: &str, to: &str| RunConfig::from_json(&BASE.replace(from, to)).unwrap_err().to_string();
        assert!(bad("[1, 1.5, 2]", "[0]").contains("m must be positive"));
        assert!(bad("[1, 1.5, 2]", "[1, 1]").contains("distinct"));
        assert!(bad("[1, 1.5, 2]", "[]").contains("empty"));
        assert!(bad("sqrt(s^2+2)", "cosh(s").contains("byte 6"));
        assert!(bad("\"a\": 1", "\"a\": 0").contains("nonzero pitch"));
        assert!(bad("\"m\"", "\"grid\": {\"s_count\": 1}, \"m\"").contains("at least 2"));
        assert!(bad("\"m\"", "\"bogus\": 1, \"m\"").contains("unknown field"));
        assert!(bad("\"s_range\": [0.5, 2],", "").contains("s_range is required"));
    }

    #[test]
    fn custom_space_with_expression_theta() {
        let text = r#"{
            "space": {"kind": "custom", "custom": {
                "metric": {"g11": "1", "g13": "x2", "g22": "1", "g23": "-x1", "g33": "x1^2+x2^2+1"},
                "domain": [[0.05, 3], [-3, 3]],
                "theta": {"expression": "x2/x1"},
                "rect": {"omega": [1.05, 3], "theta": [-2, 2]},
                "seeds": {"x1": [0.1, 2.5], "x2": [-2, 2], "n": 40}
            }},
            "generatrix": {"expression": "sqrt(s^2+2)"},
            "s_range": [0.5, 1.5],
            "m": [1]
        }"#;
        let cfg = RunConfig::from_json(text).unwrap();
        let model = cfg.space.model(cfg.gauge).unwrap();
        assert!(model.spec.is_none());
        let p = model.frame.invert(2f64.sqrt(), 0.5).unwrap();
        assert!((p[1] / p[0] - 0.5).abs() < 1e-10);
        let back: RunConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn custom_space_validation() {
        let mut space = SpaceConfig::builtin(SpaceSpec::euclidean_rotational());
        space.kind = SpaceConfigKind::Custom;
        assert!(space.validate().unwrap_err().to_string().contains("custom"));
        let b = SpaceConfig::builtin(SpaceSpec::bcv(-4.0, 0.0, 1.0));
        let model = b.model(Gauge::Polar).unwrap();
        let SampleRegion::Coordinates { x1, x2 } = model.sample_region else { panic!() };
        assert!(x1[1].hypot(x2[1]) < 1.0);
    }
}
