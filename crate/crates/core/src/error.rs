use thiserror::Error;

use crate::expr::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("point ({x1}, {x2}) is outside the chart domain")]
    Domain { x1: f64, x2: f64 },

    #[error("metric is not positive definite at ({x1}, {x2}) (determinant {det:e})")]
    SingularMetric { x1: f64, x2: f64, det: f64 },

    #[error("gradient of the volume function degenerates at ({x1}, {x2}) (norm {norm:e})")]
    DegenerateGradient { x1: f64, x2: f64, norm: f64 },

    #[error("Cauchy curve is nearly tangent to a characteristic at arc parameter {sigma} (angle {angle:e} rad)")]
    Transversality { sigma: f64, angle: f64 },

    #[error("point ({x1}, {x2}) is outside the region swept by characteristics")]
    OutsideSweptRegion { x1: f64, x2: f64 },

    #[error("Newton inversion of (omega, theta) = ({omega}, {theta}) did not converge (last residual {residual:e})")]
    NewtonDivergence { omega: f64, theta: f64, residual: f64 },

    #[error("(omega, theta) = ({omega}, {theta}) has no preimage in the chart")]
    NotInvertible { omega: f64, theta: f64 },

    #[error("map (x1, x2) -> (omega, theta) is rank deficient near ({x1}, {x2}) (jacobian {det:e})")]
    RankDeficiency { x1: f64, x2: f64, det: f64 },

    #[error("no seed point maps into the declared (omega, theta) rectangle")]
    EmptySeedGrid,

    #[error("parametrization is tangent to the orbits at u = {u} (E - F^2/G = {value:e})")]
    DegenerateParametrization { u: f64, value: f64 },

    #[error("radicand is negative at s = {s} ({radicand:e}); the metric is not realizable for this m here")]
    RadicandNegative { s: f64, radicand: f64 },

    #[error("profile left the frame rectangle at s = {s} (omega {omega}, theta {theta})")]
    RectExit { s: f64, omega: f64, theta: f64 },

    #[error("integration stage point left the frame rectangle near s = {s}; reduce the step")]
    StepTooLarge { s: f64 },

    #[error("sample grids do not match: {0}")]
    GridMismatch(String),

    #[error("volume function is not constant (relative variation {variation:e})")]
    NonConstantVolume { variation: f64 },

    #[error("closed form is undefined at s = {s}: {which} is {value:e}")]
    DomainViolation { s: f64, which: &'static str, value: f64 },

    #[error("({s}, {t}) with step {h} is outside the parameter range")]
    Range { s: f64, t: f64, h: f64 },

    #[error("invalid space: {0}")]
    Spec(String),

    #[error("config: {0}")]
    Config(String),

    #[error("invalid parameters: {0}")]
    Params(String),

    #[error("generatrix: {0}")]
    Generatrix(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("{0}")]
    Io(String),

    #[error("{stage}{}: {source}", m.map(|m| format!(" (m = {m})")).unwrap_or_default())]
    Stage { stage: &'static str, m: Option<f64>, source: Box<Error> },
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Io(err.to_string())
    }
}
