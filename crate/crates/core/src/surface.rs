use crate::chart::Point3;
use crate::error::Result;

/// A surface `(s, t) ↦ (x1, x2, x3)` in adapted coordinates, defined for
/// `s` in a closed interval and every `t`.
pub trait ParametrizedSurface: Send + Sync {
    fn point(&self, s: f64, t: f64) -> Result<Point3>;

    fn s_range(&self) -> [f64; 2];
}
