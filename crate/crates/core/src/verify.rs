//! Numerical checks: first fundamental forms by central differences, the
//! isometry report against `ds² + U²dt²`, orthogonality of frames and the
//! comparison between closed-form and generic members.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bour::SurfaceMember;
use crate::chart::{AdaptedChart3, InvariantFunction, Point2, Point3};
use crate::error::{Error, Result};
use crate::natural::Generatrix;
use crate::parallel::map_ordered;
use crate::quotient::QuotientFrame;
use crate::spaces::{closed_form_coordinates, shift_sign, unwrap_angles, ClosedFormFamily, SpaceKind};
use crate::surface::ParametrizedSurface;

/// Default finite-difference step for first fundamental forms.
pub const DEFAULT_FD_STEP: f64 = 1e-5;
/// Default tolerance of isometry reports and cross-checks.
pub const DEFAULT_TOL: f64 = 1e-5;

#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FormSample {
    pub s: f64,
    pub t: f64,
    pub E: f64,
    pub F: f64,
    pub G: f64,
}

impl FormSample {
    pub fn is_positive(&self) -> bool {
        self.E > 0.0 && self.G > 0.0 && self.E * self.G - self.F * self.F > 0.0
    }
}

/// `(E, F, G)` of `surface` at `(s, t)` from central differences of step
/// `h`, with the metric evaluated at the surface point.
pub fn fd_first_form(
    chart: &AdaptedChart3,
    surface: &dyn ParametrizedSurface,
    s: f64,
    t: f64,
    h: f64,
) -> Result<FormSample> {
    let [lo, hi] = surface.s_range();
    if !(h > 0.0) || !(s - h >= lo && s + h <= hi) || !t.is_finite() {
        return Err(Error::Range { s, t, h });
    }
    let diff = |a: Point3, b: Point3| [(a[0] - b[0]) / (2.0 * h), (a[1] - b[1]) / (2.0 * h), (a[2] - b[2]) / (2.0 * h)];
    let ps = diff(surface.point(s + h, t)?, surface.point(s - h, t)?);
    let pt = diff(surface.point(s, t + h)?, surface.point(s, t - h)?);
    let p = surface.point(s, t)?;
    let g = chart.coefficients_at([p[0], p[1]])?;
    Ok(FormSample { s, t, E: g.inner(ps, ps), F: g.inner(ps, pt), G: g.inner(pt, pt) })
}

/// Rectangular `(s, t)` sample grid, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub s_range: [f64; 2],
    pub t_range: [f64; 2],
    pub s_count: usize,
    pub t_count: usize,
}

fn nodes(range: [f64; 2], n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![range[0]],
        _ => (0..n)
            .map(|k| if k == n - 1 { range[1] } else { range[0] + (range[1] - range[0]) * k as f64 / (n - 1) as f64 })
            .collect(),
    }
}

impl Grid {
    pub fn s_nodes(&self) -> Vec<f64> {
        nodes(self.s_range, self.s_count)
    }

    pub fn t_nodes(&self) -> Vec<f64> {
        nodes(self.t_range, self.t_count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormEntry {
    E,
    F,
    G,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorstSample {
    pub s: f64,
    pub t: f64,
    pub entry: FormEntry,
    pub deviation: f64,
}

/// Aggregate of `|E − 1|`, `|F|`, `|G − U²|` over a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsometryReport {
    pub grid: Grid,
    pub fd_step: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub max_e_dev: f64,
    pub max_f: f64,
    pub max_g_dev: f64,
    pub worst: Option<WorstSample>,
    pub pass: bool,
    pub error: Option<String>,
}

/// Evaluates the forms over `grid` against `(1, 0, U²)`. The `s` nodes are
/// pulled inward by `h` where needed so every difference stays in range.
/// Evaluation failures are recorded in the report, which then fails.
pub fn isometry_report(
    chart: &AdaptedChart3,
    surface: &dyn ParametrizedSurface,
    u: &Generatrix,
    grid: &Grid,
    h: f64,
    tol: f64,
) -> IsometryReport {
    let [lo, hi] = surface.s_range();
    let margin = h * (1.0 + 1e-6);
    let s_nodes: Vec<f64> = grid.s_nodes().into_iter().map(|s| s.clamp(lo + margin, hi - margin)).collect();
    let t_nodes = grid.t_nodes();
    let mut report = IsometryReport {
        grid: *grid,
        fd_step: h,
        tolerance: tol,
        samples: 0,
        max_e_dev: 0.0,
        max_f: 0.0,
        max_g_dev: 0.0,
        worst: None,
        pass: false,
        error: None,
    };
    let rows: Vec<Result<Vec<(FormSample, f64)>>> = map_ordered(&s_nodes, |&s| {
        let uu = u.value(s)?;
        t_nodes.iter().map(|&t| Ok((fd_first_form(chart, surface, s, t, h)?, uu * uu))).collect()
    });
    for row in rows {
        let row = match row {
            Ok(row) => row,
            Err(e) => {
                report.error = Some(e.to_string());
                return report;
            }
        };
        for (f, u2) in row {
            report.samples += 1;
            for (entry, dev) in [(FormEntry::E, (f.E - 1.0).abs()), (FormEntry::F, f.F.abs()), (FormEntry::G, (f.G - u2).abs())] {
                let slot = match entry {
                    FormEntry::E => &mut report.max_e_dev,
                    FormEntry::F => &mut report.max_f,
                    FormEntry::G => &mut report.max_g_dev,
                };
                *slot = slot.max(dev);
                if report.worst.map_or(true, |w| dev > w.deviation) {
                    report.worst = Some(WorstSample { s: f.s, t: f.t, entry, deviation: dev });
                }
            }
        }
    }
    report.pass = report.samples > 0 && report.max_e_dev <= tol && report.max_f <= tol && report.max_g_dev <= tol;
    report
}

/// Where orthogonality samples were drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleRegion {
    /// Uniform in a coordinate box.
    Coordinates { x1: [f64; 2], x2: [f64; 2] },
    /// Uniform in a rectangle of the `(ω, θ)` plane, mapped back by a frame.
    Frame { omega: [f64; 2], theta: [f64; 2] },
}

/// `|g(∇ω, ∇θ)|` at seeded random points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    pub seed: u64,
    pub region: SampleRegion,
    pub samples: usize,
    pub max_pairing: f64,
    pub worst: Option<Point2>,
    pub tolerance: f64,
    pub pass: bool,
    pub error: Option<String>,
}

/// `n` uniform points of `[x1] × [x2]` from a ChaCha8 stream.
pub fn seeded_points(x1: [f64; 2], x2: [f64; 2], n: usize, seed: u64) -> Vec<Point2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| [rng.gen_range(x1[0]..=x1[1]), rng.gen_range(x2[0]..=x2[1])]).collect()
}

/// Pairing at `n` seeded points of `region`; frame regions need `frame`.
pub fn orthogonality_report(
    chart: &AdaptedChart3,
    theta: &dyn InvariantFunction,
    frame: Option<&dyn QuotientFrame>,
    region: SampleRegion,
    n: usize,
    seed: u64,
    tol: f64,
) -> OrthogonalityReport {
    let mut report =
        OrthogonalityReport { seed, region, samples: 0, max_pairing: 0.0, worst: None, tolerance: tol, pass: false, error: None };
    let points: Result<Vec<Point2>> = match (region, frame) {
        (SampleRegion::Coordinates { x1, x2 }, _) => Ok(seeded_points(x1, x2, n, seed)),
        (SampleRegion::Frame { omega, theta }, Some(f)) => {
            seeded_points(omega, theta, n, seed).into_iter().map(|[w, t]| f.invert(w, t)).collect()
        }
        (SampleRegion::Frame { .. }, None) => Err(Error::Params("frame sampling needs a frame".into())),
    };
    let result = points.and_then(|pts| {
        for p in pts {
            let v = chart.invariant_pairing(&chart.volume(), theta, p)?.abs();
            report.samples += 1;
            if report.worst.is_none() || v > report.max_pairing {
                report.max_pairing = v;
                report.worst = Some(p);
            }
        }
        Ok(())
    });
    match result {
        Ok(()) => report.pass = report.samples > 0 && report.max_pairing <= tol,
        Err(e) => report.error = Some(e.to_string()),
    }
    report
}

/// Largest deviations between a closed-form family and a generic member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub samples: usize,
    pub rho: f64,
    pub angle: f64,
    pub shift: f64,
}

impl CrossCheck {
    pub fn max(&self) -> f64 {
        self.rho.max(self.angle).max(self.shift)
    }
}

/// Compares `ρ`, the `λ`-equivalent and the vertical shift sample by
/// sample. Angles are unwrapped and compared relative to the first sample,
/// which absorbs the gauge constant `θ0`.
pub fn cross_check(closed: &ClosedFormFamily, member: &SurfaceMember) -> Result<CrossCheck> {
    let spec = closed.space;
    let samples = &member.profile.samples;
    if samples.len() != closed.s.len() || samples.iter().zip(&closed.s).any(|(p, s)| (p.s - s).abs() > 1e-12) {
        return Err(Error::GridMismatch(format!(
            "closed form has {} samples, member has {}",
            closed.s.len(),
            samples.len()
        )));
    }
    if (member.m - closed.m).abs() > 0.0 || member.epsilon != closed.epsilon {
        return Err(Error::GridMismatch("closed form and member use different m or branch".into()));
    }
    let coords: Vec<(f64, f64)> = samples.iter().map(|p| closed_form_coordinates(&spec, [p.x1, p.x2])).collect();
    let mut phi: Vec<f64> = coords.iter().map(|c| c.1).collect();
    if spec.kind != SpaceKind::EuclideanRotational {
        unwrap_angles(&mut phi);
    }
    let scale = if spec.kind == SpaceKind::EuclideanRotational { 1.0 } else { spec.a };
    let sigma = shift_sign(&spec);
    let mut out = CrossCheck { samples: samples.len(), rho: 0.0, angle: 0.0, shift: 0.0 };
    for k in 0..samples.len() {
        let d_phi = phi[k] - phi[0];
        out.rho = out.rho.max((coords[k].0 - closed.rho[k]).abs());
        out.angle = out.angle.max((scale * d_phi - closed.lambda[k]).abs());
        let v = member.shift.v[k] - member.shift.v[0] + sigma * d_phi;
        out.shift = out.shift.max((v - closed.v[k]).abs());
    }
    Ok(out)
}
