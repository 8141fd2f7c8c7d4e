//! Orthogonal invariants by the method of characteristics.
//!
//! `g(∇ω, ∇θ) = 0` is a first-order linear PDE for θ whose characteristics are
//! the integral curves of `A = h ∇ω`, with `h` the invariant block of the
//! inverse metric. Along them `dω = ‖∇ω‖² dτ`, so each one is traced with ω
//! itself as parameter: `dx/dω = A / ‖∇ω‖²`. All characteristics share one
//! uniform ω grid, which makes evaluation a lookup plus a one-dimensional
//! root find across neighbouring characteristics.

use nalgebra::Vector2;

use crate::chart::{AdaptedChart3, InvariantFunction, Point2};
use crate::error::{Error, Result};
use crate::fd::sample_derivatives;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    /// ω interval swept by every characteristic.
    pub omega_range: [f64; 2],
    /// RK4 steps across `omega_range`.
    pub steps: usize,
}

impl TraceOptions {
    pub fn new(omega_range: [f64; 2]) -> Self {
        Self { omega_range, steps: 400 }
    }
}

#[derive(Debug, Clone, Copy)]
struct Node {
    x: Point2,
    dx: Point2,
}

/// θ solving `g(∇ω, ∇θ) = 0` with θ equal to the Cauchy parameter on the
/// Cauchy curve.
#[derive(Debug, Clone)]
pub struct TracedInvariant {
    chart: AdaptedChart3,
    sigma: Vec<f64>,
    omega0: f64,
    d_omega: f64,
    steps: usize,
    /// `nodes[k][j]`: characteristic `k` at `ω0 + j dω`, `None` once it has
    /// left the chart domain.
    nodes: Vec<Vec<Option<Node>>>,
}

const MIN_ANGLE: f64 = 1e-3;
const MIN_GRADIENT: f64 = 1e-10;

/// Traces one characteristic through every Cauchy point `cauchy(σ)`,
/// `σ ∈ arc_grid`, across `opts.omega_range`.
pub fn solve_orthogonal_invariant(
    chart: &AdaptedChart3,
    cauchy: &dyn Fn(f64) -> Point2,
    arc_grid: &[f64],
    opts: TraceOptions,
) -> Result<TracedInvariant> {
    if arc_grid.len() < 2 || arc_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::GridMismatch("Cauchy grid must be strictly increasing with at least two nodes".into()));
    }
    let [lo, hi] = opts.omega_range;
    if !(lo.is_finite() && hi.is_finite() && hi > lo) || opts.steps < 2 {
        return Err(Error::Params("characteristic tracing needs a finite omega range and at least 2 steps".into()));
    }
    let points: Vec<Point2> = arc_grid.iter().map(|&s| cauchy(s)).collect();
    let tx = sample_derivatives(arc_grid, &points.iter().map(|p| p[0]).collect::<Vec<_>>());
    let ty = sample_derivatives(arc_grid, &points.iter().map(|p| p[1]).collect::<Vec<_>>());

    let field = Field { chart };
    let d_omega = (hi - lo) / opts.steps as f64;
    let mut nodes = Vec::with_capacity(points.len());
    for (k, &p) in points.iter().enumerate() {
        let (a, _) = field.direction(p)?;
        let tangent = [tx[k], ty[k]];
        let cross = tangent[0] * a[1] - tangent[1] * a[0];
        let dot = tangent[0] * a[0] + tangent[1] * a[1];
        let angle = cross.abs().atan2(dot.abs());
        if !(angle > MIN_ANGLE) {
            return Err(Error::Transversality { sigma: arc_grid[k], angle });
        }
        nodes.push(field.trace(p, lo, d_omega, opts.steps)?);
    }
    Ok(TracedInvariant {
        chart: chart.clone(),
        sigma: arc_grid.to_vec(),
        omega0: lo,
        d_omega,
        steps: opts.steps,
        nodes,
    })
}

struct Field<'a> {
    chart: &'a AdaptedChart3,
}

enum Step {
    Ok(Point2),
    Left,
}

impl Field<'_> {
    /// `(A, ‖∇ω‖²)` at `p`.
    fn direction(&self, p: Point2) -> Result<(Point2, f64)> {
        let dw = self.chart.volume_gradient_at(p)?;
        let h = self.chart.invariant_block(p)?;
        let a = h * Vector2::from(dw);
        let norm_sq = a.dot(&Vector2::from(dw));
        if !(norm_sq.sqrt() >= MIN_GRADIENT) {
            return Err(Error::DegenerateGradient { x1: p[0], x2: p[1], norm: norm_sq.max(0.0).sqrt() });
        }
        Ok(([a[0], a[1]], norm_sq))
    }

    /// `dx/dω`, or `None` outside the domain.
    fn velocity(&self, p: Point2) -> Result<Option<Point2>> {
        if !self.chart.contains(p) {
            return Ok(None);
        }
        match self.direction(p) {
            Ok((a, n)) => Ok(Some([a[0] / n, a[1] / n])),
            Err(Error::Domain { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn rk4(&self, p: Point2, h: f64) -> Result<Step> {
        let at = |q: Point2, k: Point2, c: f64| [q[0] + c * k[0], q[1] + c * k[1]];
        let Some(k1) = self.velocity(p)? else { return Ok(Step::Left) };
        let Some(k2) = self.velocity(at(p, k1, h / 2.0))? else { return Ok(Step::Left) };
        let Some(k3) = self.velocity(at(p, k2, h / 2.0))? else { return Ok(Step::Left) };
        let Some(k4) = self.velocity(at(p, k3, h))? else { return Ok(Step::Left) };
        Ok(Step::Ok([
            p[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            p[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ]))
    }

    /// Pulls `p` back onto the level `ω = target` along the characteristic.
    fn snap(&self, p: Point2, target: f64) -> Result<Option<Point2>> {
        let Some(v) = self.velocity(p)? else { return Ok(None) };
        let w = self.chart.volume_at(p)?;
        let q = [p[0] + (target - w) * v[0], p[1] + (target - w) * v[1]];
        Ok(self.chart.contains(q).then_some(q))
    }

    fn node(&self, p: Point2) -> Result<Option<Node>> {
        Ok(self.velocity(p)?.map(|dx| Node { x: p, dx }))
    }

    fn trace(&self, start: Point2, lo: f64, d_omega: f64, steps: usize) -> Result<Vec<Option<Node>>> {
        let mut out = vec![None; steps + 1];
        let w0 = self.chart.volume_at(start)?;
        let pos = (w0 - lo) / d_omega;
        let first_up = pos.ceil() as i64;
        self.sweep(start, w0, first_up, 1, lo, d_omega, steps, &mut out)?;
        self.sweep(start, w0, first_up - 1, -1, lo, d_omega, steps, &mut out)?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn sweep(
        &self,
        start: Point2,
        w0: f64,
        first: i64,
        dir: i64,
        lo: f64,
        d_omega: f64,
        steps: usize,
        out: &mut [Option<Node>],
    ) -> Result<()> {
        let mut p = start;
        let mut w = w0;
        let mut j = first;
        // nodes before the range are stepped through without being stored
        while (0..=steps as i64).contains(&j) || (dir > 0 && j < 0) || (dir < 0 && j > steps as i64) {
            let target = lo + j as f64 * d_omega;
            let h = target - w;
            let next = if h == 0.0 {
                Some(p)
            } else {
                match self.rk4(p, h)? {
                    Step::Left => None,
                    Step::Ok(q) => self.snap(q, target)?,
                }
            };
            let Some(q) = next else { break };
            if (0..=steps as i64).contains(&j) {
                match self.node(q)? {
                    Some(n) => out[j as usize] = Some(n),
                    None => break,
                }
            }
            p = q;
            w = target;
            j += dir;
        }
        Ok(())
    }
}

fn hermite(a: &Node, b: &Node, u: f64, h: f64) -> (Point2, Point2) {
    let u2 = u * u;
    let u3 = u2 * u;
    let (h00, h10, h01, h11) = (2.0 * u3 - 3.0 * u2 + 1.0, u3 - 2.0 * u2 + u, -2.0 * u3 + 3.0 * u2, u3 - u2);
    let (d00, d10, d01, d11) = (6.0 * u2 - 6.0 * u, 3.0 * u2 - 4.0 * u + 1.0, -6.0 * u2 + 6.0 * u, 3.0 * u2 - 2.0 * u);
    let mut x = [0.0; 2];
    let mut dx = [0.0; 2];
    for i in 0..2 {
        x[i] = h00 * a.x[i] + h10 * h * a.dx[i] + h01 * b.x[i] + h11 * h * b.dx[i];
        dx[i] = (d00 * a.x[i] + d10 * h * a.dx[i] + d01 * b.x[i] + d11 * h * b.dx[i]) / h;
    }
    (x, dx)
}

impl TracedInvariant {
    pub fn characteristic_count(&self) -> usize {
        self.sigma.len()
    }

    pub fn omega_range(&self) -> [f64; 2] {
        [self.omega0, self.omega0 + self.steps as f64 * self.d_omega]
    }

    /// Position of characteristic `k` at level ω, if it reaches that level.
    pub fn characteristic_point(&self, k: usize, omega: f64) -> Option<Point2> {
        let (j, u) = self.cell(omega)?;
        let row = self.nodes.get(k)?;
        let (a, b) = (row[j].as_ref()?, row[j + 1].as_ref()?);
        Some(hermite(a, b, u, self.d_omega).0)
    }

    fn cell(&self, omega: f64) -> Option<(usize, f64)> {
        let t = (omega - self.omega0) / self.d_omega;
        let slack = 1e-9;
        if !(t >= -slack && t <= self.steps as f64 + slack) {
            return None;
        }
        let j = (t.floor().max(0.0) as usize).min(self.steps - 1);
        Some((j, t - j as f64))
    }

    /// Signed distance (to first order) of `p` from every characteristic at
    /// level ω, `None` where a characteristic does not reach it.
    fn sides(&self, p: Point2, j: usize, u: f64) -> Vec<Option<f64>> {
        self.nodes
            .iter()
            .map(|row| {
                let (a, b) = (row[j].as_ref()?, row[j + 1].as_ref()?);
                let (x, dx) = hermite(a, b, u, self.d_omega);
                let norm = dx[0].hypot(dx[1]);
                Some((dx[0] * (p[1] - x[1]) - dx[1] * (p[0] - x[0])) / norm)
            })
            .collect()
    }
}

/// Lagrange interpolant through `(xs, ys)` evaluated at `t`.
fn lagrange(xs: &[f64], ys: &[f64], t: f64) -> f64 {
    let mut sum = 0.0;
    for i in 0..xs.len() {
        let mut w = ys[i];
        for j in 0..xs.len() {
            if i != j {
                w *= (t - xs[j]) / (xs[i] - xs[j]);
            }
        }
        sum += w;
    }
    sum
}

impl InvariantFunction for TracedInvariant {
    fn value(&self, p: Point2) -> Result<f64> {
        let omega = self.chart.volume_at(p)?;
        let outside = Error::OutsideSweptRegion { x1: p[0], x2: p[1] };
        let Some((j, u)) = self.cell(omega) else { return Err(outside) };
        let sides = self.sides(p, j, u);
        let mut best: Option<(usize, f64)> = None;
        for k in 0..sides.len() - 1 {
            let (Some(s0), Some(s1)) = (sides[k], sides[k + 1]) else { continue };
            if s0 * s1 <= 0.0 {
                let size = s0.abs().min(s1.abs());
                if best.is_none_or(|(_, b)| size < b) {
                    best = Some((k, size));
                }
            }
        }
        let Some((k, _)) = best else { return Err(outside) };
        let (s0, s1) = (sides[k].expect("bracket"), sides[k + 1].expect("bracket"));
        if s0 == s1 {
            return Ok(self.sigma[k]);
        }
        // cubic inverse interpolation of the distance over the neighbouring
        // characteristics that reach this level
        let lo_k = if k > 0 && sides[k - 1].is_some() { k - 1 } else { k };
        let hi_k = if k + 2 < sides.len() && sides[k + 2].is_some() { k + 2 } else { k + 1 };
        let xs: Vec<f64> = self.sigma[lo_k..=hi_k].to_vec();
        let ys: Vec<f64> = sides[lo_k..=hi_k].iter().map(|s| s.expect("present")).collect();
        let (mut a, mut b) = (self.sigma[k], self.sigma[k + 1]);
        let mut fa = s0;
        let linear = a + (b - a) * s0 / (s0 - s1);
        if xs.len() == 2 {
            return Ok(linear);
        }
        for _ in 0..100 {
            let mid = 0.5 * (a + b);
            let fm = lagrange(&xs, &ys, mid);
            if fm == 0.0 || (b - a) < 1e-15 * (1.0 + mid.abs()) {
                return Ok(mid);
            }
            if fa * fm < 0.0 {
                b = mid;
            } else {
                a = mid;
                fa = fm;
            }
        }
        Ok(0.5 * (a + b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::MetricCoefficients;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn helicoidal(a: f64) -> AdaptedChart3 {
        AdaptedChart3::new(
            "test helicoidal",
            move |x1, x2| MetricCoefficients { g11: 1.0, g12: 0.0, g13: x2, g22: 1.0, g23: -x1, g33: x1 * x1 + x2 * x2 + a * a },
            |x1, _| x1 > 0.0,
        )
    }

    fn radial() -> AdaptedChart3 {
        AdaptedChart3::new(
            "radial volume",
            |x1, x2| MetricCoefficients { g11: 1.0, g12: 0.0, g13: 0.0, g22: 1.0, g23: 0.0, g33: 1.0 + x1 * x1 + x2 * x2 },
            |_, _| true,
        )
    }

    fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect()
    }

    fn transversal_trace() -> (AdaptedChart3, TracedInvariant) {
        let chart = helicoidal(1.0);
        let theta = solve_orthogonal_invariant(
            &chart,
            &|s| [1.0, s],
            &grid(-1.0, 1.0, 200),
            TraceOptions::new([1.2, 2.6]),
        )
        .unwrap();
        (chart, theta)
    }

    fn swept_point(rng: &mut ChaCha8Rng) -> Point2 {
        // rays through {x1 = 1, |x2| < 0.9} at radii giving ω in (1.25, 2.55)
        let slope: f64 = rng.gen_range(-0.9..0.9);
        let w: f64 = rng.gen_range(1.25..2.55);
        let r = (w * w - 1.0).sqrt();
        let x1 = r / (1.0 + slope * slope).sqrt();
        [x1, slope * x1]
    }

    #[test]
    fn traced_theta_is_orthogonal_to_volume() {
        let (chart, theta) = transversal_trace();
        let omega = chart.volume();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let p = swept_point(&mut rng);
            let pairing = chart.invariant_pairing(&omega, &theta, p).unwrap();
            assert!(pairing.abs() < 1e-6, "pairing {pairing:e} at {p:?}");
        }
    }

    #[test]
    fn traced_theta_is_a_function_of_the_slope() {
        let (chart, theta) = transversal_trace();
        let slope = |x1: f64, x2: f64| x2 / x1;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let p = swept_point(&mut rng);
            let a = chart.gradient(&theta, p).unwrap();
            let b = chart.gradient(&slope, p).unwrap();
            let cross = a[0] * b[1] - a[1] * b[0];
            assert!(cross.abs() < 1e-5, "cross {cross:e} at {p:?}");
            // on this Cauchy segment the parameter is the slope itself
            let t = theta.value(p).unwrap();
            assert!((t - p[1] / p[0]).abs() < 1e-8, "{t} vs {}", p[1] / p[0]);
        }
    }

    #[test]
    fn circular_symmetry_gives_radially_constant_theta() {
        let chart = radial();
        let theta = solve_orthogonal_invariant(
            &chart,
            &|s| [s.cos(), s.sin()],
            &grid(0.0, 1.5, 150),
            TraceOptions::new([1.1, 2.2]),
        )
        .unwrap();
        for angle in [0.1, 0.5, 0.77, 1.2, 1.4] {
            let at_1 = theta.value([0.6 * f64::cos(angle), 0.6 * f64::sin(angle)]).unwrap();
            for r in [0.5, 0.9, 1.3, 1.8] {
                let t = theta.value([r * f64::cos(angle), r * f64::sin(angle)]).unwrap();
                assert!((t - at_1).abs() < 1e-9);
                assert!((t - angle).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn radial_cauchy_curve_is_a_characteristic() {
        let err = solve_orthogonal_invariant(&radial(), &|s| [s, 0.0], &grid(0.5, 2.0, 50), TraceOptions::new([1.1, 2.2]))
            .err()
            .unwrap();
        assert!(matches!(err, Error::Transversality { .. }), "{err}");
        let err = solve_orthogonal_invariant(&helicoidal(1.0), &|s| [s, 0.0], &grid(0.5, 2.0, 50), TraceOptions::new([1.2, 2.2]))
            .err()
            .unwrap();
        assert!(matches!(err, Error::Transversality { .. }), "{err}");
    }

    #[test]
    fn critical_point_of_volume_is_degenerate() {
        let err = solve_orthogonal_invariant(&radial(), &|s| [s, s * s], &grid(-0.5, 0.5, 10), TraceOptions::new([1.1, 2.2]))
            .err()
            .unwrap();
        assert!(matches!(err, Error::DegenerateGradient { .. }), "{err}");
    }

    #[test]
    fn points_off_the_swept_region_are_rejected() {
        let (_, theta) = transversal_trace();
        assert!(matches!(theta.value([0.1, 2.0]), Err(Error::OutsideSweptRegion { .. })));
        assert!(matches!(theta.value([3.0, 0.0]), Err(Error::OutsideSweptRegion { .. })));
    }

    #[test]
    fn characteristics_stay_on_their_level_grid() {
        let (chart, theta) = transversal_trace();
        let d = 1.4 / 400.0;
        for k in [0, 50, 100, 200] {
            for j in [0, 85, 86, 300, 400] {
                let w = 1.2 + j as f64 * d;
                let p = theta.characteristic_point(k, w).unwrap();
                assert!((chart.volume_at(p).unwrap() - w).abs() < 1e-12);
                let between = theta.characteristic_point(k, w.min(2.6 - d) + 0.37 * d).unwrap();
                assert!((chart.volume_at(between).unwrap() - w.min(2.6 - d) - 0.37 * d).abs() < 1e-10);
            }
        }
    }
}
