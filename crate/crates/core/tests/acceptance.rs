//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

use std::process::ExitCode;

use bour_core::bour::{generate_member, BourParams, Branch, SurfaceMember};
use bour_core::config::RunConfig;
use bour_core::natural::{Generatrix, LiftedCurve, NaturalSurface};
use bour_core::pipeline::run_family;
use bour_core::quotient::{solve_orthogonal_invariant, TraceOptions};
use bour_core::spaces::{analytic_frame, bcv_closed_form, closed_form, r3_closed_form, Gauge, SpaceSpec};
use bour_core::verify::{cross_check, isometry_report, orthogonality_report, seeded_points, Grid, SampleRegion};
use bour_core::{AdaptedChart3, Error, InvariantFunction, Result};

const CATENOID_TOL: f64 = 1e-6;
const HELICOID_TOL: f64 = 1e-8;
const ISOMETRY_TOL: f64 = 1e-5;
const FD_STEP: f64 = 1e-5;
const CROSS_TOL: f64 = 1e-5;
const CROSS_STEP: f64 = 0.005;
const REDUCTION_TOL: f64 = 1e-8;
const ORTHO_TOL: f64 = 1e-8;
const TRACED_TOL: f64 = 1e-6;
const PARALLEL_TOL: f64 = 1e-5;
const NATURAL_TOL: f64 = 1e-6;
const IDENTITY_TOL: f64 = 1e-6;
const RK4_RATIO: [f64; 2] = [12.0, 20.0];
const FD_RATIO: [f64; 2] = [3.5, 4.5];

type Outcome = Result<(bool, String)>;

fn member(spec: &SpaceSpec, gauge: Gauge, u: &Generatrix, params: &BourParams, theta0: f64) -> Result<SurfaceMember> {
    let frame = analytic_frame(spec, gauge)?;
    generate_member(frame.chart(), &frame, u, params, theta0)
}

fn max_abs(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0, |a, b| a.max(b.abs()))
}

fn catenoid_recovery() -> Outcome {
    let spec = SpaceSpec::euclidean_rotational();
    let s_range = [-2.0, 2.0];
    let u = Generatrix::from_expression("sqrt(s^2+1)", s_range)?;
    let p = BourParams::new(1.0, Branch::Plus, s_range)?.with_step(0.01)?;
    let mem = member(&spec, Gauge::Polar, &u, &p, s_range[0].asinh())?;
    let rho_err = max_abs(mem.profile.samples.iter().map(|q| q.x1 - q.x2.cosh()));
    let lambda_err = max_abs(mem.profile.samples.iter().map(|q| q.x2 - q.s.asinh()));
    let closed = closed_form(&spec, &u, &p)?;
    let closed_rho = max_abs(closed.rho.iter().zip(&closed.lambda).map(|(r, l)| r - (l + s_range[0].asinh()).cosh()));
    let closed_lambda = max_abs(closed.s.iter().zip(&closed.lambda).map(|(s, l)| l + s_range[0].asinh() - s.asinh()));
    let worst = rho_err.max(lambda_err).max(closed_rho).max(closed_lambda);
    Ok((
        worst < CATENOID_TOL,
        format!(
            "generic |rho - cosh(lambda)| {rho_err:.2e}, |lambda - asinh s| {lambda_err:.2e}; closed form {closed_rho:.2e}, {closed_lambda:.2e}"
        ),
    ))
}

fn helicoid_fixed_point() -> Outcome {
    let spec = SpaceSpec::euclidean_helicoidal(1.0);
    let u = Generatrix::from_expression("sqrt(s^2+1)", [0.5, 2.0])?;
    let p = BourParams::new(1.0, Branch::Plus, [0.5, 2.0])?;
    let closed = closed_form(&spec, &u, &p)?;
    let lambda = max_abs(closed.lambda.iter().copied());
    let rho = max_abs(closed.rho.iter().zip(&closed.s).map(|(r, s)| r - s));
    let mem = member(&spec, Gauge::Polar, &u, &p, 0.0)?;
    let g_rho = max_abs(mem.profile.samples.iter().map(|q| q.x1.hypot(q.x2) - q.s));
    let g_angle = max_abs(mem.profile.samples.iter().map(|q| q.x2.atan2(q.x1)));
    let worst = lambda.max(rho).max(g_rho).max(g_angle);
    Ok((
        worst < HELICOID_TOL,
        format!("closed |lambda| {lambda:.2e}, |rho - s| {rho:.2e}; generic {g_rho:.2e}, angle {g_angle:.2e}"),
    ))
}

fn isometry_of_every_member() -> Outcome {
    let spec = SpaceSpec::euclidean_helicoidal(1.0);
    let s_range = [0.5, 2.0];
    let u = Generatrix::from_expression("sqrt(s^2+2)", s_range)?;
    let grid = Grid { s_range, t_range: [0.0, 1.0], s_count: 21, t_count: 21 };
    let chart = analytic_frame(&spec, Gauge::Polar)?.chart().clone();
    let mut pass = true;
    let mut parts = Vec::new();
    for m in [1.0, 1.5, 2.0] {
        let p = BourParams::new(m, Branch::Plus, s_range)?;
        match member(&spec, Gauge::Polar, &u, &p, 0.0) {
            Ok(mem) => {
                let r = isometry_report(&chart, &mem, &u, &grid, FD_STEP, ISOMETRY_TOL);
                pass &= r.pass;
                parts.push(format!("m={m}: E {:.1e} F {:.1e} G {:.1e}", r.max_e_dev, r.max_f, r.max_g_dev));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("m={m}: {e}"));
            }
        }
    }
    Ok((pass, parts.join("; ")))
}

/// Largest `s_hi ≤ s_range[1]` on the step grid such that every closed-form
/// radicand is positive on `[s_range[0], s_hi + margin]`, from a dense grid.
fn realizable_range(spec: &SpaceSpec, u: &Generatrix, m: f64, s_range: [f64; 2], step: f64, margin: f64) -> Result<[f64; 2]> {
    let dense = BourParams::new(m, Branch::Plus, s_range)?.with_step((s_range[1] - s_range[0]) / 20000.0)?;
    match closed_form(spec, u, &dense) {
        Ok(_) => Ok(s_range),
        Err(Error::DomainViolation { s, .. }) => {
            let k = ((s - margin - s_range[0]) / step).floor();
            Ok([s_range[0], s_range[0] + k * step])
        }
        Err(e) => Err(e),
    }
}

fn closed_vs_generic() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    let cases = [
        (SpaceSpec::euclidean_helicoidal(1.0), "sqrt(s^2+2)", 1.0, [0.5, 2.0]),
        (SpaceSpec::euclidean_helicoidal(1.0), "sqrt(s^2+2)", 1.5, [0.5, 2.0]),
        (SpaceSpec::euclidean_helicoidal(1.0), "sqrt(s^2+2)", 2.0, [0.5, 2.0]),
        (SpaceSpec::bcv(1.0, 1.0, 1.0), "sqrt(s^2+4)", 1.0, [0.0, 1.0]),
    ];
    for (spec, text, m, s_range) in cases {
        let u = Generatrix::from_expression(text, s_range)?;
        let range = realizable_range(&spec, &u, m, s_range, CROSS_STEP, 0.05)?;
        let p = BourParams::new(m, Branch::Plus, range)?.with_step(CROSS_STEP)?;
        let closed = closed_form(&spec, &u, &p)?;
        let mem = member(&spec, Gauge::Polar, &u, &p, 0.0)?;
        let c = cross_check(&closed, &mem)?;
        pass &= c.rho < CROSS_TOL && c.angle < CROSS_TOL;
        parts.push(format!(
            "{} m={m} s in [{}, {:.3}]: rho {:.1e} angle {:.1e} V {:.1e}",
            if spec.kappa == 0.0 { "R3" } else { "BCV" },
            range[0],
            range[1],
            c.rho,
            c.angle,
            c.shift
        ));
    }
    Ok((pass, parts.join("; ")))
}

fn bcv_reduction() -> Outcome {
    let u = Generatrix::from_expression("sqrt(s^2+2)", [0.5, 2.0])?;
    let mut worst: f64 = 0.0;
    for eps in [Branch::Plus, Branch::Minus] {
        let p = BourParams::new(1.0, eps, [0.5, 2.0])?;
        let q = BourParams::new(1.0, eps.flipped(), [0.5, 2.0])?;
        let b = bcv_closed_form(&u, &p, 0.0, 0.0, 1.0)?;
        let r = r3_closed_form(&u, &p, 1.0)?;
        let r_flip = r3_closed_form(&u, &q, 1.0)?;
        worst = worst
            .max(max_abs(b.rho.iter().zip(&r.rho).map(|(x, y)| x - y)))
            .max(max_abs(b.lambda.iter().zip(&r.lambda).map(|(x, y)| x - y)))
            .max(max_abs(b.v.iter().zip(&r_flip.v).map(|(x, y)| x - y)));
    }
    Ok((worst < REDUCTION_TOL, format!("max deviation {worst:.2e} over both branches")))
}

fn orthogonal_pair() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for spec in [SpaceSpec::euclidean_helicoidal(1.0), SpaceSpec::bcv(1.0, 1.0, 1.0)] {
        let frame = analytic_frame(&spec, Gauge::Slope)?;
        let region = SampleRegion::Coordinates { x1: [0.1, 1.4], x2: [-1.4, 1.4] };
        let r = orthogonality_report(frame.chart(), &frame.theta_function(), None, region, 100, 11, ORTHO_TOL);
        pass &= r.pass;
        parts.push(format!("{}: {:.1e}", spec.label(), r.max_pairing));
    }

    let chart = analytic_frame(&SpaceSpec::euclidean_helicoidal(1.0), Gauge::Slope)?.chart().clone();
    let sigma: Vec<f64> = (0..=200).map(|k| -1.0 + k as f64 / 100.0).collect();
    let traced = solve_orthogonal_invariant(&chart, &|s| [1.0, s], &sigma, TraceOptions::new([1.2, 2.6]))?;
    let slope = |x1: f64, x2: f64| x2 / x1;
    let (mut pairing, mut parallel) = (0.0f64, 0.0f64);
    // rays through {x1 = 1, |x2| < 0.9} at ω in (1.25, 2.55)
    for [k, w] in seeded_points([-0.9, 0.9], [1.25, 2.55], 100, 12) {
        let r = (w * w - 1.0).sqrt();
        let x1 = r / (1.0 + k * k).sqrt();
        let p = [x1, k * x1];
        pairing = pairing.max(chart.invariant_pairing(&chart.volume(), &traced, p)?.abs());
        let a = chart.gradient(&traced, p)?;
        let b = chart.gradient(&slope as &dyn InvariantFunction, p)?;
        let sine = (a[0] * b[1] - a[1] * b[0]) / (a[0].hypot(a[1]) * b[0].hypot(b[1]));
        parallel = parallel.max(sine.abs());
    }
    pass &= pairing < TRACED_TOL && parallel < PARALLEL_TOL;
    parts.push(format!("traced: pairing {pairing:.1e}, parallelism {parallel:.1e}"));
    Ok((pass, parts.join("; ")))
}

fn natural_roundtrip() -> Outcome {
    let spec = SpaceSpec::euclidean_helicoidal(1.0);
    let chart: AdaptedChart3 = analytic_frame(&spec, Gauge::Polar)?.chart().clone();
    let (w0, w1) = (0.5f64.ln(), 2.5f64.ln());
    let n = 2000;
    let w: Vec<f64> = (0..=n).map(|k| w0 + (w1 - w0) * k as f64 / n as f64).collect();
    let curve = LiftedCurve::sample(&w, |w| [w.exp(), 0.0, 0.0])?;
    let surface = NaturalSurface::from_curve(&chart, &curve)?;
    let params = surface.parameters();
    let c = 0.5 - params.s[0];
    let g = surface.generatrix();
    let mut u_err: f64 = 0.0;
    let [lo, hi] = g.s_range();
    for k in 0..=400 {
        let s = lo + (hi - lo) * k as f64 / 400.0;
        u_err = u_err.max((g.value(s)? - ((s + c).powi(2) + 1.0).sqrt()).abs());
    }
    let grid = Grid { s_range: [lo, hi], t_range: [0.0, 1.0], s_count: 21, t_count: 21 };
    let r = isometry_report(&chart, &surface, g, &grid, FD_STEP, ISOMETRY_TOL);
    Ok((
        u_err < NATURAL_TOL && r.pass,
        format!(
            "c = {c}, |U - sqrt((s+c)^2+1)| {u_err:.2e}; isometry E {:.1e} F {:.1e} G {:.1e}",
            r.max_e_dev, r.max_f, r.max_g_dev
        ),
    ))
}

fn m1_identity() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for name in ["catenoid", "helicoid", "bcv"] {
        let cfg = RunConfig::demo(name)?;
        let run = run_family(&cfg)?;
        let out = &run.members[0];
        let chart = &run.model.chart;
        let samples = &out.member.profile.samples;
        let mut s = Vec::new();
        let mut omega = Vec::new();
        let mut domega = Vec::new();
        for q in samples {
            let g = chart.volume_gradient_at([q.x1, q.x2])?;
            s.push(q.s);
            omega.push(chart.volume_at([q.x1, q.x2])?);
            domega.push(g[0] * q.dx1 + g[1] * q.dx2);
        }
        let u = Generatrix::from_table_with_slopes(s, omega, domega)?;
        let again = generate_member(chart, run.model.frame.as_ref(), &u, &out.params, cfg.theta0)?;
        let dev = max_abs(samples.iter().zip(&again.profile.samples).flat_map(|(a, b)| [a.x1 - b.x1, a.x2 - b.x2]))
            .max(max_abs(out.member.shift.v.iter().zip(&again.shift.v).map(|(a, b)| a - b)));
        pass &= dev < IDENTITY_TOL;
        parts.push(format!("{name}: {dev:.1e}"));
    }
    Ok((pass, parts.join("; ")))
}

fn convergence_orders() -> Outcome {
    let spec = SpaceSpec::euclidean_rotational();
    let s_range = [-2.0, 2.0];
    let u = Generatrix::from_expression("sqrt(s^2+1)", s_range)?;
    let theta0 = s_range[0].asinh();
    let rk4_error = |step: f64| -> Result<f64> {
        let p = BourParams::new(1.0, Branch::Plus, s_range)?.with_step(step)?;
        let mem = member(&spec, Gauge::Polar, &u, &p, theta0)?;
        Ok(max_abs(mem.profile.samples.iter().map(|q| q.x2 - q.s.asinh())))
    };
    let (e1, e2) = (rk4_error(0.2)?, rk4_error(0.1)?);
    let rk4 = e1 / e2;

    let p = BourParams::new(1.0, Branch::Plus, s_range)?.with_step(0.01)?;
    let mem = member(&spec, Gauge::Polar, &u, &p, theta0)?;
    let chart = analytic_frame(&spec, Gauge::Polar)?.chart().clone();
    let grid = Grid { s_range: [-1.5, 1.5], t_range: [0.0, 1.0], s_count: 21, t_count: 5 };
    let fd_error = |h: f64| {
        let r = isometry_report(&chart, &mem, &u, &grid, h, 1.0);
        r.max_e_dev.max(r.max_f).max(r.max_g_dev)
    };
    let (f1, f2) = (fd_error(0.04), fd_error(0.02));
    let fd = f1 / f2;
    let pass = (RK4_RATIO[0]..=RK4_RATIO[1]).contains(&rk4) && (FD_RATIO[0]..=FD_RATIO[1]).contains(&fd);
    Ok((
        pass,
        format!("RK4 {e1:.2e} -> {e2:.2e} (ratio {rk4:.2}); FD {f1:.2e} -> {f2:.2e} (ratio {fd:.2})"),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("catenoid recovery", catenoid_recovery),
        ("helicoid fixed point", helicoid_fixed_point),
        ("isometry of every member", isometry_of_every_member),
        ("closed form vs generic pipeline", closed_vs_generic),
        ("BCV to R3 reduction", bcv_reduction),
        ("orthogonal pair", orthogonal_pair),
        ("natural parameter roundtrip", natural_roundtrip),
        ("m = 1 identity", m1_identity),
        ("convergence orders", convergence_orders),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let (pass, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!("{} {}. {name}: {detail}", if pass { "PASS" } else { "FAIL" }, k + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
