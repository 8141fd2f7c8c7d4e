//! A full run: every member of a configured family, generated concurrently,
//! cross-checked against the closed forms where they exist and verified.

use serde::{Deserialize, Serialize};

use crate::bour::{generate_member, BourParams, Branch, Integrator, SurfaceMember};
use crate::config::{Model, RunConfig};
use crate::error::{Error, Result};
use crate::natural::{Generatrix, GeneratrixRecord};
use crate::parallel::map_ordered;
use crate::spaces::{closed_form, ClosedFormFamily};
use crate::verify::{cross_check, isometry_report, orthogonality_report, CrossCheck, IsometryReport, OrthogonalityReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub deviations: CrossCheck,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberReport {
    pub m: f64,
    pub epsilon: Branch,
    pub s_range: [f64; 2],
    pub step: f64,
    pub integrator: Integrator,
    pub samples: usize,
    pub unit_speed_residual: f64,
    pub isometry: IsometryReport,
    pub cross_check: Option<CrossCheckReport>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub space: String,
    pub frame: String,
    pub generatrix: GeneratrixRecord,
    /// `U'` comes from interpolation only, so radicand checks are approximate.
    pub approximate_derivative: bool,
    pub theta0: f64,
    pub seed: u64,
    pub orthogonality: OrthogonalityReport,
    pub members: Vec<MemberReport>,
    pub pass: bool,
}

pub struct MemberOutcome {
    pub params: BourParams,
    pub member: SurfaceMember,
    pub closed: Option<ClosedFormFamily>,
    pub report: MemberReport,
}

pub struct FamilyRun {
    pub model: Model,
    pub generatrix: Generatrix,
    pub members: Vec<MemberOutcome>,
    pub report: RunReport,
}

/// Failure of one stage of a run.
fn stage(name: &'static str, m: f64) -> impl Fn(Error) -> Error {
    move |e| Error::Stage { stage: name, m: Some(m), source: Box::new(e) }
}

/// Generates, cross-checks and verifies one member.
pub fn run_member(model: &Model, u: &Generatrix, params: &BourParams, cfg: &RunConfig) -> Result<MemberOutcome> {
    let m = params.m;
    let member = generate_member(&model.chart, model.frame.as_ref(), u, params, cfg.theta0).map_err(stage("integration", m))?;
    let unit_speed_residual = member.profile.unit_speed_residual(&model.chart).map_err(stage("unit speed check", m))?;
    let (closed, cross) = match model.spec {
        Some(spec) => {
            let closed = closed_form(&spec, u, params).map_err(stage("closed form", m))?;
            let deviations = cross_check(&closed, &member).map_err(stage("cross check", m))?;
            let tol = cfg.tolerances.cross_check;
            let rep = CrossCheckReport { deviations, tolerance: tol, pass: deviations.max() <= tol };
            (Some(closed), Some(rep))
        }
        None => (None, None),
    };
    let grid = cfg.grid.over(params.s_range);
    let isometry = isometry_report(&model.chart, &member, u, &grid, cfg.tolerances.fd_step, cfg.tolerances.isometry);
    let pass = isometry.pass && cross.as_ref().map_or(true, |c| c.pass);
    let report = MemberReport {
        m,
        epsilon: params.epsilon,
        s_range: params.s_range,
        step: params.step,
        integrator: params.integrator,
        samples: member.profile.samples.len(),
        unit_speed_residual,
        isometry,
        cross_check: cross,
        pass,
    };
    Ok(MemberOutcome { params: params.clone(), member, closed, report })
}

/// Runs every `m` of the config concurrently; results keep config order.
pub fn run_family(cfg: &RunConfig) -> Result<FamilyRun> {
    cfg.validate()?;
    let model = cfg.space.model(cfg.gauge).map_err(|e| Error::Stage { stage: "frame", m: None, source: Box::new(e) })?;
    let u = cfg.generatrix()?;
    let s_range = cfg.s_range(&u);
    let params = cfg.m.iter().map(|&m| cfg.params(m, s_range)).collect::<Result<Vec<_>>>()?;
    let outcomes = map_ordered(&params, |p| run_member(&model, &u, p, cfg));
    let members = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    let orthogonality = orthogonality_report(
        &model.chart,
        model.theta.as_ref(),
        Some(model.frame.as_ref()),
        model.sample_region,
        cfg.orthogonality_samples,
        cfg.seed,
        cfg.tolerances.orthogonality_for(model.traced),
    );
    let pass = orthogonality.pass && members.iter().all(|o| o.report.pass);
    let report = RunReport {
        space: model.spec.map_or_else(|| "custom".to_string(), |s| s.label()),
        frame: model.frame.label(),
        generatrix: u.record(),
        approximate_derivative: u.approximate_derivative(),
        theta0: cfg.theta0,
        seed: cfg.seed,
        orthogonality,
        members: members.iter().map(|o| o.report.clone()).collect(),
        pass,
    };
    Ok(FamilyRun { model, generatrix: u, members, report })
}
