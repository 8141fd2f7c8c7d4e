//! File outputs: profile CSV, OBJ meshes and serialized members.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::bour::{assemble_member, BourParams, Branch, Integrator, ProfileCurve, SurfaceMember, VerticalShift};
use crate::chart::Point3;
use crate::config::{GridConfig, SpaceConfig, Tolerances};
use crate::error::{Error, Result};
use crate::natural::{Generatrix, GeneratrixRecord};
use crate::spaces::{to_cartesian, SpaceSpec};
use crate::surface::ParametrizedSurface;
use crate::verify::{isometry_report, Grid, IsometryReport};

#[derive(Debug, Serialize)]
struct ProfileRow {
    s: f64,
    x1: f64,
    x2: f64,
    omega: f64,
    theta: Option<f64>,
    #[serde(rename = "V")]
    v: f64,
}

/// CSV `s,x1,x2,omega,theta,V`, one row per integration node.
pub fn write_profile_csv(member: &SurfaceMember, writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for (p, v) in member.profile.samples.iter().zip(&member.shift.v) {
        w.serialize(ProfileRow { s: p.s, x1: p.x1, x2: p.x2, omega: p.omega, theta: p.theta, v: *v })?;
    }
    w.flush()?;
    Ok(())
}

/// Vertices of `surface` on `grid` (row-major, `s` outer) and two triangles
/// per cell, as 0-based indices.
pub fn mesh(
    surface: &dyn ParametrizedSurface,
    display: &dyn Fn(Point3) -> Point3,
    grid: &Grid,
) -> Result<(Vec<Point3>, Vec<[usize; 3]>)> {
    let (s_nodes, t_nodes) = (grid.s_nodes(), grid.t_nodes());
    let (ns, nt) = (s_nodes.len(), t_nodes.len());
    if ns < 2 || nt < 2 {
        return Err(Error::Params("a mesh needs at least 2 × 2 grid nodes".into()));
    }
    let mut vertices = Vec::with_capacity(ns * nt);
    for &s in &s_nodes {
        for &t in &t_nodes {
            vertices.push(display(surface.point(s, t)?));
        }
    }
    let mut faces = Vec::with_capacity(2 * (ns - 1) * (nt - 1));
    for i in 0..ns - 1 {
        for j in 0..nt - 1 {
            let (a, b, c, d) = (i * nt + j, (i + 1) * nt + j, (i + 1) * nt + j + 1, i * nt + j + 1);
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    Ok((vertices, faces))
}

/// Display map of a space: cartesian for built-ins, adapted coordinates
/// otherwise.
pub fn display_map(spec: Option<SpaceSpec>) -> impl Fn(Point3) -> Point3 {
    move |p| match spec {
        Some(spec) => to_cartesian(&spec, p),
        None => p,
    }
}

/// Comment lines naming the space and the member.
pub fn obj_header(space: &SpaceConfig, m: f64, epsilon: Branch) -> String {
    let label = space.spec().map_or_else(|| "custom".to_string(), |s| s.label());
    format!("{label}\nm = {m}, epsilon = {}", epsilon.sign())
}

pub fn write_obj(vertices: &[Point3], faces: &[[usize; 3]], header: &str, mut w: impl Write) -> Result<()> {
    for line in header.lines() {
        writeln!(w, "# {line}")?;
    }
    for v in vertices {
        writeln!(w, "v {} {} {}", v[0], v[1], v[2])?;
    }
    for f in faces {
        writeln!(w, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
    }
    Ok(())
}

/// A member with everything needed to rebuild and re-check it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberRecord {
    pub space: SpaceConfig,
    pub generatrix: GeneratrixRecord,
    pub m: f64,
    pub epsilon: Branch,
    pub s_range: [f64; 2],
    pub step: f64,
    pub integrator: Integrator,
    pub grid: GridConfig,
    pub tolerances: Tolerances,
    pub profile: ProfileCurve,
    pub shift: VerticalShift,
}

impl MemberRecord {
    pub fn new(
        space: &SpaceConfig,
        generatrix: &Generatrix,
        params: &BourParams,
        grid: GridConfig,
        tolerances: Tolerances,
        member: &SurfaceMember,
    ) -> Self {
        Self {
            space: space.clone(),
            generatrix: generatrix.record(),
            m: params.m,
            epsilon: params.epsilon,
            s_range: params.s_range,
            step: params.step,
            integrator: params.integrator,
            grid,
            tolerances,
            profile: member.profile.clone(),
            shift: member.shift.clone(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("member record: {e}")))
    }

    pub fn params(&self) -> Result<BourParams> {
        Ok(BourParams::new(self.m, self.epsilon, self.s_range)?.with_step(self.step)?.with_integrator(self.integrator))
    }

    pub fn member(&self) -> Result<SurfaceMember> {
        let label = self.space.chart()?.label().to_string();
        assemble_member(self.profile.clone(), self.shift.clone(), &self.params()?, &label)
    }

    /// Recomputes the isometry report from the stored samples.
    pub fn verify(&self, tol: Option<f64>) -> Result<IsometryReport> {
        let chart = self.space.chart()?;
        let member = self.member()?;
        let u = Generatrix::from_record(&self.generatrix)?;
        let grid = self.grid.over(member.s_range());
        let tol = tol.unwrap_or(self.tolerances.isometry);
        Ok(isometry_report(&chart, &member, &u, &grid, self.tolerances.fd_step, tol))
    }

    pub fn obj(&self, mut w: impl Write) -> Result<()> {
        let member = self.member()?;
        let display = display_map(self.space.spec());
        let (v, f) = mesh(&member, &display, &self.grid.over(member.s_range()))?;
        write_obj(&v, &f, &obj_header(&self.space, self.m, self.epsilon), &mut w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bour::generate_member;
    use crate::spaces::{analytic_frame, Gauge};

    fn sample() -> (MemberRecord, SurfaceMember) {
        let spec = SpaceSpec::euclidean_helicoidal(1.0);
        let frame = analytic_frame(&spec, Gauge::Polar).unwrap();
        let u = Generatrix::from_expression("sqrt(s^2+2)", [0.5, 1.5]).unwrap();
        let p = BourParams::new(1.0, Branch::Plus, [0.5, 1.5]).unwrap().with_step(0.01).unwrap();
        let m = generate_member(frame.chart(), &frame, &u, &p, 0.0).unwrap();
        let grid = GridConfig { s_count: 3, t_count: 4, t_range: [0.0, 1.0] };
        (MemberRecord::new(&SpaceConfig::builtin(spec), &u, &p, grid, Tolerances::default(), &m), m)
    }

    #[test]
    fn mesh_layout() {
        let (_, m) = sample();
        let grid = Grid { s_range: [0.5, 1.5], t_range: [0.0, 1.0], s_count: 3, t_count: 4 };
        let (v, f) = mesh(&m, &|p| p, &grid).unwrap();
        assert_eq!(v.len(), 12);
        assert_eq!(f.len(), 12);
        assert_eq!(f[0], [0, 4, 5]);
        assert_eq!(f[1], [0, 5, 1]);
        assert_eq!(v[5], m.point(1.0, 1.0 / 3.0).unwrap());
        let one = Grid { s_count: 1, ..grid };
        assert!(mesh(&m, &|p| p, &one).is_err());
    }

    #[test]
    fn obj_text() {
        let (rec, _) = sample();
        let mut out = Vec::new();
        rec.obj(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("# euclidean helicoidal (a = 1)\n# m = 1, epsilon = 1\nv "));
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 12);
        assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 12);
        assert!(text.contains("\nf 1 5 6\n"));
    }

    #[test]
    fn profile_csv_header_and_rows() {
        let (_, m) = sample();
        let mut out = Vec::new();
        write_profile_csv(&m, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "s,x1,x2,omega,theta,V");
        assert_eq!(lines.count(), 101);
    }

    #[test]
    fn record_roundtrip_and_verify() {
        let (rec, m) = sample();
        let text = serde_json::to_string_pretty(&rec).unwrap();
        let back = MemberRecord::from_json(&text).unwrap();
        assert_eq!(back, rec);
        let rebuilt = back.member().unwrap();
        assert_eq!(rebuilt.point(0.77, 0.3).unwrap(), m.point(0.77, 0.3).unwrap());
        assert!(back.verify(None).unwrap().pass);
        assert!(MemberRecord::from_json("{}").is_err());
    }
}
