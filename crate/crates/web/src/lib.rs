//! Browser bindings: demo presets, family generation with meshes, and a
//! generatrix preview. Each binding wraps a plain function returning JSON.

use bour_core::config::RunConfig;
use bour_core::export::{display_map, mesh};
use bour_core::expr::Expression;
use bour_core::pipeline::{run_family, RunReport};
use bour_core::Point3;
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct MemberMesh {
    m: f64,
    vertices: Vec<Point3>,
    faces: Vec<[usize; 3]>,
    profile: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct Generated {
    report: RunReport,
    members: Vec<MemberMesh>,
}

#[derive(Serialize)]
struct GeneratrixSamples {
    s: Vec<f64>,
    u: Vec<f64>,
    du: Vec<f64>,
}

fn to_json(value: &impl Serialize) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

/// Pretty-printed config of a built-in demo.
pub fn demo_config_json(name: &str) -> Result<String, String> {
    let cfg = RunConfig::demo(name).map_err(|e| e.to_string())?;
    serde_json::to_string_pretty(&cfg).map_err(|e| e.to_string())
}

/// Runs a family from config JSON; returns the report and one mesh per member.
pub fn generate_json(config: &str) -> Result<String, String> {
    let cfg = RunConfig::from_json(config).map_err(|e| e.to_string())?;
    let run = run_family(&cfg).map_err(|e| e.to_string())?;
    let display = display_map(run.model.spec);
    let members = run
        .members
        .iter()
        .map(|o| {
            let (vertices, faces) = mesh(&o.member, &display, &cfg.grid.over(o.params.s_range)).map_err(|e| e.to_string())?;
            let profile = o.member.profile.points();
            Ok(MemberMesh { m: o.params.m, vertices, faces, profile })
        })
        .collect::<Result<Vec<_>, String>>()?;
    to_json(&Generated { report: run.report, members })
}

/// `U` and `U'` at `n ≥ 2` equally spaced points of `[lo, hi]`.
pub fn sample_generatrix_json(text: &str, lo: f64, hi: f64, n: usize) -> Result<String, String> {
    let expr = Expression::parse(text).map_err(|e| e.to_string())?;
    if n < 2 || !(lo < hi) {
        return Err("need n >= 2 and lo < hi".into());
    }
    let mut out = GeneratrixSamples { s: Vec::with_capacity(n), u: Vec::with_capacity(n), du: Vec::with_capacity(n) };
    for k in 0..n {
        let s = lo + (hi - lo) * k as f64 / (n - 1) as f64;
        let (u, du) = expr.eval_with_derivative(s);
        out.s.push(s);
        out.u.push(u);
        out.du.push(du);
    }
    to_json(&out)
}

#[wasm_bindgen(js_name = demoConfig)]
pub fn demo_config(name: &str) -> Result<String, JsError> {
    demo_config_json(name).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn generate(config: &str) -> Result<String, JsError> {
    generate_json(config).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = sampleGeneratrix)]
pub fn sample_generatrix(text: &str, lo: f64, hi: f64, n: usize) -> Result<String, JsError> {
    sample_generatrix_json(text, lo, hi, n).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preview_values_and_errors() {
        let v: serde_json::Value = serde_json::from_str(&sample_generatrix_json("sqrt(s^2+1)", 0.0, 1.0, 3).unwrap()).unwrap();
        assert_eq!(v["s"][2], 1.0);
        assert!((v["u"][2].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!((v["du"][2].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(sample_generatrix_json("cosh(s", 0.0, 1.0, 3).unwrap_err().contains("byte 6"));
        assert!(sample_generatrix_json("s", 1.0, 0.0, 3).is_err());
    }
}
