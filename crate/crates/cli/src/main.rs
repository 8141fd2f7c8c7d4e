use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bour_core::config::{NaturalConfig, RunConfig};
use bour_core::export::{display_map, mesh, obj_header, write_obj, write_profile_csv, MemberRecord};
use bour_core::natural::{LiftedCurve, NaturalSurface};
use bour_core::pipeline::{run_family, FamilyRun};
use bour_core::verify::isometry_report;
use bour_core::{Error, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "bourgen", version, about = "Generate and verify Bour families of invariant surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args, Clone)]
struct Flags {
    /// JSON run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Exit with status 2 when any verification fails.
    #[arg(long, global = true)]
    strict: bool,
    /// Integration step, overriding the config.
    #[arg(long, global = true)]
    step: Option<f64>,
    /// Isometry and cross-check tolerance, overriding the config.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate every member of a configured family and verify it.
    Family,
    /// Change a lifted curve to natural parameters and extract U(s).
    Natural,
    /// Re-check a serialized member.
    Verify { member: PathBuf },
    /// Re-export the OBJ mesh of a serialized member.
    Mesh { member: PathBuf },
    /// Run a built-in demo: catenoid, helicoid or bcv.
    Demo { name: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) if cli.flags.strict => ExitCode::from(2),
        Ok(false) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<bool> {
    let flags = &cli.flags;
    match &cli.command {
        Command::Family => {
            let cfg = load_run_config(flags)?;
            let out = out_dir(flags, cfg.output.as_deref(), "out");
            family(cfg, &out)
        }
        Command::Demo { name } => {
            let mut cfg = RunConfig::demo(name)?;
            apply_overrides(&mut cfg, flags);
            cfg.validate()?;
            let out = out_dir(flags, None, &format!("out/{name}"));
            family(cfg, &out)
        }
        Command::Natural => natural(flags),
        Command::Verify { member } => {
            let record = read_member(member)?;
            let report = record.verify(flags.tol)?;
            let text = serde_json::to_string_pretty(&report)?;
            match &flags.out {
                Some(dir) => {
                    fs::create_dir_all(dir)?;
                    write_text(&dir.join(format!("{}.report.json", stem(member))), &text)?;
                }
                None => println!("{text}"),
            }
            eprintln!(
                "{}: max|E-1| {:.3e}, max|F| {:.3e}, max|G-U^2| {:.3e}",
                if report.pass { "pass" } else { "FAIL" },
                report.max_e_dev,
                report.max_f,
                report.max_g_dev
            );
            Ok(report.pass)
        }
        Command::Mesh { member } => {
            let record = read_member(member)?;
            let dir = out_dir(flags, None, ".");
            fs::create_dir_all(&dir)?;
            let path = dir.join(format!("{}.obj", stem(member)));
            let file = fs::File::create(&path).map_err(|e| io_error(&path, e))?;
            record.obj(BufWriter::new(file))?;
            eprintln!("wrote {}", path.display());
            Ok(true)
        }
    }
}

fn load_run_config(flags: &Flags) -> Result<RunConfig> {
    let path = flags.config.as_ref().ok_or_else(|| Error::Config("--config PATH is required".into()))?;
    let mut cfg = RunConfig::from_path(path)?;
    apply_overrides(&mut cfg, flags);
    cfg.validate()?;
    Ok(cfg)
}

fn apply_overrides(cfg: &mut RunConfig, flags: &Flags) {
    if let Some(step) = flags.step {
        cfg.step = step;
    }
    if let Some(tol) = flags.tol {
        cfg.tolerances.isometry = tol;
        cfg.tolerances.cross_check = tol;
    }
}

fn out_dir(flags: &Flags, configured: Option<&Path>, fallback: &str) -> PathBuf {
    flags.out.clone().or_else(|| configured.map(Path::to_path_buf)).unwrap_or_else(|| PathBuf::from(fallback))
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| io_error(path, e))
}

fn stem(path: &Path) -> String {
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "member".into());
    name.strip_suffix(".member").map(str::to_string).unwrap_or(name)
}

fn read_member(path: &Path) -> Result<MemberRecord> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    MemberRecord::from_json(&text)
}

fn family(cfg: RunConfig, out: &Path) -> Result<bool> {
    let run = run_family(&cfg)?;
    fs::create_dir_all(out).map_err(|e| io_error(out, e))?;
    write_family(&cfg, &run, out)?;
    for r in &run.report.members {
        let cross = r
            .cross_check
            .as_ref()
            .map(|c| format!(", closed form {:.3e}", c.deviations.max()))
            .unwrap_or_default();
        println!(
            "m = {}: {} (max|E-1| {:.3e}, max|F| {:.3e}, max|G-U^2| {:.3e}{cross})",
            r.m,
            if r.pass { "pass" } else { "FAIL" },
            r.isometry.max_e_dev,
            r.isometry.max_f,
            r.isometry.max_g_dev
        );
    }
    let o = &run.report.orthogonality;
    println!("orthogonality: {} (max pairing {:.3e}, seed {})", if o.pass { "pass" } else { "FAIL" }, o.max_pairing, o.seed);
    if run.report.approximate_derivative {
        println!("warning: U' is interpolated from a table, radicand checks are approximate");
    }
    println!("wrote {}", out.display());
    Ok(run.report.pass)
}

fn write_family(cfg: &RunConfig, run: &FamilyRun, out: &Path) -> Result<()> {
    let display = display_map(run.model.spec);
    for o in &run.members {
        let base = format!("member_m{}", o.params.m);
        let csv = out.join(format!("{base}.profile.csv"));
        write_profile_csv(&o.member, BufWriter::new(fs::File::create(&csv).map_err(|e| io_error(&csv, e))?))?;

        let grid = cfg.grid.over(o.params.s_range);
        let (v, f) = mesh(&o.member, &display, &grid)?;
        let obj = out.join(format!("{base}.obj"));
        let header = obj_header(&cfg.space, o.params.m, o.params.epsilon);
        write_obj(&v, &f, &header, BufWriter::new(fs::File::create(&obj).map_err(|e| io_error(&obj, e))?))?;

        let record = MemberRecord::new(&cfg.space, &run.generatrix, &o.params, cfg.grid, cfg.tolerances, &o.member);
        write_text(&out.join(format!("{base}.member.json")), &serde_json::to_string_pretty(&record)?)?;
    }
    write_text(&out.join("report.json"), &serde_json::to_string_pretty(&run.report)?)
}

#[derive(Serialize)]
struct NaturalReport {
    curve: PathBuf,
    samples: usize,
    s_range: [f64; 2],
    isometry: bour_core::verify::IsometryReport,
    pass: bool,
}

fn natural(flags: &Flags) -> Result<bool> {
    let path = flags.config.as_ref().ok_or_else(|| Error::Config("--config PATH is required".into()))?;
    let mut cfg = NaturalConfig::from_path(path)?;
    if let Some(tol) = flags.tol {
        cfg.tolerances.isometry = tol;
    }
    let chart = cfg.space.chart()?;
    let curve = LiftedCurve::from_path(&cfg.curve)?;
    let surface = NaturalSurface::from_curve(&chart, &curve)?;
    let params = surface.parameters();
    let s_range = [params.s[0], params.s[params.s.len() - 1]];
    let u = surface.generatrix();
    let report = isometry_report(&chart, &surface, u, &cfg.grid.over(s_range), cfg.tolerances.fd_step, cfg.tolerances.isometry);

    let out = out_dir(flags, cfg.output.as_deref(), "out");
    fs::create_dir_all(&out).map_err(|e| io_error(&out, e))?;
    let csv = out.join("generatrix.csv");
    u.write_csv(BufWriter::new(fs::File::create(&csv).map_err(|e| io_error(&csv, e))?), params.s.len() - 1)?;
    let (v, f) = mesh(&surface, &display_map(cfg.space.spec()), &cfg.grid.over(s_range))?;
    let obj = out.join("natural.obj");
    write_obj(&v, &f, "natural parametrization", BufWriter::new(fs::File::create(&obj).map_err(|e| io_error(&obj, e))?))?;
    let summary = NaturalReport { curve: cfg.curve.clone(), samples: params.s.len(), s_range, pass: report.pass, isometry: report };
    write_text(&out.join("natural_report.json"), &serde_json::to_string_pretty(&summary)?)?;
    println!(
        "natural parameters: s in [{}, {}], {}: max|E-1| {:.3e}, max|F| {:.3e}, max|G-U^2| {:.3e}",
        s_range[0],
        s_range[1],
        if summary.pass { "pass" } else { "FAIL" },
        summary.isometry.max_e_dev,
        summary.isometry.max_f,
        summary.isometry.max_g_dev
    );
    println!("wrote {}", out.display());
    Ok(summary.pass)
}
