use bour_core::bour::{generate_member, BourParams, Branch};
use bour_core::config::RunConfig;
use bour_core::export::{mesh, MemberRecord};
use bour_core::natural::Generatrix;
use bour_core::spaces::{analytic_frame, closed_form, Gauge, SpaceSpec};
use bour_core::verify::{cross_check, isometry_report, Grid};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    // m^2 (s^2 + c) - m^4 s^2 - 1 stays positive on this box.
    #[test]
    fn realizable_members_are_isometric(m in 0.9f64..1.2, c in 1.5f64..3.0, minus in any::<bool>()) {
        let spec = SpaceSpec::euclidean_helicoidal(1.0);
        let frame = analytic_frame(&spec, Gauge::Polar).unwrap();
        let s_range = [0.5, 1.0];
        let u = Generatrix::from_expression(&format!("sqrt(s^2+{c})"), s_range).unwrap();
        let eps = if minus { Branch::Minus } else { Branch::Plus };
        let p = BourParams::new(m, eps, s_range).unwrap().with_step(0.01).unwrap();
        let member = generate_member(frame.chart(), &frame, &u, &p, 0.0).unwrap();

        let grid = Grid { s_range, t_range: [0.0, 2.0], s_count: 6, t_count: 4 };
        let r = isometry_report(frame.chart(), &member, &u, &grid, 1e-5, 1e-5);
        prop_assert!(r.pass, "{r:?}");

        let closed = closed_form(&spec, &u, &p).unwrap();
        prop_assert!(cross_check(&closed, &member).unwrap().max() < 1e-6);

        let (v, f) = mesh(&member, &|q| q, &grid).unwrap();
        prop_assert_eq!(v.len(), 24);
        prop_assert_eq!(f.len(), 30);
        prop_assert!(f.iter().flatten().all(|&k| k < v.len()));
    }
}

#[test]
fn demo_members_survive_serialization() {
    let cfg = RunConfig::demo("bcv").unwrap();
    let run = bour_core::pipeline::run_family(&cfg).unwrap();
    let o = &run.members[0];
    let record = MemberRecord::new(&cfg.space, &run.generatrix, &o.params, cfg.grid, cfg.tolerances, &o.member);
    let back = MemberRecord::from_json(&serde_json::to_string(&record).unwrap()).unwrap();
    assert_eq!(back, record);
    let report = back.verify(None).unwrap();
    assert_eq!(report, run.report.members[0].isometry);
}
