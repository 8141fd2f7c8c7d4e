use bour_web::{demo_config_json, generate_json};

#[test]
fn demo_configs_generate_meshes() {
    for name in ["catenoid", "helicoid", "bcv"] {
        let mut cfg: serde_json::Value = serde_json::from_str(&demo_config_json(name).unwrap()).unwrap();
        cfg["grid"]["s_count"] = 5.into();
        cfg["grid"]["t_count"] = 4.into();
        let out: serde_json::Value = serde_json::from_str(&generate_json(&cfg.to_string()).unwrap()).unwrap();
        assert_eq!(out["report"]["pass"], true, "{name}");
        let member = &out["members"][0];
        assert_eq!(member["vertices"].as_array().unwrap().len(), 20);
        assert_eq!(member["faces"].as_array().unwrap().len(), 24);
        assert!(member["profile"].as_array().unwrap().len() > 100);
    }
}

#[test]
fn errors_come_back_as_messages() {
    assert!(demo_config_json("torus").unwrap_err().contains("unknown demo"));
    assert!(generate_json("{").unwrap_err().starts_with("config:"));
    let bad = demo_config_json("helicoid").unwrap().replace("\"m\": [\n    1.0\n  ]", "\"m\": [2.0]");
    assert!(generate_json(&bad).unwrap_err().contains("radicand is negative"), "{bad}");
}
