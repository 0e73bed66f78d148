use std::process::{Command, Output};

fn orbitkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn mu_emits_orbit_point_json() {
    let out = orbitkit(&[
        "mu",
        "--n",
        "2",
        "--lambda",
        "1,-1",
        "--point",
        r#"{"sigma":[0,1],"z":{"0,1":{"re":{"num":"1","den":"2"},"im":{"num":"0","den":"1"}}},"xi":{}}"#,
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // xi = 0 means w = 0, so mu = Ad(u_z) lambda^vee; check a corner entry
    assert_eq!(v["matrix"]["n"], 2);
    assert_eq!(v["matrix"]["entries"][1][0]["re"]["num"], "0");
    assert_eq!(v["matrix"]["entries"][0][1]["re"]["num"], "-1");
    assert!(v["witness"].is_object());
}

#[test]
fn transition_round_trips() {
    let point = r#"{"sigma":[0,1],"z":{"0,1":{"re":{"num":"1","den":"3"},"im":{"num":"0","den":"1"}}},"xi":{"0,1":{"re":{"num":"2","den":"5"},"im":{"num":"0","den":"1"}}}}"#;
    let out = orbitkit(&["transition", "--lambda", "1,-1", "--point", point, "--tau", "1,0"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let moved = stdout(&out);
    let back = orbitkit(&["transition", "--lambda", "1,-1", "--point", moved.trim(), "--tau", "0,1"]);
    assert!(back.status.success());
    let original: serde_json::Value = serde_json::from_str(point).unwrap();
    let returned: serde_json::Value = serde_json::from_str(&stdout(&back)).unwrap();
    assert_eq!(original, returned);
}

#[test]
fn action_with_identity_fixes_the_point() {
    let point = r#"{"sigma":[0,1],"z":{"0,1":{"re":{"num":"1","den":"2"},"im":{"num":"0","den":"1"}}},"xi":{"0,1":{"re":{"num":"3","den":"4"},"im":{"num":"0","den":"1"}}}}"#;
    let g = r#"{"n":2,"entries":[[{"re":{"num":"1","den":"1"},"im":{"num":"0","den":"1"}},{"re":{"num":"0","den":"1"},"im":{"num":"0","den":"1"}}],[{"re":{"num":"0","den":"1"},"im":{"num":"0","den":"1"}},{"re":{"num":"1","den":"1"},"im":{"num":"0","den":"1"}}]]}"#;
    let out = orbitkit(&[
        "action", "--lambda", "1,-1", "--point", point, "--g", g, "--tau", "0,1",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let original: serde_json::Value = serde_json::from_str(point).unwrap();
    let returned: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(original, returned);
}

#[test]
fn verify_all_single_config_passes_and_is_deterministic() {
    let args = [
        "verify-all", "--lambda", "3,1,0", "--samples", "4", "--seed", "9",
    ];
    let a = orbitkit(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let b = orbitkit(&args);
    assert_eq!(a.stdout, b.stdout, "reports must be byte-identical");
    let with_jobs = orbitkit(&[
        "verify-all", "--lambda", "3,1,0", "--samples", "4", "--seed", "9", "--jobs", "2",
    ]);
    assert_eq!(a.stdout, with_jobs.stdout, "job count must not change the report");
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["schema"], "1");
    assert_eq!(v["passed"], true);
    assert_eq!(v["configs"][0]["checks"].as_array().unwrap().len(), 5);
}

#[test]
fn verify_all_jobs_env_variable() {
    let out = Command::new(env!("CARGO_BIN_EXE_orbitkit"))
        .args(["verify-all", "--lambda", "1,-1", "--samples", "3", "--seed", "2"])
        .env("ORBITKIT_JOBS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn verify_all_with_scale_check() {
    let out = orbitkit(&[
        "verify-all", "--lambda", "1,-1", "--samples", "3", "--seed", "4", "--scale", "5/3",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let checks = v["configs"][0]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 6);
    assert!(checks.iter().any(|c| c["check"] == "scaling" && c["pass"] == 3));
}

#[test]
fn verify_all_reads_config_file() {
    let dir = std::env::temp_dir().join("orbitkit-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("config.json");
    let report = dir.join("report.json");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"lambda":"2,0,0,-1","samples":2,"seed":3,"output":{:?}}}"#,
            report.to_str().unwrap()
        ),
    )
    .unwrap();
    let out = orbitkit(&["verify-all", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["samples"], 2);
    assert_eq!(v["configs"][0]["name"], "custom");
}

#[test]
fn bad_lambda_is_a_config_error() {
    let out = orbitkit(&["verify-all", "--lambda", "1,1", "--samples", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad lambda"));
}

#[test]
fn unsorted_lambda_rejected() {
    let out = orbitkit(&["verify-all", "--lambda", "1,0,1", "--samples", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn examples_fixtures_pass() {
    for case in ["sl2", "gl3", "supq"] {
        let out = orbitkit(&["examples", "--case", case]);
        assert!(out.status.success(), "case {case}");
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(v["schema"], "1");
        assert_eq!(v["passed"], true);
        for rec in v["records"].as_array().unwrap() {
            assert_eq!(rec["agree"], true, "case {case}");
        }
    }
}

#[test]
fn unknown_example_case_fails() {
    let out = orbitkit(&["examples", "--case", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}
