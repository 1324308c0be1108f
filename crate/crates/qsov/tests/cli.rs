use std::process::Command;

fn qsov(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qsov")).args(args).output().expect("binary runs")
}

fn config(name: &str) -> String {
    format!("{}/../../configs/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn temp(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("qsov-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn verify_bundled_n2_config() {
    let report = temp("report.json", "");
    let out = qsov(&["verify", "--config", &config("n2_two_site.conf"), "--report", &report]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names.len(), 16);
    assert!(names.contains(&"lemma2") && names.contains(&"theorem1"));
    assert!(v["checks"].as_array().unwrap().iter().all(|c| !c["anchor"].as_str().unwrap().is_empty()));
}

#[test]
fn failing_check_exits_one() {
    let out = qsov(&["verify", "--config", &config("n4_one_site.conf"), "--report", &temp("r4.json", "")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn configuration_errors_exit_two() {
    let q1 = temp("q1.conf", "N = 3\nq = 1\ninhomogeneities = 2\n");
    assert_eq!(qsov(&["verify", "--config", &q1]).status.code(), Some(2));
    let dup = temp("dup.conf", "N = 3\ninhomogeneities = 2, 2\n");
    assert_eq!(qsov(&["verify", "--config", &dup]).status.code(), Some(2));
    assert_eq!(qsov(&["verify", "--q", "-1"]).status.code(), Some(2));
    assert_eq!(qsov(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn dump_operator_b() {
    let out = qsov(&["dump-operator", "--which", "B", "--at", "3/2", "--config", &config("n2_two_site.conf")]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["shape"], serde_json::json!([4, 4]));
    assert_eq!(v["spaces"][0]["variance"], "out");
    assert_eq!(v["data"].as_array().unwrap().len(), 16);
}

#[test]
fn spectra_on_genus_zero_model() {
    let cfg = temp("g0.conf", "N = 2\nkinds = cyclic\ninhomogeneities = 2\n");
    let json = temp("g0.json", "");
    let out = qsov(&["spectra", "--config", &cfg, "--json", &json]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["genus"], 0);
    for e in v["report"]["eigenvectors"].as_array().unwrap() {
        assert!(e["zroots"].as_array().unwrap().is_empty());
    }
}

#[test]
fn seed_override_is_deterministic() {
    let a = qsov(&["verify", "--config", &config("n2_two_site.conf"), "--seed", "9"]);
    let b = qsov(&["verify", "--config", &config("n2_two_site.conf"), "--seed", "9"]);
    let strip = |o: &std::process::Output| {
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        for c in v["checks"].as_array_mut().unwrap() {
            c["wall_time_ms"] = 0.into();
        }
        v
    };
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(strip(&a)["config"]["seed"], "9");
}
