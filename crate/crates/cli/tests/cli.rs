use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use odoni_cli::config::RunConfig;
use serde_json::Value;

fn odoni(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_odoni"))
        .args(args)
        .env_remove("ODONI_SEED")
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn certified(dir: &Path) -> (PathBuf, Value) {
    let params = write(dir, "p.toml", "n = 3\nA = \"52/7\"\n");
    let out = odoni(&["certify", s(&params)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let path = dir.join("bundle.json");
    std::fs::write(&path, &out.stdout).unwrap();
    (path, json(&out))
}

#[test]
fn search_finds_parameters() {
    let out = odoni(&["search", "3", "--json"]);
    assert_eq!(code(&out), 0);
    let hits = json(&out);
    assert!(hits.as_array().unwrap().len() >= 3);
    assert_eq!(hits[0]["params"]["n"], 3);
    assert_eq!(hits[0]["params"]["a"], 1);

    let hits = json(&odoni(&["search", "9", "--count", "1"]));
    assert_eq!(hits[0]["params"]["a"], 2);

    let hits = json(&odoni(&["search", "3", "--s-ram", "13"]));
    for h in hits.as_array().unwrap() {
        assert_ne!(h["report"]["p0"], "13");
        assert_ne!(h["report"]["pinf"], "13");
    }
}

#[test]
fn search_with_nothing_found_exits_1() {
    let out = odoni(&["search", "3", "--height-bound", "4"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out), Value::Array(vec![]));
}

#[test]
fn certify_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let (path, bundle) = certified(dir.path());
    let pks: Vec<&str> = bundle["transpositions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["pk"].as_str().unwrap())
        .collect();
    assert_eq!(pks, ["61", "1021"]);
    let out = odoni(&["verify", s(&path)]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["valid"], true);
}

#[test]
fn tampered_certificates_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let (_, bundle) = certified(dir.path());
    let mut tampers = Vec::new();

    let mut b = bundle.clone();
    b["transpositions"][0]["pk"] = "59".into();
    tampers.push(b);
    let mut b = bundle.clone();
    b["eisenstein"]["p0"] = "7".into();
    tampers.push(b);
    let mut b = bundle.clone();
    b["orbit"][1]["c_k"][0] = "3840040359958818".into();
    tampers.push(b);

    for (i, b) in tampers.iter().enumerate() {
        let path = write(dir.path(), &format!("t{i}.json"), &b.to_string());
        let out = odoni(&["verify", s(&path)]);
        assert_eq!(code(&out), 1, "tamper {i}");
        assert_eq!(json(&out)["valid"], false);
    }
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let (path, _) = certified(dir.path());
    let text = std::fs::read_to_string(&path).unwrap();
    let truncated = write(dir.path(), "cut.json", &text[..text.len() / 2]);
    assert_eq!(code(&odoni(&["verify", s(&truncated)])), 2);
    assert_eq!(code(&odoni(&["verify", "/nonexistent/bundle.json"])), 2);
    assert_eq!(code(&odoni(&["frobnicate"])), 2);
    assert_eq!(code(&odoni(&["group", "3", "2", "2", "0"])), 2);

    let bad = write(dir.path(), "bad.toml", "n = 3\nA = \"53/7\"\n");
    let out = odoni(&["certify", s(&bad)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("two_adic_bound"));
    let junk = write(dir.path(), "junk.toml", "n = 3\nA = 52\n");
    assert_eq!(code(&odoni(&["certify", s(&junk)])), 2);
}

#[test]
fn zero_budget_is_existential() {
    let dir = tempfile::tempdir().unwrap();
    let params = write(dir.path(), "p.toml", "n = 3\nA = \"52/7\"\n");
    let out = odoni(&["certify", s(&params), "--budget", "0"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("existential"));
    let bundle = json(&out);
    assert!(bundle["transpositions"][0]["nonsquare_witness"].is_object());
    let path = write(dir.path(), "b.json", &bundle.to_string());
    assert_eq!(code(&odoni(&["verify", s(&path)])), 0);
}

#[test]
fn output_is_deterministic_and_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let params = write(dir.path(), "p.toml", "n = 3\nA = \"52/7\"\n");
    let a = odoni(&["certify", s(&params)]).stdout;
    let b = odoni(&["certify", s(&params)]).stdout;
    assert_eq!(a, b);

    let out = Command::new(env!("CARGO_BIN_EXE_odoni"))
        .args(["certify", s(&params)])
        .env("ODONI_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(json(&out)["seed"], 42);
    let out = Command::new(env!("CARGO_BIN_EXE_odoni"))
        .args(["certify", s(&params), "--seed", "7"])
        .env("ODONI_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(json(&out)["seed"], 7);
}

#[test]
fn config_file_round_trips_and_applies() {
    let mut cfg = RunConfig {
        seed: 9,
        workers: Some(4),
        output: Some(PathBuf::from("out.json")),
        ..RunConfig::default()
    };
    cfg.budget.effort = 12;
    cfg.certify.k_max = 1;
    cfg.sample.p_max = 500;
    let text = cfg.to_toml();
    assert_eq!(toml::from_str::<RunConfig>(&text).unwrap(), cfg);
    assert_eq!(toml::from_str::<RunConfig>("").unwrap(), RunConfig::default());
    assert!(toml::from_str::<RunConfig>("sed = 1").is_err());

    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::default();
    cfg.certify.k_max = 1;
    cfg.output = Some(dir.path().join("b.json"));
    let conf = write(dir.path(), "run.toml", &cfg.to_toml());
    let params = write(dir.path(), "p.toml", "n = 3\nA = \"52/7\"\n");
    assert_eq!(code(&odoni(&["certify", s(&params), "--config", s(&conf)])), 0);
    let bundle: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("b.json")).unwrap()).unwrap();
    assert_eq!(bundle["transpositions"].as_array().unwrap().len(), 1);
}

#[test]
fn group_reports() {
    let out = odoni(&["group", "2", "1", "3", "0"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["contains_gamma"], true);
    assert_eq!(v["order"], 128);

    let out = odoni(&["group", "2", "1", "3", "0", "--drop", "sigma-j"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["order"], 8);
}

#[test]
fn sample_streams_ndjson() {
    let out = odoni(&["sample", "--coeffs", "1,-1,1", "--k", "2", "--p-max", "2000", "--workers", "2"]);
    assert_eq!(code(&out), 0);
    let lines: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let samples: Vec<&Value> = lines.iter().filter(|l| l["kind"] == "sample").collect();
    assert_eq!(samples[0]["p"], 2);
    assert!(samples.iter().all(|s| s["p"] != 3 && s["p"] != 13));
    let density = lines.iter().find(|l| l["kind"] == "density").unwrap();
    assert_eq!(density["predicted"][1], 0.375);
    assert_eq!(density["primes_used"].as_u64().unwrap() as usize, samples.len());
    assert_eq!(lines.last().unwrap()["kind"], "group_comparison");

    let one = odoni(&["sample", "--coeffs", "1,-1,1", "--p-max", "2000", "--workers", "1"]).stdout;
    let four = odoni(&["sample", "--coeffs", "1,-1,1", "--p-max", "2000", "--workers", "4"]).stdout;
    assert_eq!(one, four);
}

#[test]
fn sample_accepts_a_params_file() {
    let dir = tempfile::tempdir().unwrap();
    let params = write(dir.path(), "p.toml", "n = 3\nA = \"52/7\"\n");
    let out = odoni(&["sample", s(&params), "--k", "1", "--p-max", "200"]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&odoni(&["sample", "--k", "1"])), 2);
}

#[test]
fn orbit_and_polygon() {
    let dir = tempfile::tempdir().unwrap();
    let params = write(dir.path(), "p.toml", "n = 3\nA = \"52/7\"\n");
    let out = odoni(&["orbit", s(&params), "--k", "2"]);
    assert_eq!(code(&out), 0);
    let orbit = json(&out);
    assert_eq!(orbit[0]["c_k"], serde_json::json!(["12139", "1323"]));
    assert_eq!(orbit[1]["ck_plus"], "3840040359958819");

    let bad = write(dir.path(), "bad.toml", "n = 3\nA = \"53/7\"\n");
    assert_eq!(code(&odoni(&["orbit", s(&bad), "--k", "1"])), 1);

    // X^2 - 2: two roots of valuation 1/2 at 2.
    let out = odoni(&["polygon", "--coeffs", "-2,0,1", "--p", "2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["root_valuations"][0]["valuation"], serde_json::json!(["1", "2"]));
    assert_eq!(v["root_valuations"][0]["count"], 2);
    assert_eq!(code(&odoni(&["polygon", "--coeffs", "-2,0,1", "--p", "4"])), 2);

    let out = odoni(&["polygon", s(&params), "--k", "2", "--p", "13"]);
    assert_eq!(json(&out)["degree"], 9);
}
