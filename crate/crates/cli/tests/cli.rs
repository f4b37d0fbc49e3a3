use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn solzeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_solzeta"))
        .args(args)
        .env_remove("ZETA_PRECISION_BITS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("json output")
}

/// Data rows of a CSV artifact as `(n, value)`.
fn rows(o: &Output) -> Vec<(String, String)> {
    stdout(o)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.to_string(), b.to_string())
        })
        .collect()
}

fn values(o: &Output) -> Vec<String> {
    rows(o).into_iter().map(|(_, v)| v).collect()
}

#[test]
fn seq_counts_and_rejects_units() {
    let o = solzeta(&["seq", "--r", "2", "--s", "2,3", "--n", "8"]);
    assert_eq!(code(&o), 0);
    assert_eq!(values(&o), ["1", "1", "7", "5", "31", "7", "127", "85"]);
    assert!(stdout(&o).starts_with("# config={"));

    let o = solzeta(&["seq", "--r", "2", "--t", "3", "--n", "6"]);
    assert_eq!(code(&o), 0);
    assert_eq!(values(&o), ["1", "3", "1", "3", "1", "9"]);

    assert_eq!(code(&solzeta(&["seq", "--r", "1", "--s", "3", "--n", "4"])), 2);
    assert_eq!(code(&solzeta(&["seq", "--r", "-1", "--n", "4"])), 2);
    assert_eq!(code(&solzeta(&["seq", "--r", "x/2", "--n", "4"])), 2);
    assert_eq!(code(&solzeta(&["seq", "--r", "2", "--s", "4", "--n", "4"])), 2);
    assert_eq!(code(&solzeta(&["seq", "--r", "2", "--s", "3", "--t", "5", "--n", "4"])), 2);
    assert_eq!(code(&solzeta(&["seq", "--r", "2"])), 2);
}

#[test]
fn classify_verdicts() {
    let o = solzeta(&["classify", "--r", "2", "--s", "2"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["result"]["verdict"], "Rational");
    assert_eq!(v["result"]["zeta"], "(1 - z)/(1 - 2z)");
    assert_eq!(v["result"]["detector_agrees"], true);
    assert_eq!(v["schema_version"], 1);

    let v = json(&solzeta(&["classify", "--r", "2", "--s", "3"]));
    assert_eq!(v["result"]["verdict"], "Irrational");
    assert_eq!(v["result"]["detector_result"]["found"], false);

    let v = json(&solzeta(&["classify", "--r", "2"]));
    assert_eq!(v["result"]["verdict"], "Rational");
    assert_eq!(code(&solzeta(&["classify", "--r", "0"])), 2);
}

#[test]
fn zeta_coefficients() {
    let o = solzeta(&["zeta", "--r", "2", "--s", "2", "--terms", "5"]);
    assert_eq!(code(&o), 0);
    assert_eq!(values(&o), ["1", "1", "2", "4", "8", "16"]);
    assert_eq!(code(&solzeta(&["zeta", "--r", "2", "--terms", "0"])), 2);
}

#[test]
fn probe_validates_delta() {
    let small = ["--r", "2", "--s", "3", "--q", "3", "--lambda-grid", "1/2,3/4", "--precision-bits", "64"];
    let weak = [&["probe", "--delta", "1/3"][..], &small[..]].concat();
    assert_eq!(code(&solzeta(&weak)), 2);
    let forced = [&weak[..], &["--allow-weak-delta", "--format", "json"][..]].concat();
    let o = solzeta(&forced);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["result"]["weak_delta"], true);
    assert_eq!(v["result"]["pole_collision"], true);
    assert_eq!(v["result"]["control"]["delta"], "1/5");

    let bad = [&["probe", "--delta", "1/6"][..], &small[..]].concat();
    assert_eq!(code(&solzeta(&bad)), 2);
    let short = [&["probe", "--delta", "1/27", "--truncation", "5"][..], &small[..]].concat();
    assert_eq!(code(&solzeta(&short)), 2);
    let at_one = ["probe", "--r", "2", "--s", "3", "--q", "3", "--delta", "1/27", "--lambda-grid", "1"];
    assert_eq!(code(&solzeta(&at_one)), 2);
}

#[test]
fn probe_default_direction() {
    let o = solzeta(&["probe", "--r", "2", "--s", "3", "--q", "3", "--delta", "1/27", "--tail-check", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let r = &v["result"];
    assert_eq!(r["e_bound"]["e"], 2);
    assert_eq!(r["weak_delta"], false);
    assert_eq!(r["pole_collision"], false);
    assert_eq!(r["target"]["records"].as_array().unwrap().len(), 50);
    assert_eq!(r["config"]["precision_bits"], 256);
    assert_eq!(r["tail_check"]["within_bound"], true);
    assert!(r["control"]["label"].as_str().unwrap().contains("no theorem applies"));
    let verdict = r["target"]["verdict"].as_str().unwrap();
    assert!(["Diverging", "Bounded", "Inconclusive"].contains(&verdict));
}

#[test]
fn probe_csv_columns() {
    let o = solzeta(&[
        "probe", "--r", "2", "--s", "3", "--q", "3", "--delta", "1/27", "--lambda-min", "1/2", "--lambda-max", "3/4", "--points", "4",
        "--precision-bits", "64",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "lambda,re,im,modulus");
    // four target rows and four control rows
    assert_eq!(data.len(), 9);
    assert!(data[1].starts_with("1/2,"));
    assert_eq!(data[1].split(',').count(), 4);
}

#[test]
fn lambert_and_funceq() {
    let v = json(&solzeta(&["hs", "--primes", "3", "--n", "6"]));
    assert_eq!(v["result"]["display"], "z/(1 - z) - z^3/(1 - z^3)");
    assert_eq!(v["result"]["coefficients"], serde_json::json!([1, 1, 0, 1, 1, 0]));
    assert_eq!(code(&solzeta(&["hs", "--primes", "9"])), 2);

    let o = solzeta(&["funceq", "--p", "3", "--degree", "2187"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["result"]["passed"], true);
    let o = solzeta(&["funceq", "--p", "2", "--degree", "64", "--decomposition"]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&solzeta(&["funceq", "--p", "4", "--degree", "10"])), 2);
}

#[test]
fn catmap_counts() {
    let o = solzeta(&["catmap", "--n", "6"]);
    assert_eq!(code(&o), 0);
    let f: Vec<String> = stdout(&o)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().to_string())
        .collect();
    assert_eq!(f, ["1", "5", "16", "45", "121", "320"]);
    let golden = solzeta(&["catmap", "--trace", "1", "--norm", "-1", "--d", "5", "--n", "6", "--format", "json"]);
    assert_eq!(json(&golden)["result"]["f_n"], serde_json::json!(["1", "1", "4", "5", "11", "16"]));
    assert_eq!(code(&solzeta(&["catmap", "--d", "3", "--n", "4"])), 2);
    assert_eq!(code(&solzeta(&["catmap", "--norm", "2", "--n", "4"])), 2);
    assert_eq!(code(&solzeta(&["catmap", "--places", "11", "--n", "4"])), 2);
    assert_eq!(code(&solzeta(&["catmap", "--places", "11:0", "--n", "4"])), 0);
}

#[test]
fn entropy_and_precision_override() {
    let v = json(&solzeta(&["entropy", "--trace", "3", "--norm", "1"]));
    assert!(v["result"]["entropy"].as_str().unwrap().starts_with("0.9624236501192068"));
    assert_eq!(v["config"]["precision_bits"], 256);

    let o = Command::new(env!("CARGO_BIN_EXE_solzeta"))
        .args(["entropy", "--r", "2"])
        .env("ZETA_PRECISION_BITS", "64")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["precision_bits"], 64);
    assert!(v["result"]["entropy"].as_str().unwrap().starts_with("0.693147"));

    let o = Command::new(env!("CARGO_BIN_EXE_solzeta"))
        .args(["entropy", "--r", "2"])
        .env("ZETA_PRECISION_BITS", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(code(&solzeta(&["entropy"])), 2);
}

#[test]
fn sparsity_and_rigid() {
    let v = json(&solzeta(&["sparsity", "--r", "2", "--t", "3", "--s", "3/2", "--n", "100"]));
    assert_eq!(v["result"]["exceptional"], serde_json::json!([2]));
    assert_eq!(v["result"]["primes"][0]["ell"], 2);
    assert_eq!(v["result"]["primes"][0]["literal_first_failure"], 2);
    assert_eq!(code(&solzeta(&["sparsity", "--r", "2", "--t", "3", "--s", "1", "--n", "10"])), 2);

    let o = solzeta(&["rigid", "--r", "2", "--s", "3", "--q", "5"]);
    assert_eq!(code(&o), 0);
    let ns: Vec<u64> = json(&o)["result"]["indices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| i["n"].as_u64().unwrap())
        .collect();
    assert_eq!(ns, [10, 50, 250]);
    assert_eq!(code(&solzeta(&["rigid", "--r", "2", "--s", "3", "--q", "2"])), 2);
}

#[test]
fn verify_exit_codes() {
    let o = solzeta(&["verify", "e-bound"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["result"]["passed"], true);
    assert_eq!(code(&solzeta(&["verify", "rigid"])), 0);
    assert_eq!(code(&solzeta(&["verify", "nonsense"])), 2);
}

#[test]
fn paper_walkthrough_passes() {
    let o = solzeta(&["paper", "--precision-bits", "128"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v = json(&o);
    assert_eq!(v["result"]["steps"].as_array().unwrap().len(), 5);
}

fn replay(path: &Path) -> Output {
    solzeta(&["replay", "--input", path.to_str().unwrap()])
}

#[test]
fn artifacts_replay_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 6] = [
        &["seq", "--r", "3/2", "--s", "5,7", "--n", "20"],
        &["classify", "--r", "5/3", "--s", "2,7"],
        &["zeta", "--r", "2", "--t", "3", "--terms", "12", "--format", "json"],
        &["catmap", "--places", "2", "--n", "12"],
        &["probe", "--r", "2", "--s", "7", "--q", "7", "--delta", "2/343", "--lambda-grid", "1/2,2/3", "--precision-bits", "64"],
        &["entropy", "--r", "7/2", "--precision-bits", "96"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let path = dir.path().join(format!("out{i}"));
        let p = path.to_str().unwrap();
        let o = solzeta(&[&["--out", p][..], args].concat());
        assert_eq!(code(&o), 0, "{args:?}");
        let o = replay(&path);
        assert_eq!(code(&o), 0, "{args:?}: {}", stdout(&o));
        assert_eq!(json(&o)["result"]["identical"], true);
    }

    let path = dir.path().join("out0");
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, text.replace("\n5,", "\n5,1")).unwrap();
    let o = replay(&path);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["result"]["identical"], false);

    std::fs::write(&path, "not an artifact").unwrap();
    assert_eq!(code(&replay(&path)), 2);
    assert_eq!(code(&replay(&dir.path().join("missing"))), 2);
}
