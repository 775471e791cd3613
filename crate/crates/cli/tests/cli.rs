use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn mzn(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mzn"))
        .env("MZN_CACHE_DIR", cache)
        .args(args)
        .output()
        .expect("spawn mzn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn fcurves_listings() {
    let dir = TempDir::new().unwrap();
    let o = mzn(dir.path(), &["fcurves", "--n", "4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "1|2|3|4\n");

    let o = mzn(dir.path(), &["fcurves", "--n", "5", "--filter", "knu"]);
    assert_eq!(stdout(&o).lines().collect::<Vec<_>>(), ["1,2|3|4|5", "1,3|2|4|5", "1|2,3|4|5"]);

    let o = mzn(dir.path(), &["fcurves", "--n", "6", "--format", "json"]);
    let list: Vec<String> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(list.len(), 65);
    let mut sorted = list.clone();
    sorted.sort();
    assert_eq!(list, sorted);

    let o = mzn(dir.path(), &["fcurves", "--n", "5", "--format", "csv"]);
    assert_eq!(stdout(&o).lines().count(), 11);
}

#[test]
fn intersect_examples() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("D[3]:2,1,1,1,1", "1|2,3|4|5", "1"),
        ("D[2]:1,1,1,0,0", "1|2|3|4,5", "0"),
        ("psi:5", "1|2,3|4|5", "1"),
        ("delta:1,2", "1,2|3|4|5", "-1"),
        ("delta:1,2", "1,2,3|4|5|6", "0"),
    ];
    for (d, c, want) in cases {
        let n = if c.contains('6') { "6" } else { "5" };
        let o = mzn(dir.path(), &["intersect", "--n", n, "--divisor", d, "--curve", c]);
        assert_eq!(code(&o), 0, "{d} on {c}");
        assert_eq!(stdout(&o).trim(), want, "{d} on {c}");
    }
}

#[test]
fn intersect_exit_codes() {
    let dir = TempDir::new().unwrap();
    let o = mzn(dir.path(), &["intersect", "--n", "5", "--divisor", "D[2]:1,1,1,1", "--curve", "1|2,3|4|5"]);
    assert_eq!(code(&o), 3);
    let o = mzn(dir.path(), &["intersect", "--n", "5", "--divisor", "psi:1", "--curve", "1|2|3|4"]);
    assert_eq!(code(&o), 3);
    let o = mzn(dir.path(), &["intersect", "--n", "5", "--divisor", "D[2]:x", "--curve", "1|2,3|4|5"]);
    assert_eq!(code(&o), 2);
    let o = mzn(dir.path(), &["intersect", "--n", "5", "--divisor", "psi:1", "--curve", "1|2|3"]);
    assert_eq!(code(&o), 2);
    let o = mzn(dir.path(), &["intersect", "--n", "5"]);
    assert_eq!(code(&o), 2);
    let o = mzn(dir.path(), &["--max-n", "3", "fcurves", "--n", "4"]);
    assert_eq!(code(&o), 2);
    let o = mzn(dir.path(), &["fcurves", "--n", "12"]);
    assert_eq!(code(&o), 2);
}

fn coords(out: &str) -> Vec<(String, String)> {
    let v: serde_json::Value = serde_json::from_str(out).unwrap();
    v["coords"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["bits"].as_str().unwrap().to_owned(), c["value"].as_str().unwrap().to_owned()))
        .collect()
}

#[test]
fn expand_examples() {
    let dir = TempDir::new().unwrap();
    let o = mzn(dir.path(), &["expand", "--n", "5", "--divisor", "psi:5"]);
    assert_eq!(code(&o), 0);
    let c = coords(&stdout(&o));
    assert_eq!(c.len(), 5);
    assert!(c.iter().all(|(_, v)| v == "1/2" || v == "-1/2"));
    assert_eq!(c.iter().find(|(b, _)| b == "11110").unwrap().1, "-1/2");

    let o = mzn(dir.path(), &["expand", "--n", "5", "--divisor", "delta:2,3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(coords(&stdout(&o)).len(), 5);
}

#[test]
fn expand_functional_file() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("v.json");
    fs::write(&file, r#"{"n":5,"values":[{"curve":"1|2,3|4|5","value":"1"}]}"#).unwrap();
    let o = mzn(dir.path(), &["expand", "--n", "5", "--functional", file.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o).trim(), "not-realizable");

    // The functional of psi_5 round-trips.
    let fcurves = stdout(&mzn(dir.path(), &["fcurves", "--n", "5"]));
    let values: Vec<String> = fcurves
        .lines()
        .map(|c| {
            let d = stdout(&mzn(dir.path(), &["intersect", "--n", "5", "--divisor", "psi:5", "--curve", c]));
            format!(r#"{{"curve":"{c}","value":"{}"}}"#, d.trim())
        })
        .collect();
    fs::write(&file, format!(r#"{{"n":5,"values":[{}]}}"#, values.join(","))).unwrap();
    let o = mzn(dir.path(), &["expand", "--n", "5", "--functional", file.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let direct = mzn(dir.path(), &["expand", "--n", "5", "--divisor", "psi:5"]);
    assert_eq!(stdout(&o), stdout(&direct));

    fs::write(&file, "{").unwrap();
    let o = mzn(dir.path(), &["expand", "--n", "5", "--functional", file.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

fn report(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn verify_reports() {
    let dir = TempDir::new().unwrap();
    let runs: &[&[&str]] = &[
        &["verify", "charkap", "--n", "6"],
        &["verify", "knudual", "--n", "5"],
        &["verify", "cdint", "--n", "5", "--part", "2"],
        &["verify", "charknu", "--n", "6"],
        &["verify", "chargen", "--n", "7", "--s", "1,2,3,4,5", "--t", "1,2,6,7"],
        &["verify", "charproj-cert", "--n", "6", "--i", "5", "--j", "6"],
        &["verify", "psi-extremal", "--n", "6", "--i", "6"],
        &["verify", "knu-rank", "--n", "6", "--all"],
        &["verify", "triple", "--n", "6", "--i", "1"],
        &["verify", "cdint", "--n", "5", "--part", "1", "--m-max", "4"],
    ];
    for args in runs {
        let o = mzn(dir.path(), args);
        assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let r = report(&o);
        assert_eq!(r["status"], "pass", "{args:?}");
        assert_eq!(r["schema"], "mzn-report v1");
    }
}

#[test]
fn verify_fail_and_usage() {
    let dir = TempDir::new().unwrap();
    // Level 2 alone does not saturate the lattice at n = 5.
    let o = mzn(dir.path(), &["verify", "cdint", "--n", "5", "--part", "1", "--m-max", "2"]);
    assert_eq!(code(&o), 1);
    assert_eq!(report(&o)["status"], "fail");

    let o = mzn(dir.path(), &["verify", "chargen", "--n", "7"]);
    assert_eq!(code(&o), 2);
    let o = mzn(dir.path(), &["verify", "nosuch", "--n", "5"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn cache_is_transparent() {
    let dir = TempDir::new().unwrap();
    let args = ["verify", "charknu", "--n", "7", "--format", "json"];
    let cold = mzn(dir.path(), &args);
    assert!(dir.path().join("pairing-v1-n7.csv").exists());
    let warm = mzn(dir.path(), &args);
    let strip = |o: &Output| {
        let mut r = report(o);
        r.as_object_mut().unwrap().remove("millis");
        r
    };
    assert_eq!(code(&cold), 0);
    assert_eq!(strip(&cold), strip(&warm));

    let p1 = stdout(&mzn(dir.path(), &["pairing", "--n", "6"]));
    let other = TempDir::new().unwrap();
    let p2 = stdout(&mzn(other.path(), &["pairing", "--n", "6"]));
    assert_eq!(p1, p2);
    assert!(p1.starts_with("# mzn-pairing v1 n=6\n"));
}

#[test]
fn cache_env_overrides_flag() {
    let env_dir = TempDir::new().unwrap();
    let flag_dir = TempDir::new().unwrap();
    let o = mzn(
        env_dir.path(),
        &["--cache-dir", flag_dir.path().to_str().unwrap(), "expand", "--n", "5", "--divisor", "psi:1"],
    );
    assert_eq!(code(&o), 0);
    assert!(env_dir.path().join("pairing-v1-n5.csv").exists());
    assert!(!flag_dir.path().join("pairing-v1-n5.csv").exists());
}

#[test]
fn snf_of_matrix_file() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("m.csv");
    fs::write(&file, "# mzn-matrix v1 rows=2 cols=2\n2,0\n0,3\n").unwrap();
    let o = mzn(dir.path(), &["snf", "--matrix", file.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "1,6");

    fs::write(&file, "# mzn-matrix v1 rows=1 cols=1\n1/2\n").unwrap();
    let o = mzn(dir.path(), &["snf", "--matrix", file.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}
