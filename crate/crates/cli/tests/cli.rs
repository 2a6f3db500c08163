use std::process::{Command, Output};

use serde_json::Value;

fn dqp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dqp")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report on stdout")
}

fn check<'a>(r: &'a Value, name: &str) -> &'a Value {
    r["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap_or_else(|| panic!("no check {name}"))
}

fn write_tmp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const QP3: &str = include_str!("../../core/data/qp3.json");

#[test]
fn validate_bundled_file_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_tmp(&dir, "qp3.json", QP3);
    let out = dqp(&["validate", &path]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["passed"], true);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["input"]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(r["tau"]["overridden"], false);
}

#[test]
fn validate_reports_non_associative_table() {
    let dir = tempfile::tempdir().unwrap();
    let text = QP3.replace("[1,1,2,\"1\"]", "[1,1,2,\"1\"],\n    [1,2,2,\"1\"]");
    let out = dqp(&["validate", &write_tmp(&dir, "bad.json", &text)]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    let assoc = check(&r, "associativity");
    assert_eq!(assoc["status"], "fail");
    let w: Vec<&str> = assoc["witnesses"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert!(w.contains(&"(t, t, t) not associative"), "{w:?}");
}

#[test]
fn malformed_inputs_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let zero = QP3.replace("\"tau\": \"1\"", "\"tau\": \"1/0\"");
    let out = dqp(&["validate", &write_tmp(&dir, "zero.json", &zero)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tau"));

    let truncated = &QP3[..QP3.len() / 2];
    let out = dqp(&["validate", &write_tmp(&dir, "cut.json", truncated)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    assert_eq!(dqp(&["validate", "/nonexistent/file.json"]).status.code(), Some(1));
    assert_eq!(dqp(&["validate", "builtin:nope"]).status.code(), Some(1));
    assert_eq!(dqp(&["check", "builtin:qp3", "--mode", "quasi", "--tau", "x"]).status.code(), Some(1));
}

#[test]
fn check_modes() {
    assert_eq!(dqp(&["check", "builtin:dp3", "--mode", "poisson"]).status.code(), Some(0));
    assert_eq!(dqp(&["check", "builtin:qp3", "--mode", "quasi"]).status.code(), Some(0));
    assert_eq!(dqp(&["check", "builtin:qp3", "--mode", "poisson"]).status.code(), Some(2));

    let out = dqp(&["check", "builtin:dp3", "--mode", "quasi", "--tau", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert_eq!(r["tau"]["overridden"], true);
    assert_eq!(r["tau"]["value"], "1");
    let q = check(&r, "quasi_poisson");
    assert_eq!(q["details"]["witness"]["triple"], serde_json::json!([1, 1, 1]));
    assert!(q["witnesses"][0].as_str().unwrap().starts_with("(t, t, t)"));
}

#[test]
fn stasheff_on_qp2_up_to_nine() {
    let out = dqp(&["stasheff", "builtin:qp2", "--max-n", "9", "--mode", "exhaustive", "--jobs", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(check(&r, "si_9")["details"]["mode"], "exhaustive");
    assert_eq!(check(&r, "pcy")["status"], "pass");
}

#[test]
fn stasheff_negative_control() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let out = dqp(&[
        "stasheff",
        "builtin:dp3",
        "--tau",
        "1",
        "--max-n",
        "5",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(check(&r, "si_4")["status"], "pass");
    let si5 = check(&r, "si_5");
    assert_eq!(si5["status"], "fail");
    let parity = si5["details"]["violations"][0]["parity"].as_array().unwrap();
    let ones = parity.iter().filter(|p| *p == 1).count();
    assert_eq!((parity.len(), ones), (6, 3));
    assert!(!si5["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn sampled_reports_are_reproducible() {
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_dqp"))
            .args(["stasheff", "builtin:qp3", "--max-n", "6", "--mode", "sampled", "--samples", "40", "--seed", "3"])
            .env("DQP_JOBS", "2")
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        let mut r = report(&out);
        r.as_object_mut().unwrap().remove("timings_ms");
        for c in r["checks"].as_array_mut().unwrap() {
            if let Some(d) = c["details"].as_object_mut() {
                d.remove("elapsed_ms");
            }
        }
        serde_json::to_string(&r).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn identities_defaults_with_generalized_weights() {
    let out = dqp(&["identities", "--generalized-trials", "100", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(check(&r, "ide_random")["details"]["checked"], 37100);
    assert_eq!(check(&r, "cgen")["details"]["failures"], 0);
}

#[test]
fn identities_detect_corrupted_coefficient() {
    let out = dqp(&["identities", "--max-even-n", "12", "--bcm-max-k", "4", "--reduction-max-k", "4", "--corrupt-c", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert_eq!(check(&r, "cgen")["status"], "fail");
    assert_eq!(check(&r, "bcm")["status"], "pass");
}

#[test]
fn cij_table() {
    let out = dqp(&["cij", "--max", "7", "--tau", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split('\t').collect()).collect();
    assert!(rows.contains(&vec!["1", "2", "1/12"]));
    assert!(rows.contains(&vec!["2", "1", "1/12"]));
    assert!(rows.contains(&vec!["1", "4", "1/720"]));
    assert!(rows.iter().all(|r| (r[0].parse::<i64>().unwrap() + r[1].parse::<i64>().unwrap()) % 2 == 1));
    assert_eq!(rows.len(), 2 + 4 + 6);

    let neg = dqp(&["cij", "--max", "3", "--tau", "-3/5"]);
    assert_eq!(String::from_utf8(neg.stdout).unwrap().lines().next(), Some("1\t2\t-1/20"));
}
