use std::process::{Command, Output};

use serde_json::Value;

fn ktoeplitz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ktoeplitz")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn verify_json(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let mut all = vec!["verify", "--json", path.to_str().unwrap()];
    all.extend_from_slice(args);
    let o = ktoeplitz(&all);
    let v = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    (o.status.code().unwrap(), v)
}

#[test]
fn list_checks_names_every_kind() {
    let o = ktoeplitz(&["list-checks"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["ck_rho", "ck_eq_ss_literal", "atiyah_todd", "fault_sink_handling"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
    assert!(text.lines().any(|l| l.starts_with("ck_eq_ss_literal") && l.contains("negative_control")));
}

#[test]
fn eval_prints_canonical_forms() {
    let o = ktoeplitz(&["eval", "t@0 * t@0*"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1 - e(0,0)@0");
    let o = ktoeplitz(&["eval", "t@0* t@0"]);
    assert_eq!(stdout(&o).trim(), "1");
    let o = ktoeplitz(&["eval", "(1 - t@0 t@0*)(1 - t@1 t@1*)", "--sig", "S2"]);
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn parse_error_exits_2_with_position() {
    let o = ktoeplitz(&["eval", "t@0 +"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1:6"));
}

#[test]
fn kclass_vectors() {
    let get = |args: &[&str]| -> Vec<i64> {
        let o = ktoeplitz(args);
        assert!(o.status.success(), "{args:?}");
        serde_json::from_str(stdout(&o).trim()).unwrap()
    };
    assert_eq!(get(&["kclass", "--n", "2", "--k", "2", "--j", "0"]), vec![1, -2, 1]);
    assert_eq!(get(&["kclass", "--n", "1", "--k", "-1"]), vec![1, 1]);
    assert_eq!(get(&["kclass", "--n", "3", "--k", "0"]), vec![1, 0, 0, 0]);
}

#[test]
fn dump_matrix_lines() {
    let o = ktoeplitz(&["dump-matrix", "t@0", "--trunc-N", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1 0 1 0\n2 1 1 0\n");
    let o = ktoeplitz(&["dump-matrix", "u^1@1", "--sig", "T,C", "--trunc-N", "2"]);
    assert!(o.status.success());
    for line in stdout(&o).lines() {
        let fields: Vec<f64> = line.split(' ').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), 4);
        assert!((fields[2].hypot(fields[3]) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn atiyah_todd_passes() {
    let (code, v) = verify_json(&["--only", "atiyah_todd", "--n", "10"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["reports"].as_array().unwrap().len(), 22);
    assert_eq!(v["summary"]["unexpected"], 0);
}

#[test]
fn faults_exit_1_unless_expected() {
    let o = ktoeplitz(&["verify", "--only", "fault_sink_handling"]);
    assert_eq!(o.status.code(), Some(1));
    let o = ktoeplitz(&["verify", "--only", "fault_sink_handling", "--expect-fail", "fault_sink_handling"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn negative_control_is_expected() {
    let o = ktoeplitz(&["verify", "--only", "ck_eq_ss_literal,ck_eq_ss"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 unexpected"));
}

#[test]
fn config_errors_exit_2() {
    assert_eq!(ktoeplitz(&["verify", "--only", "no_such_check"]).status.code(), Some(2));
    assert_eq!(ktoeplitz(&["verify", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(ktoeplitz(&["eval", "u^1@0"]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let strip = |mut v: Value| {
        for r in v["reports"].as_array_mut().unwrap() {
            r.as_object_mut().unwrap().remove("elapsed_ms");
        }
        serde_json::to_string(&v).unwrap()
    };
    let args = ["--only", "ck_rho,numeric_products,injectivity_omega", "--seed", "7"];
    let (a, first) = verify_json(&args);
    let (b, second) = verify_json(&args);
    assert_eq!((a, b), (0, 0));
    assert_eq!(strip(first), strip(second));
}
