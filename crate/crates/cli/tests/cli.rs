use std::process::{Command, Output};

use miop_cli::{Report, Table};

fn miop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_miop"))
        .args(args)
        .output()
        .expect("failed to run miop")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn default_config_passes() {
    let o = miop(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r: Report = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.passed());
    assert_eq!(r.schema_version, 1);
    assert!(r.suites.iter().any(|s| s.check.id.starts_with("multi.orthogonality")));
    assert_eq!(r.summary.checks, r.suites.len());
}

#[test]
fn invalid_meixner_c_exits_2() {
    let o = miop(&["verify", "--params", "beta=1,c=2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("0<c<1"));
}

#[test]
fn special_lqj_configuration_exits_2() {
    let o = miop(&["verify", "--family", "lqJ", "--params", "a=1/4,b=1/2,q=1/2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("special configuration"));
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(miop(&["verify", "--deletions", "2,2"]).status.code(), Some(2));
    assert_eq!(miop(&["verify", "--suite", "everything"]).status.code(), Some(2));
    assert_eq!(miop(&["verify", "--family", "lqL"]).status.code(), Some(2));
    assert_eq!(miop(&["verify", "--rtol", "-1"]).status.code(), Some(2));
}

#[test]
fn report_is_deterministic_and_round_trips() {
    let args = ["verify", "--suite", "base,casoratian", "--nmax", "2", "--xmax", "6"];
    let a = miop(&args);
    let b = miop(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r: Report = serde_json::from_str(&stdout(&a)).unwrap();
    let again = serde_json::to_string_pretty(&r).unwrap() + "\n";
    assert_eq!(again, stdout(&a));
    let v: serde_json::Value = serde_json::from_str(&again).unwrap();
    for key in ["id", "paper_ref", "status", "witnesses"] {
        assert!(v["suites"][0].get(key).is_some(), "missing {key}");
    }
    assert!(v.get("config").is_some() && v.get("summary").is_some());
}

#[test]
fn csv_report_has_header() {
    let o = miop(&["verify", "--suite", "base", "--nmax", "1", "--xmax", "4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("suite,id,status,checked,failures,witness_location,witness_lhs,witness_rhs"));
    assert!(lines.all(|l| l.starts_with("base,")));
}

#[test]
fn tabulate_worked_example() {
    let o = miop(&["tabulate", "--nmax", "1", "--xmax", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let t: Table = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(t.xi, ["1", "1/2"]);
    assert_eq!(t.rows[0].coefficients, ["1", "1/4"]);
    assert_eq!(t.rows[0].dt_sq, "1");
    assert_eq!(t.weights[0].w, "2/3");
    assert_eq!(t.weights[1].w, "1/3");
}

#[test]
fn tabulate_empty_deletion_and_csv() {
    let o = miop(&["tabulate", "--deletions", "none", "--nmax", "0", "--xmax", "0"]);
    let t: Table = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(t.rows[0].coefficients, ["1"]);

    let a = miop(&["tabulate", "--family", "lqL", "--params", "a=1/32,q=1/2", "--deletions", "1,2", "--format", "csv"]);
    let b = miop(&["tabulate", "--family", "lqL", "--params", "a=1/32,q=1/2", "--deletions", "1,2", "--format", "csv"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("quantity,n,x,k,value\n"));
}

#[test]
fn config_file_with_override() {
    let dir = std::env::temp_dir().join(format!("miop-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.json");
    std::fs::write(
        &cfg,
        r#"{"family":"lqL","params":{"a":"1/32","q":"1/2"},"deletions":[1],"n_max":1,"x_max":5,
            "rel_tol":"1/1000000","format":"json","suites":["base"]}"#,
    )
    .unwrap();
    let out = dir.join("report.json");
    let o = miop(&["verify", "--config", cfg.to_str().unwrap(), "--nmax", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r: Report = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r.config.n_max, 2);
    assert_eq!(r.config.family.tag(), "lqL");
    std::fs::remove_dir_all(&dir).unwrap();
}
