use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn adelic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adelic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn riemann_roch_suite_passes() {
    let o = adelic(&[
        "verify",
        "--surface",
        "P2",
        "--q",
        "5",
        "--range",
        "-6:6",
        "--suites",
        "rr",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("passed 13, failed 0"));
}

#[test]
fn intersect_prints_bezout_number() {
    let o = adelic(&[
        "intersect",
        "--surface",
        "P2",
        "--q",
        "3",
        "--curves",
        "line:Y,conic:YZ-X^2",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "2");
    let o = adelic(&[
        "intersect",
        "--surface",
        "P1xP1",
        "--q",
        "2",
        "--curves",
        "a:X0,b:X0*Y1 - X1*Y0",
    ]);
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn class_level_suites_accept_prime_powers() {
    let o = adelic(&["verify", "--q", "4", "--range", "0:0", "--suites", "chi"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("chi [S=0]: 1 vs 1"));
    let o = adelic(&[
        "verify",
        "--q",
        "9",
        "--surface",
        "P1xP1",
        "--range",
        "-3:3",
        "--suites",
        "chi,cech",
    ]);
    assert_eq!(code(&o), 0);
}

#[test]
fn empty_suite_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = adelic(&["verify", "--q", "3", "--suites", "--json", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v = read_json(&path);
    assert_eq!(v["checks"], Value::Array(vec![]));
    assert_eq!(v["summary"]["passed"], 0);
    assert_eq!(v["summary"]["failed"], 0);
}

#[test]
fn report_layout_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = adelic(&[
        "verify",
        "--q",
        "3",
        "--range",
        "1:1",
        "--suites",
        "rr",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let order = ["\"config\"", "\"checks\"", "\"summary\""];
    let at: Vec<usize> = order.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(at.windows(2).all(|w| w[0] < w[1]));
    let keys = [
        "\"name\"",
        "\"inputs\"",
        "\"lhs\"",
        "\"rhs\"",
        "\"pass\"",
        "\"micros\"",
    ];
    let at: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(at.windows(2).all(|w| w[0] < w[1]));
    let v = read_json(&path);
    let check = &v["checks"][0];
    assert_eq!(check["name"], "rr");
    assert_eq!(check["pass"], true);
    assert_eq!(check["lhs"], 3);
    assert_eq!(check["rhs"], 3);
    assert_eq!(check["micros"], 0);
}

#[test]
fn injected_fault_fails_with_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = adelic(&[
        "verify",
        "--q",
        "3",
        "--range",
        "0:1",
        "--suites",
        "rr",
        "--inject-fault",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("first counterexample: rr [C=0]"), "{err}");
    let v = read_json(&path);
    assert_eq!(v["checks"][0]["pass"], false);
    assert_eq!(v["summary"]["failed"], 2);
}

#[test]
fn invalid_configurations_exit_2() {
    let cases: &[&[&str]] = &[
        &["verify", "--q", "3", "--suites", "nonsense"],
        &["verify", "--q", "3", "--range", "2:1", "--suites", "chi"],
        &["verify", "--q", "3", "--range", "x", "--suites", "chi"],
        &["verify", "--q", "4", "--suites", "rr"],
        &["verify", "--q", "6", "--suites", "chi"],
        &["verify", "--q", "11", "--suites", "chi"],
        &["verify", "--surface", "P3", "--suites", "chi"],
        &["intersect", "--q", "3", "--curves", "a:X"],
        &["intersect", "--q", "3", "--curves", "a:X+Y^2,b:Y"],
        &[
            "expand",
            "--q",
            "3",
            "--function",
            "X/Z",
            "--point",
            "1:1:1",
            "--curve",
            "Y",
        ],
        &[
            "expand",
            "--q",
            "3",
            "--function",
            "X/Z",
            "--point",
            "0:0:1",
            "--curve",
            "Y",
            "--precision",
            "0,4",
        ],
        &["bogus"],
    ];
    for args in cases {
        let o = adelic(args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = adelic(&[
        "verify",
        "--q",
        "11",
        "--allow-large-q",
        "--range",
        "0:0",
        "--suites",
        "chi",
    ]);
    assert_eq!(code(&o), 0);
}

#[test]
fn identical_runs_give_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let mut docs = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("r{i}.json"));
        let o = adelic(&[
            "verify",
            "--q",
            "2",
            "--seed",
            "7",
            "--range",
            "-1:1",
            "--forms",
            "5",
            "--suites",
            "reciprocity,bezout,commutator,rr",
            "--json",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        docs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(docs[0], docs[1]);
}

#[test]
fn local_computations() {
    let o = adelic(&[
        "residue", "--q", "5", "--form", "Z^2/XY", "--point", "0:0:1", "--curve", "Y",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "1");
    let o = adelic(&["residue", "--q", "5", "--form", "Z^2/XY", "--curve", "Y"]);
    assert_eq!(stdout(&o).trim(), "0");
    let o = adelic(&[
        "symbol", "--q", "5", "--f", "Y/Z", "--g", "X/Z", "--point", "0:0:1", "--curve", "Y",
    ]);
    assert_eq!(stdout(&o).trim(), "-1");
    let o = adelic(&[
        "expand",
        "--q",
        "5",
        "--function",
        "X/Z",
        "--point",
        "0:0:1",
        "--curve",
        "Y",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("u = (X/Z), t = (Y/Z)"));
    let o = adelic(&["cohomology", "--q", "2", "--range", "-4:-3"]);
    assert!(stdout(&o).contains("-4: h = (0, 0, 3), chi = 3"));
}
