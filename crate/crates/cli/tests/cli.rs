use std::process::{Command, Output};

use serde_json::Value;

fn torelli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torelli")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("valid json")
}

#[test]
fn sigma_of_first_handle() {
    let o = torelli(&["sigma", "--g", "3", "--subspace", "a1,b1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "a1*b1");
    let o = torelli(&["sigma", "--g", "3", "--subspace", "a3,b3"]);
    assert_eq!(stdout(&o).trim(), "a1*b1 + a2*b2");
    let o = torelli(&["sigma", "--g", "3", "--subspace", "a3,b3", "--mode", "boundary"]);
    assert_eq!(stdout(&o).trim(), "a3*b3");
}

#[test]
fn enumerate_counts() {
    for (g, n) in [("1", "1"), ("2", "20"), ("3", "336"), ("4", "5440")] {
        let o = torelli(&["enumerate", "--g", g, "--count-only"]);
        assert_eq!(stdout(&o).trim(), n);
    }
    let o = torelli(&["enumerate", "--g", "2"]);
    assert_eq!(stdout(&o).lines().count(), 20);
}

#[test]
fn tree_queries() {
    let o = torelli(&["tree", "--g", "4", "--tree", "0(1)(1)(2)", "--vanishes"]);
    assert_eq!(json(&o), serde_json::json!({"vanishes": true}));
    let o = torelli(&["tree", "--g", "4", "--tree", "1(1(1(1)))", "--sigma-k"]);
    assert_eq!(json(&o)["zero"], false);
    let o = torelli(&["tree", "--g", "4", "--tree", "1(1(1(1)))", "--reduce"]);
    assert_eq!(json(&o)["reduce"].as_array().unwrap().len(), 1);
    let o = torelli(&["tree", "--g", "3", "--tree", "0(1)(1)(1)", "--classify"]);
    assert_eq!(json(&o)["outermost"], serde_json::json!([true, true, true]));
}

#[test]
fn exit_codes() {
    let o = torelli(&["tree", "--g", "3", "--tree", "0(1)(1)(1)", "--vanishes"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("hypothesis"));
    let o = torelli(&["tree", "--g", "3", "--tree", "0(1)(1)(1)"]);
    assert_eq!(o.status.code(), Some(2));
    let o = torelli(&["sigma", "--g", "x", "--subspace", "a1,b1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = torelli(&["sigma", "--g", "3", "--subspace", "a1,a2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn certificate_round_trip() {
    let path = std::env::temp_dir().join(format!("torelli-cert-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let o = torelli(&[
        "decide-equal",
        "--g",
        "4",
        "--pair1",
        "a1, b1; a2, b2",
        "--pair2",
        "a1 + 2a3, b1 + 2a4; a2 + 2a4, b2",
        "--cert",
        p,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("equal"));
    let o = torelli(&["verify-cert", p]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("ok"));

    let text = std::fs::read_to_string(&path).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["steps"][0]["witnesses"]["U.x1"][0] = serde_json::json!(7);
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    let o = torelli(&["verify-cert", p]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::remove_file(&path).unwrap();

    let o = torelli(&["decide-equal", "--g", "4", "--pair1", "a1, b1; a2, b2", "--pair2", "a1, b1; a3, b3"]);
    assert!(stdout(&o).starts_with("distinct"));
}

#[test]
fn census_csv() {
    let o = torelli(&["census", "--g", "3", "--k", "3"]);
    assert_eq!(stdout(&o), "tree,k,has_genus0,sigma_k_zero\n0(1)(1)(1),3,true,true\n");
}

#[test]
fn dim_bounds_report() {
    let o = torelli(&["dim-bounds", "--g", "4", "--threads", "1"]);
    let v = json(&o);
    assert_eq!(v["upper_bound"], 913920);
    assert_eq!(v["lower_bound"], 594);
    assert_eq!(v["sigma_ambient_dim"], 630);
    assert_eq!(torelli(&["dim-bounds", "--g", "3"]).status.code(), Some(1));
}

#[test]
fn json_envelope() {
    let o = torelli(&["--json", "enumerate", "--g", "2", "--count-only"]);
    let v = json(&o);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["payload"], "20");
    let o = torelli(&["--json", "sigma", "--g", "3", "--subspace", "a1,a2"]);
    let v = json(&o);
    assert_eq!(v["status"], "error");
    assert!(!v["diagnostics"].as_array().unwrap().is_empty());
}

#[test]
fn quick_selftest_passes() {
    let o = torelli(&["selftest", "--seed", "11"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
}
