use std::path::Path;
use std::process::{Command, Output};

fn geodisk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geodisk")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn preset(dir: &Path, name: &str, n: &str) -> String {
    let p = path(dir, &format!("{name}.json"));
    let o = geodisk(&["gen", "--preset", name, "--n", n, "--out", &p]);
    assert_eq!(o.status.code(), Some(0));
    p
}

#[test]
fn chain_separator_is_the_middle_disk() {
    let dir = tempfile::tempdir().unwrap();
    let inst = preset(dir.path(), "chain", "5");
    let o = geodisk(&["separate", "--instance", &inst, "--epsilon", "1/2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["separator"]["cliques"], serde_json::json!([{"kind": "singleton", "member": 3}]));
    assert_eq!(v["separator"]["a"], serde_json::json!([1, 2]));
    assert_eq!(v["separator"]["b"], serde_json::json!([4, 5]));
    assert_eq!(v["schedule"]["alphas"], serde_json::json!(["1/5"]));
}

#[test]
fn oracle_snapshot_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let inst = preset(dir.path(), "chain", "5");
    let snap = path(dir.path(), "c5.snap");
    let o = geodisk(&["oracle", "build", "--instance", &inst, "--epsilon", "0.5", "--snapshot", &snap]);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(&snap).unwrap().starts_with("GDORACLE 1\n"));
    let o = geodisk(&["oracle", "query", "--snapshot", &snap, "--from", "1", "--to", "5"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["distance"], 4);
    let o = geodisk(&["oracle", "query", "--snapshot", &snap, "--from", "1", "--to", "9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn coloring_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let inst = preset(dir.path(), "cycle5", "0");
    let o = geodisk(&["color", "--instance", &inst, "--q", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let o = geodisk(&["color", "--instance", &inst, "--q", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["feasible"], true);
    assert_eq!(v["result"]["assignment"].as_object().unwrap().len(), 5);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.json");
    std::fs::write(
        &bad,
        r#"{"free_space":{"outer":[[0,0],[10,0],[10,10],[0,10]],"holes":[[[4,4],[6,4],[6,6],[4,6]]]},"disks":[{"id":1,"center":[5,5],"radius":1}]}"#,
    )
    .unwrap();
    let o = geodisk(&["graph", "--instance", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("disk 1"));
    let o = geodisk(&["separate", "--instance", &path(dir.path(), "missing.json")]);
    assert_eq!(o.status.code(), Some(2));
    let inst = preset(dir.path(), "chain", "5");
    let o = geodisk(&["separate", "--instance", &inst, "--epsilon", "3/2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = geodisk(&["bench", "--sizes", "5", "--family", "chain"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn graph_and_audit_on_the_cluster() {
    let dir = tempfile::tempdir().unwrap();
    let inst = preset(dir.path(), "cluster", "0");
    let o = geodisk(&["graph", "--instance", &inst, "--format", "csv"]);
    assert_eq!(stdout(&o).lines().count(), 7);
    let o = geodisk(&["audit", "--instance", &inst]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["audit"]["crossings"], 1);
    assert_eq!(v["audit"]["max_ply"], 4);
    assert_eq!(v["crossing_vertices"], 1);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = path(dir.path(), "a.json");
    let b = path(dir.path(), "b.json");
    for p in [&a, &b] {
        let o = geodisk(&["gen", "--n", "40", "--holes", "2", "--seed", "7", "--out", p]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let render = || stdout(&geodisk(&["render", "--instance", &a, "--overlay", "drawing,separator,planarized"]));
    let svg = render();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg, render());
    let bench = || stdout(&geodisk(&["bench", "--sizes", "30,60", "--holes", "1", "--epsilon", "1/4,1/8"]));
    let csv = bench();
    assert_eq!(csv.lines().count(), 5);
    assert_eq!(csv, bench());
}
