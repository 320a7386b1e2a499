use std::process::{Command, Output};

fn tielink(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tielink")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn corpus() -> String {
    format!("{}/../../corpus/value_table.txt", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn trivial_braids() {
    let o = tielink(&["compute", "--braid", "", "--strands", "2", "--invariant", "L"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1/x");
    assert_eq!(stdout(&tielink(&["compute", "--braid", "", "--strands", "1"])), "1");
}

#[test]
fn trefoil_routes_agree() {
    let o = tielink(&["compute", "--braid", "s1 s1 s1", "--strands", "2", "--cross-check"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "a z^2-2 a+z+z^2/a-1/a+z/a^2");
    let t = tielink(&["compute", "--braid", "s1 s1 s1", "--strands", "2", "--route", "trace"]);
    assert_eq!(stdout(&t), stdout(&o));
}

#[test]
fn parse_and_usage_errors_exit_2() {
    assert_eq!(tielink(&["compute", "--braid", "s1 s", "--strands", "2"]).status.code(), Some(2));
    assert_eq!(tielink(&["compute", "--braid", "s1"]).status.code(), Some(2));
    assert_eq!(tielink(&["compute", "--braid", "s1", "--strands", "2", "--partition", "{0}{1}", "--route", "trace"]).status.code(), Some(2));
}

#[test]
fn json_report() {
    let o = tielink(&["compute", "--braid", "e1 s1 s1 s1", "--strands", "2", "--invariant", "J", "--format", "json", "--cross-check"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["input"]["braid"], "e1 s1 s1 s1");
    assert_eq!(v["input"]["strands"], 2);
    assert_eq!(v["invariant"], "J");
    assert_eq!(v["route"], "skein");
    assert_eq!(v["value"], "1/A^4+1/A^12-1/A^16");
    let vars = tielink::VarSet::bracket();
    let p = tielink::Poly::parse(v["value"].as_str().unwrap(), &vars).unwrap();
    assert_eq!(p.to_string(), v["value"]);
    assert_eq!(v["cross_check"]["agrees"], true);
    assert!(v["millis"].as_f64().unwrap() >= 0.0);
    assert!(v["stats"]["skein_nodes"].as_u64().is_some());
}

#[test]
fn compare_conjugates_and_mirrors() {
    let same = tielink(&["compare", "--left", "3 : s1 s2 e1", "--right", "3 : s2 e1 s1", "--invariant", "L", "--invariant", "J"]);
    assert!(same.status.success());
    assert!(stdout(&same).ends_with("\nnot distinguished"));
    let o = tielink(&["compare", "--left", "2 : s1 s1 s1", "--right", "2 : -s1 -s1 -s1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["distinguished"], true);
}

#[test]
fn corpus_verifies_in_every_mode() {
    for mode in ["values", "route", "mirror", "all"] {
        let o = tielink(&["verify", &corpus(), "--mode", mode]);
        assert!(o.status.success(), "{mode}: {}", stdout(&o));
        assert!(stdout(&o).contains(" 0 failed"));
    }
}

#[test]
fn wrong_expectation_exits_3() {
    let dir = std::env::temp_dir().join(format!("tielink-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("bad.txt");
    std::fs::write(&f, "K | identified | 2 : s1 s1 s1 | 1\n").unwrap();
    let o = tielink(&["verify", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("FAIL  K"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn ties_between_components_matter() {
    let o = tielink(&["compare", "--left", "1 :", "--right", "2 : e1 s1 -s1", "--invariant", "L"]);
    assert!(stdout(&o).ends_with("\ndistinguished"));
    let untied = tielink(&["compute", "--braid", "", "--strands", "2"]);
    let tied = tielink(&["compute", "--braid", "", "--strands", "2", "--partition", "1,2"]);
    assert_eq!(stdout(&untied), "1/x");
    assert_ne!(stdout(&tied), stdout(&untied));
    assert_eq!(tielink(&["compute", "--braid", "", "--strands", "2", "--partition", "1,3"]).status.code(), Some(2));
}

#[test]
fn pd_input() {
    let dir = std::env::temp_dir().join(format!("tielink-pd-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("hopf.json");
    std::fs::write(&f, r#"{"crossings": [[1, 4, 2, 3], [3, 2, 4, 1]], "orientation": [true, true]}"#).unwrap();
    let pd = tielink(&["compute", "--pd", f.to_str().unwrap(), "--invariant", "bracket"]);
    assert!(pd.status.success());
    let braid = tielink(&["compute", "--braid", "s1 s1", "--strands", "2", "--invariant", "bracket"]);
    assert_eq!(stdout(&pd), stdout(&braid));
    let trace = tielink(&["compute", "--pd", f.to_str().unwrap(), "--route", "trace"]);
    assert_eq!(trace.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}
