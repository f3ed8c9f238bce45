use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const L: &str = r#"{"weights": {"x": 1}, "f": "x^2", "F0": [0], "F1": [-1], "s0": [["x"]], "s1": [["x"]]}"#;
const L_PRIME: &str = r#"{"weights": {"y": 1}, "f": "y^2", "F0": [0], "F1": [-1], "s0": [["y"]], "s1": [["y"]]}"#;

fn mfk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfk")).args(args).env_remove("MFK_EULER_WINDOW").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap_or_else(|e| panic!("not JSON ({e}): {}", stdout(o)))
}

#[test]
fn verify_accepts_and_rejects() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "l.json", L);
    let o = mfk(&["verify", s(&good)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("valid"));

    let corrupt = write(&dir, "bad.json", &L.replace(r#""s0": [["x"]]"#, r#""s0": [["2*x"]]"#));
    let o = mfk(&["--json", "verify", s(&corrupt)]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["passed"], false);
    let diag = v["results"]["diagnostic"].as_str().unwrap();
    assert!(diag.contains("entry (0, 0)"), "{diag}");

    let twist = write(&dir, "twist.json", &L.replace(r#""F1": [-1]"#, r#""F1": [0]"#));
    let o = mfk(&["verify", s(&twist)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("degree violation"), "{}", stdout(&o));

    let garbage = write(&dir, "garbage.json", "{ not json");
    assert_eq!(mfk(&["verify", s(&garbage)]).status.code(), Some(2));
    assert_eq!(mfk(&["verify", "/nonexistent/file.json"]).status.code(), Some(2));
}

#[test]
fn knorrer_of_l() {
    let dir = TempDir::new().unwrap();
    let l = write(&dir, "l.json", L);
    let out = dir.path().join("k.json");
    let o = mfk(&["knorrer", s(&l), "--l", "1", "-o", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["F0"].as_array().unwrap().len(), 2);
    assert_eq!(mfk(&["verify", s(&out)]).status.code(), Some(0));
    // l = d is outside the graded range
    assert_eq!(mfk(&["knorrer", s(&l), "--l", "2"]).status.code(), Some(2));
}

#[test]
fn tensor_then_class() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (write(&dir, "l.json", L), write(&dir, "lp.json", L_PRIME));
    let t = dir.path().join("t.json");
    assert_eq!(mfk(&["tensor", s(&a), s(&b), "-o", s(&t)]).status.code(), Some(0));
    let v = json(&mfk(&["--json", "k0-class", s(&t)]));
    assert_eq!(v["results"]["coords"], serde_json::json!([-1, -1]));
    let tw = dir.path().join("tw.json");
    assert_eq!(mfk(&["twist", s(&t), "--by", "-1", "-o", s(&tw)]).status.code(), Some(0));
    let o = mfk(&["k0-class", s(&tw)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("(1, 1)"), "{}", stdout(&o));
}

#[test]
fn shift_twice_is_twist_by_degree() {
    let dir = TempDir::new().unwrap();
    let l = write(&dir, "l.json", L);
    let once = dir.path().join("s1.json");
    assert_eq!(mfk(&["shift", s(&l), "-o", s(&once)]).status.code(), Some(0));
    let twice = stdout(&mfk(&["shift", s(&once)]));
    let twisted = stdout(&mfk(&["twist", s(&l), "--by", "2"]));
    assert_eq!(twice, twisted);
    assert_eq!(stdout(&mfk(&["shift", s(&l), "--times", "2"])), twisted);
}

#[test]
fn euler_pairing_of_l() {
    let dir = TempDir::new().unwrap();
    let l = write(&dir, "l.json", L);
    let v = json(&mfk(&["--json", "euler", s(&l), s(&l)]));
    assert_eq!(v["results"]["euler"], 1);
    assert_eq!(v["certificates"]["certified"], true);
    // a window too small to certify is a mathematical failure, not an answer
    let with_window = |w: &str| {
        Command::new(env!("CARGO_BIN_EXE_mfk")).args(["euler", s(&l), s(&l)]).env("MFK_EULER_WINDOW", w).output().unwrap()
    };
    let o = with_window("1");
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not certified"));
    assert_eq!(with_window("0").status.code(), Some(2));
}

#[test]
fn tables() {
    let o = mfk(&["ku-table", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n = 3: K0 = Z + Z/2, K1 = 0\n");
    assert_eq!(mfk(&["ku-table", "--n", "2"]).status.code(), Some(2));

    let v = json(&mfk(&["--json", "pushforward-table", "--n", "4"]));
    assert_eq!(v["results"]["matrix"], serde_json::json!([[-1, 0, 0, 0], [0, -1, 0, 0], [1, 0, -2, -2], [0, 1, 2, 2]]));

    let o = mfk(&["abs-table", "--n", "2"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 4, "{text}");
    assert!(text.lines().nth(1).unwrap().starts_with("0  Z^2"));
    assert!(text.lines().nth(2).unwrap().starts_with("1  Z "));
}

#[test]
fn prop_we_and_milnor() {
    let o = mfk(&["prop-we", "--weights", "1,1,1", "--degrees", "2", "--factors", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("pass"));
    assert_eq!(mfk(&["prop-we", "--weights", "1", "--degrees", "3", "--factors", "2"]).status.code(), Some(2));

    let v = json(&mfk(&["--json", "milnor", "--model", "points:4"]));
    assert_eq!(v["results"]["krel0"]["rank"], 3);
    assert_eq!(v["results"]["krel1"]["rank"], 0);
    assert_eq!(mfk(&["milnor", "--model", "suspend:1,2:points:3"]).status.code(), Some(0));
    assert_eq!(mfk(&["milnor", "--model", "nonsense"]).status.code(), Some(2));
}

#[test]
fn resolve_betti_table() {
    let o = mfk(&["--json", "resolve", "--quadric", "3", "--steps", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&o)["results"]["ranks"], serde_json::json!([1, 3, 4, 4, 4, 4]));
    let text = stdout(&mfk(&["resolve", "--quadric", "2", "--steps", "4"]));
    assert!(text.contains("total:"), "{text}");
}

#[test]
fn json_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let l = write(&dir, "l.json", L);
    for args in [
        vec!["--json", "k0-class", s(&l)],
        vec!["--json", "ku-table", "--n", "7"],
        vec!["--json", "abs-table", "--n", "8"],
        vec!["--json", "euler", s(&l), s(&l)],
    ] {
        let (a, b) = (mfk(&args), mfk(&args));
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(json(&a)["schema_version"], 1);
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(mfk(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(mfk(&[]).status.code(), Some(2));
    assert_eq!(mfk(&["--help"]).status.code(), Some(0));
}
