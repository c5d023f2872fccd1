use std::process::{Command, Output};

fn rotkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rotkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn rotset_csv_lists_the_quadrilateral() {
    let o = rotkit(&["rotset", "--t", "3/4", "--depth", "8", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let outer: Vec<&str> = text.lines().filter(|l| l.starts_with("outer,")).collect();
    assert_eq!(outer.len(), 4);
    for v in ["0,0", "2/3,0", "3/5,1/5", "0,1/2"] {
        assert!(
            outer.iter().any(|l| l.ends_with(v)),
            "missing {v} in {text}"
        );
    }
}

#[test]
fn rotset_json_reparses_and_is_reproducible() {
    let a = rotkit(&["rotset", "--t", "1", "--depth", "4"]);
    let b = rotkit(&["rotset", "--t", "1", "--depth", "4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["t"], "1");
    assert_eq!(v["closed"], true);
    assert_eq!(v["classification"]["kind"], "rational_regular");
}

#[test]
fn svg_output_is_byte_identical() {
    let args = ["rotset", "--t", "3/4", "--depth", "8", "--format", "svg"];
    let (a, b) = (rotkit(&args), rotkit(&args));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("<svg"));
}

#[test]
fn out_of_range_parameter_exits_with_two() {
    assert_eq!(rotkit(&["rotset", "--t", "2"]).status.code(), Some(2));
    assert_eq!(
        rotkit(&["rotset", "--t", "nonsense"]).status.code(),
        Some(2)
    );
    assert_eq!(
        rotkit(&["scan", "--from", "1", "--to", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn knead_reports_anchor() {
    let o = rotkit(&["knead", "--t", "0", "--len", "8"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("kneading 2(1)"));
    assert!(text.contains("prefix 21111111"));
}

#[test]
fn scan_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("rotkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scan.csv");
    let o = rotkit(&[
        "scan",
        "--from",
        "3/4",
        "--to",
        "3/4",
        "--steps",
        "2",
        "--depth",
        "6",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("t,plateau_id,n_vertices,closed"));
    assert_eq!(text.lines().count(), 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn unwritable_output_exits_with_one() {
    let o = rotkit(&[
        "rotset",
        "--t",
        "1",
        "--depth",
        "4",
        "--out",
        "/nonexistent-dir/x.json",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn infimax_and_orbit() {
    assert_eq!(
        stdout(&rotkit(&["infimax", "--alpha", "1/2,0,1/2"])).trim(),
        "(20)"
    );
    let o = rotkit(&["orbit", "--t", "3/4", "--x", "S1:149/40", "--steps", "3"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().nth(1).unwrap().starts_with("0,S1,149/40,"));
}
