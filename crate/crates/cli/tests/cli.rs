use std::path::Path;
use std::process::{Command, Output};

fn qci(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qci"));
    cmd.args(args).env_remove("QCI_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("QCI_CACHE_DIR", dir);
    }
    cmd.output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn gen_then_check_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = qci(&["gen", "--family", "power-in-hypersurface", "--seed", "1", "--a", "2", "--b", "3"], None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "char: 101\nvars: x:1\nbase_relations: [x^3]\nideal: [x^2]\n");
    let file = write(dir.path(), "i.txt", &text);
    let out = qci(&["check", &file, "--hmax", "5", "--format", "machine"], None);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdict"], "q.c.i., not c.i.");
    assert_eq!(report["series"]["r_over_e"], serde_json::json!([1, 0, 1, 0, 1, 0]));
}

#[test]
fn machine_reports_are_deterministic_and_cache_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "i.txt", "char: 101\nvars: x:1, y:1\nideal: [x*y]\nmodule M:\n  twists: [0]\n  relations:\n  [x]\n");
    let strip = |o: Output| {
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    let args = ["check", &file, "--hmax", "6", "--format", "machine"];
    let cold = strip(qci(&args, None));
    let warm1 = strip(qci(&args, Some(cache.path())));
    let warm2 = strip(qci(&args, Some(cache.path())));
    assert_eq!(cold, warm1);
    assert_eq!(warm1, warm2);
    assert!(std::fs::read_dir(cache.path()).unwrap().count() > 0);
    assert_eq!(cold["verdict"], "c.i. (hence q.c.i.)");
}

#[test]
fn input_errors_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "char: 101\nvars: x:1, y:1\nideal: [x*y, x + y^2]\n");
    let out = qci(&["check", &bad], None);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3, column 14"));

    let composite = write(dir.path(), "p.txt", "char: 100\nvars: x:1\nideal: [x]\n");
    assert_eq!(qci(&["check", &composite], None).status.code(), Some(3));
    assert_eq!(qci(&["check", &dir.path().join("missing").to_string_lossy()], None).status.code(), Some(3));
}

#[test]
fn redundant_generators_need_minimize() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "nm.txt", "char: 101\nvars: x:1, y:1\nideal: [x^2, x^3]\n");
    let out = qci(&["check", &file], None);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("generator 1"));
    let out = qci(&["check", &file, "--minimize", "--hmax", "4", "--checks", "koszul,ci", "--format", "machine"], None);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["minimized"], true);
    let names: Vec<&str> = report["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.iter().all(|n| n.starts_with("koszul") || n.starts_with("ci")));
}
