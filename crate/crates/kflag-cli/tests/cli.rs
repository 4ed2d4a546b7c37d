//! End-to-end checks of the `kflag` binary: exit codes, output formats, and
//! byte-stable table emission against the reviewed golden file.

use std::path::Path;
use std::process::Command;

fn kflag() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kflag"))
}

#[test]
fn verify_clean_suite_exits_zero() {
    let out = kflag()
        .args(["verify", "gk", "--type", "A2"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("instances=216"), "{stdout}");
    assert!(stdout.contains("fail=0"), "{stdout}");
    assert!(stdout.contains("unknown=0"), "{stdout}");
}

#[test]
fn verify_parabolic_quotient() {
    let out = kflag()
        .args(["verify", "gk", "--type", "A2", "--parabolic", "2"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("instances=27"), "{stdout}");
}

#[test]
fn starved_node_cap_reports_unknown_and_fails() {
    let out = kflag()
        .args(["verify", "gk", "--type", "A2", "--cap", "1"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(!stdout.contains("unknown=0"), "{stdout}");
    assert!(stdout.contains("UNKNOWN"), "{stdout}");
}

#[test]
fn rejects_unknown_type_tag() {
    let out = kflag().args(["verify", "gk", "--type", "Z9"]).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn pn_table_on_stdout() {
    let out = kflag()
        .args(["pn", "--n", "2", "--family", "p"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("n,u,v,w,coefficient"));
    assert_eq!(lines.count(), 27);
    // Closed formula and recurrence emit the same table.
    let rec = kflag()
        .args(["pn", "--n", "2", "--family", "p", "--form", "recur"])
        .output()
        .unwrap();
    assert_eq!(stdout, String::from_utf8(rec.stdout).unwrap());
}

#[test]
fn tables_match_reviewed_golden_file() {
    let dir = tempdir();
    let path = dir.join("a2_c.csv");
    let out = kflag()
        .args(["tables", "--type", "A2", "--family", "c", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let got = std::fs::read(&path).unwrap();
    let want = std::fs::read(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/a2_c_table.csv"),
    )
    .unwrap();
    assert_eq!(got, want, "table emission must be byte-identical to the golden file");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn tables_json_is_well_formed() {
    let dir = tempdir();
    let path = dir.join("p1_p.json");
    let out = kflag()
        .args(["tables", "--type", "A1", "--family", "p", "--format", "json", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let value: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let rows = value.as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for row in rows {
        for key in ["u", "v", "w", "coef"] {
            assert!(row.get(key).is_some(), "missing {key} in {row}");
        }
    }
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn show_prints_certificate_for_single_instance() {
    let out = kflag()
        .args([
            "show", "--type", "A2", "--family", "p", "--u", "1", "--v", "1", "--w", "121",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("member"), "{stdout}");
    assert!(stdout.contains("exps"), "{stdout}");
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "kflag-cli-test-{}-{:?}",
        std::process::id(),
        std::thread::current().id()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
