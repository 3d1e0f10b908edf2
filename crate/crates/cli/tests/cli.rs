use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gpsofic"));
    c.env_remove("GPSOFIC_THREADS");
    c
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn appendix() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../fixtures/data/appendix.json")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn bad_config_field_exits_two_with_its_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.toml",
        "schema = 1\ncrossed_product = 3\nmatrices_out = 5\n",
    );
    let o = bin()
        .args(["microstates", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("m.csv"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("`matrices_out`"), "{}", stderr(&o));

    let cfg = write(dir.path(), "kind.toml", "schema = 1\nkind = \"detplus\"\n");
    let o = bin()
        .args(["microstates", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("m.csv"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("`kind`"), "{}", stderr(&o));
}

#[test]
fn missing_output_is_a_schema_error() {
    let o = bin()
        .args(["microstates", "--config"])
        .arg(configs().join("microstates.toml"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("`out`"), "{}", stderr(&o));
}

#[test]
fn oversized_ambient_space_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(configs().join("simulate.toml"))
        .unwrap()
        .replace("N_schedule = [4, 8, 16, 32, 64]", "N_schedule = [8192]");
    let cfg = write(dir.path(), "big.toml", &text);
    let o = bin()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("s.csv"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(!dir.path().join("s.csv").exists());
}

#[test]
fn validate_accepts_the_worked_example_and_produced_assignments() {
    let o = bin().arg("validate").arg(appendix()).output().unwrap();
    assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("fixture"), "{}", stdout(&o));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("assignment.json");
    let o = bin()
        .args(["assign-strings", "--config"])
        .arg(configs().join("assign-strings.toml"))
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let manifest: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(manifest["command"], "assign-strings");
    assert_eq!(manifest["outputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert!(dir.path().join("assignment.json.manifest.json").exists());
    let o = bin().arg("validate").arg(&out).output().unwrap();
    assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));

    for cfg in std::fs::read_dir(configs()).unwrap() {
        let cfg = cfg.unwrap().path();
        let o = bin().arg("validate").arg(&cfg).output().unwrap();
        assert!(
            o.status.success(),
            "{}: {}{}",
            cfg.display(),
            stdout(&o),
            stderr(&o)
        );
    }
}

#[test]
fn validate_rejects_empty_string_sets_and_asymmetric_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(
        dir.path(),
        "empty.json",
        r#"{"colours": ["a", "b"], "colour_graph": {}, "strings": ["1"],
            "assignment": {"a": ["1"], "b": []}}"#,
    );
    let o = bin().arg("validate").arg(&empty).output().unwrap();
    assert!(!o.status.success(), "{}", stdout(&o));

    let asymmetric = write(
        dir.path(),
        "asym.json",
        r#"{"colours": ["a", "b"], "colour_graph": {"a": ["b"]}, "strings": ["1", "2"],
            "assignment": {"a": ["1"], "b": ["2"]}}"#,
    );
    let o = bin().arg("validate").arg(&asymmetric).output().unwrap();
    assert!(!o.status.success(), "{}", stdout(&o));
}

#[test]
fn json_syntax_errors_report_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let broken = write(
        dir.path(),
        "broken.json",
        "{\n  \"matrices\": [\n    1,\n  ]\n}\n",
    );
    let o = bin().arg("validate").arg(&broken).output().unwrap();
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
}

#[test]
fn reruns_are_byte_identical_and_seed_flag_wins() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, seed: Option<&str>| {
        let out = dir.path().join(name);
        let mut c = bin();
        c.args(["traffic-mc", "--config"])
            .arg(configs().join("traffic-mc.toml"))
            .arg("--out")
            .arg(&out);
        if let Some(s) = seed {
            c.args(["--seed", s]);
        }
        let o = c.output().unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        std::fs::read(&out).unwrap()
    };
    let first = run("a.csv", None);
    assert_eq!(first, run("b.csv", None));
    assert_ne!(first, run("c.csv", Some("12345")));
}

#[test]
fn preset_name_resolves_to_the_shipped_config() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .current_dir(dir.path())
        .args(["validate"])
        .arg(configs().join("two-free-M2.toml"))
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stdout(&o));
    let o = bin()
        .current_dir(dir.path())
        .args(["detplus", "--config", "two-free-M2", "--out", "x.csv"])
        .output()
        .unwrap();
    // the preset is an independence-test config
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("`kind`"), "{}", stderr(&o));
}
