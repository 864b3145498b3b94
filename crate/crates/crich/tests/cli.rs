use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn crich(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crich")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_owned()
}

#[test]
fn generated_tables_validate_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let file = path(dir.path(), "z2.json");
    assert_eq!(code(&crich(&["semigroup", "gen", "cyclic", "2", "--output", &file])), 0);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(doc["table"], serde_json::json!([[0, 1], [1, 0]]));
    assert_eq!(doc["format"], 1);
    assert_eq!(code(&crich(&["semigroup", "validate", &file])), 0);
}

#[test]
fn find_r_on_z2() {
    let out = crich(&["cr", "find-r", "--sgp", "cyclic:2", "--set", "[0]", "--k", "2", "--format", "text"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "2\n");
}

#[test]
fn witnesses_reverify_and_tampering_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let funs = r#"[{"values":[1,2,1],"default":0},{"values":[2,2,0],"default":0}]"#;
    let w = path(dir.path(), "w.json");
    let base = ["--sgp", "cyclic:3", "--set", "[0]", "--funs", funs];
    let mut find = vec!["cr", "witness"];
    find.extend(base);
    find.extend(["--r", "3", "--output", &w]);
    assert_eq!(code(&crich(&find)), 0);
    let mut verify = vec!["cr", "verify"];
    verify.extend(base);
    verify.extend(["--witness", &w]);
    assert_eq!(code(&crich(&verify)), 0);

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    let a0 = doc["witness"]["a"][0].as_u64().unwrap();
    doc["witness"]["a"][0] = ((a0 + 1) % 3).into();
    std::fs::write(&w, doc.to_string()).unwrap();
    assert_eq!(code(&crich(&verify)), 1);
}

#[test]
fn product_witness_reverifies_in_the_product() {
    let dir = tempfile::tempdir().unwrap();
    let funs = r#"[{"values":[1,2,3,0],"default":0},{"values":[3,3,1,2],"default":1}]"#;
    let w = path(dir.path(), "pw.json");
    let st = path(dir.path(), "st.json");
    let out = crich(&[
        "product", "witness", "--sgp-a", "left_zero:2", "--set-a", "[0]", "--sgp-b", "cyclic:2", "--set-b", "[0]",
        "--funs", funs, "--k", "2", "--l-max", "4", "--output", &w,
    ]);
    assert_eq!(code(&out), 0);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    assert!(doc["transcript"].as_array().unwrap().iter().all(|t| t["in_target"] == true));
    assert!(doc["l_used"].as_u64().unwrap() <= 4);
    assert_eq!(code(&crich(&["semigroup", "product", "--left", "left_zero:2", "--right", "cyclic:2", "--output", &st])), 0);
    assert_eq!(code(&crich(&["cr", "verify", "--sgp", &st, "--set", "[0]", "--funs", funs, "--witness", &w])), 0);
}

#[test]
fn output_is_independent_of_job_count() {
    let runs: [&[&str]; 3] = [
        &["lemma1", "check", "--sgp", "cyclic:2", "--set", "[0]", "--k", "2", "--n", "5", "--constructive"],
        &["lemma2", "estimate", "--u", "2", "--v", "3", "--n", "5", "--mode", "sampled", "--seed", "11", "--samples", "6"],
        &["cr", "check", "--sgp", "full_transformation:2", "--set", "[0,3]", "--k", "2", "--r", "2"],
    ];
    for args in runs {
        let one = crich(&[&["--jobs", "1"], args].concat());
        let again = crich(&[&["--jobs", "1"], args].concat());
        let four = crich(&[&["--jobs", "4"], args].concat());
        assert_eq!(one.stdout, again.stdout, "{args:?}");
        assert_eq!(one.stdout, four.stdout, "{args:?}");
        assert_eq!(one.status, four.status, "{args:?}");
    }
}

#[test]
fn input_errors_and_cost_guard() {
    assert_eq!(code(&crich(&["cr", "find-r", "--sgp", "{not json", "--set", "[0]", "--k", "1"])), 2);
    assert_eq!(code(&crich(&["cr", "find-r", "--sgp", "/no/such/file", "--set", "[0]", "--k", "1"])), 2);
    assert_eq!(code(&crich(&["fu", "--blocks", "[[2],[1]]"])), 2);
    assert_eq!(code(&crich(&["semigroup", "gen", "full_transformation", "4"])), 2);
    let guarded = crich(&["--max-cost", "100", "lemma1", "check", "--sgp", "cyclic:2", "--set", "[0]", "--k", "2", "--r", "2", "--n", "5"]);
    assert_eq!(code(&guarded), 3);
    assert!(String::from_utf8(guarded.stderr).unwrap().contains("exceeds budget"));
}

#[test]
fn selftest_subset_passes() {
    let out = crich(&["selftest", "--criterion", "3", "--criterion", "7", "--format", "text"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 2, "{text}");
}
