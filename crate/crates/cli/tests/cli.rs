use assert_cmd::Command;
use serde_json::Value;

fn exclie() -> Command {
    let mut c = Command::cargo_bin("exclie").unwrap();
    c.env_remove("EXCLIE_DATA_DIR");
    c
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = exclie().arg("--format").arg("json").args(args).output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    (out.status.code().unwrap(), v)
}

fn stdout(args: &[&str]) -> String {
    let out = exclie().args(args).assert().success();
    String::from_utf8(out.get_output().stdout.clone()).unwrap()
}

#[test]
fn weyl_dim_of_e6_minuscule() {
    assert_eq!(stdout(&["weyl-dim", "E6", "1,0,0,0,0,0"]).trim(), "27");
    let (code, v) = json(&["weyl-dim", "E6", "1,0,0,0,0,0"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["dim"], "27");
}

#[test]
fn wedge_cube_of_a2_adjoint() {
    let (code, v) = json(&["wedge", "A2", "--module", "1,1", "--power", "3", "--p", "0", "--decompose"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["dim"], 56);
    let weights: Vec<Value> = v["result"]["decomposition"]["weyl"].as_array().unwrap().iter().map(|t| t["weight"].clone()).collect();
    assert!(weights.contains(&serde_json::json!([2, 2])));
    assert!(weights.contains(&serde_json::json!([0, 3])));
    assert_eq!(v["result"]["decomposition"]["dominance_maximal"], serde_json::json!([[2, 2]]));
}

#[test]
fn screen_a3_in_e6_at_2_is_ruled_out_with_trail() {
    let (code, v) = json(&["screen", "A3", "E6", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["status"], "ruled_out");
    assert!(!v["result"]["trail"].as_array().unwrap().is_empty());
    assert!(stdout(&["screen", "A3", "E6", "2"]).contains("ruled_out"));
}

#[test]
fn domain_errors_exit_1() {
    exclie().args(["weyl-dim", "E6", "1,0"]).assert().code(1);
    exclie().args(["weyl-dim", "Z3", "1,0,0"]).assert().code(1);
    let (code, v) = json(&["steinberg", "3,1", "--p", "4"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "error");
}

#[test]
fn gaps_exit_2_and_name_the_entry() {
    let (code, v) = json(&["simple-dim", "D5", "0,1,0,0,0", "--p", "2"]);
    assert_eq!(code, 2);
    let msg = v["error"]["message"].as_str().unwrap();
    assert!(msg.contains("D5 V(0,1,0,0,0) at p=2"), "{msg}");
    let (code, v) = json(&["screen", "A1", "E8", "9"]);
    assert_eq!(code, 2);
    assert_eq!(v["result"]["status"], "not_covered");
}

#[test]
fn json_output_is_byte_stable() {
    for args in [
        vec!["screen", "A2", "E8", "5"],
        vec!["corollary2", "E6", "2"],
        vec!["wedge", "A3", "--module", "0,1,0", "--power", "3", "--p", "2", "--decompose"],
        vec!["abs-levels", "E7", "--levi", "1,2,3,4,5,6"],
    ] {
        let run = || exclie().arg("--format").arg("json").args(&args).output().unwrap().stdout;
        let (a, b) = (run(), run());
        assert!(!a.is_empty());
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn every_subcommand_runs() {
    for args in [
        vec!["roots", "G2"],
        vec!["char", "A2", "1,1", "--p", "3"],
        vec!["tensor", "A1", "2", "2", "--p", "3"],
        vec!["restrict", "E8", "0,0,0,0,0,0,0,1", "--to", "D8"],
        vec!["restrict", "E7", "1,0,0,0,0,0,0", "--levi", "1,2,3,4,5,6"],
        vec!["steinberg", "7,3", "--p", "5"],
        vec!["jantzen", "G2", "1,1", "--p", "3"],
        vec!["simple-dim", "E8", "0,0,0,0,0,0,0,1", "--p", "2"],
        vec!["subsystems", "F4", "--depth", "1", "--p", "2"],
        vec!["levis", "G2"],
        vec!["h1", "C4", "0,1,0,0", "--p", "2"],
    ] {
        let (code, v) = json(&args);
        assert_eq!(code, 0, "{args:?}: {v}");
        assert_eq!(v["command"], args[0]);
    }
}

#[test]
fn adjoint_restriction_to_e6_levi() {
    let (_, v) = json(&["restrict", "E7", "1,0,0,0,0,0,0", "--levi", "1,2,3,4,5,6"]);
    assert_eq!(v["result"]["dim"], 133);
    assert_eq!(v["result"]["weyl"].as_array().unwrap().len(), 4);
}

#[test]
fn abs_verify_e6_has_no_violations() {
    let (code, v) = json(&["abs-verify", "E6"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["violations"], serde_json::json!([]));
}

#[test]
fn data_dir_overrides_h1_table() {
    let bundled = include_str!("../../core/data/h1_table.txt");
    let dir = std::env::temp_dir().join(format!("exclie-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let trimmed: String = bundled.lines().filter(|l| !l.starts_with("A1 ")).map(|l| format!("{l}\n")).collect();
    std::fs::write(dir.join("h1_table.txt"), trimmed).unwrap();

    let (_, before) = json(&["h1", "A1", "2", "--p", "2"]);
    assert_eq!(before["result"]["h1"]["status"], "non-zero");
    let out = exclie().args(["--format", "json", "--data-dir"]).arg(&dir).args(["h1", "A1", "2", "--p", "2"]).output().unwrap();
    let after: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_ne!(after["result"]["h1"]["status"], "non-zero");

    std::fs::write(dir.join("h1_table.txt"), "not a table\n").unwrap();
    exclie().arg("--data-dir").arg(&dir).args(["h1", "A1", "2", "--p", "2"]).assert().code(1);
    std::fs::remove_dir_all(&dir).unwrap();
}
