use std::process::{Command, Output};

fn jtq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jtq")).args(args).env_remove("JTQ_DIGITS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = args.to_vec();
    all.push("--format=json");
    let o = jtq(&all);
    assert!(o.status.success(), "{:?}: {}", args, String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn truncated_product_example() {
    let v = json(&["constants", "--e=-2,1", "--method=truncated", "--plimit=5"]);
    let r = &v["results"][0];
    assert_eq!(r["exact"], "44/15");
    assert!(r["value"].as_str().unwrap().starts_with("2.9333"));
}

#[test]
fn k_one_is_exact_half() {
    let v = json(&["constants", "--k=1"]);
    assert_eq!(v["results"][0]["exact"], "1/2");
}

#[test]
fn empty_vector_is_one() {
    let v = json(&["constants", "--e=0"]);
    assert_eq!(v["results"][0]["exact"], "1");
}

#[test]
fn cyclotomic_and_jordan_examples() {
    let v = json(&["cyclotomic", "--n=5", "--k=2", "--z=1"]);
    let r = &v["results"][0];
    assert_eq!(r["ratio"], "4");
    assert_eq!(r["normalized"], "1/4");
    let v = json(&["jordan", "--e=-2,1", "--n=6"]);
    assert_eq!(v["results"][0]["value"], "6");
}

#[test]
fn exact_sum_example() {
    let v = json(&["sum", "--e=-2,1", "--x=10"]);
    assert_eq!(v["results"][0]["exact"], "82/3");
}

#[test]
fn exit_codes() {
    assert_eq!(jtq(&["constants", "--e=x"]).status.code(), Some(2));
    assert_eq!(jtq(&["constants", "--e=-4,2", "--direct-limit=2"]).status.code(), Some(3));
    assert_eq!(jtq(&["cyclotomic", "--n=1", "--z=1"]).status.code(), Some(4));
    assert_eq!(jtq(&["constants", "--k=2", "--method=truncated"]).status.code(), Some(4));
    assert_eq!(jtq(&["verify", "--theorem=thm4", "--xmax=1000000000"]).status.code(), Some(5));
    let o = jtq(&["cyclotomic", "--n=1", "--z=1"]);
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
}

#[test]
fn digits_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_jtq"))
        .args(["constants", "--e=-2,1", "--format=json"])
        .env("JTQ_DIGITS", "20")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["command"]["precision"]["decimal_digits"], 20);
}

#[test]
fn verify_csv_has_header_and_rows() {
    let o = jtq(&["verify", "--theorem=thm4", "--xmax=100000", "--format=csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config="));
    assert!(text.contains("# main_coefficient"));
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "x,sum,main,fitted,residual,bound_ratio");
    assert!(text.lines().filter(|l| !l.starts_with('#')).count() > 20);
}

#[test]
fn replay_is_identical_and_detects_edits() {
    let dir = std::env::temp_dir().join(format!("jtq-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let o = jtq(&["sum", "--e=-2,1", "--x=10,100", "--format=json"]);
    let path = dir.join("sum.json");
    std::fs::write(&path, &o.stdout).unwrap();
    let r = jtq(&["replay", "--input", path.to_str().unwrap()]);
    assert!(r.status.success());
    assert_eq!(r.stdout, o.stdout);

    let edited = stdout(&o).replacen("82/3", "83/3", 1);
    std::fs::write(&path, edited).unwrap();
    assert_eq!(jtq(&["replay", "--input", path.to_str().unwrap()]).status.code(), Some(6));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn text_output_is_readable() {
    let o = jtq(&["verify", "--theorem=thm2", "--e=-2,1", "--xmax=100000"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));
}
