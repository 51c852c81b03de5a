use std::io::Write;
use std::process::{Command, Output};

fn glued(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glued")).args(args).env_remove("PV_BUDGET").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_prints_normal_forms() {
    for (word, expected) in
        [("G:1 H:1 G:-1 H:-1", "g=0 h=0 a=(e g:1 h:1)\n"), ("", "g=0 h=0 a=()\n"), ("G:2 G:3", "g=5 h=0 a=()\n")]
    {
        let o = glued(&["eval", "--left", "Z", "--right", "Z", word]);
        assert!(o.status.success());
        assert_eq!(stdout(&o), expected);
    }
}

#[test]
fn bad_input_exits_2() {
    let o = glued(&["eval", "--left", "Z", "--right", "Z", "G:1 X:2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    let o = glued(&["eval", "--left", "Q", "--right", "Z", ""]);
    assert_eq!(o.status.code(), Some(2));
    let o = glued(&["suite", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn classify_accepts_json_and_files() {
    let o = glued(&["classify", "--left", r#"{"type":"cyclic","n":4}"#, "--right", "Z/3", "--verify"]);
    assert_eq!(stdout(&o), "Sym(6)\norder 720 (verified)\n");
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, r#"{{"type":"cyclic","n":3}}"#).unwrap();
    let spec = format!("@{}", f.path().display());
    let o = glued(&["classify", "--left", &spec, "--right", "Z/3"]);
    assert_eq!(stdout(&o), "Alt(5)\n");
}

#[test]
fn cube_ball_formats() {
    let o = glued(&["cube", "ball", "--radius", "1", "--payload", "1"]);
    let dot = stdout(&o);
    assert!(dot.starts_with("graph cube {\n") && dot.ends_with("}\n"));
    assert!(dot.contains("v0 [label=\"0\""));
    let o = glued(&["cube", "ball", "--radius", "1", "--payload", "1", "--format", "jsonl"]);
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    // 𝔊 itself plus one toggle per point of payload ≤ 1: e, g:±1, h:±1
    assert_eq!(lines.len(), 6);
    assert!(lines.iter().all(|v| v["s"].is_i64() && v["removed"].is_array() && v["added"].is_array()));
}

#[test]
fn cube_transport() {
    let from = r#"{"removed":["g:1"],"added":["h:2"]}"#;
    let to = r#"{"removed":["g:-3"],"added":["h:1"]}"#;
    let o = glued(&["cube", "transport", "--from", from, "--to", to]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("g=0 h=0 a="));
    let o = glued(&["cube", "transport", "--from", from, "--to", r#"{"removed":[],"added":["h:1"]}"#]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("fiber"));
}

#[test]
fn lef_check_jsonl() {
    let o = glued(&["lef", "check", "--left", "Z", "--right", "Z/2", "-n", "1", "--check", "multiplicativity"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["check"], "multiplicativity");
    assert_eq!(v["mode"], "exhaustive");
    assert_eq!(v["pairs_checked"], 72 * 72);
    assert_eq!(v["failure_count"], 0);
    assert!(v["wall_time"].is_f64());
}

#[test]
fn lef_respects_budget_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_glued"))
        .args(["lef", "check", "--left", "Z", "--right", "Z", "-n", "1", "--check", "multiplicativity"])
        .env("PV_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn pong_and_folner() {
    let o = glued(&["pong", "--g", "1", "--h", "1", "-L", "8"]);
    assert_eq!(stdout(&o), "words=510 distinct=true\n");
    let o = glued(&["pong", "--g", "0", "--h", "1", "-L", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = glued(&["folner", "-n", "10", "--test", "G:1"]);
    assert_eq!(stdout(&o), "2/21\n");
}

#[test]
fn suite_is_deterministic() {
    let a = glued(&["suite", "all", "--seed", "42"]);
    let b = glued(&["suite", "all", "--seed", "42"]);
    assert!(a.status.success(), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with(" passed, 0 failed\n"));
    let j = glued(&["suite", "dynamics", "--seed", "42", "--format", "jsonl"]);
    for line in stdout(&j).lines() {
        serde_json::from_str::<serde_json::Value>(line).unwrap();
    }
}

#[test]
fn failure_repro_command_reproduces() {
    let run =
        |args: &[&str]| Command::new(env!("CARGO_BIN_EXE_glued")).args(args).env("PV_BUDGET", "10").output().unwrap();
    let o = run(&["suite", "lef", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let repro = text.lines().find_map(|l| l.trim().strip_prefix("repro: ")).expect("a repro line").to_string();
    assert_eq!(repro, "PV_BUDGET=10 glued suite lef --seed 5 --only multiplicativity");
    let args: Vec<&str> = repro.split_whitespace().skip(2).collect();
    let again = run(&args);
    assert_eq!(again.status.code(), Some(1));
    assert!(stdout(&again).contains("FAIL lef/multiplicativity"));
}

#[test]
fn suite_config_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "seed = 3\nformat = \"jsonl\"\n[samples]\nlaws = 10\ncommutator = 10\nproduct = 100\n[context]\nleft = \"Z\"\nright = \"F2\"").unwrap();
    let path = f.path().to_str().unwrap();
    let o = glued(&["suite", "core", "--config", path]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).lines().next().unwrap().starts_with('{'));
    // flags win over the file
    let o = glued(&["suite", "core", "--config", path, "--format", "text"]);
    assert!(stdout(&o).starts_with("PASS "));
    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "sede = 3").unwrap();
    let o = glued(&["suite", "core", "--config", bad.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
