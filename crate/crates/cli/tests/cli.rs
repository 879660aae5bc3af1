use std::io::Write;
use std::process::{Command, Output, Stdio};

fn cl16(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cl16")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn play(expr: &str, input: &str) -> String {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cl16"))
        .args(["play", expr])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    stdout(&out)
}

fn temp_file(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("cl16-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn prove_then_check() {
    let file = temp_file("distribution.json");
    let o = cl16(&["prove", "p & (q +[1] r) -> (p&q) +[2] (p&r)", "--out", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("VALID"));
    let o = cl16(&["check", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "OK\n~p | ~q *[1] ~r | (p & q) +[2] (p & r)\n");
}

#[test]
fn check_reports_the_failing_line() {
    let file = temp_file("broken.json");
    let o = cl16(&["prove", "~p | p", "--out", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&file).unwrap().replace("\"p\"", "\"q\"");
    std::fs::write(&file, text).unwrap();
    let o = cl16(&["check", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL line 2"), "{}", stdout(&o));
}

#[test]
fn invalid_verdicts_exit_one() {
    let o = cl16(&["prove", "p +[1] ~p"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("INVALID"));
    let o = cl16(&["oracle", "p +[1] ~p", "--witness"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("falsify"));
    let o = cl16(&["oracle", "(~p +[1] ~q) | (p *[2] q)", "--strategy"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("VALID\n"));
}

#[test]
fn eval_adjudicates() {
    let o = cl16(&["eval", "p *[1] q", "--run", "", "--interp", "p=0,q=0"]);
    assert_eq!(stdout(&o), "legal; winner: T\n");
    let o = cl16(&["eval", "p *[1] q", "--run", "B c1.0", "--interp", "p=0,q=0"]);
    assert_eq!(stdout(&o), "legal; winner: B\n");
    let o = cl16(&["eval", "p *[1] q", "--run", "B d1.0", "--interp", "p=0,q=0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("condition 2"));
}

#[test]
fn syntax_commands() {
    assert_eq!(stdout(&cl16(&["fmt", "(p | (q))"])), "p | q\n");
    assert_eq!(stdout(&cl16(&["negate", "p *[1] ~q"])), "~p +[1] q\n");
    assert_eq!(stdout(&cl16(&["rank", "p & q"])), "25\n");
    let o = cl16(&["fmt", "p &"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rank_cap_is_a_resource_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_cl16"))
        .args(["rank", "p | q"])
        .env("CL16_RANK_DIGIT_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_cl16"))
        .args(["rank", "p | q"])
        .env("CL16_RANK_DIGIT_CAP", "4")
        .output()
        .unwrap();
    assert_eq!(stdout(&o), "3125\n");
}

#[test]
fn json_output() {
    let o = cl16(&["--json", "prove", "~p | p"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["valid"], true);
    assert!(v["proof"].is_array());
    let o = cl16(&["purify", "--json", "--trace", "p | F"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["output"], "p");
    assert_eq!(v["trace"].as_array().unwrap().len(), 1);
}

#[test]
fn xcheck_small_sweep() {
    let o = cl16(&["xcheck", "--max-nodes", "2", "--letters", "2", "--clusters", "2", "--policies"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("agreement: 100%"), "{text}");
    assert!(text.contains("counterexamples: 0"), "{text}");
}

#[test]
fn gen_counts_match_the_enumeration() {
    let count = stdout(&cl16(&["gen", "--max-nodes", "2", "--letters", "1", "--clusters", "1", "--count"]));
    let listed = stdout(&cl16(&["gen", "--max-nodes", "2", "--letters", "1", "--clusters", "1"]));
    assert_eq!(count.trim().parse::<usize>().unwrap(), listed.lines().count());
    let limited = stdout(&cl16(&["gen", "--max-nodes", "2", "--limit", "7"]));
    assert_eq!(limited.lines().count(), 7);
}

#[test]
fn play_sessions() {
    let out = play("(~p +[1] ~q) | (p *[2] q)", "c2=0\nd1=1\nend\n");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[1], "d1.0");
    assert!(lines[2].starts_with("rejected"));
    assert_eq!(lines.last(), Some(&"T wins under all interpretations"));

    let out = play("p *[1] q", "end\n");
    assert!(out.ends_with("T wins under all interpretations\n"));

    let out = play("p +[1] ~p", "");
    assert!(out.contains("no winning strategy exists"));
}
