use std::process::Command;

use polyforge::cli::{execute, SCHEMA};

fn data(f: &str) -> String {
    format!("{}/data/{f}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> polyforge::cli::Outcome {
    execute(std::iter::once("polyforge".to_string()).chain(args.iter().map(|s| s.to_string())))
}

fn binary(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_polyforge")).args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).expect("utf-8"))
}

#[test]
fn documented_examples() {
    let forge = run(&["forge", "--s", "1", "--d", "2", "--p", "5"]);
    assert_eq!(forge.code, 0);
    assert!(forge.stdout.contains("gamma=001"), "{}", forge.stdout);

    let sys = data("xsq_plus_1.sys");
    let density = run(&["density", "--system", &sys, "--limit", "20"]);
    assert_eq!(density.code, 0);
    assert!(density.stdout.contains("pi_S=4 pi=8 ratio=0.5"), "{}", density.stdout);

    let m = data("ones3.mat");
    let per = run(&["per", "--matrix", &m]);
    assert_eq!(per.code, 0);
    assert!(per.stdout.lines().any(|l| l.ends_with('6') && l.contains("permanent")), "{}", per.stdout);
}

#[test]
fn exit_codes_from_the_binary() {
    let sys = data("planted.sys");
    let xsq = data("xsq_plus_1.sys");
    assert_eq!(binary(&["hc", "--matrix", &data("k4.mat")]).0, 0);
    assert_eq!(binary(&["no-such-command"]).0, 64);
    assert_eq!(binary(&["forge", "--s", "1"]).0, 64);
    assert_eq!(binary(&["solve", "--system", &sys, "--p", "9"]).0, 1);
    assert_eq!(binary(&["degree", "--circuit", "/nonexistent/file.circ"]).0, 1);
    let (code, out) = binary(&["--eval-budget", "10", "density", "--system", &xsq, "--limit", "100000"]);
    assert_eq!(code, 2);
    assert!(out.contains("partial"), "{out}");
}

#[test]
fn reports_embed_the_run_config() {
    let m = data("k4.mat");
    let text = run(&["--seed", "7", "hc", "--matrix", &m]);
    let first = text.stdout.lines().next().unwrap();
    let cfg: serde_json::Value = serde_json::from_str(first.strip_prefix("config ").unwrap()).unwrap();
    assert_eq!(cfg["command"], "hc");
    assert_eq!(cfg["seed"], 7);

    let json = run(&["--json", "--seed", "7", "hc", "--matrix", &m]);
    let v: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
    assert_eq!(v["schema"], SCHEMA);
    assert_eq!(v["config"]["params"]["matrix"], m.as_str());
    assert_eq!(v["config"]["budgets"]["monomials"], 1_000_000);
    assert_eq!(v["result"]["hc"], "6");
}

#[test]
fn seeded_commands_repeat() {
    for args in [
        &["--seed", "3", "gs-sim", "--size", "4000", "--trials", "100"][..],
        &["--seed", "3", "per-verify", "--t", "3", "--determinant", "--runs", "10"][..],
        &["--seed", "3", "ama-sim", "--x", "1,2,3,4,5,6,7,8", "--i", "0", "--b", "1", "--runs", "3"][..],
    ] {
        let a = run(args);
        assert_eq!(a.code, 0, "{}", a.stderr);
        assert_eq!(a, run(args));
    }
}
