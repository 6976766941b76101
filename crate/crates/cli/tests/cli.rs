use std::path::PathBuf;
use std::process::{Command, Output};

fn swaf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swaf"))
        .args(args)
        .env_remove("SWAF_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

const SMALL: [&str; 8] = ["--agents", "10", "--cycles", "30", "--runs", "3", "--seed", "42"];

#[test]
fn run_writes_stats_and_trace() {
    let dir = scratch("run_writes");
    let out = dir.join("results.csv");
    let trace = dir.join("traces.csv");
    let mut args = vec!["run", "--problem", "GP,G8", "--rule", "deps:CR=0.9", "--rule", "rc:[ps@1,de:CR=0.9@2]"];
    args.extend(SMALL);
    args.extend(["--formulation", "acr", "--out", out.to_str().unwrap(), "--trace", trace.to_str().unwrap()]);
    let o = swaf(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stats = std::fs::read_to_string(&out).unwrap();
    assert!(stats.starts_with("problem,rule,formulation,agents"));
    assert_eq!(stats.lines().count(), 1 + 4);
    assert!(stats.contains("rc:[ps@1,de:CR=0.9@2]"));
    let traces = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(traces.lines().count(), 1 + 4 * 31);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("G8") && stdout.contains("deps:CR=0.9 [acr]"));
}

#[test]
fn same_seed_same_output() {
    let dir = scratch("same_seed");
    let mut outputs = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let path = dir.join(name);
        let mut args = vec!["run", "--problem", "BR"];
        args.extend(SMALL);
        args.extend(["--out", path.to_str().unwrap()]);
        assert!(swaf(&args).status.success());
        outputs.push(std::fs::read_to_string(path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn config_file_with_flag_override_and_out_dir() {
    let dir = scratch("config_file");
    let cfg = dir.join("exp.toml");
    std::fs::write(
        &cfg,
        r#"
problem = ["H3"]
rule = ["ps"]
agents = 8
cycles = 20
runs = 9
seed = 3
"#,
    )
    .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_swaf"))
        .args(["run", "--config", cfg.to_str().unwrap(), "--runs", "2"])
        .env("SWAF_OUT_DIR", dir.join("out"))
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stats = std::fs::read_to_string(dir.join("out").join("results.csv")).unwrap();
    let row = stats.lines().nth(1).unwrap();
    assert!(row.starts_with("H3,ps,bch,8,20,2,"), "{row}");
}

#[test]
fn user_problem_file() {
    let dir = scratch("problem_file");
    let file = dir.join("problems.toml");
    std::fs::write(
        &file,
        r#"
[[problem]]
name = "sphere2"
dimension = 2
lower = -5.0
upper = 5.0
objective = "x1^2 + x2^2"
known_best = 0.0
"#,
    )
    .unwrap();
    let mut args = vec!["run", "--problem", "sphere2", "--problem-file", file.to_str().unwrap()];
    args.extend(SMALL);
    let o = swaf(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("sphere2"));
}

#[test]
fn bad_input_fails_with_nonzero_exit() {
    for args in [
        vec!["run", "--problem", "G99"],
        vec!["run", "--problem", "G1", "--rule", "de:CR=1.5"],
        vec!["run", "--problem", "G1", "--formulation", "penalty"],
        vec!["run", "--problem", "G1", "--agents", "1"],
        vec!["run"],
    ] {
        let o = swaf(&args);
        assert!(!o.status.success(), "{args:?} should fail");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn list_shows_catalog() {
    let o = swaf(&["list"]);
    assert!(o.status.success());
    let text = String::from_utf8_lossy(&o.stdout);
    for id in ["GP", "BR", "H3", "SH", "G1", "G5", "G11"] {
        assert!(text.lines().any(|l| l.starts_with(id)), "missing {id}");
    }
}
