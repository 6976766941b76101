//! Run options, merged from an optional TOML file and the command line.
//! Command-line values win.

use std::path::{Path, PathBuf};

use serde::Deserialize;

/// Either a single string or a list of strings in the config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(String),
    Many(Vec<String>),
}

impl OneOrMany {
    pub fn into_vec(self) -> Vec<String> {
        match self {
            OneOrMany::One(s) => vec![s],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileOptions {
    pub problem: Option<OneOrMany>,
    pub rule: Option<OneOrMany>,
    pub agents: Option<usize>,
    pub cycles: Option<usize>,
    pub runs: Option<usize>,
    pub seed: Option<u64>,
    pub formulation: Option<String>,
    pub success_tolerance: Option<f64>,
    pub problem_file: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    pub summary: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
}

impl FileOptions {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))
    }
}

/// Fully resolved options for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub problems: Vec<String>,
    pub rules: Vec<String>,
    pub agents: usize,
    pub cycles: usize,
    pub runs: usize,
    pub seed: u64,
    pub formulation: String,
    pub success_tolerance: Option<f64>,
    pub problem_file: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

pub const DEFAULT_RULE: &str = "deps:CR=0.9";

/// Overlays `cli` on `file` and applies defaults. Relative output paths are
/// placed under `out_dir` when one is set; with an output directory but no
/// `--out`, results go to `results.csv` there.
pub fn merge(cli: FileOptions, file: FileOptions) -> Result<RunOptions, String> {
    let problems = cli
        .problem
        .or(file.problem)
        .map(OneOrMany::into_vec)
        .filter(|v| !v.is_empty())
        .ok_or("no problem given (use --problem)")?;
    let rules = cli
        .rule
        .or(file.rule)
        .map(OneOrMany::into_vec)
        .filter(|v| !v.is_empty())
        .unwrap_or_else(|| vec![DEFAULT_RULE.to_string()]);
    let out_dir = cli.out_dir.or(file.out_dir);
    let place = |p: Option<PathBuf>| -> Option<PathBuf> {
        match (p, &out_dir) {
            (Some(p), Some(dir)) if p.is_relative() => Some(dir.join(p)),
            (p, _) => p,
        }
    };
    let mut out = place(cli.out.or(file.out));
    if out.is_none() {
        out = out_dir.as_ref().map(|d| d.join("results.csv"));
    }
    Ok(RunOptions {
        problems,
        rules,
        agents: cli.agents.or(file.agents).unwrap_or(70),
        cycles: cli.cycles.or(file.cycles).unwrap_or(2000),
        runs: cli.runs.or(file.runs).unwrap_or(100),
        seed: cli.seed.or(file.seed).unwrap_or(0),
        formulation: cli
            .formulation
            .or(file.formulation)
            .unwrap_or_else(|| "bch".to_string()),
        success_tolerance: cli.success_tolerance.or(file.success_tolerance),
        problem_file: cli.problem_file.or(file.problem_file),
        out,
        trace: place(cli.trace.or(file.trace)),
        summary: place(cli.summary.or(file.summary)),
    })
}
