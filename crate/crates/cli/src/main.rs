use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use swaf::bench::{
    format_summary, run_experiment, trace_rows, write_stats_csv, write_trace_csv,
    ExperimentConfig, StatsRow,
};
use swaf::problems::{builtin, load_problem_file, GapMode, BUILTIN_IDS};
use swaf::{FormulationSpec, ProblemDef, RuleStrategy, SwarmConfig};

mod options;

use options::{merge, FileOptions, OneOrMany};

#[derive(Parser)]
#[command(name = "swaf", version, about = "Swarm algorithm framework benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run repeated seeded experiments and report statistics.
    Run(Box<RunArgs>),
    /// List built-in problems.
    List,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Problem IDs, comma separated. Groups: all, unconstrained, inequality, equality.
    #[arg(long, value_delimiter = ',')]
    problem: Vec<String>,
    /// Rule strategy; repeat for several (ps, de:CR=0.9, deps:CR=0.1, rc:[...], nn:[...]).
    #[arg(long)]
    rule: Vec<String>,
    /// Number of agents N.
    #[arg(long)]
    agents: Option<usize>,
    /// Learning cycles T.
    #[arg(long)]
    cycles: Option<usize>,
    /// Independent runs per problem and rule.
    #[arg(long)]
    runs: Option<usize>,
    /// Master seed; run seeds are derived from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Constraint handling: bch or acr.
    #[arg(long)]
    formulation: Option<String>,
    /// Relative success gap (default 0.02).
    #[arg(long)]
    success_tolerance: Option<f64>,
    /// TOML file with user-defined problems.
    #[arg(long)]
    problem_file: Option<PathBuf>,
    /// Statistics CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-cycle mean trace CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Text summary file (also printed to stdout).
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Directory for relative output paths.
    #[arg(long, env = "SWAF_OUT_DIR")]
    out_dir: Option<PathBuf>,
    /// TOML file with any of the options above; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(*args),
        Command::List => {
            list();
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn list() {
    println!("{:<5} {:>4} {:>12} {:>16}", "ID", "D", "constraints", "known best");
    for id in BUILTIN_IDS {
        let p = builtin(id).expect("catalog ids are valid");
        println!(
            "{:<5} {:>4} {:>12} {:>16}",
            id,
            p.dimension(),
            p.constraint_count(),
            p.known_best().map_or("-".to_string(), |v| v.to_string())
        );
    }
}

fn expand_group(id: &str) -> Option<&'static [&'static str]> {
    match id.to_ascii_lowercase().as_str() {
        "all" => Some(&BUILTIN_IDS),
        "unconstrained" => Some(&BUILTIN_IDS[..4]),
        "inequality" => Some(&BUILTIN_IDS[4..12]),
        "equality" => Some(&BUILTIN_IDS[12..]),
        _ => None,
    }
}

fn resolve_problems(ids: &[String], file: Option<&Path>) -> Result<Vec<ProblemDef>, String> {
    let user = match file {
        Some(path) => load_problem_file(path).map_err(|e| e.to_string())?,
        None => Vec::new(),
    };
    let mut out = Vec::new();
    for id in ids {
        let id = id.trim();
        if let Some(group) = expand_group(id) {
            out.extend(group.iter().map(|g| builtin(g).expect("catalog ids are valid")));
        } else if let Some(p) = user.iter().find(|p| p.name() == id) {
            out.push(p.fresh());
        } else {
            out.push(builtin(id).map_err(|e| e.to_string())?);
        }
    }
    Ok(out)
}

fn create(path: &Path) -> Result<BufWriter<File>, String> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn run(args: RunArgs) -> Result<(), String> {
    let file = match &args.config {
        Some(path) => FileOptions::load(path)?,
        None => FileOptions::default(),
    };
    let cli = FileOptions {
        problem: (!args.problem.is_empty()).then_some(OneOrMany::Many(args.problem)),
        rule: (!args.rule.is_empty()).then_some(OneOrMany::Many(args.rule)),
        agents: args.agents,
        cycles: args.cycles,
        runs: args.runs,
        seed: args.seed,
        formulation: args.formulation,
        success_tolerance: args.success_tolerance,
        problem_file: args.problem_file,
        out: args.out,
        trace: args.trace,
        summary: args.summary,
        out_dir: args.out_dir,
    };
    let opts = merge(cli, file)?;

    let problems = resolve_problems(&opts.problems, opts.problem_file.as_deref())?;
    let strategies: Vec<RuleStrategy> = opts
        .rules
        .iter()
        .map(|r| r.parse().map_err(|e: swaf::Error| e.to_string()))
        .collect::<Result<_, _>>()?;
    let formulation: FormulationSpec = opts.formulation.parse().map_err(|e: swaf::Error| e.to_string())?;

    let mut rows = Vec::new();
    let mut traces = Vec::new();
    for problem in &problems {
        for strategy in &strategies {
            let swarm = SwarmConfig::new(opts.agents, opts.cycles, strategy.clone())
                .with_formulation(formulation)
                .with_seed(opts.seed);
            let mut config = ExperimentConfig::new(problem.fresh(), swarm, opts.runs);
            if let Some(tol) = opts.success_tolerance {
                config.criterion.mode = GapMode::Relative;
                config.criterion.tolerance = tol;
            }
            let experiment = run_experiment(&config).map_err(|e| e.to_string())?;
            let row = StatsRow::new(&config, &experiment);
            println!(
                "{:<5} {:<24} {:<3}  mean {:>14}  sd {:>10}  success {:>5.1}%  T_E {:>10}  feasible {:>5.1}%",
                row.problem,
                row.rule,
                row.formulation,
                fmt_opt(row.mean),
                fmt_opt(row.stddev),
                100.0 * row.success_rate,
                fmt_opt(row.mean_te),
                100.0 * row.feasibility_rate
            );
            if opts.trace.is_some() {
                traces.extend(trace_rows(&config, &experiment));
            }
            rows.push(row);
        }
    }

    let summary = format_summary(&rows);
    println!();
    print!("{summary}");

    if let Some(path) = &opts.out {
        write_stats_csv(create(path)?, &rows).map_err(|e| e.to_string())?;
    }
    if let Some(path) = &opts.trace {
        write_trace_csv(create(path)?, &traces).map_err(|e| e.to_string())?;
    }
    if let Some(path) = &opts.summary {
        let mut w = create(path)?;
        w.write_all(summary.as_bytes())
            .and_then(|_| w.flush())
            .map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or("-".to_string(), |v| format!("{v:.6}"))
}
