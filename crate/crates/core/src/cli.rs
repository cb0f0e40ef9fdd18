//! Command-line front end: argument parsing, plan execution and output.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::report::{emit_csv, emit_json, emit_scatter_data, ReportRow};
use crate::runner::{run_scenario, RunConfig, ScenarioResult, DEFAULT_CONFIDENCE, DEFAULT_TRIALS};
use crate::scenario::{
    builtin, builtin_scenarios, parse_scenario_config, ScenarioSpec, WeightsPreset,
};

#[derive(Debug, Parser)]
#[command(
    name = "subopt",
    version,
    about = "Sub-optimality of hierarchical decisions on NK landscapes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run scenarios and report Probability of Optimality and Fitness Rate.
    Run(RunArgs),
    /// Print the built-in scenario catalog.
    List,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Run every built-in scenario (the default when nothing is selected).
    #[arg(long, conflicts_with_all = ["scenario", "config"])]
    pub all: bool,
    /// Built-in scenario code; repeatable.
    #[arg(long = "scenario", value_name = "CODE")]
    pub scenario: Vec<String>,
    /// JSON scenario file; repeatable.
    #[arg(long = "config", value_name = "FILE")]
    pub config: Vec<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_CONFIDENCE)]
    pub confidence: f64,
    /// Weight preset applied to the selected built-ins: equal or skewed.
    #[arg(long, value_name = "NAME")]
    pub weights_preset: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Worker threads for trial execution; output is identical for any value.
    #[arg(long, value_name = "N")]
    pub threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Scatter,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExecutionPlan {
    pub scenarios: Vec<ScenarioSpec>,
    pub config: RunConfig,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Action {
    Run(ExecutionPlan),
    List,
}

/// Parses a full argument list (program name first).
pub fn parse_cli<I, T>(args: I) -> Result<Action>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Usage(e.to_string()))?;
    plan(cli)
}

pub fn plan(cli: Cli) -> Result<Action> {
    let args = match cli.command {
        Command::List => return Ok(Action::List),
        Command::Run(args) => args,
    };
    let preset = args
        .weights_preset
        .as_deref()
        .map(str::parse::<WeightsPreset>)
        .transpose()?;

    let mut scenarios = Vec::new();
    if args.all || (args.scenario.is_empty() && args.config.is_empty()) {
        scenarios.extend(builtin_scenarios());
    }
    for code in &args.scenario {
        let spec =
            builtin(code).ok_or_else(|| Error::Usage(format!("unknown scenario code {code:?}")))?;
        scenarios.push(spec);
    }
    if let Some(p) = preset {
        scenarios = scenarios.iter().map(|s| p.apply(s)).collect();
    }
    for path in &args.config {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read config {}: {e}", path.display())))?;
        scenarios.push(parse_scenario_config(&text)?);
    }
    if scenarios.is_empty() {
        return Err(Error::Usage("no scenarios selected".into()));
    }
    let config = RunConfig::new(args.trials, args.seed, args.confidence)
        .map_err(|e| Error::Usage(e.to_string()))?;
    if args.threads == Some(0) {
        return Err(Error::Usage("--threads must be at least 1".into()));
    }
    Ok(Action::Run(ExecutionPlan {
        scenarios,
        config,
        format: args.format,
        out: args.out,
        threads: args.threads,
    }))
}

/// Runs every scenario of the plan on a pool sized by `plan.threads`.
pub fn run_plan(plan: &ExecutionPlan) -> Result<Vec<ScenarioResult>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        plan.scenarios
            .iter()
            .map(|s| run_scenario(s, &plan.config))
            .collect()
    })
}

pub fn render(results: &[ScenarioResult], plan: &ExecutionPlan) -> Result<String> {
    let rows: Vec<ReportRow> = results.iter().map(ReportRow::from).collect();
    match plan.format {
        Format::Csv => emit_csv(&rows),
        Format::Json => emit_json(&rows, &plan.config),
        Format::Scatter => emit_scatter_data(&rows),
    }
}

/// Executes the plan and returns the rendered report without writing it.
pub fn execute(plan: &ExecutionPlan) -> Result<String> {
    let results = run_plan(plan)?;
    render(&results, plan)
}

pub fn list_text() -> String {
    let mut out = String::from("code  mode     split  n  k\n");
    for s in builtin_scenarios() {
        let _ = writeln!(
            out,
            "{:<5} {:<8} {:<6} {:<2} {}",
            s.code,
            s.mode.as_str(),
            s.split_label(),
            s.n,
            s.k
        );
    }
    out
}

/// Writes `text` to `path` through a temporary file in the same directory, so
/// the destination is either absent or complete.
pub fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Entry point shared by the binary: parse, run, write.
pub fn main_with_args<I, T>(args: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => return Err(Error::Usage(e.to_string())),
    };
    match plan(cli)? {
        Action::List => {
            print!("{}", list_text());
            Ok(())
        }
        Action::Run(plan) => {
            let text = execute(&plan)?;
            match &plan.out {
                Some(path) => write_atomic(path, &text),
                None => {
                    std::io::stdout().write_all(text.as_bytes())?;
                    Ok(())
                }
            }
        }
    }
}
