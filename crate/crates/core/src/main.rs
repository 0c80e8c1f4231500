use std::path::{Path, PathBuf};
use std::process::ExitCode;

use blockshrink::cli::{estimator_listing, function_listing, run, ExperimentConfig, Overrides};
use blockshrink::exec::{with_threads, Execution};
use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "blockshrink", version, about = "Shrinking-neighborhood risk experiments for wavelet block estimators")]
struct Cli {
    /// Master seed; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Replications per cell; overrides the config.
    #[arg(long, global = true)]
    reps: Option<usize>,
    /// Output directory; overrides the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores). Does not affect results.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an experiment and write `<name>.csv` and `<name>.json`.
    Run { config: PathBuf },
    /// Check a config without running it.
    Validate { config: PathBuf },
    ListEstimators,
    ListFunctions,
}

fn load(path: &Path, cli: &Cli) -> Result<ExperimentConfig, String> {
    let mut config = ExperimentConfig::load(path).map_err(|e| e.to_string())?;
    config.apply(&Overrides {
        seed: cli.seed,
        reps: cli.reps,
    });
    Ok(config)
}

fn report_name(config: &ExperimentConfig, path: &Path) -> String {
    config.name.clone().unwrap_or_else(|| {
        path.file_stem()
            .map_or("experiment".into(), |s| s.to_string_lossy().into_owned())
    })
}

fn execute(cli: &Cli) -> Result<(), String> {
    match &cli.command {
        Command::ListEstimators => print!("{}", estimator_listing()),
        Command::ListFunctions => print!("{}", function_listing()),
        Command::Validate { config } => {
            let cfg = load(config, cli)?;
            let diags = cfg.diagnostics();
            if !diags.is_empty() {
                let lines: Vec<String> = diags.iter().map(|d| format!("  {d}")).collect();
                return Err(format!("{} is invalid:\n{}", config.display(), lines.join("\n")));
            }
            println!("{}: ok", config.display());
        }
        Command::Run { config } => {
            let cfg = load(config, cli)?;
            let diags = cfg.diagnostics();
            if !diags.is_empty() {
                let lines: Vec<String> = diags.iter().map(|d| format!("  {d}")).collect();
                return Err(format!("{} is invalid:\n{}", config.display(), lines.join("\n")));
            }
            let name = report_name(&cfg, config);
            let out = cli
                .out
                .clone()
                .or_else(|| cfg.out.as_ref().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("results"));
            let report = with_threads(cli.threads, || run(&cfg, &name, Execution::Parallel)).map_err(|e| e.to_string())?;
            let (csv, json) = report.write(&out).map_err(|e| e.to_string())?;
            print!("{}", report.table());
            println!("wrote {} and {}", csv.display(), json.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
