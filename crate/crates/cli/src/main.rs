use std::path::PathBuf;
use std::process::ExitCode;
use std::time::SystemTime;

use anyhow::Context;
use clap::{Parser, Subcommand};
use qdq::scenario::{run_config, write_outputs, RunOptions, ScenarioConfig};

#[derive(Parser)]
#[command(name = "qdq", version, about = "Run certificate, cone and separation scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every scenario of a config file (or a bundled config such as `paper_examples`).
    Run {
        config: String,
        /// Output directory for reports.
        #[arg(long, env = "QDQ_OUT_DIR", default_value = "qdq_out")]
        out: PathBuf,
        /// Run scenarios concurrently.
        #[arg(long)]
        parallel: bool,
        /// Replace every scenario seed.
        #[arg(long)]
        seed_override: Option<u64>,
        /// Only run scenarios whose name contains this text.
        #[arg(long)]
        filter: Option<String>,
        /// Fill the runtime_ms column of summary.csv.
        #[arg(long)]
        timings: bool,
    },
}

fn run() -> anyhow::Result<bool> {
    let Command::Run {
        config,
        out,
        parallel,
        seed_override,
        filter,
        timings,
    } = Cli::parse().command;
    let started = SystemTime::now();
    let cfg = ScenarioConfig::load(&config)?;
    let opts = RunOptions {
        parallel,
        seed_override,
        filter,
        timings,
    };
    let summary = run_config(&cfg, &opts)?;
    write_outputs(&summary, &out, &opts, started).with_context(|| format!("writing reports to {}", out.display()))?;
    for r in &summary.reports {
        let value = r.metric_value.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
        let verdict = if r.passed() { "PASSED" } else { "FAILED" };
        match &r.error {
            Some(e) => println!("{verdict} {} ({e})", r.name),
            None => println!("{verdict} {} {}={value}", r.name, r.metric_name),
        }
    }
    let failed = summary.reports.iter().filter(|r| !r.passed()).count();
    println!("{} scenarios, {failed} failed; reports in {}", summary.reports.len(), out.display());
    Ok(summary.all_passed())
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
