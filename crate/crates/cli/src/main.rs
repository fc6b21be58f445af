mod config;
mod error;
mod output;
mod run;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde_json::json;

use config::{resolve, Cli, RunConfig};
use error::CliError;
use output::Bundle;

const SCHEMA_VERSION: u32 = 1;

fn execute(cli: Cli) -> Result<(RunConfig, Vec<String>), CliError> {
    let started = Instant::now();
    let (scenario, flags) = cli.command.split();
    let cfg = resolve(scenario, flags)?;
    let report = run::run(&cfg)?;

    let mut files = report.bundle.names();
    files.push("metadata.json".into());
    files.push("timings.json".into());
    let metadata = json!({
        "schema": "kgwell-run",
        "schema_version": SCHEMA_VERSION,
        "tool": "kgwell",
        "version": env!("CARGO_PKG_VERSION"),
        "scenario": scenario.name(),
        "config": cfg.to_json(),
        "results": report.results,
        "files": files,
    });
    let mut phases = serde_json::Map::new();
    for (name, secs) in &report.timings {
        phases.insert((*name).to_string(), json!(secs));
    }
    let timings = json!({
        "total_seconds": started.elapsed().as_secs_f64(),
        "phases": phases,
    });

    let mut bundle = report.bundle;
    let pretty = |v: &serde_json::Value| serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n";
    bundle.add("metadata.json", pretty(&metadata));
    bundle.add("timings.json", pretty(&timings));
    write(&bundle, &cfg)?;
    Ok((cfg, report.summary))
}

fn write(bundle: &Bundle, cfg: &RunConfig) -> Result<(), CliError> {
    bundle.write(&cfg.out)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok((cfg, summary)) => {
            for line in summary {
                println!("{line}");
            }
            println!("wrote {}", cfg.out.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
