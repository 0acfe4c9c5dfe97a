//! Thin experiment-runner binary around the library's `cli` module.
//!
//! Usage:
//!   anderson-lab <experiment> --config PATH [--seed N] [--out DIR]
//!                [--workers N] [--format csv|json]
//!
//! Exit codes: 0 all asserted bounds pass, 1 a bound was violated,
//! 2 configuration or runtime error.

use anderson_lab::cli::{self, ExperimentConfig, ExperimentKind, OutputFormat};
use std::path::PathBuf;
use std::process::ExitCode;

const USAGE: &str = "usage: anderson-lab <experiment> --config PATH \
[--seed N] [--out DIR] [--workers N] [--format csv|json]\n\
experiments: dos wegner two_cube_wegner lifshitz green_check ct_check \
msa_single msa_two_cube msa_schedule initial_scale dynamics";

fn fail(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    eprintln!("{USAGE}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() || args[0] == "--help" || args[0] == "-h" {
        println!("{USAGE}");
        return ExitCode::SUCCESS;
    }
    let Some(kind) = ExperimentKind::parse(&args[0]) else {
        return fail(&format!("unknown experiment '{}'", args[0]));
    };
    let mut config_path: Option<PathBuf> = None;
    let mut seed: Option<u64> = None;
    let mut out_dir: Option<PathBuf> = None;
    let mut workers: Option<usize> = None;
    let mut format: Option<OutputFormat> = None;
    let mut it = args[1..].iter();
    while let Some(flag) = it.next() {
        let value = |it: &mut std::slice::Iter<String>| -> Option<String> { it.next().cloned() };
        match flag.as_str() {
            "--config" => config_path = value(&mut it).map(PathBuf::from),
            "--seed" => {
                seed = match value(&mut it).map(|v| v.parse()) {
                    Some(Ok(s)) => Some(s),
                    _ => return fail("--seed needs an unsigned integer"),
                }
            }
            "--out" => out_dir = value(&mut it).map(PathBuf::from),
            "--workers" => {
                workers = match value(&mut it).map(|v| v.parse()) {
                    Some(Ok(w)) => Some(w),
                    _ => return fail("--workers needs an unsigned integer"),
                }
            }
            "--format" => {
                format = match value(&mut it).as_deref() {
                    Some("csv") => Some(OutputFormat::Csv),
                    Some("json") => Some(OutputFormat::Json),
                    _ => return fail("--format must be csv or json"),
                }
            }
            other => return fail(&format!("unknown flag '{other}'")),
        }
    }
    let Some(config_path) = config_path else {
        return fail("--config PATH is required");
    };
    let text = match std::fs::read_to_string(&config_path) {
        Ok(t) => t,
        Err(e) => return fail(&format!("cannot read {}: {e}", config_path.display())),
    };
    let mut cfg: ExperimentConfig = match serde_json::from_str(&text) {
        Ok(c) => c,
        Err(e) => return fail(&format!("config parse error: {e}")),
    };
    if cfg.experiment != kind {
        return fail(&format!(
            "config declares '{}' but the subcommand is '{}'",
            cfg.experiment.name(),
            kind.name()
        ));
    }
    if let Some(s) = seed {
        cfg.base_seed = s;
    }
    if let Some(w) = workers {
        cfg.workers = w;
    }
    if let Some(f) = format {
        cfg.format = f;
    }
    if let Some(dir) = &out_dir {
        cfg.out_dir = Some(dir.display().to_string());
    }

    let records = match cli::run(&cfg) {
        Ok(r) => r,
        Err(e) => return fail(&e.to_string()),
    };
    let target_dir = cfg
        .out_dir
        .clone()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."));
    match cli::emit(&records, cfg.format, &target_dir) {
        Ok(path) => println!("wrote {} record(s) to {}", records.len(), path.display()),
        Err(e) => return fail(&e.to_string()),
    }
    if cli::all_bounds_pass(&records) {
        ExitCode::SUCCESS
    } else {
        eprintln!("one or more asserted bounds failed");
        ExitCode::from(1)
    }
}
