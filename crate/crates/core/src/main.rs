use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use symharm::cli::{checks_text, exit_code, list_experiments, run, ExperimentConfig};

#[derive(Parser)]
#[command(name = "symharm", version, about = "Numerical harmonic analysis on rank-one symmetric spaces")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write <out>/<name>.csv and <out>/<name>.json.
    Run {
        /// key = value configuration file.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        experiment: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Extra key=value overrides.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// List experiment names.
    List,
}

fn main() -> ExitCode {
    match Args::parse().command {
        Command::List => {
            for (name, doc) in list_experiments() {
                println!("{name:<22} {doc}");
            }
            ExitCode::SUCCESS
        }
        Command::Run { config, experiment, out, seed, set } => {
            let cfg = (|| {
                let mut cfg = match &config {
                    Some(p) => ExperimentConfig::from_file(p)?,
                    None => ExperimentConfig::default(),
                };
                for kv in &set {
                    let (k, v) = kv
                        .split_once('=')
                        .ok_or_else(|| symharm::Error::Config(format!("override `{kv}` is not key=value")))?;
                    cfg.set(k.trim(), v.trim())?;
                }
                if let Some(o) = out {
                    cfg.out = o;
                }
                if let Some(s) = seed {
                    cfg.seed = s;
                }
                cfg.validate()?;
                Ok::<_, symharm::Error>(cfg)
            })();
            let cfg = match cfg {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(100);
                }
            };
            match run(&cfg, &experiment) {
                Ok((summary, outcome)) => {
                    print!("{}", checks_text(&outcome));
                    println!("{}: {}", summary.experiment, if summary.pass { "PASS" } else { "FAIL" });
                    ExitCode::from(exit_code(&experiment, summary.pass) as u8)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(100)
                }
            }
        }
    }
}
