mod commands;
mod config;
mod error;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Format, Job, RawConfig};
use error::CliError;

/// Thick-substrate microstrip patch design and analysis.
#[derive(Parser)]
#[command(name = "mmpatch", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize geometry and feed position for the design frequency.
    Design(JobArgs),
    /// Resistance breakdown, efficiency and gain at the design frequency.
    Analyze(JobArgs),
    /// Return loss and VSWR over a frequency sweep.
    Sweep(JobArgs),
    /// E- and H-plane pattern cuts (circular patch).
    Pattern(JobArgs),
}

#[derive(clap::Args)]
struct JobArgs {
    /// Job file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// rect: eq8-literal | calibrated; circ: comma list of
    /// [no-]fringing, t1-printed|t1-corrected, feed-radiation|feed-total.
    #[arg(long)]
    variant: Option<String>,
    /// rect | circ
    #[arg(long)]
    geometry: Option<String>,
    #[arg(long)]
    eps_r: Option<f64>,
    #[arg(long)]
    h_mm: Option<f64>,
    #[arg(long)]
    f_ghz: Option<f64>,
    #[arg(long)]
    tan_delta: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    zref: Option<f64>,
}

impl JobArgs {
    fn job(&self) -> Result<Job, CliError> {
        let mut raw = match &self.config {
            Some(p) => RawConfig::load(p)?,
            None => RawConfig::default(),
        };
        let pairs: [(&str, Option<String>); 10] = [
            ("geometry", self.geometry.clone()),
            ("model_variant", self.variant.clone()),
            ("substrate.eps_r", self.eps_r.map(|x| x.to_string())),
            ("substrate.h_mm", self.h_mm.map(|x| x.to_string())),
            ("f_design_ghz", self.f_ghz.map(|x| x.to_string())),
            ("substrate.tan_delta", self.tan_delta.map(|x| x.to_string())),
            ("substrate.sigma", self.sigma.map(|x| x.to_string())),
            ("sweep.zref", self.zref.map(|x| x.to_string())),
            (
                "output.path",
                self.out.as_ref().map(|p| p.display().to_string()),
            ),
            (
                "output.format",
                self.format.map(|f| match f {
                    Format::Csv => "csv".to_string(),
                    Format::Json => "json".to_string(),
                }),
            ),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                raw.set(key, v);
            }
        }
        Job::resolve(&raw)
    }
}

type Runner = fn(&Job) -> Result<commands::Output, CliError>;

fn run(cli: Cli) -> Result<(), CliError> {
    let (args, runner): (&JobArgs, Runner) = match &cli.command {
        Command::Design(a) => (a, commands::design),
        Command::Analyze(a) => (a, commands::analyze),
        Command::Sweep(a) => (a, commands::sweep_cmd),
        Command::Pattern(a) => (a, commands::pattern_cmd),
    };
    let job = args.job()?;
    let out = runner(&job)?;
    let text = match job.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&out.json).expect("json output");
            s.push('\n');
            s
        }
        Format::Csv => out.csv.unwrap_or_else(|| commands::flatten_csv(&out.json)),
    };
    for w in out.json["warnings"].as_array().into_iter().flatten() {
        if let Some(w) = w.as_str() {
            eprintln!("warning: {}", w);
        }
    }
    match &job.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("{}: {}", path.display(), e))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
