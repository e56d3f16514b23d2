use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::thread;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mulfix::harness::{
    classify_experiment, fixture_config, run_experiment, run_fixture, write_json, write_report,
    ExperimentConfig, FixtureReport, HarnessError, OutputFormat, FIXTURE_NAMES,
};
use mulfix::ConditionId;

#[derive(Parser)]
#[command(
    name = "mulfix",
    version,
    about = "Fixed points on multiplicative metric spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum Command {
    /// Run a built-in fixture, or `all` of them.
    Fixture { name: String },
    /// Run the full pipeline on a JSON experiment config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Sample, check axioms and classify only.
    Classify {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Multiplicative stopping tolerance (> 1).
    #[arg(long, global = true)]
    eps: Option<f64>,
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    /// Directory for report.json and traces.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        }
    }
}

impl Common {
    fn apply(&self, config: &mut ExperimentConfig) -> Result<(), HarnessError> {
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(eps) = self.eps {
            config.solver.eps = eps;
        }
        if let Some(n) = self.max_iter {
            config.solver.max_iter = n;
        }
        if let Some(dir) = &self.out {
            config.outputs.dir = Some(dir.clone());
        }
        if let Some(f) = self.format {
            config.outputs.format = f.into();
        }
        config.validate()
    }
}

/// Exit statuses: 0 every expectation held, 1 one failed, 2 bad input.
const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Fixture { name } if name == "all" => {
            let reports = thread::scope(|s| {
                let handles: Vec<_> = FIXTURE_NAMES
                    .iter()
                    .map(|n| s.spawn(|| fixture(n, &cli.common)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("fixture thread"))
                    .collect::<Vec<_>>()
            });
            let mut passed = true;
            for r in reports {
                passed &= r?;
            }
            Ok(passed)
        }
        Command::Fixture { name } => fixture(name, &cli.common),
        Command::Run { config } => {
            let config = load(config, &cli.common)?;
            let report = FixtureReport::from_experiment(run_experiment(&config)?);
            finish(
                &report,
                config.outputs.dir.as_deref(),
                config.outputs.format,
            )
        }
        Command::Classify { config } => {
            let config = load(config, &cli.common)?;
            let report = classify_experiment(&config)?;
            println!("{}: {}", config.name, report.verdicts.summary);
            let c = &report.constants;
            println!(
                "constants ({:?}): xi {:?} eta {:?} lambda {:?} delta {}",
                c.source, c.xi, c.eta, c.lambda, c.delta
            );
            let mut ids = vec![ConditionId::C1, ConditionId::C2, ConditionId::C3];
            ids.extend([ConditionId::SI, ConditionId::SII, ConditionId::SIII]);
            if config.phi.is_some() {
                ids.push(ConditionId::PHI);
            }
            for id in ids {
                let total = report.records(id).count();
                println!("  {id}: {} of {total} pairs violate", report.violations(id));
            }
            if let Some(dir) = &config.outputs.dir {
                let path = dir.join(&config.name).join("classify.json");
                write_json(&path, &report)?;
                println!("wrote {}", path.display());
            }
            Ok(true)
        }
    }
}

fn load(path: &Path, common: &Common) -> Result<ExperimentConfig> {
    let mut config = ExperimentConfig::from_path(path)?;
    if config.name.is_empty() {
        config.name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("experiment")
            .to_string();
    }
    common
        .apply(&mut config)
        .with_context(|| format!("applying overrides to {}", path.display()))?;
    Ok(config)
}

fn fixture(name: &str, common: &Common) -> Result<bool> {
    let report = if name == "remark_2_5" {
        run_fixture(name)?
    } else {
        let mut config = fixture_config(name)?;
        common.apply(&mut config)?;
        FixtureReport::from_experiment(run_experiment(&config)?)
    };
    let format = common.format.map_or(OutputFormat::Json, Into::into);
    finish(&report, common.out.as_deref(), format)
}

fn finish(report: &FixtureReport, out: Option<&Path>, format: OutputFormat) -> Result<bool> {
    let mut text = format!(
        "{}: {}\n",
        report.name,
        if report.passed { "PASS" } else { "FAIL" }
    );
    if let Some(exp) = &report.experiment {
        text.push_str(&format!("  verdict: {}\n", exp.conditions.verdicts.summary));
        for run in &exp.runs {
            match &run.result {
                Some(r) => text.push_str(&format!(
                    "  start {} -> {} ({}, {} iterations)\n",
                    run.start,
                    r.point,
                    r.status.as_str(),
                    r.iterations
                )),
                None => text.push_str(&format!(
                    "  start {} -> error: {}\n",
                    run.start,
                    run.error.as_deref().unwrap_or("")
                )),
            }
        }
    }
    for e in &report.expectations {
        let mark = if e.passed { "pass" } else { "FAIL" };
        text.push_str(&format!("  [{mark}] {}: {}\n", e.name, e.detail));
    }
    if let Some(dir) = out {
        for path in write_report(report, dir, format)? {
            text.push_str(&format!("  wrote {}\n", path.display()));
        }
    }
    print!("{text}");
    Ok(report.passed)
}
