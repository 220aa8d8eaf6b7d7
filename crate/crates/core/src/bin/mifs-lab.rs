use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mifs_lab::config::load_config;
use mifs_lab::estimation::{estimated_provider, Sample};
use mifs_lab::oracle::{class_mi, entropy_of, oracle_provider, FeatureId, Scenario, ScenarioSpec};
use mifs_lab::relevance::{analyze, LabeledJoint};
use mifs_lab::selection::{select_all, MethodSpec, SelectionTrace};
use mifs_lab::simlab::{emit_csv, run_experiment, write_traces_json};
use mifs_lab::verify::run_checks;
use mifs_lab::Error;

#[derive(Parser)]
#[command(name = "mifs-lab", version, about = "Mutual-information feature selection lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ScenarioArgs {
    /// I (uniform) or II (gaussian)
    #[arg(long, value_parser = parse_scenario)]
    scenario: Option<Scenario>,
    /// Class slope, strictly between 0 and 1
    #[arg(long, value_parser = parse_k)]
    k: Option<f64>,
    /// Half-width of the uniform base variables
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    b: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    d: f64,
}

impl ScenarioArgs {
    fn spec(&self) -> Result<ScenarioSpec, Error> {
        let scenario = self
            .scenario
            .ok_or_else(|| Error::InvalidScenario("--scenario is required".into()))?;
        let k = self.k.ok_or_else(|| Error::InvalidScenario("--k is required".into()))?;
        let spec = ScenarioSpec {
            scenario,
            delta: self.delta,
            a: self.a,
            b: self.b,
            d: self.d,
            k,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print entropy and class MI of every feature as TSV
    Oracle {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Run one selection method and print the order it selects
    Order {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// mifs, mifsu, mrmr, mmifsu, micc, qmifs, nmifs or maxmifs
        #[arg(long)]
        method: String,
        /// Redundancy weight for mifs and mifsu
        #[arg(long)]
        beta: Option<f64>,
        /// Estimate from a sample CSV (v1..v10,class) instead of the oracle
        #[arg(long)]
        data: Option<PathBuf>,
        /// Write every candidate's objective at every step as TSV
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run a Monte Carlo experiment described by a config file
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Output CSV (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        replicates: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Write all selection traces as JSON
        #[arg(long)]
        traces: Option<PathBuf>,
    },
    /// Relevance analysis of a labeled joint distribution (JSON)
    Relevance {
        #[arg(long)]
        joint: PathBuf,
    },
    /// Run the built-in verification checks
    Verify,
}

fn parse_scenario(s: &str) -> Result<Scenario, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_k(s: &str) -> Result<f64, String> {
    let k: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if k > 0.0 && k < 1.0 {
        Ok(k)
    } else {
        Err(format!("k must lie strictly between 0 and 1, got {k}"))
    }
}

fn print_order(trace: &SelectionTrace, trace_path: Option<&PathBuf>) -> Result<(), Error> {
    println!("{}", trace.summary());
    if let Some(path) = trace_path {
        std::fs::write(path, trace.to_tsv())?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Oracle { scenario } => {
            let spec = scenario.spec()?;
            let mut out = io::stdout().lock();
            writeln!(out, "feature\tentropy\tmi_class")?;
            for f in FeatureId::ALL {
                let h = entropy_of(&spec, f);
                let c = class_mi(&spec, f)?;
                writeln!(out, "{}\t{:.4}\t{:.4}", f.name(), h, c)?;
            }
        }
        Command::Order {
            scenario,
            method,
            beta,
            data,
            trace,
        } => {
            let method = MethodSpec::parse(&method, beta)?;
            let t = match data {
                Some(path) => {
                    let p = estimated_provider(Sample::read_csv_path(&path)?)?;
                    select_all(&method, &p)
                }
                None => select_all(&method, &oracle_provider(&scenario.spec()?)?),
            };
            print_order(&t, trace.as_ref())?;
        }
        Command::Simulate {
            config,
            out,
            replicates,
            seed,
            traces,
        } => {
            let mut c = load_config(&config)?;
            if let Some(r) = replicates {
                c.replicates = r;
            }
            if let Some(s) = seed {
                c.seed = s;
            }
            c.keep_traces |= traces.is_some();
            let result = run_experiment(&c)?;
            match out {
                Some(path) => emit_csv(&result, std::fs::File::create(path)?)?,
                None => emit_csv(&result, io::stdout().lock())?,
            }
            if let Some(path) = traces {
                write_traces_json(&result, std::fs::File::create(path)?)?;
            }
            let failures: usize = result.cells.iter().map(|c| c.failures).max().unwrap_or(0);
            eprintln!(
                "{} cells, {} degenerate replicates, {:.2?}",
                result.cells.len(),
                failures,
                result.runtime
            );
        }
        Command::Relevance { joint } => {
            let j = LabeledJoint::from_json_path(&joint)?;
            print!("{}", analyze(&j)?.render());
        }
        Command::Verify => {
            let checks = run_checks()?;
            let mut failed = 0;
            for c in &checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                if !c.passed {
                    failed += 1;
                }
                if c.detail.is_empty() {
                    println!("{status}  {}", c.name);
                } else {
                    println!("{status}  {} ({})", c.name, c.detail);
                }
            }
            println!("{} checks, {} failed", checks.len(), failed);
            if failed > 0 {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidK(_)
                | Error::InvalidScenario(_)
                | Error::UnknownMethod { .. }
                | Error::InvalidMethod(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
