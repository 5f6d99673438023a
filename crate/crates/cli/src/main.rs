use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use invfactor::coincidence::FamilyRegistry;
use invfactor::harness::{
    cmd_coincidences, cmd_density, cmd_empirical, cmd_positivity, cmd_scan, exit_code, parse_records, Report,
    RunConfig, EXIT_COUNTEREXAMPLE,
};
use invfactor::{Error, Result};
use num::BigRational;

#[derive(Parser)]
#[command(
    name = "invfactor",
    version,
    about = "Invariant-factor densities of elliptic curves over Q"
)]
struct Cli {
    /// Closure element budget.
    #[arg(long, global = true, env = "INVFACTOR_BUDGET", default_value_t = invfactor::glgroup::DEFAULT_BUDGET)]
    budget: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write the report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the report as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// C_{E,j} with an enclosing interval, verdict and criteria.
    Density {
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        label: String,
        #[arg(long)]
        j: u64,
        /// Euler-product truncation bound.
        #[arg(long, default_value_t = invfactor::density::DEFAULT_TRUNCATION)]
        trunc: u64,
        /// Criteria to evaluate, by name (default: all).
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Exact positivity decisions with certificates.
    Positivity {
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        label: String,
        /// Values of j (comma separated).
        #[arg(long, value_delimiter = ',', conflicts_with = "upto")]
        j: Vec<u64>,
        /// Every j from 1 to this bound.
        #[arg(long)]
        upto: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
    /// Detected and predicted coincidences for every record.
    Coincidences {
        #[arg(long)]
        records: PathBuf,
        #[arg(long, default_value_t = 60)]
        j_bound: u64,
        /// Predictors to run, by name (default: all).
        #[arg(long, value_delimiter = ',')]
        predictors: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Brute-force counts of d_{E,p} = j over good p <= x.
    Empirical {
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        label: String,
        /// Values of j (default: every observed value).
        #[arg(long, value_delimiter = ',')]
        j: Vec<u64>,
        #[arg(long, default_value_t = 10_000)]
        x: u64,
        #[arg(long, default_value_t = invfactor::ffcurve::DEFAULT_PRIME_BOUND)]
        prime_bound: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Look for zeros without coincidences and coincidences at p >= 5.
    Scan {
        #[arg(long)]
        records: PathBuf,
        #[arg(long, default_value_t = 60)]
        j_bound: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Instantiate a curve family at a rational parameter.
    Family {
        /// One of the registered family names.
        #[arg(long)]
        name: Option<String>,
        /// Parameter, e.g. 3 or -2/5.
        #[arg(long, default_value = "1")]
        t: String,
        #[arg(long, allow_hyphen_values = true)]
        twist: Option<i64>,
    },
}

fn emit<R: Report>(report: &R, out: &Output) -> Result<()> {
    print!("{}", report.text());
    if let Some(p) = &out.json {
        report.write_json(p)?;
    }
    if let Some(p) = &out.csv {
        report.write_csv(p)?;
    }
    Ok(())
}

fn find<'a>(
    records: &'a [invfactor::harness::LoadedRecord],
    label: &str,
) -> Result<&'a invfactor::harness::LoadedRecord> {
    records
        .iter()
        .find(|r| r.label() == label)
        .ok_or_else(|| Error::UnknownLabel(label.to_string()))
}

fn load(path: &Path, budget: usize) -> Result<Vec<invfactor::harness::LoadedRecord>> {
    parse_records(path, budget)
}

fn run(cli: Cli) -> Result<i32> {
    let mut cfg = RunConfig {
        budget: cli.budget,
        ..RunConfig::default()
    };
    match cli.command {
        Command::Density {
            records,
            label,
            j,
            trunc,
            criteria,
            out,
        } => {
            cfg.truncation = trunc;
            cfg.criteria = criteria;
            let recs = load(&records, cfg.budget)?;
            emit(&cmd_density(find(&recs, &label)?, j, &cfg)?, &out)?;
        }
        Command::Positivity {
            records,
            label,
            j,
            upto,
            out,
        } => {
            let js: Vec<u64> = match upto {
                Some(n) => (1..=n).collect(),
                None if j.is_empty() => return Err(Error::InvalidInput("give --j or --upto".into())),
                None => j,
            };
            let recs = load(&records, cfg.budget)?;
            emit(&cmd_positivity(find(&recs, &label)?, &js, &cfg)?, &out)?;
        }
        Command::Coincidences {
            records,
            j_bound,
            predictors,
            out,
        } => {
            cfg.predictors = predictors;
            let recs = load(&records, cfg.budget)?;
            let report = cmd_coincidences(&recs, j_bound, &cfg)?;
            emit(&report, &out)?;
            if report.mismatch_count() > 0 {
                return Ok(2);
            }
        }
        Command::Empirical {
            records,
            label,
            j,
            x,
            prime_bound,
            out,
        } => {
            cfg.prime_bound = prime_bound;
            let recs = load(&records, cfg.budget)?;
            emit(&cmd_empirical(find(&recs, &label)?, &j, x, &cfg)?, &out)?;
        }
        Command::Scan { records, j_bound, out } => {
            let recs = load(&records, cfg.budget)?;
            let report = cmd_scan(&recs, j_bound, &cfg)?;
            emit(&report, &out)?;
            if report.counterexamples > 0 {
                return Ok(EXIT_COUNTEREXAMPLE);
            }
        }
        Command::Family { name, t, twist } => {
            let registry = FamilyRegistry::builtin();
            let Some(name) = name else {
                for n in registry.names() {
                    println!("{n:<10} {}", registry.get(n)?.summary());
                }
                return Ok(0);
            };
            let t: BigRational = t
                .parse()
                .map_err(|_| Error::InvalidInput(format!("cannot parse t = {t}")))?;
            let p = registry.instantiate(&name, &t, twist)?;
            println!("{}", serde_json::to_string_pretty(&p).map_err(Error::from)?);
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
