use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use topk_core::io::{read_dataset, read_queries, write_dataset};
use topk_core::workload::{generate, Distribution};
use topk_core::{Hive, WeightedInterval};
use topk_cli::{bench, query_plan, verify, Backend, Candidate};

#[derive(Parser)]
#[command(name = "topk-stab", about = "Top-k weighted interval stabbing: generate, verify, benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded random dataset.
    Gen {
        #[arg(long)]
        dist: Distribution,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check backends against the brute-force oracle.
    Verify {
        #[arg(long)]
        input: PathBuf,
        /// Backends to check (repeatable); all of them by default.
        #[arg(long, value_enum)]
        backend: Vec<Backend>,
        #[arg(long, default_value_t = 1000)]
        queries: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Explicit `q k` queries instead of generated ones.
        #[arg(long)]
        query_file: Option<PathBuf>,
    },
    /// Print per-k operation counters as CSV.
    Bench {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        backend: Backend,
        #[arg(long = "k", default_values_t = [1, 10, 100])]
        ks: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        queries: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the hive subdivision, one line per cell.
    DumpHive {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn load(path: &Path) -> Result<Vec<WeightedInterval>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_dataset(BufReader::new(file)).with_context(|| format!("parsing {}", path.display()))
}

fn sink(output: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match output {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen {
            dist,
            n,
            seed,
            output,
        } => {
            let mut out = sink(output.as_deref())?;
            write_dataset(&mut out, &generate(dist, n, seed))?;
            out.flush()?;
        }
        Command::Verify {
            input,
            backend,
            queries,
            seed,
            query_file,
        } => {
            let intervals = load(&input)?;
            let plan = match query_file {
                Some(p) => {
                    let f = File::open(&p).with_context(|| format!("opening {}", p.display()))?;
                    read_queries(BufReader::new(f)).with_context(|| format!("parsing {}", p.display()))?
                }
                None => query_plan(&intervals, queries, seed),
            };
            let backends = if backend.is_empty() { Backend::ALL.to_vec() } else { backend };
            let mut built = Vec::new();
            for b in &backends {
                match b.build(&intervals) {
                    Ok(c) => built.push(c),
                    Err(msg) => {
                        eprintln!("FAIL {msg}");
                        return Ok(false);
                    }
                }
            }
            let refs: Vec<&dyn Candidate> = built.iter().map(|c| c.as_ref()).collect();
            let report = verify(&intervals, &refs, &plan);
            let names: Vec<&str> = backends.iter().map(|b| b.name()).collect();
            match report.failure {
                None => println!(
                    "PASS {} queries x {} backends ({}) on n={}",
                    report.queries,
                    names.len(),
                    names.join(","),
                    intervals.len()
                ),
                Some(f) => {
                    eprintln!("FAIL {f}");
                    return Ok(false);
                }
            }
        }
        Command::Bench {
            input,
            backend,
            ks,
            queries,
            seed,
            output,
        } => {
            if ks.contains(&0) {
                bail!("--k values must be positive");
            }
            let intervals = load(&input)?;
            let rows = bench(&intervals, backend, &ks, queries, seed).map_err(anyhow::Error::msg)?;
            let mut writer = csv::Writer::from_writer(sink(output.as_deref())?);
            for row in rows {
                writer.serialize(row)?;
            }
            writer.flush()?;
        }
        Command::DumpHive { input, output } => {
            let hive = Hive::build(&load(&input)?);
            let mut out = sink(output.as_deref())?;
            out.write_all(hive.dump().as_bytes())?;
            out.flush()?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
