use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

use paraac_core::experiments::gap::{cmd_gap, GapConfig};
use paraac_core::experiments::planted::{cmd_planted, PlantedConfig};
use paraac_core::experiments::switching::{cmd_switching, SwitchingConfig};
use paraac_core::experiments::tools::{
    cmd_colorcode, cmd_dtdepth, cmd_reduce, cmd_sample, ColorcodeConfig, DtDepthConfig, ReduceConfig, SampleConfig,
};
use paraac_core::experiments::verify::{cmd_verify, VerifyConfig};
use paraac_core::experiments::RunOutput;

/// Experiments on clique reductions, random restrictions and planted cliques.
#[derive(Parser)]
#[command(name = "paraac-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON configuration file; missing fields take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the trial (or sample) count.
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Output directory; without it documents go to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Agreement of zoo circuits on G and G + C(A).
    Planted,
    /// Empirical switching tails against the analytic bound.
    Switching,
    /// Equivalence suites against brute-force oracles.
    Verify,
    /// Gap-clique instances with a certification manifest.
    Gap,
    /// Injective hash for a set.
    Colorcode {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        k: Option<u64>,
        /// Comma-separated elements, 1-based.
        #[arg(long, value_delimiter = ',')]
        set: Vec<u64>,
    },
    /// Clique to dominating-set instance.
    Reduce {
        /// Graph in edge-list format.
        graph: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// One sample of ER(n, p, c), planted graph written as an edge list.
    Sample {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        /// Uses p = n^(-1/k).
        #[arg(long)]
        k: Option<f64>,
        #[arg(long, default_value_t = 0)]
        planted: usize,
        #[arg(long, default_value_t = 0)]
        stream: u64,
    },
    /// Vertex decision-tree depth of a circuit.
    Dtdepth {
        /// Circuit JSON file.
        circuit: Option<PathBuf>,
        /// Restriction JSON file.
        #[arg(long)]
        restriction: Option<PathBuf>,
    },
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_json(path: &Path) -> anyhow::Result<serde_json::Value> {
    serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load<T: DeserializeOwned>(common: &Common) -> anyhow::Result<Option<T>> {
    common
        .config
        .as_deref()
        .map(|p| serde_json::from_str(&read(p)?).with_context(|| format!("invalid config {}", p.display())))
        .transpose()
}

fn load_or_default<T: DeserializeOwned + Default>(common: &Common) -> anyhow::Result<T> {
    Ok(load(common)?.unwrap_or_default())
}

fn required<T>(v: Option<T>, flag: &str) -> anyhow::Result<T> {
    v.with_context(|| format!("missing --{flag} (or give --config)"))
}

fn run(cli: &Cli) -> anyhow::Result<RunOutput> {
    let c = &cli.common;
    Ok(match &cli.command {
        Command::Planted => {
            let mut cfg: PlantedConfig = load_or_default(c)?;
            cfg.master_seed = c.seed.unwrap_or(cfg.master_seed);
            cfg.trials = c.trials.unwrap_or(cfg.trials);
            cmd_planted(&cfg)?
        }
        Command::Switching => {
            let mut cfg: SwitchingConfig = load_or_default(c)?;
            cfg.master_seed = c.seed.unwrap_or(cfg.master_seed);
            cfg.trials = c.trials.unwrap_or(cfg.trials);
            cmd_switching(&cfg)?
        }
        Command::Verify => {
            let mut cfg: VerifyConfig = load_or_default(c)?;
            cfg.master_seed = c.seed.unwrap_or(cfg.master_seed);
            cfg.reduction_samples = c.trials.map_or(cfg.reduction_samples, |t| t as usize);
            cmd_verify(&cfg)?
        }
        Command::Gap => {
            let mut cfg: GapConfig = load_or_default(c)?;
            cfg.master_seed = c.seed.unwrap_or(cfg.master_seed);
            cfg.samples = c.trials.unwrap_or(cfg.samples);
            cmd_gap(&cfg)?
        }
        Command::Colorcode { n, k, set } => {
            let cfg = match load(c)? {
                Some(cfg) => cfg,
                None => ColorcodeConfig {
                    n: required(*n, "n")?,
                    k: required(*k, "k")?,
                    set: set.clone(),
                },
            };
            cmd_colorcode(&cfg)?
        }
        Command::Reduce { graph, k } => {
            let cfg = match load(c)? {
                Some(cfg) => cfg,
                None => ReduceConfig {
                    k: required(*k, "k")?,
                    graph: read(&required(graph.clone(), "graph file")?)?,
                },
            };
            cmd_reduce(&cfg)?
        }
        Command::Sample {
            n,
            p,
            k,
            planted,
            stream,
        } => {
            let mut cfg = match load(c)? {
                Some(cfg) => cfg,
                None => SampleConfig {
                    n: required(*n, "n")?,
                    p: *p,
                    k: *k,
                    planted: *planted,
                    master_seed: 0,
                    stream: *stream,
                },
            };
            cfg.master_seed = c.seed.unwrap_or(cfg.master_seed);
            cmd_sample(&cfg)?
        }
        Command::Dtdepth { circuit, restriction } => {
            let cfg = match load(c)? {
                Some(cfg) => cfg,
                None => DtDepthConfig {
                    circuit: read_json(&required(circuit.clone(), "circuit file")?)?,
                    restriction: restriction.as_deref().map(read_json).transpose()?,
                },
            };
            cmd_dtdepth(&cfg)?
        }
    })
}

fn emit(out: &RunOutput, dir: Option<&Path>) -> anyhow::Result<()> {
    match dir {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            for f in &out.files {
                let path = dir.join(&f.name);
                fs::write(&path, &f.contents).with_context(|| format!("writing {}", path.display()))?;
            }
        }
        None => {
            let many = out.files.len() > 1;
            for f in &out.files {
                if many {
                    println!("==> {} <==", f.name);
                }
                print!("{}", f.contents);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| {
        if out.files.is_empty() {
            bail!("no output produced");
        }
        emit(&out, cli.common.out.as_deref())?;
        Ok(out)
    });
    match result {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            for f in &out.failures {
                eprintln!("assertion failed: {f}");
            }
            if out.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
