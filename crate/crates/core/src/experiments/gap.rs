//! Gap-clique instance generation from planted samples.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{gap_parameters, FSpec, GapParameters, RhoSpec};
use super::{header_line, json_document, OutputFile, RunOutput};
use crate::error::{Error, Result};
use crate::graph::{max_clique_size, Graph};
use crate::random::sample_planted;
use crate::rng::RngStream;

pub const DEFAULT_GAP_SEED: u64 = 31_337;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapConfig {
    #[serde(default = "default_n")]
    pub n: u64,
    #[serde(default = "default_f")]
    pub f: FSpec,
    #[serde(default = "default_rho")]
    pub rho: RhoSpec,
    #[serde(default = "default_samples")]
    pub samples: u64,
    #[serde(default = "default_seed")]
    pub master_seed: u64,
}

fn default_n() -> u64 {
    256
}
fn default_f() -> FSpec {
    FSpec::Exp2
}
fn default_rho() -> RhoSpec {
    RhoSpec::Const(1.0)
}
fn default_samples() -> u64 {
    1000
}
fn default_seed() -> u64 {
    DEFAULT_GAP_SEED
}

impl Default for GapConfig {
    fn default() -> Self {
        GapConfig {
            n: default_n(),
            f: default_f(),
            rho: default_rho(),
            samples: default_samples(),
            master_seed: default_seed(),
        }
    }
}

/// Exact clique numbers of one sample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapSample {
    pub index: u64,
    pub planted_clique_number: usize,
    pub certified: bool,
    pub base_clique_number: usize,
    pub base_below_threshold: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapManifest {
    pub parameters: GapParameters,
    pub samples: u64,
    pub certified: u64,
    pub base_at_least_threshold: u64,
    pub base_at_least_threshold_fraction: f64,
    pub per_sample: Vec<GapSample>,
}

fn sample(cfg: &GapConfig, p: &GapParameters, i: u64) -> Result<(GapSample, Graph, Graph)> {
    let s = sample_planted(
        cfg.n as usize,
        p.q,
        p.planted_size as usize,
        RngStream::new(cfg.master_seed, i),
    )?;
    let planted = max_clique_size(&s.planted_graph);
    let base = max_clique_size(&s.base);
    let threshold = p.clique_parameter as usize;
    Ok((
        GapSample {
            index: i,
            planted_clique_number: planted,
            certified: planted >= p.planted_size as usize,
            base_clique_number: base,
            base_below_threshold: base < threshold,
        },
        s.planted_graph,
        s.base,
    ))
}

/// Sample `i` draws from stream `(master_seed, i)`.
pub fn run_gap(cfg: &GapConfig) -> Result<(GapManifest, Option<(Graph, Graph)>)> {
    if cfg.samples == 0 {
        return Err(Error::param("samples must be at least 1"));
    }
    if cfg.n > u32::MAX as u64 {
        return Err(Error::param("n must fit in 32 bits"));
    }
    let p = gap_parameters(cfg.n, &cfg.f, &cfg.rho)?;
    let first = sample(cfg, &p, 0)?;
    let mut per_sample = vec![first.0];
    per_sample.extend(
        (1..cfg.samples)
            .into_par_iter()
            .map(|i| sample(cfg, &p, i).map(|s| s.0))
            .collect::<Result<Vec<_>>>()?,
    );
    let certified = per_sample.iter().filter(|s| s.certified).count() as u64;
    let above = per_sample.iter().filter(|s| !s.base_below_threshold).count() as u64;
    Ok((
        GapManifest {
            parameters: p,
            samples: cfg.samples,
            certified,
            base_at_least_threshold: above,
            base_at_least_threshold_fraction: above as f64 / cfg.samples as f64,
            per_sample,
        },
        Some((first.1, first.2)),
    ))
}

fn instance_file(cfg: &GapConfig, g: &Graph, k: u64, kind: &str) -> String {
    let mut out = header_line(cfg, cfg.master_seed);
    out.push_str(&format!("# {kind} instance of sample 1, clique parameter {k}\n"));
    out.push_str(&g.to_edge_list());
    out
}

/// Yes/no instances of the first sample plus the manifest; fails if any
/// planted graph lacks its certified clique.
pub fn cmd_gap(cfg: &GapConfig) -> Result<RunOutput> {
    let (manifest, graphs) = run_gap(cfg)?;
    let (yes, no) = graphs.expect("at least one sample");
    let k = manifest.parameters.clique_parameter;
    let mut failures = Vec::new();
    if manifest.certified != manifest.samples {
        failures.push(format!(
            "{} of {} planted graphs lack a clique of size {}",
            manifest.samples - manifest.certified,
            manifest.samples,
            manifest.parameters.planted_size
        ));
    }
    Ok(RunOutput {
        files: vec![
            OutputFile {
                name: "gap_yes.txt".into(),
                contents: instance_file(cfg, &yes, k, "yes"),
            },
            OutputFile {
                name: "gap_no.txt".into(),
                contents: instance_file(cfg, &no, k, "candidate no"),
            },
            OutputFile {
                name: "manifest.json".into(),
                contents: json_document(cfg, cfg.master_seed, serde_json::to_value(&manifest)?),
            },
        ],
        failures,
        warnings: Vec::new(),
    })
}
