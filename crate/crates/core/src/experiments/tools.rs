//! Single-shot tools: hashing, reduction, sampling and vertex depth.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{header_line, json_document, OutputFile, RunOutput};
use crate::boolfn::TruthTable;
use crate::circuit::Circuit;
use crate::colorcoding::find_injective_hash;
use crate::dtree::dt_depth_v;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::random::sample_planted;
use crate::reductions::reduce_clique_to_ds;
use crate::restriction::{restrict_function, Restriction};
use crate::rng::RngStream;

fn single(name: &str, contents: String) -> RunOutput {
    RunOutput {
        files: vec![OutputFile {
            name: name.into(),
            contents,
        }],
        ..RunOutput::default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColorcodeConfig {
    pub n: u64,
    pub k: u64,
    pub set: Vec<u64>,
}

/// An injective hash for `set`; a miss is reported, not treated as failure.
pub fn cmd_colorcode(cfg: &ColorcodeConfig) -> Result<RunOutput> {
    let found = find_injective_hash(&cfg.set, cfg.k, cfg.n)?;
    let body = json!({
        "n": cfg.n,
        "k": cfg.k,
        "set": cfg.set,
        "found": found.is_some(),
        "p": found.map(|h| h.p),
        "q": found.map(|h| h.q),
    });
    Ok(single("colorcode.json", json_document(cfg, 0, body)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReduceConfig {
    pub k: usize,
    /// Source graph in edge-list format.
    pub graph: String,
}

/// The dominating-set graph and its JSON sidecar.
pub fn cmd_reduce(cfg: &ReduceConfig) -> Result<RunOutput> {
    let g = Graph::parse_edge_list(&cfg.graph)?;
    let inst = reduce_clique_to_ds(&g, cfg.k)?;
    let mut text = header_line(cfg, 0);
    text.push_str(&format!("# dominating set target size {}\n", inst.target_size));
    text.push_str(&inst.graph.to_edge_list());
    Ok(RunOutput {
        files: vec![
            OutputFile {
                name: "instance.txt".into(),
                contents: text,
            },
            OutputFile {
                name: "instance.json".into(),
                contents: json_document(cfg, 0, inst.sidecar_json()),
            },
        ],
        ..RunOutput::default()
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    pub n: usize,
    /// Edge probability; exactly one of `p` and `k` (for `p = n^{-1/k}`).
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub k: Option<f64>,
    /// Size of the planted clique; 0 plants nothing.
    #[serde(default)]
    pub planted: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub stream: u64,
}

impl SampleConfig {
    pub fn edge_probability(&self) -> Result<f64> {
        match (self.p, self.k) {
            (Some(p), None) => Ok(p),
            (None, Some(k)) if k > 0.0 => Ok((self.n as f64).powf(-1.0 / k)),
            (None, Some(k)) => Err(Error::param(format!("k = {k} must be positive"))),
            _ => Err(Error::param("give exactly one of p and k")),
        }
    }
}

/// `G + C(A)` for `(G, A) ~ ER(n, p, c)`, drawn from `(master_seed, stream)`.
pub fn cmd_sample(cfg: &SampleConfig) -> Result<RunOutput> {
    let p = cfg.edge_probability()?;
    let s = sample_planted(cfg.n, p, cfg.planted, RngStream::new(cfg.master_seed, cfg.stream))?;
    let mut text = header_line(cfg, cfg.master_seed);
    if cfg.planted > 0 {
        let set: Vec<String> = s.planted_set.iter().map(|x| (x + 1).to_string()).collect();
        text.push_str(&format!("# planted clique {}\n", set.join(" ")));
    }
    text.push_str(&s.planted_graph.to_edge_list());
    Ok(single("graph.txt", text))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DtDepthConfig {
    pub circuit: serde_json::Value,
    #[serde(default)]
    pub restriction: Option<serde_json::Value>,
}

/// Vertex depth of the circuit, over its input edges or, with a
/// restriction, of the restricted function over the star edges.
pub fn cmd_dtdepth(cfg: &DtDepthConfig) -> Result<RunOutput> {
    let c = Circuit::from_json(&cfg.circuit.to_string())?;
    let table = match &cfg.restriction {
        Some(r) => restrict_function(&c, &Restriction::from_json(&r.to_string())?)?,
        None => TruthTable::tabulate(&c, c.input_edges().into_iter().collect())?,
    };
    let body = json!({
        "dt_depth_v": dt_depth_v(&table),
        "variables": table.vars().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
    });
    Ok(single("dtdepth.json", json_document(cfg, 0, body)))
}
