//! Planted-clique indistinguishability: how often a fixed circuit gives the
//! same answer on `G` and on `G + C(A)` for `(G, A) ~ ER(n, n^{-1/k}, c)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::KSchedule;
use super::zoo::{CircuitSpec, ZooEntry};
use super::{ceil_tol, header_line, OutputFile, RunOutput};
use crate::error::{Error, Result};
use crate::random::sample_planted;
use crate::rng::RngStream;
use crate::stats::{pair_inside_subset_probability, wilson_99};

/// Seed of the pilot run the trend thresholds were read from.
pub const PILOT_SEED: u64 = 20_240_601;

/// Tolerance for the single-edge probe against its exact agreement.
pub const EDGE_PROBE_TOLERANCE: f64 = 1e-2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantedConfig {
    #[serde(default = "default_ns")]
    pub ns: Vec<usize>,
    #[serde(default = "default_schedule")]
    pub k_schedule: KSchedule,
    #[serde(default = "default_xi")]
    pub xi: f64,
    #[serde(default = "CircuitSpec::standard")]
    pub circuits: Vec<CircuitSpec>,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default = "default_seed")]
    pub master_seed: u64,
}

fn default_ns() -> Vec<usize> {
    vec![32, 64, 128, 256]
}

fn default_schedule() -> KSchedule {
    KSchedule::SqrtLog2
}

fn default_xi() -> f64 {
    0.5
}

fn default_trials() -> u64 {
    10_000
}

fn default_seed() -> u64 {
    PILOT_SEED
}

impl Default for PlantedConfig {
    fn default() -> Self {
        PlantedConfig {
            ns: default_ns(),
            k_schedule: default_schedule(),
            xi: default_xi(),
            circuits: CircuitSpec::standard(),
            trials: default_trials(),
            master_seed: default_seed(),
        }
    }
}

impl PlantedConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.xi) {
            return Err(Error::param(format!("ξ = {} must lie in [0, 1)", self.xi)));
        }
        if self.trials == 0 {
            return Err(Error::param("trials must be at least 1"));
        }
        if let Some(&n) = self.ns.iter().find(|&&n| !(2..=u32::MAX as usize).contains(&n)) {
            return Err(Error::param(format!("n = {n} out of range")));
        }
        if self.trials > u32::MAX as u64 {
            return Err(Error::param("trials must fit in 32 bits"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlantedRow {
    pub circuit: String,
    pub n: usize,
    pub k: f64,
    pub c: usize,
    pub q: f64,
    pub trials: u64,
    pub agreements: u64,
    pub agreement: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub seed: u64,
}

pub const PLANTED_CSV_HEADER: &str = "circuit,n,k,c,q,trials,agreement,wilson_lo,wilson_hi,seed";

impl PlantedRow {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.circuit,
            self.n,
            self.k,
            self.c,
            self.q,
            self.trials,
            self.agreement,
            self.wilson_lo,
            self.wilson_hi,
            self.seed
        )
    }
}

/// `Pr[C(G) = C(G + C(A))]` for the probe of a single fixed edge: the
/// answers differ only when the edge lies inside `A` and is absent from `G`.
pub fn edge_probe_agreement(n: usize, q: f64, c: usize) -> f64 {
    1.0 - (1.0 - q) * pair_inside_subset_probability(n as u64, c as u64)
}

/// Rows ordered by `n`, then by circuit. Trial `t` at size `n` draws from
/// stream `(master_seed, n << 32 | t)`; all circuits share the samples.
pub fn run_planted(cfg: &PlantedConfig) -> Result<Vec<PlantedRow>> {
    cfg.validate()?;
    let entries: Vec<ZooEntry> = cfg.circuits.iter().map(ZooEntry::resolve).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for (index, &n) in cfg.ns.iter().enumerate() {
        let k = cfg.k_schedule.k_at(n, index)?;
        let q = (n as f64).powf(-1.0 / k);
        let c = (ceil_tol((n as f64).powf(cfg.xi)) as usize).min(n);
        for e in &entries {
            e.check_n(n)?;
        }
        let agree: Vec<Vec<bool>> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| -> Result<Vec<bool>> {
                let s = sample_planted(n, q, c, RngStream::new(cfg.master_seed, (n as u64) << 32 | t))?;
                entries
                    .iter()
                    .map(|e| Ok(e.eval(&s.base)? == e.eval(&s.planted_graph)?))
                    .collect()
            })
            .collect::<Result<_>>()?;
        for (j, e) in entries.iter().enumerate() {
            let agreements = agree.iter().filter(|a| a[j]).count() as u64;
            let (wilson_lo, wilson_hi) = wilson_99(agreements, cfg.trials);
            rows.push(PlantedRow {
                circuit: e.name().to_string(),
                n,
                k,
                c,
                q,
                trials: cfg.trials,
                agreements,
                agreement: agreements as f64 / cfg.trials as f64,
                wilson_lo,
                wilson_hi,
                seed: cfg.master_seed,
            });
        }
    }
    Ok(rows)
}

/// Trend per circuit (upper bound at the largest `n` reaches the lower bound
/// at the smallest), and the edge probe against its exact agreement.
pub fn planted_checks(cfg: &PlantedConfig, rows: &[PlantedRow]) -> Vec<String> {
    let mut failures = Vec::new();
    let (Some(&first), Some(&last)) = (cfg.ns.first(), cfg.ns.last()) else {
        return failures;
    };
    let names: std::collections::BTreeSet<&str> = rows.iter().map(|r| r.circuit.as_str()).collect();
    for name in names {
        let at = |n| rows.iter().find(|r| r.circuit == name && r.n == n);
        if let (Some(a), Some(b)) = (at(first), at(last)) {
            if first != last && b.wilson_hi < a.wilson_lo {
                failures.push(format!(
                    "{name}: agreement falls from {} at n = {first} to {} at n = {last}",
                    a.agreement, b.agreement
                ));
            }
        }
    }
    for r in rows.iter().filter(|r| r.circuit == "edge_probe") {
        let exact = edge_probe_agreement(r.n, r.q, r.c);
        if (r.agreement - exact).abs() > EDGE_PROBE_TOLERANCE {
            failures.push(format!(
                "edge_probe at n = {}: agreement {} vs exact {exact}",
                r.n, r.agreement
            ));
        }
    }
    failures
}

pub fn planted_csv(cfg: &PlantedConfig, rows: &[PlantedRow]) -> String {
    let mut out = header_line(cfg, cfg.master_seed);
    out.push_str(PLANTED_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

pub fn cmd_planted(cfg: &PlantedConfig) -> Result<RunOutput> {
    let rows = run_planted(cfg)?;
    Ok(RunOutput {
        files: vec![OutputFile {
            name: "planted.csv".into(),
            contents: planted_csv(cfg, &rows),
        }],
        failures: planted_checks(cfg, &rows),
        warnings: Vec::new(),
    })
}
