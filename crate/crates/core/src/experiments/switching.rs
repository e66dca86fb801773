//! Sweeps of the switching tail over zoo functions and restriction
//! parameters.

use serde::{Deserialize, Serialize};

use super::zoo::{CircuitSpec, ZooEntry};
use super::{header_line, OutputFile, RunOutput};
use crate::dtree::{switching_tail, SwitchingParams, SwitchingRecord, SWITCHING_CSV_HEADER};
use crate::error::{Error, Result};

pub const DEFAULT_SWITCHING_SEED: u64 = 77_001;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwitchingPoint {
    pub function: CircuitSpec,
    pub n: usize,
    pub ell: usize,
    pub q: f64,
    pub s: usize,
}

/// Cartesian product, expanded in the order function, n, ell, q, s.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwitchingGrid {
    pub functions: Vec<CircuitSpec>,
    pub n: Vec<usize>,
    pub ell: Vec<usize>,
    pub q: Vec<f64>,
    pub s: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwitchingConfig {
    #[serde(default)]
    pub points: Vec<SwitchingPoint>,
    #[serde(default)]
    pub grid: Option<SwitchingGrid>,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default = "default_seed")]
    pub master_seed: u64,
}

fn default_trials() -> u64 {
    10_000
}

fn default_seed() -> u64 {
    DEFAULT_SWITCHING_SEED
}

fn point(function: CircuitSpec, n: usize, ell: usize, q: f64, s: usize) -> SwitchingPoint {
    SwitchingPoint { function, n, ell, q, s }
}

impl Default for SwitchingConfig {
    /// A sweep mixing configurations where the bound is informative with
    /// ones where its hypothesis fails.
    fn default() -> Self {
        use CircuitSpec::*;
        SwitchingConfig {
            points: vec![
                point(EdgeProbe, 100, 2, 0.5, 1),
                point(EdgeProbe, 40, 2, 0.25, 1),
                point(Triangle, 300, 3, 0.5, 2),
                point(Triangle, 12, 4, 0.25, 2),
                point(Triangle, 20, 5, 0.5, 3),
                point(SetClique, 300, 3, 0.5, 2),
                point(SetClique, 10, 3, 0.25, 2),
                point(KStar, 16, 4, 0.25, 1),
                point(Const, 50, 4, 0.5, 0),
            ],
            grid: None,
            trials: default_trials(),
            master_seed: default_seed(),
        }
    }
}

impl SwitchingConfig {
    pub fn expand(&self) -> Vec<SwitchingPoint> {
        let mut out = self.points.clone();
        if let Some(g) = &self.grid {
            for f in &g.functions {
                for &n in &g.n {
                    for &ell in &g.ell {
                        for &q in &g.q {
                            for &s in &g.s {
                                out.push(point(f.clone(), n, ell, q, s));
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SwitchingRow {
    pub function: String,
    pub record: SwitchingRecord,
}

impl SwitchingRow {
    pub fn csv_row(&self) -> String {
        format!("{},{}", self.function, self.record.csv_row())
    }
}

/// One row per point; point `i` uses stream prefix `i`.
pub fn run_switching(cfg: &SwitchingConfig) -> Result<Vec<SwitchingRow>> {
    if cfg.trials == 0 || cfg.trials > u32::MAX as u64 {
        return Err(Error::param("trials must lie in 1..2^32"));
    }
    cfg.expand()
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            let entry = ZooEntry::resolve(&p.function)?;
            let dnf = entry.dnf(p.n)?;
            let params = SwitchingParams {
                n: p.n,
                ell: p.ell,
                q: p.q,
                s: p.s,
                trials: cfg.trials,
                master_seed: cfg.master_seed,
                stream_prefix: i as u64,
            };
            Ok(SwitchingRow {
                function: entry.name().to_string(),
                record: switching_tail(&dnf, &params)?,
            })
        })
        .collect()
}

/// Informative rows whose empirical lower bound exceeds the analytic bound.
pub fn switching_checks(rows: &[SwitchingRow]) -> Vec<String> {
    rows.iter()
        .filter(|r| r.record.informative() && r.record.wilson_lo > r.record.beame_bound)
        .map(|r| {
            format!(
                "{} n={} ell={} q={} s={}: Wilson lower bound {} exceeds {}",
                r.function, r.record.n, r.record.ell, r.record.q, r.record.s, r.record.wilson_lo, r.record.beame_bound
            )
        })
        .collect()
}

pub fn switching_csv(cfg: &SwitchingConfig, rows: &[SwitchingRow]) -> String {
    let mut out = header_line(cfg, cfg.master_seed);
    out.push_str("function,");
    out.push_str(SWITCHING_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

pub fn cmd_switching(cfg: &SwitchingConfig) -> Result<RunOutput> {
    let rows = run_switching(cfg)?;
    Ok(RunOutput {
        files: vec![OutputFile {
            name: "switching.csv".into(),
            contents: switching_csv(cfg, &rows),
        }],
        failures: switching_checks(&rows),
        warnings: Vec::new(),
    })
}
