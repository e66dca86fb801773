//! Equivalence suites: each compares a construction or a fast decision
//! procedure with an independent brute-force oracle.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{json_document, OutputFile, RunOutput};
use crate::colorcoding::distinct_witness_decide;
use crate::error::{Error, Result};
use crate::formulas::{build_delta_g, gamma11_decide, var_name, weighted_sat_bruteforce, Node, PropFormula};
use crate::graph::{has_clique, pair_count, Graph};
use crate::reductions::{verify_equivalence, VerifyMode};
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Reduction,
    WeightedSat,
    Gamma11,
    ColorCoding,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default = "all_suites")]
    pub suites: Vec<Suite>,
    /// Exhaustive clique/dominating-set check over all graphs on `[n]`.
    #[serde(default = "d_reduction_n")]
    pub reduction_n: usize,
    #[serde(default = "d_reduction_ks")]
    pub reduction_ks: Vec<usize>,
    /// Extra sampled graphs on `reduction_sample_n` vertices.
    #[serde(default)]
    pub reduction_samples: usize,
    #[serde(default = "d_reduction_sample_n")]
    pub reduction_sample_n: usize,
    /// All graphs on `[wsat_n]`, weights `0..=wsat_max_k`.
    #[serde(default = "d_wsat_n")]
    pub wsat_n: usize,
    #[serde(default = "d_wsat_n")]
    pub wsat_max_k: usize,
    /// All sign patterns over `gamma_vars` variables, `k ≤ gamma_max_k`.
    #[serde(default = "d_ten")]
    pub gamma_vars: usize,
    #[serde(default = "d_ten")]
    pub gamma_max_k: usize,
    #[serde(default = "d_cc_universe")]
    pub cc_max_universe: u64,
    #[serde(default = "d_ten_u64")]
    pub cc_max_k: u64,
    #[serde(default = "d_cc_predicates")]
    pub cc_predicates: u64,
    #[serde(default)]
    pub master_seed: u64,
}

fn all_suites() -> Vec<Suite> {
    vec![Suite::Reduction, Suite::WeightedSat, Suite::Gamma11, Suite::ColorCoding]
}
fn d_reduction_n() -> usize {
    4
}
fn d_reduction_ks() -> Vec<usize> {
    vec![2, 3]
}
fn d_reduction_sample_n() -> usize {
    6
}
fn d_wsat_n() -> usize {
    5
}
fn d_ten() -> usize {
    10
}
fn d_ten_u64() -> u64 {
    10
}
fn d_cc_universe() -> u64 {
    32
}
fn d_cc_predicates() -> u64 {
    1000
}

impl Default for VerifyConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults")
    }
}

/// Outcome of one suite. `examples` lists up to five mismatches.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: u64,
    pub mismatches: u64,
    pub passed: bool,
    pub examples: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite, checks: u64, failed: Vec<String>) -> Self {
        SuiteReport {
            suite,
            checks,
            mismatches: failed.len() as u64,
            passed: failed.is_empty(),
            examples: failed.into_iter().take(5).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
    pub warnings: Vec<String>,
}

pub type DeltaBuilder = dyn Fn(&Graph) -> PropFormula + Sync;

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    run_verify_with(cfg, &build_delta_g)
}

/// Like [`run_verify`] with a replaceable `δ_G` construction.
pub fn run_verify_with(cfg: &VerifyConfig, delta: &DeltaBuilder) -> Result<VerifyReport> {
    let mut suites = Vec::new();
    let mut warnings = Vec::new();
    if cfg.suites.is_empty() {
        warnings.push("empty scope: no suite selected, nothing was checked".to_string());
    }
    for &suite in &cfg.suites {
        suites.push(match suite {
            Suite::Reduction => reduction_suite(cfg)?,
            Suite::WeightedSat => weighted_sat_suite(cfg, delta)?,
            Suite::Gamma11 => gamma11_suite(cfg)?,
            Suite::ColorCoding => colorcoding_suite(cfg)?,
        });
    }
    Ok(VerifyReport {
        passed: suites.iter().all(|s| s.passed),
        suites,
        warnings,
    })
}

fn reduction_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut reports = vec![verify_equivalence(
        cfg.reduction_n,
        &cfg.reduction_ks,
        VerifyMode::Exhaustive,
    )?];
    if cfg.reduction_samples > 0 {
        reports.push(verify_equivalence(
            cfg.reduction_sample_n,
            &cfg.reduction_ks,
            VerifyMode::Sampled {
                count: cfg.reduction_samples,
                seed: cfg.master_seed,
            },
        )?);
    }
    let checks = reports.iter().map(|r| r.checks as u64).sum();
    let mut failed: Vec<String> = reports
        .iter()
        .flat_map(|r| r.mismatches.iter().map(|m| format!("k={} graph {}", m.k, m.graph)))
        .collect();
    for r in &reports {
        failed.extend((0..r.witness_failures).map(|_| format!("witness failure at n={}", r.n)));
    }
    Ok(SuiteReport::new(Suite::Reduction, checks, failed))
}

fn weighted_sat_suite(cfg: &VerifyConfig, delta: &DeltaBuilder) -> Result<SuiteReport> {
    let n = cfg.wsat_n;
    if pair_count(n) > 20 {
        return Err(Error::param(format!(
            "weighted-SAT suite enumerates 2^{} graphs",
            pair_count(n)
        )));
    }
    let results: Vec<Vec<String>> = (0..1u64 << pair_count(n))
        .into_par_iter()
        .map(|mask| -> Result<Vec<String>> {
            let g = Graph::from_mask(n, mask);
            let f = delta(&g);
            let mut bad = Vec::new();
            for k in 0..=cfg.wsat_max_k {
                if has_clique(&g, k) != weighted_sat_bruteforce(&f, k)? {
                    bad.push(format!("k={k} graph {g:?}"));
                }
            }
            Ok(bad)
        })
        .collect::<Result<_>>()?;
    let checks = (1u64 << pair_count(n)) * (cfg.wsat_max_k as u64 + 1);
    Ok(SuiteReport::new(Suite::WeightedSat, checks, results.concat()))
}

/// The conjunction of unit clauses given by a sign pattern: digit 0 absent,
/// 1 positive, 2 negative; the universe is always `x1..x_vars`.
pub fn gamma11_pattern(vars: usize, pattern: u64) -> PropFormula {
    let mut clauses = Vec::new();
    let mut rest = pattern;
    for i in 0..vars {
        match rest % 3 {
            1 => clauses.push(Node::Or(vec![Node::pos(var_name(i))])),
            2 => clauses.push(Node::Or(vec![Node::neg(var_name(i))])),
            _ => {}
        }
        rest /= 3;
    }
    PropFormula::with_universe(Node::And(clauses), (0..vars).map(var_name))
}

fn gamma11_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let m = cfg.gamma_vars;
    if m > 12 {
        return Err(Error::param("Γ_{1,1} suite supports at most 12 variables"));
    }
    let patterns = 3u64.pow(m as u32);
    let results: Vec<Vec<String>> = (0..patterns)
        .into_par_iter()
        .map(|pat| -> Result<Vec<String>> {
            let f = gamma11_pattern(m, pat);
            let mut bad = Vec::new();
            for k in 0..=cfg.gamma_max_k {
                if gamma11_decide(&f, k)? != weighted_sat_bruteforce(&f, k)? {
                    bad.push(format!("k={k} pattern {pat}"));
                }
            }
            Ok(bad)
        })
        .collect::<Result<_>>()?;
    Ok(SuiteReport::new(
        Suite::Gamma11,
        patterns * (cfg.gamma_max_k as u64 + 1),
        results.concat(),
    ))
}

/// Predicate `i`: universe size uniform in `1..=max_universe`, then each
/// element holds independently with a density drawn uniformly from `[0, 1)`.
pub fn random_predicate(master_seed: u64, i: u64, max_universe: u64) -> (u64, Vec<bool>) {
    let mut rng = RngStream::new(master_seed, i).rng();
    let size = 1 + rng.below(max_universe);
    let density = rng.uniform_f64();
    let holds = (0..size).map(|_| rng.bernoulli(density)).collect();
    (size, holds)
}

fn colorcoding_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    if cfg.cc_max_universe == 0 {
        return Err(Error::param("cc_max_universe must be positive"));
    }
    let results: Vec<Vec<String>> = (0..cfg.cc_predicates)
        .into_par_iter()
        .map(|i| {
            let (size, holds) = random_predicate(cfg.master_seed, i, cfg.cc_max_universe);
            let count = holds.iter().filter(|&&h| h).count() as u64;
            (0..=cfg.cc_max_k)
                .filter(|&k| distinct_witness_decide(size, |m| holds[m as usize - 1], k) != (count >= k))
                .map(|k| format!("predicate {i} (|U| = {size}, {count} hold) k={k}"))
                .collect()
        })
        .collect();
    Ok(SuiteReport::new(
        Suite::ColorCoding,
        cfg.cc_predicates * (cfg.cc_max_k + 1),
        results.concat(),
    ))
}

pub fn cmd_verify(cfg: &VerifyConfig) -> Result<RunOutput> {
    cmd_verify_with(cfg, &build_delta_g)
}

pub fn cmd_verify_with(cfg: &VerifyConfig, delta: &DeltaBuilder) -> Result<RunOutput> {
    let report = run_verify_with(cfg, delta)?;
    let failures = report
        .suites
        .iter()
        .filter(|s| !s.passed)
        .map(|s| format!("{:?}: {} mismatches", s.suite, s.mismatches))
        .collect();
    Ok(RunOutput {
        files: vec![OutputFile {
            name: "verify.json".into(),
            contents: json_document(cfg, cfg.master_seed, serde_json::to_value(&report)?),
        }],
        failures,
        warnings: report.warnings,
    })
}
