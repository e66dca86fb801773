//! End-to-end acceptance checks. Runs without the test harness and prints
//! one line per criterion; exits nonzero if any criterion fails.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use paraac_core::boolfn::{EdgeFunction, TruthTable};
use paraac_core::circuit::Circuit;
use paraac_core::colorcoding::{find_injective_hash, hash_value};
use paraac_core::dtree::{all_trees, dt_depth_v, tree_table};
use paraac_core::experiments::gap::{cmd_gap, run_gap, GapConfig};
use paraac_core::experiments::planted::{cmd_planted, edge_probe_agreement, run_planted, PlantedConfig};
use paraac_core::experiments::switching::{cmd_switching, run_switching, switching_checks, SwitchingConfig};
use paraac_core::experiments::tools::{
    cmd_colorcode, cmd_dtdepth, cmd_reduce, cmd_sample, ColorcodeConfig, DtDepthConfig, ReduceConfig, SampleConfig,
};
use paraac_core::experiments::verify::{cmd_verify, run_verify, Suite, VerifyConfig};
use paraac_core::experiments::RunOutput;
use paraac_core::graph::all_edges;
use paraac_core::reductions::{verify_equivalence, VerifyMode};
use paraac_core::restriction::{compose_restrictions, restrict_function, Restriction};
use paraac_core::{Edge, Graph, RngStream, VertexSet};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn within(start: Instant, limit: Duration, detail: String) -> Outcome {
    let took = start.elapsed();
    if took > limit {
        Err(format!("{detail}; took {took:.1?}, limit {limit:?}"))
    } else {
        Ok(format!("{detail}; {took:.1?}"))
    }
}

fn minutes(m: u64) -> Duration {
    Duration::from_secs(60 * m)
}

fn reduction_equivalence() -> Outcome {
    let start = Instant::now();
    let ex = verify_equivalence(4, &[2, 3], VerifyMode::Exhaustive).map_err(|e| e.to_string())?;
    if !ex.passed() || ex.graphs != 64 {
        return Err(format!(
            "exhaustive n = 4: {} mismatches over {} graphs",
            ex.mismatches.len(),
            ex.graphs
        ));
    }
    let ex_time = start.elapsed();
    if ex_time > minutes(5) {
        return Err(format!("exhaustive run took {ex_time:.1?}"));
    }
    let start = Instant::now();
    let sampled =
        verify_equivalence(6, &[2, 3], VerifyMode::Sampled { count: 200, seed: 2024 }).map_err(|e| e.to_string())?;
    if !sampled.passed() || sampled.graphs != 200 {
        return Err(format!("sampled n = 6: {} mismatches", sampled.mismatches.len()));
    }
    within(
        start,
        minutes(30),
        format!(
            "{} exhaustive + {} sampled checks, 0 mismatches; exhaustive {ex_time:.1?}",
            ex.checks, sampled.checks
        ),
    )
}

fn suite(s: Suite, limit: Duration) -> Outcome {
    let start = Instant::now();
    let cfg = VerifyConfig {
        suites: vec![s],
        ..VerifyConfig::default()
    };
    let r = run_verify(&cfg).map_err(|e| e.to_string())?;
    let s = &r.suites[0];
    if !s.passed {
        return Err(format!("{} mismatches, e.g. {:?}", s.mismatches, s.examples));
    }
    within(start, limit, format!("{} checks, 0 mismatches", s.checks))
}

/// `F↾μ(S)` against `F` evaluated on a graph assembled by hand from `S`
/// on the star block and the fixed bits of `μ` elsewhere.
fn restriction_semantics() -> Outcome {
    let start = Instant::now();
    let edges: Vec<Edge> = all_edges(4).collect();
    let mut restrictions = Vec::new();
    for star_mask in 0u32..16 {
        let star = VertexSet::from_vertices(4, (0..4).filter(|x| star_mask >> x & 1 == 1)).unwrap();
        let free: Vec<Edge> = edges
            .iter()
            .copied()
            .filter(|e| !(star.contains(e.u()) && star.contains(e.v())))
            .collect();
        for bits in 0u32..1 << free.len() {
            let mu = Restriction::new(4, star.clone(), |e| {
                bits >> free.iter().position(|&x| x == e).unwrap() & 1 == 1
            })
            .unwrap();
            restrictions.push(mu);
        }
    }
    let mut functions: Vec<Box<dyn EdgeFunction>> = vec![
        Box::new(Circuit::constant(4, true)),
        Box::new(Circuit::edge_probe(4, Edge::new(0, 1)).unwrap()),
        Box::new(Circuit::triangle_detector(4)),
        Box::new(Circuit::star_detector(4, 3)),
        Box::new(Circuit::set_clique_probe(4, 3)),
    ];
    let mut rng = RngStream::new(4, 0).rng();
    for _ in 0..1000 {
        let bits = rng.next_u64();
        functions.push(Box::new(
            TruthTable::from_fn(4, edges.clone(), |row| bits >> row & 1 == 1).unwrap(),
        ));
    }
    let mut checks = 0u64;
    let mut violations = 0u64;
    for f in &functions {
        for mu in &restrictions {
            let table = restrict_function(f.as_ref(), mu).map_err(|e| e.to_string())?;
            let vars = table.vars().to_vec();
            for row in 0u32..1 << vars.len() {
                let present = |e: Edge| match vars.iter().position(|&x| x == e) {
                    Some(i) => row >> i & 1 == 1,
                    None => mu.value(e).expect("fixed outside the star block"),
                };
                let g = Graph::from_edges(4, edges.iter().filter(|&&e| present(e)).map(|e| (e.u(), e.v()))).unwrap();
                checks += 1;
                if table.value(row) != f.eval_graph(&g).unwrap() {
                    violations += 1;
                }
            }
        }
    }
    if violations > 0 {
        return Err(format!("{violations} violations in {checks} checks"));
    }
    within(
        start,
        minutes(1),
        format!(
            "{} functions x {} restrictions, {checks} checks, 0 violations",
            functions.len(),
            restrictions.len()
        ),
    )
}

fn exact_law(n: usize, ell: usize, q: Ratio<i64>) -> Vec<(Restriction, Ratio<i64>)> {
    let subsets: Vec<u32> = (0u32..1 << n).filter(|m| m.count_ones() as usize == ell).collect();
    let p_u = Ratio::new(1, subsets.len() as i64);
    let mut out = Vec::new();
    for m in subsets {
        let star = VertexSet::from_vertices(n, (0..n).filter(|i| m >> i & 1 == 1)).unwrap();
        let free: Vec<Edge> = all_edges(n)
            .filter(|e| !(star.contains(e.u()) && star.contains(e.v())))
            .collect();
        for bits in 0u32..1 << free.len() {
            let ones = bits.count_ones() as i32;
            let p = p_u * q.pow(ones) * (Ratio::from(1) - q).pow(free.len() as i32 - ones);
            let r = Restriction::new(n, star.clone(), |e| {
                bits >> free.iter().position(|&x| x == e).unwrap() & 1 == 1
            })
            .unwrap();
            out.push((r, p));
        }
    }
    out
}

fn composition_distribution() -> Outcome {
    let start = Instant::now();
    let q = Ratio::new(1, 3);
    let mut composed: HashMap<String, Ratio<i64>> = HashMap::new();
    let mut support: HashMap<Vec<usize>, Ratio<i64>> = HashMap::new();
    for (mu, pm) in exact_law(5, 4, q) {
        for (pi, pp) in exact_law(4, 3, q) {
            let c = compose_restrictions(&mu, &pi).map_err(|e| e.to_string())?;
            *composed.entry(c.to_json().to_string()).or_insert(Ratio::from(0)) += pm * pp;
            *support.entry(c.star().to_vec()).or_insert(Ratio::from(0)) += pm * pp;
        }
    }
    let uniform = Ratio::new(1, 10);
    if support.len() != 10 {
        return Err(format!("star support has {} sets, expected 10", support.len()));
    }
    let tv: Ratio<i64> = support
        .values()
        .map(|&p| if p > uniform { p - uniform } else { uniform - p })
        .sum::<Ratio<i64>>()
        / Ratio::from(2);
    if tv != Ratio::from(0) {
        return Err(format!("total variation {tv}"));
    }
    let direct: HashMap<String, Ratio<i64>> = exact_law(5, 3, q)
        .into_iter()
        .map(|(r, p)| (r.to_json().to_string(), p))
        .collect();
    if composed != direct {
        return Err("full composed law differs from direct sampling".into());
    }
    within(
        start,
        Duration::from_secs(1),
        "star support uniform over 10 sets, TV = 0, full law equal".into(),
    )
}

fn dt_depth_oracle() -> Outcome {
    let start = Instant::now();
    let e = Edge::new;
    let var_sets = [
        vec![e(0, 1), e(0, 2), e(1, 2)],
        vec![e(0, 1), e(0, 2), e(2, 3)],
        vec![e(0, 1), e(0, 2), e(0, 3)],
        vec![e(0, 1), e(2, 3), e(0, 2)],
    ];
    let mut checks = 0;
    for vars in &var_sets {
        let trees = all_trees(vars);
        let mut best: HashMap<Vec<usize>, usize> = HashMap::new();
        for t in &trees {
            let table = tree_table(t, 4, vars).unwrap();
            let key: Vec<usize> = table.rows().ones().collect();
            let h = t.vertex_height();
            best.entry(key).and_modify(|b| *b = (*b).min(h)).or_insert(h);
        }
        if best.len() != 256 {
            return Err(format!("tree enumeration reached {} functions", best.len()));
        }
        for bits in 0u32..256 {
            let f = TruthTable::from_fn(4, vars.clone(), |row| bits >> row & 1 == 1).unwrap();
            let key: Vec<usize> = f.rows().ones().collect();
            if dt_depth_v(&f) != best[&key] {
                return Err(format!(
                    "function {bits:#010b} on {vars:?}: {} vs {}",
                    dt_depth_v(&f),
                    best[&key]
                ));
            }
            checks += 1;
        }
    }
    let literal = TruthTable::literal(4, e(0, 1), true).unwrap();
    if dt_depth_v(&literal) != 2 {
        return Err(format!("literal has depth {}", dt_depth_v(&literal)));
    }
    within(
        start,
        minutes(1),
        format!("{checks} functions match enumeration; literal depth 2"),
    )
}

fn switching_tail() -> Outcome {
    let start = Instant::now();
    let cfg = SwitchingConfig::default();
    let rows = run_switching(&cfg).map_err(|e| e.to_string())?;
    let informative = rows.iter().filter(|r| r.record.informative()).count();
    if cfg.trials < 10_000 || informative == 0 {
        return Err(format!("{informative} informative rows at {} trials", cfg.trials));
    }
    let failures = switching_checks(&rows);
    if !failures.is_empty() {
        return Err(failures.join("; "));
    }
    within(
        start,
        minutes(10),
        format!(
            "{} configurations, {informative} informative, all within the bound",
            rows.len()
        ),
    )
}

fn planted_trend() -> Outcome {
    let start = Instant::now();
    let cfg = PlantedConfig::default();
    let out = cmd_planted(&cfg).map_err(|e| e.to_string())?;
    if !out.passed() {
        return Err(out.failures.join("; "));
    }
    let rows = run_planted(&cfg).map_err(|e| e.to_string())?;
    let last = *cfg.ns.last().unwrap();
    let triangle = rows.iter().find(|r| r.circuit == "triangle" && r.n == last).unwrap();
    if triangle.agreement < 0.9 {
        return Err(format!("triangle agreement {} at n = {last}", triangle.agreement));
    }
    let probe = rows.iter().find(|r| r.circuit == "edge_probe" && r.n == 32).unwrap();
    let exact = edge_probe_agreement(32, probe.q, probe.c);
    within(
        start,
        minutes(15),
        format!(
            "trend holds for {} circuits; triangle {} at n = {last}; edge probe {} vs exact {exact:.4} at n = 32",
            cfg.circuits.len(),
            triangle.agreement,
            probe.agreement
        ),
    )
}

fn gap_statistics() -> Outcome {
    let start = Instant::now();
    let mut fractions = Vec::new();
    for n in [64, 256] {
        let cfg = GapConfig {
            n,
            samples: 1000,
            ..GapConfig::default()
        };
        let (m, _) = run_gap(&cfg).map_err(|e| e.to_string())?;
        if m.certified != m.samples {
            return Err(format!(
                "n = {n}: only {} of {} planted graphs certified",
                m.certified, m.samples
            ));
        }
        fractions.push(m.base_at_least_threshold_fraction);
    }
    if fractions[1] > fractions[0] {
        return Err(format!(
            "cn(G) >= 2k+1 fraction rises: {} at 64, {} at 256",
            fractions[0], fractions[1]
        ));
    }
    within(
        start,
        minutes(20),
        format!(
            "all planted graphs certified; cn(G) >= 2k+1 fraction {} at 64, {} at 256",
            fractions[0], fractions[1]
        ),
    )
}

fn color_coding() -> Outcome {
    let start = Instant::now();
    let mut rng = RngStream::new(10, 0).rng();
    for i in 0..10_000 {
        let x: Vec<u64> = rng.subset(64, 3).into_iter().map(|v| v as u64 + 1).collect();
        let h = find_injective_hash(&x, 3, 64).map_err(|e| e.to_string())?;
        let Some(h) = h else {
            return Err(format!("subset {i} {x:?}: no injective hash"));
        };
        let images: std::collections::BTreeSet<u64> = x.iter().map(|&m| hash_value(h, m)).collect();
        if images.len() != 3 {
            return Err(format!("subset {x:?}: hash {h:?} is not injective"));
        }
    }
    let cfg = VerifyConfig {
        suites: vec![Suite::ColorCoding],
        ..VerifyConfig::default()
    };
    let r = run_verify(&cfg).map_err(|e| e.to_string())?;
    if !r.passed || cfg.cc_predicates != 1000 || cfg.cc_max_universe != 32 || cfg.cc_max_k != 10 {
        return Err(format!("{} decision mismatches", r.suites[0].mismatches));
    }
    within(
        start,
        minutes(2),
        format!(
            "10000 injective hashes; {} decision checks, 0 mismatches",
            r.suites[0].checks
        ),
    )
}

fn twice(name: &str, run: impl Fn() -> paraac_core::Result<RunOutput>) -> Result<usize, String> {
    let a = run().map_err(|e| format!("{name}: {e}"))?;
    let b = run().map_err(|e| format!("{name}: {e}"))?;
    if a.files != b.files {
        return Err(format!("{name}: rerun output differs"));
    }
    if a.files.iter().any(|f| !f.contents.contains("\"config_hash\"")) {
        return Err(format!("{name}: file without provenance header"));
    }
    Ok(a.files.len())
}

fn reproducibility() -> Outcome {
    let start = Instant::now();
    let mut files = 0;
    let planted = PlantedConfig {
        ns: vec![16, 32],
        trials: 500,
        ..PlantedConfig::default()
    };
    files += twice("planted", || cmd_planted(&planted))?;
    let switching = SwitchingConfig {
        trials: 300,
        ..SwitchingConfig::default()
    };
    files += twice("switching", || cmd_switching(&switching))?;
    let verify = VerifyConfig {
        wsat_n: 4,
        gamma_vars: 6,
        cc_predicates: 100,
        ..VerifyConfig::default()
    };
    files += twice("verify", || cmd_verify(&verify))?;
    let gap = GapConfig {
        n: 64,
        samples: 50,
        ..GapConfig::default()
    };
    files += twice("gap", || cmd_gap(&gap))?;
    let cc = ColorcodeConfig {
        n: 64,
        k: 3,
        set: vec![1, 5, 9],
    };
    files += twice("colorcode", || cmd_colorcode(&cc))?;
    let reduce = ReduceConfig {
        k: 2,
        graph: "4 3\n1 2\n2 3\n3 4\n".into(),
    };
    files += twice("reduce", || cmd_reduce(&reduce))?;
    let sample = SampleConfig {
        n: 40,
        p: None,
        k: Some(2.0),
        planted: 7,
        master_seed: 3,
        stream: 1,
    };
    files += twice("sample", || cmd_sample(&sample))?;
    let dt = DtDepthConfig {
        circuit: Circuit::triangle_detector(4).to_json(),
        restriction: None,
    };
    files += twice("dtdepth", || cmd_dtdepth(&dt))?;
    within(
        start,
        minutes(10),
        format!("8 commands, {files} files byte-identical on rerun"),
    )
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("1 reduction equivalence", reduction_equivalence),
        ("2 weighted-SAT reduction", || suite(Suite::WeightedSat, minutes(1))),
        ("3 Gamma_{1,1} closed form", || suite(Suite::Gamma11, minutes(1))),
        ("4 restriction semantics", restriction_semantics),
        ("5 composition distribution", composition_distribution),
        ("6 vertex depth oracle", dt_depth_oracle),
        ("7 switching tail vs bound", switching_tail),
        ("8 planted indistinguishability", planted_trend),
        ("9 gap instance statistics", gap_statistics),
        ("10 color coding", color_coding),
        ("11 reproducibility", reproducibility),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
