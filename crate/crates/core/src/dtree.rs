//! Decision trees over edge variables, exact minimum vertex height, and the
//! switching tail experiment.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::boolfn::{vertex_count, EdgeDnf, TruthTable};
use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::restriction::{restrict_dnf, sample_restriction, Restriction};
use crate::rng::RngStream;
use crate::stats::wilson_99;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DecisionTree {
    Leaf(bool),
    Query {
        edge: Edge,
        zero: Box<DecisionTree>,
        one: Box<DecisionTree>,
    },
}

impl DecisionTree {
    pub fn query(edge: Edge, zero: DecisionTree, one: DecisionTree) -> Self {
        DecisionTree::Query {
            edge,
            zero: Box::new(zero),
            one: Box::new(one),
        }
    }

    /// Largest number of distinct endpoints of queried edges on a root-leaf
    /// path.
    pub fn vertex_height(&self) -> usize {
        fn walk(t: &DecisionTree, path: &mut Vec<Edge>) -> usize {
            match t {
                DecisionTree::Leaf(_) => vertex_count(path.iter()),
                DecisionTree::Query { edge, zero, one } => {
                    path.push(*edge);
                    let h = walk(zero, path).max(walk(one, path));
                    path.pop();
                    h
                }
            }
        }
        walk(self, &mut Vec::new())
    }

    /// Number of queries on the longest path.
    pub fn depth(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 0,
            DecisionTree::Query { zero, one, .. } => 1 + zero.depth().max(one.depth()),
        }
    }

    pub fn eval_with(&self, edge: &dyn Fn(Edge) -> bool) -> bool {
        let mut t = self;
        loop {
            match t {
                DecisionTree::Leaf(b) => return *b,
                DecisionTree::Query { edge: e, zero, one } => {
                    t = if edge(*e) { one } else { zero };
                }
            }
        }
    }
}

/// Memoized search over partial assignments of a truth table. A state is a
/// base-3 word: digit 0 marks a free variable, 1 and 2 the values 0 and 1.
struct DepthSearch<'a> {
    table: &'a TruthTable,
    masks: Vec<u32>,
    pow3: Vec<usize>,
    constant: Vec<u8>,
    height: Vec<u8>,
    choice: Vec<u8>,
}

const UNKNOWN: u8 = u8::MAX;
const MIXED: u8 = 2;

impl<'a> DepthSearch<'a> {
    fn new(table: &'a TruthTable) -> Self {
        let m = table.num_vars();
        let vertices: Vec<usize> = table
            .vars()
            .iter()
            .flat_map(|e| [e.u(), e.v()])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let local = |x: usize| vertices.binary_search(&x).expect("endpoint");
        let masks = table
            .vars()
            .iter()
            .map(|e| 1u32 << local(e.u()) | 1u32 << local(e.v()))
            .collect();
        let pow3: Vec<usize> = (0..=m).map(|i| 3usize.pow(i as u32)).collect();
        let states = pow3[m];
        DepthSearch {
            table,
            masks,
            pow3,
            constant: vec![UNKNOWN; states],
            height: vec![UNKNOWN; states],
            choice: vec![UNKNOWN; states],
        }
    }

    fn digit(&self, state: usize, i: usize) -> usize {
        state / self.pow3[i] % 3
    }

    fn free_vars(&self, state: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.masks.len()).filter(move |&i| self.digit(state, i) == 0)
    }

    /// 0 or 1 when the subfunction is constant, `MIXED` otherwise.
    fn constant(&mut self, state: usize) -> u8 {
        if self.constant[state] != UNKNOWN {
            return self.constant[state];
        }
        let first_free = self.free_vars(state).next();
        let value = match first_free {
            None => {
                let row = (0..self.masks.len()).fold(0u32, |acc, i| acc | (u32::from(self.digit(state, i) == 2) << i));
                u8::from(self.table.value(row))
            }
            Some(i) => {
                let a = self.constant(state + self.pow3[i]);
                let b = self.constant(state + 2 * self.pow3[i]);
                if a == b && a != MIXED {
                    a
                } else {
                    MIXED
                }
            }
        };
        self.constant[state] = value;
        value
    }

    fn height(&mut self, state: usize) -> u8 {
        if self.height[state] != UNKNOWN {
            return self.height[state];
        }
        let h = if self.constant(state) != MIXED {
            let mask = (0..self.masks.len())
                .filter(|&i| self.digit(state, i) != 0)
                .fold(0u32, |acc, i| acc | self.masks[i]);
            mask.count_ones() as u8
        } else {
            let free: Vec<usize> = self.free_vars(state).collect();
            let mut best = (UNKNOWN, UNKNOWN);
            for i in free {
                let h0 = self.height(state + self.pow3[i]);
                let h1 = self.height(state + 2 * self.pow3[i]);
                let h = h0.max(h1);
                if h < best.0 {
                    best = (h, i as u8);
                }
            }
            self.choice[state] = best.1;
            best.0
        };
        self.height[state] = h;
        h
    }

    fn tree(&mut self, state: usize) -> DecisionTree {
        let c = self.constant(state);
        if c != MIXED {
            return DecisionTree::Leaf(c == 1);
        }
        self.height(state);
        let i = self.choice[state] as usize;
        let zero = self.tree(state + self.pow3[i]);
        let one = self.tree(state + 2 * self.pow3[i]);
        DecisionTree::query(self.table.vars()[i], zero, one)
    }
}

/// Minimum vertex height over all decision trees computing `f`.
pub fn dt_depth_v(f: &TruthTable) -> usize {
    DepthSearch::new(f).height(0) as usize
}

/// A decision tree for `f` whose vertex height equals [`dt_depth_v`].
pub fn optimal_tree(f: &TruthTable) -> DecisionTree {
    DepthSearch::new(f).tree(0)
}

/// A DNF that can be restricted by a clique-style restriction.
pub trait RestrictableDnf: Sync {
    fn n_vertices(&self) -> usize;

    /// Largest vertex length of a term.
    fn max_vertex_length(&self) -> usize;

    /// `F↾μ` as a DNF over the star edges of `μ`.
    fn restrict(&self, mu: &Restriction) -> Result<EdgeDnf>;
}

impl RestrictableDnf for EdgeDnf {
    fn n_vertices(&self) -> usize {
        self.n()
    }

    fn max_vertex_length(&self) -> usize {
        EdgeDnf::max_vertex_length(self)
    }

    fn restrict(&self, mu: &Restriction) -> Result<EdgeDnf> {
        restrict_dnf(self, mu)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SwitchingParams {
    pub n: usize,
    pub ell: usize,
    pub q: f64,
    pub s: usize,
    pub trials: u64,
    pub master_seed: u64,
    /// High 32 bits of every per-trial stream index.
    pub stream_prefix: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SwitchingRecord {
    pub n: usize,
    pub ell: usize,
    pub q: f64,
    pub s: usize,
    pub r: usize,
    pub trials: u64,
    pub exceedances: u64,
    pub empirical_tail: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub beame_bound: f64,
    pub hypothesis_ok: bool,
    pub seed: u64,
}

pub const SWITCHING_CSV_HEADER: &str =
    "n,ell,q,s,r,trials,empirical_tail,wilson_lo,wilson_hi,beame_bound,hypothesis_ok,seed";

impl SwitchingRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.ell,
            self.q,
            self.s,
            self.r,
            self.trials,
            self.empirical_tail,
            self.wilson_lo,
            self.wilson_hi,
            self.beame_bound,
            self.hypothesis_ok,
            self.seed
        )
    }

    /// The bound is below 1 and the hypothesis on `p` holds.
    pub fn informative(&self) -> bool {
        self.hypothesis_ok && self.beame_bound < 1.0
    }
}

/// `8((2/q)^{(s+r-1)/2} p r)^s / 3`; `+∞` where the expression is undefined.
pub fn beame_bound(q: f64, p: f64, r: usize, s: usize) -> f64 {
    let base = (2.0 / q).powf((s + r) as f64 / 2.0 - 0.5) * p * r as f64;
    let v = 8.0 * base.powi(s as i32) / 3.0;
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// `p ≤ 1 / (r (2/q)^{(r+s)/2})`.
pub fn beame_hypothesis(q: f64, p: f64, r: usize, s: usize) -> bool {
    let rhs = 1.0 / (r as f64 * (2.0 / q).powf((r + s) as f64 / 2.0));
    p <= rhs || (r == 0 && p <= 1.0)
}

/// Estimates `Pr[DTdepth_v(F↾μ) > s]` for `μ ∈ C^{ℓ,q}_n`. Trial `t` draws
/// from stream `(master_seed, stream_prefix << 32 | t)`.
pub fn switching_tail(f: &dyn RestrictableDnf, params: &SwitchingParams) -> Result<SwitchingRecord> {
    let SwitchingParams {
        n,
        ell,
        q,
        s,
        trials,
        master_seed,
        stream_prefix,
    } = *params;
    if !(0.0..=0.5).contains(&q) {
        return Err(Error::param(format!("q = {q} must lie in [0, 1/2]")));
    }
    if f.n_vertices() != n {
        return Err(Error::SizeMismatch {
            left: f.n_vertices(),
            right: n,
        });
    }
    if ell > n || n == 0 {
        return Err(Error::param(format!("star block size {ell} invalid for n = {n}")));
    }
    if trials == 0 {
        return Err(Error::param("trials must be positive"));
    }
    let outcomes: Vec<bool> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<bool> {
            let mut rng = RngStream::new(master_seed, stream_prefix << 32 | t).rng();
            let mu = sample_restriction(n, ell, q, &mut rng)?;
            let table = f.restrict(&mu)?.to_table()?;
            Ok(dt_depth_v(&table) > s)
        })
        .collect::<Result<_>>()?;
    let exceedances = outcomes.iter().filter(|&&x| x).count() as u64;
    let r = f.max_vertex_length();
    let p = ell as f64 / n as f64;
    let (wilson_lo, wilson_hi) = wilson_99(exceedances, trials);
    Ok(SwitchingRecord {
        n,
        ell,
        q,
        s,
        r,
        trials,
        exceedances,
        empirical_tail: exceedances as f64 / trials as f64,
        wilson_lo,
        wilson_hi,
        beame_bound: beame_bound(q, p, r, s),
        hypothesis_ok: beame_hypothesis(q, p, r, s),
        seed: master_seed,
    })
}

/// Every decision tree over `vars` that never repeats a variable on a path.
/// Grows as `T(m) = 2 + m·T(m-1)^2`; meant for `m ≤ 3`.
pub fn all_trees(vars: &[Edge]) -> Vec<DecisionTree> {
    let mut out = vec![DecisionTree::Leaf(false), DecisionTree::Leaf(true)];
    for (i, &e) in vars.iter().enumerate() {
        let rest: Vec<Edge> = vars
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &x)| x)
            .collect();
        let sub = all_trees(&rest);
        for z in &sub {
            for o in &sub {
                out.push(DecisionTree::query(e, z.clone(), o.clone()));
            }
        }
    }
    out
}

/// Truth table of a tree over `vars`.
pub fn tree_table(t: &DecisionTree, n: usize, vars: &[Edge]) -> Result<TruthTable> {
    let lookup = vars.to_vec();
    TruthTable::from_fn(n, vars.to_vec(), |a| {
        t.eval_with(&|e| match lookup.iter().position(|&x| x == e) {
            Some(i) => a >> i & 1 == 1,
            None => false,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn e(a: usize, b: usize) -> Edge {
        Edge::new(a, b)
    }

    #[test]
    fn vertex_height_examples() {
        assert_eq!(DecisionTree::Leaf(true).vertex_height(), 0);
        let one = DecisionTree::query(e(0, 1), DecisionTree::Leaf(false), DecisionTree::Leaf(true));
        assert_eq!(one.vertex_height(), 2);
        let path = DecisionTree::query(e(0, 1), DecisionTree::Leaf(false), {
            DecisionTree::query(e(0, 2), DecisionTree::Leaf(false), DecisionTree::Leaf(true))
        });
        assert_eq!(path.vertex_height(), 3);
        assert_eq!(path.depth(), 2);
    }

    #[test]
    fn depth_examples() {
        assert_eq!(dt_depth_v(&TruthTable::constant(4, true)), 0);
        assert_eq!(dt_depth_v(&TruthTable::literal(4, e(0, 1), true).unwrap()), 2);
        let and = TruthTable::from_fn(4, vec![e(0, 1), e(0, 2)], |a| a == 3).unwrap();
        assert_eq!(dt_depth_v(&and), 3);
        let dummy = TruthTable::from_fn(6, vec![e(0, 1), e(4, 5)], |a| a & 1 == 1).unwrap();
        assert_eq!(dt_depth_v(&dummy), 2);
        let parity = TruthTable::from_fn(6, vec![e(0, 1), e(2, 3), e(4, 5)], |a| a.count_ones() % 2 == 1).unwrap();
        assert_eq!(dt_depth_v(&parity), 6);
    }

    #[test]
    fn tree_count_on_three_variables() {
        assert_eq!(all_trees(&[e(0, 1)]).len(), 6);
        assert_eq!(all_trees(&[e(0, 1), e(0, 2), e(1, 2)]).len(), 16_430);
    }

    fn brute_force_depths(vars: &[Edge], n: usize) -> HashMap<Vec<bool>, usize> {
        let mut best: HashMap<Vec<bool>, usize> = HashMap::new();
        for t in all_trees(vars) {
            let table = tree_table(&t, n, vars).unwrap();
            let key: Vec<bool> = (0..8).map(|a| table.value(a)).collect();
            let h = t.vertex_height();
            best.entry(key).and_modify(|b| *b = (*b).min(h)).or_insert(h);
        }
        best
    }

    #[test]
    fn memoized_search_matches_tree_enumeration() {
        for vars in [[e(0, 1), e(0, 2), e(1, 2)], [e(0, 1), e(0, 2), e(2, 3)]] {
            let best = brute_force_depths(&vars, 4);
            assert_eq!(best.len(), 256);
            for f in 0u32..256 {
                let table = TruthTable::from_fn(4, vars.to_vec(), |a| f >> a & 1 == 1).unwrap();
                let key: Vec<bool> = (0..8).map(|a| table.value(a)).collect();
                let d = dt_depth_v(&table);
                assert_eq!(d, best[&key], "function {f:#010b}");
                let t = optimal_tree(&table);
                assert_eq!(t.vertex_height(), d);
                assert_eq!(tree_table(&t, 4, &vars).unwrap(), table);
            }
        }
    }

    #[test]
    fn bound_values() {
        // 8((2/q)^{(s+r-1)/2} p r)^s / 3 at q = 1/2, p = 1/100, r = 3, s = 2.
        let b = beame_bound(0.5, 0.01, 3, 2);
        assert!((b - 8.0 * (16.0 * 0.03f64).powi(2) / 3.0).abs() < 1e-12);
        assert!(beame_hypothesis(0.5, 0.01, 3, 2));
        assert!(!beame_hypothesis(0.5, 0.011, 3, 2));
        assert_eq!(beame_bound(0.5, 0.3, 2, 0), 8.0 / 3.0);
        assert_eq!(beame_bound(0.0, 0.0, 2, 1), f64::INFINITY);
    }

    #[test]
    fn switching_edge_cases() {
        let params = |s| SwitchingParams {
            n: 8,
            ell: 3,
            q: 0.25,
            s,
            trials: 500,
            master_seed: 17,
            stream_prefix: 0,
        };
        let constant = EdgeDnf::constant(8, true);
        assert_eq!(switching_tail(&constant, &params(0)).unwrap().empirical_tail, 0.0);
        let tri = EdgeDnf::monotone(8, crate::boolfn::triangle_terms(8)).unwrap();
        let rec = switching_tail(&tri, &params(6)).unwrap();
        assert_eq!(rec.empirical_tail, 0.0);
        assert_eq!(rec.r, 3);
        let loose = switching_tail(&tri, &params(0)).unwrap();
        assert!(loose.empirical_tail > 0.0);
        let mut bad = params(1);
        bad.q = 0.6;
        assert!(switching_tail(&tri, &bad).is_err());
        assert_eq!(
            switching_tail(&tri, &params(2)).unwrap(),
            switching_tail(&tri, &params(2)).unwrap()
        );
    }
}
