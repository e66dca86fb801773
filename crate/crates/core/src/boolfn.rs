//! Boolean functions over edge variables: a common evaluation trait, exact
//! truth tables over a handful of edges, and DNFs of edge literals.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

/// Largest number of variables a [`TruthTable`] may range over.
pub const TABLE_VAR_CAP: usize = 10;

/// A function of the edge variables `X_e` of graphs on `n_vertices` vertices.
pub trait EdgeFunction {
    fn n_vertices(&self) -> usize;

    /// Value under the assignment `X_e = edge(e)`.
    fn eval_edges(&self, edge: &dyn Fn(Edge) -> bool) -> bool;

    fn eval_graph(&self, g: &Graph) -> Result<bool> {
        if g.n() != self.n_vertices() {
            return Err(Error::SizeMismatch {
                left: g.n(),
                right: self.n_vertices(),
            });
        }
        Ok(self.eval_edges(&|e| g.contains(e)))
    }
}

impl EdgeFunction for Circuit {
    fn n_vertices(&self) -> usize {
        Circuit::n_vertices(self)
    }

    fn eval_edges(&self, edge: &dyn Fn(Edge) -> bool) -> bool {
        self.eval_with(edge)
    }
}

/// Number of distinct endpoints among `edges`.
pub fn vertex_count<'a>(edges: impl IntoIterator<Item = &'a Edge>) -> usize {
    edges
        .into_iter()
        .flat_map(|e| [e.u(), e.v()])
        .collect::<BTreeSet<_>>()
        .len()
}

/// Full value table of a function of at most [`TABLE_VAR_CAP`] edge
/// variables. Bit `i` of a row index is the value of `vars[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    vars: Vec<Edge>,
    rows: FixedBitSet,
}

impl TruthTable {
    pub fn from_fn(n: usize, vars: Vec<Edge>, mut f: impl FnMut(u32) -> bool) -> Result<Self> {
        if vars.len() > TABLE_VAR_CAP {
            return Err(Error::TableTooLarge {
                vars: vars.len(),
                cap: TABLE_VAR_CAP,
            });
        }
        if let Some(e) = vars.iter().find(|e| e.v() >= n) {
            return Err(Error::VertexOutOfRange { vertex: e.v() + 1, n });
        }
        if vars.iter().collect::<BTreeSet<_>>().len() != vars.len() {
            return Err(Error::param("truth-table variables must be distinct"));
        }
        let len = 1usize << vars.len();
        let mut rows = FixedBitSet::with_capacity(len);
        for a in 0..len as u32 {
            rows.set(a as usize, f(a));
        }
        Ok(TruthTable { n, vars, rows })
    }

    /// Tabulates `f` over the given variables; every other edge reads 0.
    pub fn tabulate(f: &dyn EdgeFunction, vars: Vec<Edge>) -> Result<Self> {
        let n = f.n_vertices();
        let lookup = vars.clone();
        Self::from_fn(n, vars, |a| {
            f.eval_edges(&|e| match lookup.iter().position(|&x| x == e) {
                Some(i) => a >> i & 1 == 1,
                None => false,
            })
        })
    }

    pub fn constant(n: usize, bit: bool) -> Self {
        Self::from_fn(n, Vec::new(), |_| bit).expect("no variables")
    }

    pub fn literal(n: usize, e: Edge, positive: bool) -> Result<Self> {
        Self::from_fn(n, vec![e], |a| (a & 1 == 1) == positive)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> &[Edge] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn value(&self, row: u32) -> bool {
        self.rows[row as usize]
    }

    pub fn rows(&self) -> &FixedBitSet {
        &self.rows
    }

    pub fn constant_value(&self) -> Option<bool> {
        let ones = self.rows.count_ones(..);
        if ones == 0 {
            Some(false)
        } else if ones == self.rows.len() {
            Some(true)
        } else {
            None
        }
    }

    /// Whether flipping variable `i` changes the value on some row.
    pub fn depends_on(&self, i: usize) -> bool {
        let bit = 1u32 << i;
        (0..self.rows.len() as u32)
            .filter(|a| a & bit == 0)
            .any(|a| self.value(a) != self.value(a | bit))
    }

    /// The same function over its essential variables only.
    pub fn essential(&self) -> TruthTable {
        let keep: Vec<usize> = (0..self.vars.len()).filter(|&i| self.depends_on(i)).collect();
        let vars = keep.iter().map(|&i| self.vars[i]).collect();
        Self::from_fn(self.n, vars, |a| {
            let full = keep
                .iter()
                .enumerate()
                .fold(0u32, |acc, (j, &i)| acc | ((a >> j & 1) << i));
            self.value(full)
        })
        .expect("subset of valid variables")
    }

    /// Canonical minterm DNF over the variables of the table.
    pub fn minterm_dnf(&self) -> EdgeDnf {
        let terms = (0..self.rows.len() as u32)
            .filter(|&a| self.value(a))
            .map(|a| {
                self.vars
                    .iter()
                    .enumerate()
                    .map(|(i, &edge)| Literal {
                        edge,
                        positive: a >> i & 1 == 1,
                    })
                    .collect()
            })
            .collect();
        EdgeDnf { n: self.n, terms }
    }
}

impl EdgeFunction for TruthTable {
    fn n_vertices(&self) -> usize {
        self.n
    }

    fn eval_edges(&self, edge: &dyn Fn(Edge) -> bool) -> bool {
        let row = self
            .vars
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, &e)| acc | (u32::from(edge(e)) << i));
        self.value(row)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub edge: Edge,
    pub positive: bool,
}

impl Literal {
    pub fn pos(edge: Edge) -> Self {
        Literal { edge, positive: true }
    }

    pub fn neg(edge: Edge) -> Self {
        Literal { edge, positive: false }
    }
}

/// OR of ANDs of edge literals. An empty term is true, an empty DNF false.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeDnf {
    n: usize,
    terms: Vec<Vec<Literal>>,
}

impl EdgeDnf {
    pub fn new(n: usize, terms: Vec<Vec<Literal>>) -> Result<Self> {
        if let Some(l) = terms.iter().flatten().find(|l| l.edge.v() >= n) {
            return Err(Error::VertexOutOfRange {
                vertex: l.edge.v() + 1,
                n,
            });
        }
        Ok(EdgeDnf { n, terms })
    }

    /// DNF with positive literals only.
    pub fn monotone(n: usize, terms: Vec<Vec<Edge>>) -> Result<Self> {
        Self::new(
            n,
            terms
                .into_iter()
                .map(|t| t.into_iter().map(Literal::pos).collect())
                .collect(),
        )
    }

    pub fn constant(n: usize, bit: bool) -> Self {
        EdgeDnf {
            n,
            terms: if bit { vec![Vec::new()] } else { Vec::new() },
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[Vec<Literal>] {
        &self.terms
    }

    /// Distinct edges mentioned by some term, in canonical order.
    pub fn variables(&self) -> Vec<Edge> {
        self.terms
            .iter()
            .flatten()
            .map(|l| l.edge)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn term_vertex_length(term: &[Literal]) -> usize {
        vertex_count(term.iter().map(|l| &l.edge))
    }

    /// Largest vertex length of a term; 0 for an empty DNF.
    pub fn max_vertex_length(&self) -> usize {
        self.terms
            .iter()
            .map(|t| Self::term_vertex_length(t))
            .max()
            .unwrap_or(0)
    }

    /// Partial evaluation: `fixed(e)` returns the value of a fixed variable
    /// and `None` for a free one. Falsified terms are dropped and satisfied
    /// literals removed; a term that becomes empty makes the result the
    /// constant 1.
    pub fn partial(&self, fixed: impl Fn(Edge) -> Option<bool>) -> EdgeDnf {
        let mut terms = Vec::new();
        'terms: for t in &self.terms {
            let mut kept = Vec::new();
            for l in t {
                match fixed(l.edge) {
                    Some(b) if b == l.positive => {}
                    Some(_) => continue 'terms,
                    None => kept.push(*l),
                }
            }
            if kept.is_empty() {
                return EdgeDnf::constant(self.n, true);
            }
            terms.push(kept);
        }
        EdgeDnf { n: self.n, terms }
    }

    /// Table over [`EdgeDnf::variables`].
    pub fn to_table(&self) -> Result<TruthTable> {
        TruthTable::tabulate(self, self.variables())
    }
}

impl EdgeFunction for EdgeDnf {
    fn n_vertices(&self) -> usize {
        self.n
    }

    fn eval_edges(&self, edge: &dyn Fn(Edge) -> bool) -> bool {
        self.terms.iter().any(|t| t.iter().all(|l| edge(l.edge) == l.positive))
    }
}

/// One term `{a,b},{a,c},{b,c}` per triple `a < b < c`.
pub fn triangle_terms(n: usize) -> Vec<Vec<Edge>> {
    let mut terms = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                terms.push(vec![Edge::new(a, b), Edge::new(a, c), Edge::new(b, c)]);
            }
        }
    }
    terms
}

/// One term per centre `c ≥ k`, joining `c` to each of `0, .., k-1`.
pub fn star_terms(n: usize, k: usize) -> Vec<Vec<Edge>> {
    (k..n).map(|c| (0..k).map(|i| Edge::new(i, c)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: usize, b: usize) -> Edge {
        Edge::new(a, b)
    }

    #[test]
    fn table_basics() {
        let t = TruthTable::from_fn(4, vec![e(0, 1), e(2, 3)], |a| a == 3).unwrap();
        assert_eq!(t.constant_value(), None);
        assert!(t.depends_on(0) && t.depends_on(1));
        assert_eq!(TruthTable::constant(4, true).constant_value(), Some(true));
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(t.eval_graph(&g).unwrap());
        assert!(!t.eval_graph(&Graph::from_edges(4, [(0, 1)]).unwrap()).unwrap());
    }

    #[test]
    fn table_rejects_bad_input() {
        let eleven: Vec<Edge> = crate::graph::all_edges(6).take(11).collect();
        assert!(matches!(
            TruthTable::from_fn(6, eleven, |_| true),
            Err(Error::TableTooLarge { vars: 11, cap: 10 })
        ));
        assert!(TruthTable::from_fn(3, vec![e(0, 3)], |_| true).is_err());
        assert!(TruthTable::from_fn(3, vec![e(0, 1), e(0, 1)], |_| true).is_err());
    }

    #[test]
    fn essential_drops_dummies() {
        let t = TruthTable::from_fn(4, vec![e(0, 1), e(1, 2), e(2, 3)], |a| a & 0b100 != 0).unwrap();
        let s = t.essential();
        assert_eq!(s.vars(), &[e(2, 3)]);
        assert_eq!(s, TruthTable::literal(4, e(2, 3), true).unwrap());
    }

    #[test]
    fn minterms_and_vertex_length() {
        let and = TruthTable::from_fn(4, vec![e(0, 1), e(2, 3)], |a| a == 3).unwrap();
        let dnf = and.minterm_dnf();
        assert_eq!(dnf.terms().len(), 1);
        assert_eq!(dnf.max_vertex_length(), 4);
        let lit = TruthTable::literal(4, e(0, 1), true).unwrap().minterm_dnf();
        assert_eq!(lit.max_vertex_length(), 2);
        assert_eq!(TruthTable::constant(4, false).minterm_dnf().terms().len(), 0);
        assert_eq!(TruthTable::constant(4, true).minterm_dnf().max_vertex_length(), 0);
    }

    #[test]
    fn dnf_partial_evaluation() {
        let tri = EdgeDnf::monotone(4, triangle_terms(4)).unwrap();
        assert_eq!(tri.terms().len(), 4);
        assert_eq!(tri.max_vertex_length(), 3);
        let zero_out = tri.partial(|x| if x.contains(3) { Some(false) } else { None });
        assert_eq!(
            zero_out.terms(),
            &[vec![
                Literal::pos(e(0, 1)),
                Literal::pos(e(0, 2)),
                Literal::pos(e(1, 2))
            ]]
        );
        let one = tri.partial(|_| Some(true));
        assert_eq!(one, EdgeDnf::constant(4, true));
        assert!(tri.partial(|_| Some(false)).terms().is_empty());
    }

    #[test]
    fn dnf_matches_circuit() {
        let dnf = EdgeDnf::monotone(5, star_terms(5, 2)).unwrap();
        let c = Circuit::star_detector(5, 2);
        for mask in 0..1u64 << 10 {
            let g = Graph::from_mask(5, mask);
            assert_eq!(dnf.eval_graph(&g).unwrap(), c.eval(&g).unwrap());
        }
    }

    #[test]
    fn tabulate_agrees_with_function() {
        let c = Circuit::triangle_detector(4);
        let t = TruthTable::tabulate(&c, crate::graph::all_edges(4).collect()).unwrap();
        for mask in 0..64u64 {
            let g = Graph::from_mask(4, mask);
            assert_eq!(t.eval_graph(&g).unwrap(), c.eval(&g).unwrap());
        }
    }
}
