//! Propositional formulas of the alternating `Γ_{t,d}` / `Δ_{t,d}` shape,
//! weighted satisfiability, and the clique formula `δ_G`.
//!
//! Weights are counted over a formula's variable universe: the variables
//! that occur in it plus any declared with [`PropFormula::with_universe`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{all_edges, any_subset_of_size, Graph};

/// Formula tree. An empty `And` is true, an empty `Or` is false.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    And(Vec<Node>),
    Or(Vec<Node>),
    Pos(String),
    Neg(String),
}

impl Node {
    pub fn pos(name: impl Into<String>) -> Node {
        Node::Pos(name.into())
    }

    pub fn neg(name: impl Into<String>) -> Node {
        Node::Neg(name.into())
    }

    fn is_literal(&self) -> bool {
        matches!(self, Node::Pos(_) | Node::Neg(_))
    }

    fn visit_literals<'a>(&'a self, f: &mut impl FnMut(&'a str, bool)) {
        match self {
            Node::And(cs) | Node::Or(cs) => cs.iter().for_each(|c| c.visit_literals(f)),
            Node::Pos(x) => f(x, true),
            Node::Neg(x) => f(x, false),
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::And(cs) | Node::Or(cs) => {
                let op = if matches!(self, Node::And(_)) { "and" } else { "or" };
                write!(f, "({op}")?;
                for c in cs {
                    write!(f, " {c}")?;
                }
                write!(f, ")")
            }
            Node::Pos(x) => write!(f, "{x}"),
            Node::Neg(x) => write!(f, "(not {x})"),
        }
    }
}

/// A formula together with its variable universe (sorted, deduplicated).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropFormula {
    root: Node,
    vars: Vec<String>,
}

impl PropFormula {
    pub fn new(root: Node) -> Self {
        PropFormula::with_universe(root, std::iter::empty::<String>())
    }

    pub fn with_universe(root: Node, extra: impl IntoIterator<Item = impl Into<String>>) -> Self {
        let mut vars: BTreeSet<String> = extra.into_iter().map(Into::into).collect();
        root.visit_literals(&mut |x, _| {
            vars.insert(x.to_string());
        });
        PropFormula {
            root,
            vars: vars.into_iter().collect(),
        }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn has_positive_literal(&self) -> bool {
        let mut any = false;
        self.root.visit_literals(&mut |_, positive| any |= positive);
        any
    }

    /// Number of top-level conjuncts when the root is an `And`, else 1.
    pub fn clause_count(&self) -> usize {
        match &self.root {
            Node::And(cs) => cs.len(),
            _ => 1,
        }
    }

    fn compile(&self) -> Result<Compiled> {
        if self.vars.len() > 63 {
            return Err(Error::Infeasible(format!(
                "{} variables exceed the 63-variable brute-force limit",
                self.vars.len()
            )));
        }
        let index: BTreeMap<&str, usize> = self.vars.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        Ok(Compiled::from_node(&self.root, &index))
    }

    /// Text form: an optional `(vars ...)` line when the universe holds
    /// variables that do not occur, then the formula s-expression.
    pub fn to_text(&self) -> String {
        let occurring = PropFormula::new(self.root.clone());
        let mut out = String::new();
        if occurring.vars != self.vars {
            out.push_str("(vars");
            for v in &self.vars {
                out.push(' ');
                out.push_str(v);
            }
            out.push_str(")\n");
        }
        out.push_str(&self.root.to_string());
        out.push('\n');
        out
    }

    pub fn parse(text: &str) -> Result<PropFormula> {
        let tokens = tokenize(text)?;
        let mut pos = 0;
        let first = parse_sexpr(&tokens, &mut pos)?;
        let (universe, root) = match first {
            Sexpr::List(items) if matches!(items.first(), Some(Sexpr::Atom(a)) if a == "vars") => {
                let vars = items[1..]
                    .iter()
                    .map(|s| match s {
                        Sexpr::Atom(a) => valid_name(a).map(|_| a.clone()),
                        Sexpr::List(_) => Err(Error::parse(1, "(vars ...) takes names only")),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let body = parse_sexpr(&tokens, &mut pos)?;
                (vars, sexpr_to_node(&body)?)
            }
            other => (Vec::new(), sexpr_to_node(&other)?),
        };
        if pos != tokens.len() {
            return Err(Error::parse(1, "trailing input after formula"));
        }
        Ok(PropFormula::with_universe(root, universe))
    }
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)
    }
}

enum Compiled {
    And(Vec<Compiled>),
    Or(Vec<Compiled>),
    Lit(usize, bool),
}

impl Compiled {
    fn from_node(node: &Node, index: &BTreeMap<&str, usize>) -> Self {
        match node {
            Node::And(cs) => Compiled::And(cs.iter().map(|c| Compiled::from_node(c, index)).collect()),
            Node::Or(cs) => Compiled::Or(cs.iter().map(|c| Compiled::from_node(c, index)).collect()),
            Node::Pos(x) => Compiled::Lit(index[x.as_str()], true),
            Node::Neg(x) => Compiled::Lit(index[x.as_str()], false),
        }
    }

    fn eval(&self, assignment: u64) -> bool {
        match self {
            Compiled::And(cs) => cs.iter().all(|c| c.eval(assignment)),
            Compiled::Or(cs) => cs.iter().any(|c| c.eval(assignment)),
            Compiled::Lit(i, positive) => (assignment >> i & 1 == 1) == *positive,
        }
    }
}

// ---------------------------------------------------------------------------
// Shapes

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Polarity {
    Any,
    NegativeOnly,
}

/// Target class `Γ_{t,d}`, or `Γ⁻_{t,d}` with [`Polarity::NegativeOnly`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GammaShape {
    pub t: usize,
    pub d: usize,
    pub polarity: Polarity,
}

impl GammaShape {
    pub fn new(t: usize, d: usize, polarity: Polarity) -> Self {
        GammaShape { t, d, polarity }
    }
}

/// Membership in the inductive grammar. A node of the "wrong" connective at
/// level `t >= 1` is read as a singleton block of level `t - 1`, so
/// `Γ_{t,d} ⊆ Γ_{t',d}` for `t' >= t`.
pub fn validate_shape(f: &PropFormula, shape: GammaShape) -> bool {
    if shape.d == 0 {
        return false;
    }
    if shape.polarity == Polarity::NegativeOnly && f.has_positive_literal() {
        return false;
    }
    in_gamma(&f.root, shape.t, shape.d)
}

fn in_gamma(node: &Node, t: usize, d: usize) -> bool {
    in_level(node, t, d, true)
}

/// `conj == true` checks `Γ_{t,d}`, otherwise `Δ_{t,d}`.
fn in_level(node: &Node, t: usize, d: usize, conj: bool) -> bool {
    if node.is_literal() {
        return true;
    }
    let (own, children) = match node {
        Node::And(cs) => (true, cs),
        Node::Or(cs) => (false, cs),
        _ => unreachable!(),
    };
    if t == 0 {
        return own == conj && children.len() <= d && children.iter().all(Node::is_literal);
    }
    if own == conj {
        children.iter().all(|c| in_level(c, t - 1, d, !conj))
    } else {
        in_level(node, t - 1, d, !conj)
    }
}

// ---------------------------------------------------------------------------
// Weighted satisfiability

/// Whether some assignment of Hamming weight exactly `k` over the formula's
/// universe satisfies it. Exhaustive over `(vars choose k)`.
pub fn weighted_sat_bruteforce(f: &PropFormula, k: usize) -> Result<bool> {
    let compiled = f.compile()?;
    Ok(any_subset_of_size(f.vars.len(), k, |s| compiled.eval(s)))
}

/// Like [`weighted_sat_bruteforce`] but also returns the satisfying
/// variables.
pub fn weighted_sat_witness(f: &PropFormula, k: usize) -> Result<Option<Vec<String>>> {
    let compiled = f.compile()?;
    let mut hit = None;
    any_subset_of_size(f.vars.len(), k, |s| {
        let ok = compiled.eval(s);
        if ok {
            hit = Some(s);
        }
        ok
    });
    Ok(hit.map(|s| {
        (0..f.vars.len())
            .filter(|i| s >> i & 1 == 1)
            .map(|i| f.vars[i].clone())
            .collect()
    }))
}

/// `δ_G`: one clause `¬x_u ∨ ¬x_v` per non-adjacent pair, over the universe
/// `{x1, .., xn}`. `G` has a `k`-clique iff `δ_G` has a satisfying assignment
/// of weight `k`.
pub fn build_delta_g(g: &Graph) -> PropFormula {
    let clauses = all_edges(g.n())
        .filter(|e| !g.contains(*e))
        .map(|e| Node::Or(vec![Node::neg(var_name(e.u())), Node::neg(var_name(e.v()))]))
        .collect();
    PropFormula::with_universe(Node::And(clauses), (0..g.n()).map(var_name))
}

/// Name of the variable for 0-based vertex `x`.
pub fn var_name(x: usize) -> String {
    format!("x{}", x + 1)
}

/// Closed-form decision for `Γ_{1,1}` (conjunctions of single literals):
/// satisfiable at weight `k` iff no variable occurs with both signs, no
/// empty disjunction occurs, and `#pos <= k <= #vars - #neg`.
pub fn gamma11_decide(f: &PropFormula, k: usize) -> Result<bool> {
    if !validate_shape(f, GammaShape::new(1, 1, Polarity::Any)) {
        return Err(Error::param("formula is not in Γ_{1,1}"));
    }
    if contains_empty_or(&f.root) {
        return Ok(false);
    }
    let mut positive = BTreeSet::new();
    let mut negative = BTreeSet::new();
    f.root.visit_literals(&mut |x, pos| {
        if pos {
            positive.insert(x);
        } else {
            negative.insert(x);
        }
    });
    if positive.intersection(&negative).next().is_some() {
        return Ok(false);
    }
    Ok(positive.len() <= k && k + negative.len() <= f.vars.len())
}

fn contains_empty_or(node: &Node) -> bool {
    match node {
        Node::Or(cs) if cs.is_empty() => true,
        Node::And(cs) | Node::Or(cs) => cs.iter().any(contains_empty_or),
        _ => false,
    }
}

/// Largest satisfying Hamming weight of a formula without positive literals;
/// `None` when nothing satisfies it.
///
/// For such formulas satisfiability is downward closed in the weight, so the
/// scan runs from the top.
pub fn max_weight_omega(f: &PropFormula) -> Result<Option<usize>> {
    if f.has_positive_literal() {
        return Err(Error::param(
            "ω is only defined for formulas with negative literals only",
        ));
    }
    let compiled = f.compile()?;
    Ok((0..=f.vars.len())
        .rev()
        .find(|&k| any_subset_of_size(f.vars.len(), k, |s| compiled.eval(s))))
}

// ---------------------------------------------------------------------------
// s-expressions

#[derive(Debug)]
enum Sexpr {
    Atom(String),
    List(Vec<Sexpr>),
}

#[derive(Debug, PartialEq)]
enum Token {
    Open,
    Close,
    Atom(String),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split(';').next().unwrap_or("");
        let mut chars = line.chars().peekable();
        while let Some(&c) = chars.peek() {
            match c {
                '(' => {
                    chars.next();
                    out.push((lineno + 1, Token::Open));
                }
                ')' => {
                    chars.next();
                    out.push((lineno + 1, Token::Close));
                }
                c if c.is_whitespace() => {
                    chars.next();
                }
                _ => {
                    let mut atom = String::new();
                    while let Some(&c) = chars.peek() {
                        if c == '(' || c == ')' || c.is_whitespace() {
                            break;
                        }
                        atom.push(c);
                        chars.next();
                    }
                    out.push((lineno + 1, Token::Atom(atom)));
                }
            }
        }
    }
    Ok(out)
}

fn parse_sexpr(tokens: &[(usize, Token)], pos: &mut usize) -> Result<Sexpr> {
    let (line, tok) = tokens
        .get(*pos)
        .ok_or_else(|| Error::parse(1, "unexpected end of input"))?;
    *pos += 1;
    match tok {
        Token::Atom(a) => Ok(Sexpr::Atom(a.clone())),
        Token::Close => Err(Error::parse(*line, "unexpected ')'")),
        Token::Open => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos) {
                    None => return Err(Error::parse(*line, "unclosed '('")),
                    Some((_, Token::Close)) => {
                        *pos += 1;
                        return Ok(Sexpr::List(items));
                    }
                    Some(_) => items.push(parse_sexpr(tokens, pos)?),
                }
            }
        }
    }
}

fn valid_name(name: &str) -> Result<()> {
    if !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        Ok(())
    } else {
        Err(Error::parse(1, format!("invalid variable name {name:?}")))
    }
}

fn sexpr_to_node(s: &Sexpr) -> Result<Node> {
    match s {
        Sexpr::Atom(a) => {
            valid_name(a)?;
            Ok(Node::Pos(a.clone()))
        }
        Sexpr::List(items) => {
            let head = match items.first() {
                Some(Sexpr::Atom(h)) => h.as_str(),
                _ => return Err(Error::parse(1, "expected and/or/not")),
            };
            let rest = &items[1..];
            match head {
                "and" => Ok(Node::And(rest.iter().map(sexpr_to_node).collect::<Result<_>>()?)),
                "or" => Ok(Node::Or(rest.iter().map(sexpr_to_node).collect::<Result<_>>()?)),
                "not" => match rest {
                    [Sexpr::Atom(x)] => {
                        valid_name(x)?;
                        Ok(Node::Neg(x.clone()))
                    }
                    _ => Err(Error::parse(1, "(not x) takes exactly one variable")),
                },
                other => Err(Error::parse(1, format!("unknown connective {other:?}"))),
            }
        }
    }
}
