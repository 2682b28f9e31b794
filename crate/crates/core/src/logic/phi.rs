//! The characteristic sentence of a graph product: a prenex
//! exists-forall sentence whose models among graph products of finite
//! abelian groups are exactly those containing the source as a canonical
//! subproduct.
//!
//! The matrix conjoins (1) an exact-order clause per vertex, (2) a
//! commutator clause per edge, and (3) for every vertex, every nonempty
//! subset of the remaining indices, every exponent tuple and every power of
//! the vertex variable, a non-equality against the conjugated product.

use crate::error::{Error, Result};
use crate::logic::formula::{emit_pretty, emit_sexpr, Formula, Term};
use crate::marked_graph::MarkedGraph;

/// One condition-(3) clause instance. Indices are 0-based into the source
/// graph; `subset` is ascending and never contains `i`; `exps[m]` pairs with
/// `subset[m]` and lies in `1..order(subset[m])`; `s` lies in `0..order(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cond3Instance {
    pub i: usize,
    pub subset: Vec<usize>,
    pub exps: Vec<u64>,
    pub s: u64,
}

impl Cond3Instance {
    /// The clause `x_i^s != (x_{j1}^{t1})^{g1} ... (x_{jl}^{tl})^{gl}` with
    /// 1-based variable names; conjugators are assigned positionally.
    pub fn clause(&self) -> Formula {
        let lhs = Term::pow(Term::var(format!("x{}", self.i + 1)), self.s);
        let factors: Vec<Term> = self
            .subset
            .iter()
            .zip(&self.exps)
            .enumerate()
            .map(|(m, (&j, &t))| {
                Term::conjugate(
                    Term::pow(Term::var(format!("x{}", j + 1)), t),
                    Term::var(format!("g{}", m + 1)),
                )
            })
            .collect();
        Formula::neq(lhs, Term::prod(factors))
    }
}

/// Streaming enumeration of condition-(3) instances in a fixed order:
/// vertex `i` ascending, subset mask ascending, exponent odometer, then `s`
/// innermost.
pub struct Cond3Iter {
    orders: Vec<u64>,
    i: usize,
    mask: u64,
    exps: Vec<u64>,
    s: u64,
    done: bool,
}

impl Cond3Iter {
    pub fn new(g: &MarkedGraph) -> Self {
        let orders: Vec<u64> = (0..g.len()).map(|v| g.order(v)).collect();
        let done = orders.len() < 2;
        Cond3Iter { orders, i: 0, mask: 1, exps: Vec::new(), s: 0, done }
    }

    fn others(&self) -> Vec<usize> {
        (0..self.orders.len()).filter(|&j| j != self.i).collect()
    }

    fn subset(&self) -> Vec<usize> {
        self.others()
            .into_iter()
            .enumerate()
            .filter(|(b, _)| self.mask >> b & 1 == 1)
            .map(|(_, j)| j)
            .collect()
    }
}

impl Iterator for Cond3Iter {
    type Item = Cond3Instance;

    fn next(&mut self) -> Option<Cond3Instance> {
        if self.done {
            return None;
        }
        let subset = self.subset();
        if self.exps.len() != subset.len() {
            self.exps = vec![1; subset.len()];
        }
        let item = Cond3Instance {
            i: self.i,
            subset: subset.clone(),
            exps: self.exps.clone(),
            s: self.s,
        };

        self.s += 1;
        if self.s < self.orders[self.i] {
            return Some(item);
        }
        self.s = 0;
        // advance the exponent odometer, rightmost fastest
        let mut pos = subset.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            self.exps[pos] += 1;
            if self.exps[pos] < self.orders[subset[pos]] {
                return Some(item);
            }
            self.exps[pos] = 1;
        }
        self.exps.clear();
        self.mask += 1;
        let k = self.orders.len();
        if self.mask < 1u64 << (k - 1) {
            return Some(item);
        }
        self.mask = 1;
        self.i += 1;
        if self.i == k {
            self.done = true;
        }
        Some(item)
    }
}

/// Condition-(3) instances of a marked graph, in the canonical order.
pub fn cond3_instances(g: &MarkedGraph) -> Cond3Iter {
    Cond3Iter::new(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmitFormat {
    Sexpr,
    Pretty,
}

/// The characteristic sentence together with the marked graph it encodes.
#[derive(Clone, Debug)]
pub struct PhiSentence {
    source: MarkedGraph,
    formula: Formula,
}

impl PhiSentence {
    pub fn source(&self) -> &MarkedGraph {
        &self.source
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn k(&self) -> usize {
        self.source.len()
    }

    /// Prime-power order per source vertex, in vertex order.
    pub fn orders(&self) -> Vec<u64> {
        (0..self.source.len()).map(|v| self.source.order(v)).collect()
    }

    pub fn emit(&self, format: EmitFormat) -> String {
        match format {
            EmitFormat::Sexpr => emit_sexpr(&self.formula),
            EmitFormat::Pretty => emit_pretty(&self.formula),
        }
    }
}

/// Build the characteristic sentence of a nonempty marked graph: prenex
/// `exists x1..xk forall g1..g(k-1)` over the conjunction of the order,
/// commutator and non-product clauses.
pub fn build_phi(g: &MarkedGraph) -> Result<PhiSentence> {
    let k = g.len();
    if k == 0 {
        return Err(Error::EmptyGraph);
    }
    let xs: Vec<String> = (1..=k).map(|i| format!("x{i}")).collect();
    let gs: Vec<String> = (1..k).map(|i| format!("g{i}")).collect();

    let mut clauses = Vec::new();
    for i in 0..k {
        let mark = g.mark(i);
        let x = Term::var(&xs[i]);
        clauses.push(Formula::eq(Term::pow(x.clone(), mark.order()), Term::Identity));
        clauses.push(Formula::neq(Term::pow(x, mark.order() / mark.p), Term::Identity));
    }
    for (i, j) in g.edges() {
        let xi = Term::var(&xs[i]);
        let xj = Term::var(&xs[j]);
        clauses.push(Formula::eq(
            Term::prod(vec![Term::inv(xi.clone()), Term::inv(xj.clone()), xi, xj]),
            Term::Identity,
        ));
    }
    clauses.extend(cond3_instances(g).map(|inst| inst.clause()));

    let formula = Formula::exists(xs, Formula::forall(gs, Formula::and(clauses)));
    Ok(PhiSentence { source: g.clone(), formula })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::formula::parse_formula;
    use crate::marked_graph::build_marked_graph;
    use crate::spec::GroupProductSpec;

    fn graph(vertices: &[(&str, &[u64])], edges: &[(&str, &str)]) -> MarkedGraph {
        build_marked_graph(&GroupProductSpec::new(vertices, edges)).unwrap()
    }

    #[test]
    fn single_vertex_examples() {
        let phi = build_phi(&graph(&[("a", &[2])], &[])).unwrap();
        assert_eq!(
            phi.emit(EmitFormat::Sexpr),
            "(exists (x1) (and (= (pow x1 2) 1) (not (= x1 1))))"
        );

        let phi = build_phi(&graph(&[("a", &[4])], &[])).unwrap();
        assert_eq!(
            phi.emit(EmitFormat::Sexpr),
            "(exists (x1) (and (= (pow x1 4) 1) (not (= (pow x1 2) 1))))"
        );
    }

    #[test]
    fn two_vertex_clauses() {
        let phi = build_phi(&graph(&[("a", &[2]), ("b", &[2])], &[("a", "b")])).unwrap();
        let text = phi.emit(EmitFormat::Sexpr);
        assert!(text.starts_with("(exists (x1 x2) (forall (g1) (and "));
        // commutator for the edge
        assert!(text.contains("(= (* (inv x1) (inv x2) x1 x2) 1)"));
        // the four condition-(3) clauses
        for clause in [
            "(not (= 1 (* (inv g1) x2 g1)))",
            "(not (= x1 (* (inv g1) x2 g1)))",
            "(not (= 1 (* (inv g1) x1 g1)))",
            "(not (= x2 (* (inv g1) x1 g1)))",
        ] {
            assert!(text.contains(clause), "missing {clause} in {text}");
        }
        // round-trips through the parser
        assert_eq!(&parse_formula(&text).unwrap(), phi.formula());
    }

    #[test]
    fn prenex_shape() {
        for (vertices, edges) in [
            (vec![("a", vec![2u64])], vec![]),
            (vec![("a", vec![4]), ("b", vec![3])], vec![("a", "b")]),
            (vec![("a", vec![2]), ("b", vec![2]), ("c", vec![2])], vec![("a", "b")]),
        ] {
            let vs: Vec<(&str, &[u64])> = vertices.iter().map(|(n, o)| (*n, &o[..])).collect();
            let g = graph(&vs, &edges);
            let phi = build_phi(&g).unwrap();
            let k = g.len();
            match phi.formula() {
                Formula::Exists(xs, body) => {
                    assert_eq!(xs.len(), k);
                    if k > 1 {
                        match &**body {
                            Formula::Forall(gs, inner) => {
                                assert_eq!(gs.len(), k - 1);
                                assert!(matches!(&**inner, Formula::And(_)));
                            }
                            other => panic!("expected forall, got {other:?}"),
                        }
                    } else {
                        assert!(!matches!(&**body, Formula::Forall(..)));
                    }
                }
                other => panic!("expected exists, got {other:?}"),
            }
        }
    }

    #[test]
    fn cond3_instance_counts() {
        // oracle: k * (2^(k-1) subsets summed over exponent tuples) * ord_i
        let g = graph(&[("a", &[2]), ("b", &[3]), ("c", &[2])], &[]);
        let count = cond3_instances(&g).count();
        let orders = [2u64, 3, 2];
        let mut expect = 0u64;
        for i in 0..3 {
            let others: Vec<usize> = (0..3).filter(|&j| j != i).collect();
            for mask in 1u64..4 {
                let mut tuples = 1u64;
                for (b, &j) in others.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        tuples *= orders[j] - 1;
                    }
                }
                expect += tuples * orders[i];
            }
        }
        assert_eq!(count as u64, expect);

        // no instances for a single vertex
        assert_eq!(cond3_instances(&graph(&[("a", &[8])], &[])).count(), 0);
    }

    #[test]
    fn cond3_instances_are_well_formed_and_distinct() {
        let g = graph(&[("a", &[4]), ("b", &[2]), ("c", &[3])], &[("a", "b")]);
        let all: Vec<Cond3Instance> = cond3_instances(&g).collect();
        for inst in &all {
            assert!(!inst.subset.is_empty());
            assert!(!inst.subset.contains(&inst.i));
            assert!(inst.subset.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(inst.subset.len(), inst.exps.len());
            for (&j, &t) in inst.subset.iter().zip(&inst.exps) {
                assert!(t >= 1 && t < g.order(j));
            }
            assert!(inst.s < g.order(inst.i));
        }
        let mut dedup = all.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), all.len());
        let set: std::collections::BTreeSet<String> =
            all.iter().map(|i| format!("{i:?}")).collect();
        assert_eq!(set.len(), all.len());
    }

    #[test]
    fn empty_graph_is_rejected() {
        let g = MarkedGraph::from_parts(Vec::new(), &[]).unwrap();
        assert!(matches!(build_phi(&g), Err(Error::EmptyGraph)));
    }
}
