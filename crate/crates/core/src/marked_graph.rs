//! Marked graphs: the canonical invariant of a graph product of finite
//! abelian groups.
//!
//! Every vertex group is split into its primary cyclic factors; each factor
//! becomes a vertex marked with its prime-power order. Two graph products are
//! elementarily equivalent exactly when their marked graphs are isomorphic,
//! so everything in this module funnels into `decide_elementary_equivalence`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spec::GroupProductSpec;

/// A prime-power mark `p^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mark {
    pub p: u64,
    pub n: u32,
}

impl Mark {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidSpec(format!("{p} is not prime")));
        }
        if n == 0 {
            return Err(Error::InvalidSpec("mark exponent must be >= 1".into()));
        }
        Ok(Mark { p, n })
    }

    /// The order `p^n` of the corresponding primary cyclic group.
    pub fn order(&self) -> u64 {
        self.p.pow(self.n)
    }
}

impl std::fmt::Display for Mark {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}^{}", self.p, self.n)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Decompose a list of cyclic orders into primary (prime-power) factors.
///
/// Each `Z_m` splits into one factor per prime power in the factorization of
/// `m`; the result is the multiset union over all input orders.
pub fn primary_decompose(orders: &[u64]) -> Result<Vec<Mark>> {
    let mut marks = Vec::new();
    for &m in orders {
        if m < 2 {
            return Err(Error::InvalidSpec(format!("cyclic factor order {m} < 2")));
        }
        let mut rest = m;
        let mut d = 2;
        while rest > 1 {
            if rest % d == 0 {
                let mut n = 0u32;
                while rest % d == 0 {
                    rest /= d;
                    n += 1;
                }
                marks.push(Mark { p: d, n });
            }
            d += 1;
        }
    }
    Ok(marks)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedVertex {
    pub id: String,
    pub mark: Mark,
}

/// A labeled simplicial graph whose vertices carry prime-power marks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedGraph {
    vertices: Vec<MarkedVertex>,
    adj: Vec<Vec<bool>>,
}

impl MarkedGraph {
    /// Build a marked graph from explicit parts, validating the invariants.
    pub fn from_parts(vertices: Vec<(String, Mark)>, edges: &[(String, String)]) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, (id, _)) in vertices.iter().enumerate() {
            if id.is_empty() {
                return Err(Error::InvalidSpec("empty vertex id".into()));
            }
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::InvalidSpec(format!("duplicate vertex id `{id}`")));
            }
        }
        let n = vertices.len();
        let mut adj = vec![vec![false; n]; n];
        for (a, b) in edges {
            let i = *index.get(a).ok_or_else(|| Error::UnknownVertex(a.clone()))?;
            let j = *index.get(b).ok_or_else(|| Error::UnknownVertex(b.clone()))?;
            if i == j {
                return Err(Error::InvalidSpec(format!("self-loop at `{a}`")));
            }
            adj[i][j] = true;
            adj[j][i] = true;
        }
        Ok(MarkedGraph {
            vertices: vertices
                .into_iter()
                .map(|(id, mark)| MarkedVertex { id, mark })
                .collect(),
            adj,
        })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &MarkedVertex {
        &self.vertices[i]
    }

    pub fn vertices(&self) -> &[MarkedVertex] {
        &self.vertices
    }

    pub fn mark(&self, i: usize) -> Mark {
        self.vertices[i].mark
    }

    /// Order `p^n` of the vertex group at index `i`.
    pub fn order(&self, i: usize) -> u64 {
        self.vertices[i].mark.order()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].iter().filter(|&&b| b).count()
    }

    /// Edges as index pairs with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.adj[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn is_complete(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (i + 1..n).all(|j| self.adj[i][j]))
    }

    /// JSON emission per the external interface:
    /// `{"vertices":[{"id":..,"n":..,"p":..}],"edges":[[id,id]]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<serde_json::Value> = self
            .vertices
            .iter()
            .map(|v| {
                serde_json::json!({"id": v.id, "p": v.mark.p, "n": v.mark.n})
            })
            .collect();
        let mut edges: Vec<(String, String)> = self
            .edges()
            .into_iter()
            .map(|(i, j)| {
                let (a, b) = (&self.vertices[i].id, &self.vertices[j].id);
                if a <= b {
                    (a.clone(), b.clone())
                } else {
                    (b.clone(), a.clone())
                }
            })
            .collect();
        edges.sort();
        serde_json::json!({"vertices": vertices, "edges": edges})
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct V {
            id: String,
            p: u64,
            n: u32,
        }
        #[derive(Deserialize)]
        struct G {
            vertices: Vec<V>,
            #[serde(default)]
            edges: Vec<(String, String)>,
        }
        let g: G = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidSpec(e.to_string()))?;
        let mut vertices = Vec::new();
        for v in g.vertices {
            vertices.push((v.id, Mark::new(v.p, v.n)?));
        }
        MarkedGraph::from_parts(vertices, &g.edges)
    }

    /// DOT text for visualization.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph marked {\n");
        for v in &self.vertices {
            s.push_str(&format!("  \"{}\" [label=\"{}:{}\"];\n", v.id, v.id, v.mark));
        }
        for (i, j) in self.edges() {
            s.push_str(&format!(
                "  \"{}\" -- \"{}\";\n",
                self.vertices[i].id, self.vertices[j].id
            ));
        }
        s.push_str("}\n");
        s
    }

    /// Multiset of marks, sorted.
    pub fn mark_multiset(&self) -> Vec<Mark> {
        let mut m: Vec<Mark> = self.vertices.iter().map(|v| v.mark).collect();
        m.sort();
        m
    }

    /// Sorted (mark, degree) pairs; an isomorphism invariant.
    pub fn mark_degree_histogram(&self) -> Vec<(Mark, usize)> {
        let mut h: Vec<(Mark, usize)> = (0..self.len()).map(|i| (self.mark(i), self.degree(i))).collect();
        h.sort();
        h
    }
}

/// An unlabeled simple graph on the same vertex set as a marked graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
}

impl SimpleGraph {
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }
}

/// The non-commutation graph: same vertices, complemented edge set.
pub fn non_commutation_graph(g: &MarkedGraph) -> SimpleGraph {
    let n = g.len();
    let mut adj = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                adj[i][j] = !g.adjacent(i, j);
            }
        }
    }
    SimpleGraph { n, adj }
}

/// Connected components of the non-commutation graph restricted to `support`,
/// each sorted ascending; components ordered by smallest member.
pub fn gamma_components(g: &MarkedGraph, support: &[usize]) -> Vec<Vec<usize>> {
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![false; g.len()];
    for &start in support {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &v in support {
                if !seen[v] && u != v && !g.adjacent(u, v) {
                    seen[v] = true;
                    comp.push(v);
                    stack.push(v);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Expand a spec into its marked graph.
///
/// A vertex with `r` primary factors becomes `r` vertices `name.1..name.r`,
/// sorted ascending by `(p, n)` and forming a clique; spec edges induce all
/// expansion pairs.
pub fn build_marked_graph(spec: &GroupProductSpec) -> Result<MarkedGraph> {
    spec.validate()?;
    let mut vertices = Vec::new();
    let mut groups: Vec<Vec<usize>> = Vec::new(); // spec vertex -> expansion indices
    for v in &spec.vertices {
        let mut marks = primary_decompose(&v.group)?;
        marks.sort();
        let mut ids = Vec::new();
        for (j, mark) in marks.into_iter().enumerate() {
            ids.push(vertices.len());
            vertices.push(MarkedVertex {
                id: format!("{}.{}", v.name, j + 1),
                mark,
            });
        }
        groups.push(ids);
    }
    let n = vertices.len();
    let mut adj = vec![vec![false; n]; n];
    for ids in &groups {
        for (a, &i) in ids.iter().enumerate() {
            for &j in &ids[a + 1..] {
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
    }
    for (a, b) in &spec.edges {
        let ia = spec.vertex_index(a).unwrap();
        let ib = spec.vertex_index(b).unwrap();
        for &i in &groups[ia] {
            for &j in &groups[ib] {
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
    }
    Ok(MarkedGraph { vertices, adj })
}

/// An injective, adjacency-preserving, label-compatible vertex map between
/// two marked graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedEmbedding {
    /// `map[i]` is the target index of source vertex `i`.
    pub map: Vec<usize>,
}

impl MarkedEmbedding {
    /// Independent validator: injectivity, adjacency preservation and the
    /// label rule (`q = p`, `n <= m`; equal marks when `exact`).
    pub fn validate(&self, src: &MarkedGraph, dst: &MarkedGraph, induced: bool, exact: bool) -> bool {
        if self.map.len() != src.len() {
            return false;
        }
        let mut used = vec![false; dst.len()];
        for (i, &t) in self.map.iter().enumerate() {
            if t >= dst.len() || used[t] {
                return false;
            }
            used[t] = true;
            let (sm, tm) = (src.mark(i), dst.mark(t));
            if sm.p != tm.p || sm.n > tm.n || (exact && sm.n != tm.n) {
                return false;
            }
        }
        for i in 0..src.len() {
            for j in i + 1..src.len() {
                if src.adjacent(i, j) && !dst.adjacent(self.map[i], self.map[j]) {
                    return false;
                }
                if induced && !src.adjacent(i, j) && dst.adjacent(self.map[i], self.map[j]) {
                    return false;
                }
            }
        }
        true
    }

    pub fn as_id_pairs(&self, src: &MarkedGraph, dst: &MarkedGraph) -> Vec<(String, String)> {
        self.map
            .iter()
            .enumerate()
            .map(|(i, &t)| (src.vertex(i).id.clone(), dst.vertex(t).id.clone()))
            .collect()
    }
}

fn mark_compatible(sm: Mark, tm: Mark, exact: bool) -> bool {
    sm.p == tm.p && if exact { sm.n == tm.n } else { sm.n <= tm.n }
}

/// Lexicographic backtracking over target vertices; returns the first map
/// found, which makes the result deterministic.
fn embed_backtrack(
    src: &MarkedGraph,
    dst: &MarkedGraph,
    induced: bool,
    exact: bool,
) -> Option<MarkedEmbedding> {
    if src.len() > dst.len() {
        return None;
    }
    let mut map: Vec<usize> = Vec::with_capacity(src.len());
    let mut used = vec![false; dst.len()];

    fn go(
        src: &MarkedGraph,
        dst: &MarkedGraph,
        induced: bool,
        exact: bool,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let i = map.len();
        if i == src.len() {
            return true;
        }
        'cand: for t in 0..dst.len() {
            if used[t] || !mark_compatible(src.mark(i), dst.mark(t), exact) {
                continue;
            }
            // degree refinement: neighbors of i map to distinct neighbors of t
            if src.degree(i) > dst.degree(t) {
                continue;
            }
            for (j, &mj) in map.iter().enumerate() {
                if src.adjacent(i, j) && !dst.adjacent(t, mj) {
                    continue 'cand;
                }
                if induced && !src.adjacent(i, j) && dst.adjacent(t, mj) {
                    continue 'cand;
                }
            }
            map.push(t);
            used[t] = true;
            if go(src, dst, induced, exact, map, used) {
                return true;
            }
            used[t] = false;
            map.pop();
        }
        false
    }

    if go(src, dst, induced, exact, &mut map, &mut used) {
        Some(MarkedEmbedding { map })
    } else {
        None
    }
}

/// Find a marked-graph embedding of `src` into `dst`, or `None`.
///
/// The default notion preserves adjacency only; pass `induced = true` to also
/// require non-adjacency preservation.
pub fn find_marked_embedding(src: &MarkedGraph, dst: &MarkedGraph, induced: bool) -> Option<MarkedEmbedding> {
    embed_backtrack(src, dst, induced, false)
}

/// Marked-graph isomorphism: a bijective embedding with equal marks whose
/// inverse is also an embedding.
pub fn marked_isomorphic(a: &MarkedGraph, b: &MarkedGraph) -> Option<MarkedEmbedding> {
    if a.len() != b.len() || a.mark_multiset() != b.mark_multiset() {
        return None;
    }
    if a.mark_degree_histogram() != b.mark_degree_histogram() {
        return None;
    }
    embed_backtrack(a, b, true, true)
}

/// Why two specs were found non-equivalent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NonEquivalenceWitness {
    VertexCount { left: usize, right: usize },
    MarkMultiset { left: Vec<String>, right: Vec<String> },
    EdgeCount { left: usize, right: usize },
    MarkDegreeHistogram,
    ExhaustedSearch,
}

impl std::fmt::Display for NonEquivalenceWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NonEquivalenceWitness::VertexCount { left, right } => {
                write!(f, "marked vertex counts differ: {left} vs {right}")
            }
            NonEquivalenceWitness::MarkMultiset { left, right } => {
                write!(f, "mark multisets differ: {left:?} vs {right:?}")
            }
            NonEquivalenceWitness::EdgeCount { left, right } => {
                write!(f, "marked edge counts differ: {left} vs {right}")
            }
            NonEquivalenceWitness::MarkDegreeHistogram => {
                write!(f, "mark-degree histograms differ")
            }
            NonEquivalenceWitness::ExhaustedSearch => write!(f, "exhausted isomorphism search"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EeVerdict {
    /// The marked graphs are isomorphic; holds the vertex id pairs.
    Equivalent(Vec<(String, String)>),
    NotEquivalent(NonEquivalenceWitness),
}

/// Decide elementary equivalence of two graph products: equivalent exactly
/// when their marked graphs are isomorphic. Non-equivalence carries the first
/// failing cheap invariant as an explainable witness.
pub fn decide_elementary_equivalence(a: &GroupProductSpec, b: &GroupProductSpec) -> Result<EeVerdict> {
    let ga = build_marked_graph(a)?;
    let gb = build_marked_graph(b)?;
    if let Some(iso) = marked_isomorphic(&ga, &gb) {
        return Ok(EeVerdict::Equivalent(iso.as_id_pairs(&ga, &gb)));
    }
    let witness = if ga.len() != gb.len() {
        NonEquivalenceWitness::VertexCount { left: ga.len(), right: gb.len() }
    } else if ga.mark_multiset() != gb.mark_multiset() {
        NonEquivalenceWitness::MarkMultiset {
            left: ga.mark_multiset().iter().map(|m| m.to_string()).collect(),
            right: gb.mark_multiset().iter().map(|m| m.to_string()).collect(),
        }
    } else if ga.edge_count() != gb.edge_count() {
        NonEquivalenceWitness::EdgeCount { left: ga.edge_count(), right: gb.edge_count() }
    } else if ga.mark_degree_histogram() != gb.mark_degree_histogram() {
        NonEquivalenceWitness::MarkDegreeHistogram
    } else {
        NonEquivalenceWitness::ExhaustedSearch
    };
    Ok(EeVerdict::NotEquivalent(witness))
}
