//! Exact arithmetic on elements of a graph product: canonical geodesic
//! normal forms, multiplication, cyclic reduction, alphabets, and element
//! order.
//!
//! The canonical form of an element is the lexicographically least
//! linearization (under the fixed vertex order of the marked graph) of its
//! commutation class, after exhaustively merging same-vertex syllables that
//! are separated only by commuting syllables and deleting trivial ones.
//! Word equality is canonical-form equality.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::marked_graph::{gamma_components, MarkedGraph};

/// A single letter: a nontrivial element of one vertex group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Syllable {
    pub vertex: usize,
    /// Least positive residue modulo the vertex order; never 0.
    pub exp: u64,
}

/// Shared handle to the marked graph a word lives over.
#[derive(Clone, Debug)]
pub struct GroupContext {
    graph: Arc<MarkedGraph>,
}

impl GroupContext {
    pub fn new(graph: MarkedGraph) -> Self {
        GroupContext { graph: Arc::new(graph) }
    }

    pub fn graph(&self) -> &MarkedGraph {
        &self.graph
    }

    pub fn order(&self, v: usize) -> u64 {
        self.graph.order(v)
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.len()
    }

    /// Whether letters on the two vertices commute: same vertex group, or
    /// adjacent in the marked graph.
    pub fn letters_commute(&self, u: usize, v: usize) -> bool {
        u == v || self.graph.adjacent(u, v)
    }

    pub fn same(&self, other: &GroupContext) -> bool {
        Arc::ptr_eq(&self.graph, &other.graph) || self.graph == other.graph
    }
}

impl PartialEq for GroupContext {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}
impl Eq for GroupContext {}

/// Finite or infinite element order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementOrder {
    Finite(u64),
    Infinite,
}

/// Canonical geodesic syllable sequence for an element.
#[derive(Clone, Debug)]
pub struct NormalForm {
    ctx: GroupContext,
    syllables: Vec<Syllable>,
}

impl PartialEq for NormalForm {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same(&other.ctx) && self.syllables == other.syllables
    }
}
impl Eq for NormalForm {}

impl std::hash::Hash for NormalForm {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.syllables.hash(state);
    }
}

impl PartialOrd for NormalForm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for NormalForm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.syllables.len(), &self.syllables).cmp(&(other.syllables.len(), &other.syllables))
    }
}

/// One merge step: find the leftmost pair of same-vertex syllables separated
/// only by letters commuting with that vertex; merge modulo the vertex order.
fn try_merge_once(ctx: &GroupContext, s: &mut Vec<Syllable>) -> bool {
    for i in 0..s.len() {
        let v = s[i].vertex;
        for j in i + 1..s.len() {
            if s[j].vertex == v {
                let e = (s[i].exp + s[j].exp) % ctx.order(v);
                s.remove(j);
                if e == 0 {
                    s.remove(i);
                } else {
                    s[i].exp = e;
                }
                return true;
            }
            if !ctx.letters_commute(s[j].vertex, v) {
                break;
            }
        }
    }
    false
}

fn merge_applicable(ctx: &GroupContext, s: &[Syllable]) -> bool {
    for i in 0..s.len() {
        let v = s[i].vertex;
        for j in i + 1..s.len() {
            if s[j].vertex == v {
                return true;
            }
            if !ctx.letters_commute(s[j].vertex, v) {
                break;
            }
        }
    }
    false
}

/// Greedy lexicographically-least linearization: repeatedly emit the
/// smallest-vertex syllable preceded only by syllables commuting with it.
fn linearize(ctx: &GroupContext, mut remaining: Vec<Syllable>) -> Vec<Syllable> {
    let mut out = Vec::with_capacity(remaining.len());
    while !remaining.is_empty() {
        let mut best: Option<usize> = None;
        'pos: for i in 0..remaining.len() {
            let v = remaining[i].vertex;
            for m in 0..i {
                if !ctx.letters_commute(remaining[m].vertex, v) {
                    continue 'pos;
                }
            }
            match best {
                None => best = Some(i),
                Some(b) if v < remaining[b].vertex => best = Some(i),
                _ => {}
            }
        }
        out.push(remaining.remove(best.expect("first syllable is always available")));
    }
    out
}

fn canonicalize(ctx: &GroupContext, raw: Vec<Syllable>) -> Vec<Syllable> {
    let mut s: Vec<Syllable> = raw
        .into_iter()
        .filter_map(|syl| {
            let e = syl.exp % ctx.order(syl.vertex);
            (e != 0).then_some(Syllable { vertex: syl.vertex, exp: e })
        })
        .collect();
    loop {
        while try_merge_once(ctx, &mut s) {}
        s = linearize(ctx, s);
        if !merge_applicable(ctx, &s) {
            return s;
        }
    }
}

/// Conjugator and cyclically reduced core: the element equals
/// `conjugator^-1 * core * conjugator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicDecomposition {
    pub core: NormalForm,
    pub conjugator: NormalForm,
}

impl NormalForm {
    pub fn identity(ctx: &GroupContext) -> Self {
        NormalForm { ctx: ctx.clone(), syllables: Vec::new() }
    }

    /// A single-syllable word `u_v^exp` (identity when exp is 0 mod order).
    pub fn generator(ctx: &GroupContext, vertex: usize, exp: u64) -> Result<Self> {
        if vertex >= ctx.vertex_count() {
            return Err(Error::UnknownVertex(format!("#{vertex}")));
        }
        Ok(NormalForm::from_raw(ctx, vec![Syllable { vertex, exp }]))
    }

    /// Normalize a raw syllable sequence. Zero exponents are dropped.
    pub fn from_raw(ctx: &GroupContext, raw: Vec<Syllable>) -> Self {
        debug_assert!(raw.iter().all(|s| s.vertex < ctx.vertex_count()));
        NormalForm { ctx: ctx.clone(), syllables: canonicalize(ctx, raw) }
    }

    pub fn ctx(&self) -> &GroupContext {
        &self.ctx
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    /// Syllable count of the canonical form (the geodesic length).
    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn multiply(&self, other: &NormalForm) -> Result<NormalForm> {
        if !self.ctx.same(&other.ctx) {
            return Err(Error::ContextMismatch);
        }
        let mut raw = self.syllables.clone();
        raw.extend_from_slice(&other.syllables);
        Ok(NormalForm::from_raw(&self.ctx, raw))
    }

    /// `self * other` for words known to share a context.
    pub fn mul(&self, other: &NormalForm) -> NormalForm {
        self.multiply(other).expect("contexts match")
    }

    /// Right-multiplication by a single syllable; fast path for enumeration.
    pub fn mul_syllable(&self, syl: Syllable) -> NormalForm {
        let mut raw = self.syllables.clone();
        raw.push(syl);
        NormalForm::from_raw(&self.ctx, raw)
    }

    pub fn invert(&self) -> NormalForm {
        let raw: Vec<Syllable> = self
            .syllables
            .iter()
            .rev()
            .map(|s| Syllable { vertex: s.vertex, exp: self.ctx.order(s.vertex) - s.exp })
            .collect();
        NormalForm::from_raw(&self.ctx, raw)
    }

    /// Power by repeated squaring on canonical forms.
    pub fn power(&self, m: i64) -> NormalForm {
        if m < 0 {
            return self.invert().power(-m);
        }
        let mut result = NormalForm::identity(&self.ctx);
        let mut base = self.clone();
        let mut m = m as u64;
        while m > 0 {
            if m & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            m >>= 1;
        }
        result
    }

    /// The set of vertices occurring in the canonical form; invariant across
    /// all geodesics of the element.
    pub fn alphabet(&self) -> BTreeSet<usize> {
        self.syllables.iter().map(|s| s.vertex).collect()
    }

    /// Positions whose syllable can be shuffled to the front.
    fn front_available(&self) -> Vec<usize> {
        let mut out = Vec::new();
        'pos: for i in 0..self.syllables.len() {
            let v = self.syllables[i].vertex;
            for m in 0..i {
                if !self.ctx.letters_commute(self.syllables[m].vertex, v) {
                    continue 'pos;
                }
            }
            out.push(i);
        }
        out
    }

    /// Positions whose syllable can be shuffled to the back.
    fn back_available(&self) -> Vec<usize> {
        let n = self.syllables.len();
        let mut out = Vec::new();
        'pos: for i in 0..n {
            let v = self.syllables[i].vertex;
            for m in i + 1..n {
                if !self.ctx.letters_commute(self.syllables[m].vertex, v) {
                    continue 'pos;
                }
            }
            out.push(i);
        }
        out
    }

    /// A front-available syllable whose vertex also has a distinct
    /// back-available syllable; conjugating by it shortens the word.
    fn cyclic_reduction_candidate(&self) -> Option<Syllable> {
        if self.len() <= 1 {
            return None;
        }
        let back = self.back_available();
        for &i in &self.front_available() {
            let v = self.syllables[i].vertex;
            if back.iter().any(|&j| j != i && self.syllables[j].vertex == v) {
                return Some(self.syllables[i]);
            }
        }
        None
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.cyclic_reduction_candidate().is_none()
    }

    /// Conjugate syllables off the ends until the core is cyclically reduced,
    /// tracking the conjugator: `self == conjugator^-1 * core * conjugator`.
    pub fn cyclically_reduce(&self) -> CyclicDecomposition {
        let mut core = self.clone();
        let mut conjugator = NormalForm::identity(&self.ctx);
        while let Some(s) = core.cyclic_reduction_candidate() {
            let s_nf = NormalForm::from_raw(&self.ctx, vec![s]);
            let next = s_nf.invert().mul(&core).mul(&s_nf);
            assert!(next.len() < core.len(), "cyclic reduction must shorten the core");
            conjugator = s_nf.invert().mul(&conjugator);
            core = next;
        }
        CyclicDecomposition { core, conjugator }
    }

    /// Finite iff the cyclically reduced core has only singular blocks, i.e.
    /// its alphabet spans a clique; then the order is the lcm of the syllable
    /// orders.
    pub fn order_of(&self) -> ElementOrder {
        let core = self.cyclically_reduce().core;
        if core.is_identity() {
            return ElementOrder::Finite(1);
        }
        let support: Vec<usize> = core.alphabet().into_iter().collect();
        let comps = gamma_components(self.ctx.graph(), &support);
        if comps.iter().any(|c| c.len() > 1) {
            return ElementOrder::Infinite;
        }
        let mut order = 1u64;
        for s in core.syllables() {
            let full = self.ctx.order(s.vertex);
            order = lcm(order, full / gcd(full, s.exp));
        }
        ElementOrder::Finite(order)
    }

    /// Render in the CLI word syntax: whitespace-separated `id` / `id^e`.
    pub fn render(&self) -> String {
        let g = self.ctx.graph();
        self.syllables
            .iter()
            .map(|s| {
                let id = &g.vertex(s.vertex).id;
                if s.exp == 1 {
                    id.clone()
                } else {
                    format!("{id}^{}", s.exp)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Parse the CLI word syntax: whitespace-separated tokens `id` or `id^e`.
///
/// A token may be a full marked-vertex id or a spec vertex name whose
/// expansion has exactly one vertex. Exponents are reduced modulo the vertex
/// order; zero exponents are dropped.
pub fn parse_word(ctx: &GroupContext, text: &str) -> Result<NormalForm> {
    let g = ctx.graph();
    let mut raw = Vec::new();
    for token in text.split_whitespace() {
        let (name, exp) = match token.split_once('^') {
            Some((name, e)) => {
                let e: u64 = e
                    .parse()
                    .map_err(|_| Error::Parse { offset: 0, message: format!("bad exponent in `{token}`") })?;
                (name, e)
            }
            None => (token, 1),
        };
        let vertex = match g.index_of(name) {
            Some(i) => i,
            None => {
                // accept a bare spec name with a single expansion vertex
                let prefix = format!("{name}.");
                let matches: Vec<usize> = (0..g.len())
                    .filter(|&i| g.vertex(i).id.starts_with(&prefix))
                    .collect();
                match matches.len() {
                    1 => matches[0],
                    0 => return Err(Error::UnknownVertex(name.to_string())),
                    _ => return Err(Error::AmbiguousVertex(name.to_string())),
                }
            }
        };
        raw.push(Syllable { vertex, exp });
    }
    Ok(NormalForm::from_raw(ctx, raw))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
