//! Checking a characteristic sentence against a target graph product.
//!
//! Complete target graphs give a finite group and an exact verdict by
//! exhaustive search over the carrier. Otherwise a failed marked-graph
//! embedding refutes the sentence structurally, and the remaining case is a
//! bounded search: witness tuples range over single syllables, conditions
//! (1) and (2) are checked exactly, and condition (3) is checked against
//! conjugators drawn from a ball of the given radius.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::logic::phi::{Cond3Instance, PhiSentence};
use crate::marked_graph::{build_marked_graph, find_marked_embedding, MarkedGraph};
use crate::oracle::{all_syllables, ball_enumerate, Ball, FiniteCarrier};
use crate::spec::GroupProductSpec;
use crate::words::{ElementOrder, GroupContext, NormalForm, Syllable};

/// Outcome of `check_phi`. Certified verdicts come only from exact finite
/// evaluation or structural refutation; bounded outcomes carry their radius.
#[derive(Clone, Debug)]
pub enum CheckResult {
    CertifiedTrue { witnesses: Vec<NormalForm> },
    CertifiedFalse { reason: String },
    NoCounterexample { witnesses: Vec<NormalForm>, conjugator_radius: usize },
    NoWitnessFound { description: String },
}

impl CheckResult {
    pub fn is_certified_true(&self) -> bool {
        matches!(self, CheckResult::CertifiedTrue { .. })
    }

    pub fn is_certified_false(&self) -> bool {
        matches!(self, CheckResult::CertifiedFalse { .. })
    }
}

/// A violated condition-(3) clause: the conjugated product with the given
/// exponents and conjugators equals `x_i^s`.
#[derive(Clone, Debug)]
pub struct Cond3Counterexample {
    pub instance: Cond3Instance,
    pub conjugators: Vec<NormalForm>,
    pub value: NormalForm,
}

/// Per-condition outcome for an explicit witness tuple.
#[derive(Clone, Debug)]
pub struct ConditionsReport {
    pub cond1: bool,
    pub cond2: bool,
    pub cond3_counterexample: Option<Cond3Counterexample>,
}

impl ConditionsReport {
    pub fn passes(&self) -> bool {
        self.cond1 && self.cond2 && self.cond3_counterexample.is_none()
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Exponent-sum image of a word in each cyclic vertex group; invariant
/// under conjugation, since killing all other vertex generators is a
/// retraction onto an abelian group.
fn projection(w: &NormalForm) -> Vec<u64> {
    let ctx = w.ctx();
    let mut p = vec![0u64; ctx.vertex_count()];
    for s in w.syllables() {
        p[s.vertex] = (p[s.vertex] + s.exp) % ctx.order(s.vertex);
    }
    p
}

struct FactorTable {
    /// `per_t[j][t-1]` lists the distinct conjugates of `x_j^t` by ball
    /// elements, with the index of the first ball element producing each.
    per_t: Vec<Vec<Vec<(NormalForm, usize)>>>,
    /// Vertices a factor from index `j` can touch in any projection.
    supp: Vec<Vec<bool>>,
    max_len: Vec<usize>,
}

fn factor_table(tuple: &[NormalForm], source: &MarkedGraph, ball: &Ball) -> FactorTable {
    let ctx = tuple[0].ctx();
    let nv = ctx.vertex_count();
    let k = tuple.len();
    let mut per_t = Vec::with_capacity(k);
    let mut supp = vec![vec![false; nv]; k];
    let mut max_len = vec![0usize; k];
    for (j, x) in tuple.iter().enumerate() {
        let mut lists = Vec::new();
        for t in 1..source.order(j) {
            let power = x.power(t as i64);
            for (v, &e) in projection(&power).iter().enumerate() {
                supp[j][v] |= e != 0;
            }
            let mut seen: HashSet<Vec<Syllable>> = HashSet::new();
            let mut list = Vec::new();
            for (gi, g) in ball.elements.iter().enumerate() {
                let f = g.invert().mul(&power).mul(g);
                if seen.insert(f.syllables().to_vec()) {
                    max_len[j] = max_len[j].max(f.len());
                    list.push((f, gi));
                }
            }
            lists.push(list);
        }
        per_t.push(lists);
    }
    FactorTable { per_t, supp, max_len }
}

struct Cond3Search<'a> {
    table: &'a FactorTable,
    others: &'a [usize],
    /// `future_supp[pos][v]`: some factor at a position >= pos can touch v.
    future_supp: Vec<Vec<bool>>,
    future_len: Vec<usize>,
    target: &'a NormalForm,
    target_proj: &'a [u64],
    visited: HashSet<(usize, Vec<Syllable>)>,
    choices: Vec<Option<(u64, usize)>>,
}

impl Cond3Search<'_> {
    fn dfs(&mut self, pos: usize, cur: &NormalForm, used: bool) -> bool {
        if used && cur == self.target {
            return true;
        }
        if pos == self.others.len() {
            return false;
        }
        // a factor's projection must eventually cancel every remaining
        // per-vertex deficit, and geodesic length is subadditive
        let cur_proj = projection(cur);
        for (v, (&have, &want)) in cur_proj.iter().zip(self.target_proj).enumerate() {
            if have != want && !self.future_supp[pos][v] {
                return false;
            }
        }
        if cur.len() > self.target.len() + self.future_len[pos] {
            return false;
        }
        if !self.visited.insert((pos, cur.syllables().to_vec())) {
            return false;
        }
        self.choices[pos] = None;
        if self.dfs(pos + 1, cur, used) {
            return true;
        }
        let j = self.others[pos];
        for (ti, list) in self.table.per_t[j].iter().enumerate() {
            for (f, gi) in list {
                let next = cur.mul(f);
                self.choices[pos] = Some((ti as u64 + 1, *gi));
                if self.dfs(pos + 1, &next, true) {
                    return true;
                }
            }
        }
        self.choices[pos] = None;
        false
    }
}

/// Search for a violated condition-(3) instance with conjugators drawn from
/// the ball: some `x_i^s` equal to a conjugated product over a nonempty
/// subset of the other witnesses. `None` means no counterexample exists
/// within the ball; it is not an unbounded certificate.
pub fn cond3_counterexample(
    tuple: &[NormalForm],
    source: &MarkedGraph,
    ball: &Ball,
) -> Option<Cond3Counterexample> {
    let k = tuple.len();
    if k < 2 {
        return None;
    }
    let nv = tuple[0].ctx().vertex_count();
    let table = factor_table(tuple, source, ball);
    for i in 0..k {
        let others: Vec<usize> = (0..k).filter(|&j| j != i).collect();
        let n = others.len();
        let mut future_supp = vec![vec![false; nv]; n + 1];
        let mut future_len = vec![0usize; n + 1];
        for pos in (0..n).rev() {
            future_supp[pos] = future_supp[pos + 1].clone();
            for v in 0..nv {
                future_supp[pos][v] |= table.supp[others[pos]][v];
            }
            future_len[pos] = future_len[pos + 1] + table.max_len[others[pos]];
        }
        for s in 0..source.order(i) {
            let target = tuple[i].power(s as i64);
            let target_proj = projection(&target);
            let mut search = Cond3Search {
                table: &table,
                others: &others,
                future_supp: future_supp.clone(),
                future_len: future_len.clone(),
                target: &target,
                target_proj: &target_proj,
                visited: HashSet::new(),
                choices: vec![None; n],
            };
            let identity = NormalForm::identity(tuple[0].ctx());
            if search.dfs(0, &identity, false) {
                let mut subset = Vec::new();
                let mut exps = Vec::new();
                let mut conjugators = Vec::new();
                for (pos, choice) in search.choices.iter().enumerate() {
                    if let Some((t, gi)) = choice {
                        subset.push(others[pos]);
                        exps.push(*t);
                        conjugators.push(ball.elements[*gi].clone());
                    }
                }
                return Some(Cond3Counterexample {
                    instance: Cond3Instance { i, subset, exps, s },
                    conjugators,
                    value: target,
                });
            }
        }
    }
    None
}

/// Check an explicit witness tuple: conditions (1) and (2) exactly,
/// condition (3) with conjugators from ball(radius).
pub fn check_conditions(
    tuple: &[NormalForm],
    phi: &PhiSentence,
    radius: usize,
) -> Result<ConditionsReport> {
    if tuple.len() != phi.k() {
        return Err(Error::Precondition(format!(
            "expected {} witnesses, got {}",
            phi.k(),
            tuple.len()
        )));
    }
    let source = phi.source();
    let cond1 = tuple
        .iter()
        .enumerate()
        .all(|(i, x)| x.order_of() == ElementOrder::Finite(source.order(i)));
    let cond2 = source.edges().iter().all(|&(i, j)| {
        let xy = tuple[i].mul(&tuple[j]);
        let yx = tuple[j].mul(&tuple[i]);
        xy == yx
    });
    let ball = ball_enumerate(tuple[0].ctx(), radius)?;
    let cond3_counterexample = cond3_counterexample(tuple, source, &ball);
    Ok(ConditionsReport { cond1, cond2, cond3_counterexample })
}

/// Partial condition-(3) check in an abelian carrier, where conjugation is
/// trivial: validates every instance whose highest mentioned index is `m`,
/// so a full assignment has been checked against all instances.
fn cond3_abelian_ok(
    carrier: &FiniteCarrier,
    source_orders: &[u64],
    assign: &[Vec<u64>],
    m: usize,
) -> bool {
    for i in 0..=m {
        for mask in 1u64..1 << (m + 1) {
            if mask >> i & 1 == 1 {
                continue;
            }
            if i != m && mask >> m & 1 == 0 {
                continue;
            }
            let subset: Vec<usize> = (0..=m).filter(|&j| mask >> j & 1 == 1).collect();
            let mut exps = vec![1u64; subset.len()];
            loop {
                let mut prod = carrier.identity();
                for (&j, &t) in subset.iter().zip(&exps) {
                    prod = carrier.mul(&prod, &carrier.pow(&assign[j], t));
                }
                for s in 0..source_orders[i] {
                    if carrier.pow(&assign[i], s) == prod {
                        return false;
                    }
                }
                let mut pos = exps.len();
                loop {
                    if pos == 0 {
                        return true;
                    }
                    pos -= 1;
                    exps[pos] += 1;
                    if exps[pos] < source_orders[subset[pos]] {
                        break;
                    }
                    exps[pos] = 1;
                }
            }
        }
    }
    true
}

fn exact_complete(phi: &PhiSentence, carrier: &FiniteCarrier) -> CheckResult {
    let k = phi.k();
    let orders = phi.orders();
    let elements = carrier.elements();
    let candidates: Vec<Vec<usize>> = orders
        .iter()
        .map(|&o| {
            (0..elements.len())
                .filter(|&e| carrier.order_of(&elements[e]) == o)
                .collect()
        })
        .collect();

    fn dfs(
        m: usize,
        k: usize,
        carrier: &FiniteCarrier,
        elements: &[Vec<u64>],
        candidates: &[Vec<usize>],
        orders: &[u64],
        assign: &mut Vec<Vec<u64>>,
    ) -> bool {
        if m == k {
            return true;
        }
        for &e in &candidates[m] {
            assign.push(elements[e].clone());
            if cond3_abelian_ok(carrier, orders, assign, m)
                && dfs(m + 1, k, carrier, elements, candidates, orders, assign)
            {
                return true;
            }
            assign.pop();
        }
        false
    }

    let mut assign = Vec::with_capacity(k);
    if dfs(0, k, carrier, &elements, &candidates, &orders, &mut assign) {
        CheckResult::CertifiedTrue {
            witnesses: assign.iter().map(|e| carrier.to_normal_form(e)).collect(),
        }
    } else {
        CheckResult::CertifiedFalse {
            reason: format!(
                "exhaustive evaluation over the {}-element group found no witness tuple",
                carrier.len()
            ),
        }
    }
}

/// Bounded existential search over tuples of single syllables, in
/// lexicographic (vertex, exponent) order; conditions (1) and (2) are exact,
/// condition (3) is bounded by the conjugator radius.
pub fn bounded_witness_search(
    phi: &PhiSentence,
    ctx: &GroupContext,
    radius: usize,
) -> Result<CheckResult> {
    let ball = ball_enumerate(ctx, radius)?;
    let k = phi.k();
    let orders = phi.orders();
    let source = phi.source();
    let syllables = all_syllables(ctx);
    let candidates: Vec<Vec<Syllable>> = orders
        .iter()
        .map(|&o| {
            syllables
                .iter()
                .copied()
                .filter(|s| {
                    let full = ctx.order(s.vertex);
                    full / gcd(full, s.exp) == o
                })
                .collect()
        })
        .collect();
    let edges = source.edges();

    fn dfs(
        m: usize,
        k: usize,
        ctx: &GroupContext,
        candidates: &[Vec<Syllable>],
        edges: &[(usize, usize)],
        source: &MarkedGraph,
        ball: &Ball,
        chosen: &mut Vec<Syllable>,
    ) -> Option<Vec<NormalForm>> {
        if m == k {
            let tuple: Vec<NormalForm> = chosen
                .iter()
                .map(|&s| NormalForm::from_raw(ctx, vec![s]))
                .collect();
            if cond3_counterexample(&tuple, source, ball).is_none() {
                return Some(tuple);
            }
            return None;
        }
        'cand: for &c in &candidates[m] {
            for &(i, j) in edges {
                if j == m && !ctx.letters_commute(chosen[i].vertex, c.vertex) {
                    continue 'cand;
                }
            }
            chosen.push(c);
            if let Some(found) = dfs(m + 1, k, ctx, candidates, edges, source, ball, chosen) {
                return Some(found);
            }
            chosen.pop();
        }
        None
    }

    let mut chosen = Vec::with_capacity(k);
    match dfs(0, k, ctx, &candidates, &edges, source, &ball, &mut chosen) {
        Some(witnesses) => Ok(CheckResult::NoCounterexample { witnesses, conjugator_radius: radius }),
        None => Ok(CheckResult::NoWitnessFound {
            description: format!(
                "no tuple of single syllables with orders {orders:?} passed conditions (1)-(3) \
                 at conjugator radius {radius}"
            ),
        }),
    }
}

/// Check the sentence against a target. Complete targets are evaluated
/// exactly over the finite carrier; otherwise a missing marked-graph
/// embedding refutes the sentence, and the remaining case is the bounded
/// witness search.
pub fn check_phi(
    phi: &PhiSentence,
    target: &GroupProductSpec,
    conjugator_radius: usize,
) -> Result<CheckResult> {
    let graph = build_marked_graph(target)?;
    let ctx = GroupContext::new(graph);
    if ctx.graph().is_complete() {
        match FiniteCarrier::new(&ctx) {
            Ok(carrier) => return Ok(exact_complete(phi, &carrier)),
            // carrier too large: fall through to the bounded paths
            Err(Error::LimitExceeded(_)) => {}
            Err(e) => return Err(e),
        }
    }
    if find_marked_embedding(phi.source(), ctx.graph(), false).is_none() {
        return Ok(CheckResult::CertifiedFalse {
            reason: "the source marked graph does not embed into the target marked graph".into(),
        });
    }
    bounded_witness_search(phi, &ctx, conjugator_radius)
}
