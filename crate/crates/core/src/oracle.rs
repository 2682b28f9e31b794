//! Brute-force ground truth at desk scale: ball enumeration, exhaustive
//! finite-group carriers for clique graphs, naive marked-graph isomorphism,
//! bounded subgroup closure, and bipartite matching.
//!
//! Deduplication works on canonical forms, so ball enumeration doubles as a
//! stress test of the normal-form machinery.

use std::collections::HashSet;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::marked_graph::{MarkedEmbedding, MarkedGraph};
use crate::words::{GroupContext, NormalForm, Syllable};

const MAX_BALL: usize = 1_000_000;
const MAX_CARRIER: u64 = 4096;
const MAX_ISO_VERTICES: usize = 8;

/// All distinct elements of canonical length at most `radius`.
#[derive(Clone, Debug)]
pub struct Ball {
    pub radius: usize,
    /// Sorted by (length, syllables); contains the identity and is closed
    /// under inversion.
    pub elements: Vec<NormalForm>,
}

/// Every syllable `(v, e)` with `1 <= e < ord(v)`, in vertex order.
pub fn all_syllables(ctx: &GroupContext) -> Vec<Syllable> {
    let mut out = Vec::new();
    for v in 0..ctx.vertex_count() {
        for e in 1..ctx.order(v) {
            out.push(Syllable { vertex: v, exp: e });
        }
    }
    out
}

/// Breadth-first generation by right-multiplication with all syllables,
/// deduplicating by canonical form.
pub fn ball_enumerate(ctx: &GroupContext, radius: usize) -> Result<Ball> {
    let syllables = all_syllables(ctx);
    let mut seen: HashSet<Vec<Syllable>> = HashSet::new();
    let identity = NormalForm::identity(ctx);
    seen.insert(Vec::new());
    let mut elements = vec![identity];
    let mut frontier: Vec<NormalForm> = elements.clone();
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &frontier {
            for &s in &syllables {
                let prod = w.mul_syllable(s);
                if prod.len() <= radius && !seen.contains(prod.syllables()) {
                    if seen.len() >= MAX_BALL {
                        return Err(Error::LimitExceeded(format!("ball larger than {MAX_BALL}")));
                    }
                    seen.insert(prod.syllables().to_vec());
                    next.push(prod);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        elements.extend(next.iter().cloned());
        frontier = next;
    }
    elements.sort();
    Ok(Ball { radius, elements })
}

/// Exhaustive model of a finite graph product: valid only when the marked
/// graph is complete, in which case the group is the direct product of its
/// vertex groups and elements are exponent vectors.
#[derive(Clone, Debug)]
pub struct FiniteCarrier {
    ctx: GroupContext,
    orders: Vec<u64>,
}

impl FiniteCarrier {
    pub fn new(ctx: &GroupContext) -> Result<Self> {
        if !ctx.graph().is_complete() {
            return Err(Error::InfiniteGroup);
        }
        let orders: Vec<u64> = (0..ctx.vertex_count()).map(|v| ctx.order(v)).collect();
        let size: u64 = orders.iter().product();
        if size > MAX_CARRIER {
            return Err(Error::LimitExceeded(format!("carrier of {size} elements")));
        }
        Ok(FiniteCarrier { ctx: ctx.clone(), orders })
    }

    pub fn ctx(&self) -> &GroupContext {
        &self.ctx
    }

    pub fn len(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn identity(&self) -> Vec<u64> {
        vec![0; self.orders.len()]
    }

    /// All exponent vectors, identity first, in mixed-radix order.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![self.identity()];
        loop {
            let mut next = out.last().unwrap().clone();
            let mut i = next.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                next[i] += 1;
                if next[i] < self.orders[i] {
                    break;
                }
                next[i] = 0;
            }
            out.push(next);
        }
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.orders)
            .map(|((&x, &y), &m)| (x + y) % m)
            .collect()
    }

    pub fn inv(&self, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.orders).map(|(&x, &m)| (m - x) % m).collect()
    }

    pub fn pow(&self, a: &[u64], e: u64) -> Vec<u64> {
        a.iter()
            .zip(&self.orders)
            .map(|(&x, &m)| (x as u128 * e as u128 % m as u128) as u64)
            .collect()
    }

    pub fn order_of(&self, a: &[u64]) -> u64 {
        a.iter().zip(&self.orders).fold(1, |acc, (&x, &m)| {
            let o = m / gcd(m, x);
            lcm(acc, o)
        })
    }

    pub fn to_normal_form(&self, a: &[u64]) -> NormalForm {
        let raw: Vec<Syllable> = a
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(v, &e)| Syllable { vertex: v, exp: e })
            .collect();
        NormalForm::from_raw(&self.ctx, raw)
    }

    pub fn from_normal_form(&self, w: &NormalForm) -> Vec<u64> {
        let mut a = self.identity();
        for s in w.syllables() {
            a[s.vertex] = (a[s.vertex] + s.exp) % self.orders[s.vertex];
        }
        a
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 { 0 } else { a / gcd(a, b) * b }
}

/// All products of the generators and their inverses whose canonical form
/// stays within `ball(radius)`, computed to a fixed point.
pub fn bounded_subgroup_closure(
    ctx: &GroupContext,
    generators: &[NormalForm],
    radius: usize,
) -> Vec<NormalForm> {
    let mut gens: Vec<NormalForm> = Vec::new();
    for g in generators {
        gens.push(g.clone());
        gens.push(g.invert());
    }
    let mut seen: HashSet<Vec<Syllable>> = HashSet::new();
    seen.insert(Vec::new());
    let mut out = vec![NormalForm::identity(ctx)];
    let mut frontier = out.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in &frontier {
            for g in &gens {
                let prod = w.mul(g);
                if prod.len() <= radius && !seen.contains(prod.syllables()) {
                    seen.insert(prod.syllables().to_vec());
                    next.push(prod);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort();
    out
}

/// Exhaustive permutation search for a marked-graph isomorphism; the oracle
/// counterpart of `marked_isomorphic`.
pub fn naive_marked_iso(a: &MarkedGraph, b: &MarkedGraph) -> Result<Option<MarkedEmbedding>> {
    if a.len() > MAX_ISO_VERTICES || b.len() > MAX_ISO_VERTICES {
        return Err(Error::LimitExceeded(format!(
            "naive isomorphism supports at most {MAX_ISO_VERTICES} vertices"
        )));
    }
    if a.len() != b.len() {
        return Ok(None);
    }
    let n = a.len();
    for perm in (0..n).permutations(n) {
        let ok = (0..n).all(|i| a.mark(i) == b.mark(perm[i]))
            && (0..n).all(|i| {
                (i + 1..n).all(|j| a.adjacent(i, j) == b.adjacent(perm[i], perm[j]))
            });
        if ok {
            return Ok(Some(MarkedEmbedding { map: perm }));
        }
    }
    Ok(None)
}

/// Maximum bipartite matching (Kuhn's augmenting paths) on a boolean
/// incidence pattern; returns a full rows-to-columns matching if one exists.
pub fn bipartite_matching(pattern: &[Vec<bool>]) -> Option<Vec<usize>> {
    let rows = pattern.len();
    let cols = pattern.first().map_or(0, Vec::len);
    let mut col_owner: Vec<Option<usize>> = vec![None; cols];

    fn augment(
        r: usize,
        pattern: &[Vec<bool>],
        col_owner: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for c in 0..visited.len() {
            if pattern[r][c] && !visited[c] {
                visited[c] = true;
                match col_owner[c] {
                    None => {
                        col_owner[c] = Some(r);
                        return true;
                    }
                    Some(owner) => {
                        if augment(owner, pattern, col_owner, visited) {
                            col_owner[c] = Some(r);
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    for r in 0..rows {
        let mut visited = vec![false; cols];
        if !augment(r, pattern, &mut col_owner, &mut visited) {
            return None;
        }
    }
    let mut row_to_col = vec![0; rows];
    for (c, owner) in col_owner.iter().enumerate() {
        if let Some(r) = *owner {
            row_to_col[r] = c;
        }
    }
    Some(row_to_col)
}
