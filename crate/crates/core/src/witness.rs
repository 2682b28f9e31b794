//! Reduction of arbitrary witness tuples to single-syllable witnesses:
//! cyclic reduction, max-order block filtering, the exponent matrix of the
//! filtered witnesses, and a transversal of nonzero entries in distinct
//! columns.

use crate::blocks::{block_decomposition, BlockKind};
use crate::error::{Error, Result};
use crate::marked_graph::MarkedGraph;
use crate::oracle::bipartite_matching;
use crate::words::{ElementOrder, NormalForm, Syllable};

/// Integer matrix with one row per filtered witness and one column per
/// target vertex; entry (i, j) is the exponent of vertex j's syllable in
/// the i-th witness, 0 if absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentMatrix {
    pub entries: Vec<Vec<i64>>,
    /// Target marked-graph vertex ids labelling the columns.
    pub columns: Vec<String>,
}

/// One chosen column per row, pairwise distinct, each entry nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transversal {
    pub columns: Vec<usize>,
}

impl Transversal {
    pub fn validate(&self, m: &ExponentMatrix) -> bool {
        if self.columns.len() != m.entries.len() {
            return false;
        }
        let mut seen = std::collections::BTreeSet::new();
        self.columns.iter().enumerate().all(|(i, &j)| {
            j < m.columns.len() && m.entries[i][j] != 0 && seen.insert(j)
        })
    }
}

fn syllable_order(w: &NormalForm, s: Syllable) -> u64 {
    let full = w.ctx().order(s.vertex);
    full / gcd(full, s.exp)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Cyclically reduced cores of the witnesses. A core with a regular block
/// has infinite order and cannot satisfy condition (1); that is an error.
pub fn to_cyclically_reduced_witnesses(a: &[NormalForm]) -> Result<Vec<NormalForm>> {
    a.iter()
        .map(|w| {
            let core = w.cyclically_reduce().core;
            let decomp = block_decomposition(&core)?;
            if decomp.blocks.iter().any(|b| b.kind == BlockKind::Regular) {
                return Err(Error::InfiniteOrder(core.render()));
            }
            Ok(core)
        })
        .collect()
}

/// The product of exactly the blocks of the given order. Requires a
/// cyclically reduced core with only singular blocks whose order is the
/// target order.
pub fn filter_max_order_blocks(c: &NormalForm, target_order: u64) -> Result<NormalForm> {
    let decomp = block_decomposition(c)?;
    if decomp.blocks.iter().any(|b| b.kind == BlockKind::Regular) {
        return Err(Error::InfiniteOrder(c.render()));
    }
    match c.order_of() {
        ElementOrder::Finite(o) if o == target_order => {}
        other => {
            return Err(Error::Precondition(format!(
                "order of `{}` is {other:?}, expected {target_order}",
                c.render()
            )))
        }
    }
    let kept: Vec<Syllable> = c
        .syllables()
        .iter()
        .copied()
        .filter(|&s| syllable_order(c, s) == target_order)
        .collect();
    Ok(NormalForm::from_raw(c.ctx(), kept))
}

/// Exponent matrix of filtered witnesses over the target vertex set.
pub fn exponent_matrix(d: &[NormalForm], target: &MarkedGraph) -> Result<ExponentMatrix> {
    let columns: Vec<String> = (0..target.len()).map(|j| target.vertex(j).id.clone()).collect();
    let mut entries = Vec::with_capacity(d.len());
    for w in d {
        let decomp = block_decomposition(w)?;
        if decomp.blocks.iter().any(|b| b.kind == BlockKind::Regular) {
            return Err(Error::InfiniteOrder(w.render()));
        }
        let mut row = vec![0i64; target.len()];
        for s in w.syllables() {
            row[s.vertex] = s.exp as i64;
        }
        entries.push(row);
    }
    Ok(ExponentMatrix { entries, columns })
}

fn to_i128(entries: &[Vec<i64>]) -> Vec<Vec<i128>> {
    entries.iter().map(|r| r.iter().map(|&e| e as i128).collect()).collect()
}

/// Rank over the rationals by fraction-free (Bareiss) elimination with full
/// pivoting; returns the rank and the columns used as pivots.
fn bareiss(mut a: Vec<Vec<i128>>) -> (usize, Vec<usize>) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivot_cols = Vec::new();
    let mut used_col = vec![false; cols];
    let mut rank = 0;
    let mut prev = 1i128;
    while rank < rows {
        // full pivoting: any nonzero entry in the remaining submatrix
        let mut pivot = None;
        'search: for c in 0..cols {
            if used_col[c] {
                continue;
            }
            for r in rank..rows {
                if a[r][c] != 0 {
                    pivot = Some((r, c));
                    break 'search;
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        a.swap(rank, pr);
        used_col[pc] = true;
        pivot_cols.push(pc);
        for r in rank + 1..rows {
            for c in 0..cols {
                if c == pc || used_col[c] && c != pc {
                    continue;
                }
                a[r][c] = (a[rank][pc] * a[r][c] - a[r][pc] * a[rank][c]) / prev;
            }
            a[r][pc] = 0;
        }
        prev = a[rank][pc];
        rank += 1;
    }
    (rank, pivot_cols)
}

/// Rank over the rationals, exact integer arithmetic.
pub fn rank_exact(m: &ExponentMatrix) -> usize {
    bareiss(to_i128(&m.entries)).0
}

fn submatrix_rank(entries: &[Vec<i64>], rows: &[usize], cols: &[usize]) -> usize {
    let sub: Vec<Vec<i128>> = rows
        .iter()
        .map(|&r| cols.iter().map(|&c| entries[r][c] as i128).collect())
        .collect();
    bareiss(sub).0
}

/// A transversal of a rank-k matrix: k columns with a nonzero minor are
/// selected by pivoted elimination, then assigned to rows by cofactor
/// descent, always taking the least column with a nonzero entry whose
/// complementary minor is nonsingular.
pub fn select_transversal(m: &ExponentMatrix) -> Result<Transversal> {
    let k = m.entries.len();
    let (rank, mut pivot_cols) = bareiss(to_i128(&m.entries));
    if rank < k {
        return Err(Error::RankDeficient { rank, expected: k });
    }
    pivot_cols.sort_unstable();

    fn descend(entries: &[Vec<i64>], rows: &[usize], cols: &[usize]) -> Option<Vec<usize>> {
        let Some((&row, rest_rows)) = rows.split_first() else {
            return Some(Vec::new());
        };
        for (ci, &c) in cols.iter().enumerate() {
            if entries[row][c] == 0 {
                continue;
            }
            let rest_cols: Vec<usize> =
                cols.iter().enumerate().filter(|&(i, _)| i != ci).map(|(_, &c)| c).collect();
            if submatrix_rank(entries, rest_rows, &rest_cols) == rest_rows.len() {
                if let Some(mut rest) = descend(entries, rest_rows, &rest_cols) {
                    rest.insert(0, c);
                    return Some(rest);
                }
            }
        }
        None
    }

    let rows: Vec<usize> = (0..k).collect();
    let columns = descend(&m.entries, &rows, &pivot_cols)
        .expect("a nonsingular matrix has a transversal by cofactor expansion");
    let t = Transversal { columns };
    debug_assert!(t.validate(m));
    debug_assert!(transversal_feasible(m, &pivot_cols));
    Ok(t)
}

/// Matching-based feasibility oracle on the nonzero pattern of the selected
/// columns; cross-checks the cofactor construction.
fn transversal_feasible(m: &ExponentMatrix, cols: &[usize]) -> bool {
    let pattern: Vec<Vec<bool>> = m
        .entries
        .iter()
        .map(|row| cols.iter().map(|&c| row[c] != 0).collect())
        .collect();
    bipartite_matching(&pattern).is_some()
}

/// Result of the full reduction pipeline, with the intermediate matrix and
/// transversal for inspection.
#[derive(Clone, Debug)]
pub struct WitnessReduction {
    pub h: Vec<NormalForm>,
    pub matrix: ExponentMatrix,
    pub transversal: Transversal,
    pub diagnostics: Vec<String>,
}

/// Full pipeline: cyclic reduction, filtering to the blocks of each source
/// vertex's order, exponent matrix, transversal, and the chosen syllables.
pub fn witness_reduction(a: &[NormalForm], source: &MarkedGraph) -> Result<WitnessReduction> {
    if a.len() != source.len() || a.is_empty() {
        return Err(Error::Precondition(format!(
            "expected {} witnesses, got {}",
            source.len(),
            a.len()
        )));
    }
    let ctx = a[0].ctx();
    let mut diagnostics = Vec::new();
    let cores = to_cyclically_reduced_witnesses(a)?;
    for (i, (w, core)) in a.iter().zip(&cores).enumerate() {
        if w != core {
            diagnostics.push(format!("witness {}: cyclically reduced to `{}`", i + 1, core.render()));
        }
    }
    let mut ds = Vec::with_capacity(cores.len());
    for (i, core) in cores.iter().enumerate() {
        let d = filter_max_order_blocks(core, source.order(i))?;
        if &d != core {
            diagnostics.push(format!(
                "witness {}: kept order-{} blocks `{}`",
                i + 1,
                source.order(i),
                d.render()
            ));
        }
        ds.push(d);
    }
    let matrix = exponent_matrix(&ds, ctx.graph())?;
    diagnostics.push(format!("exponent matrix rank {}", rank_exact(&matrix)));
    let transversal = select_transversal(&matrix)?;
    let h: Vec<NormalForm> = transversal
        .columns
        .iter()
        .enumerate()
        .map(|(i, &j)| {
            NormalForm::generator(ctx, j, matrix.entries[i][j] as u64).expect("column in range")
        })
        .collect();
    for (i, hi) in h.iter().enumerate() {
        debug_assert_eq!(hi.order_of(), ElementOrder::Finite(source.order(i)));
    }
    Ok(WitnessReduction { h, matrix, transversal, diagnostics })
}

/// The single-syllable witnesses from the reduction pipeline.
pub fn singular_witnesses(a: &[NormalForm], source: &MarkedGraph) -> Result<Vec<NormalForm>> {
    Ok(witness_reduction(a, source)?.h)
}
