//! Block decomposition of cyclically reduced elements and the symbolic
//! centralizer description.
//!
//! A block is a maximal sub-product whose alphabet spans a connected
//! subgraph of the non-commutation graph; blocks pairwise commute and
//! multiply back to the core. The centralizer of a cyclically reduced
//! element is generated by the vertex groups of its singular blocks, the
//! cyclic groups on its regular blocks, and the link subgroup.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::marked_graph::gamma_components;
use crate::words::{NormalForm, Syllable};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    Singular,
    Regular,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub word: NormalForm,
    pub kind: BlockKind,
}

impl Block {
    pub fn syllables(&self) -> &[Syllable] {
        self.word.syllables()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub blocks: Vec<Block>,
    pub core: NormalForm,
}

/// Decompose a cyclically reduced element into its blocks: the connected
/// components of the non-commutation graph restricted to its alphabet, each
/// collecting the core's syllables on that component. Blocks are ordered by
/// first occurrence in the core.
pub fn block_decomposition(core: &NormalForm) -> Result<BlockDecomposition> {
    if !core.is_cyclically_reduced() {
        return Err(Error::NotCyclicallyReduced(core.render()));
    }
    let support: Vec<usize> = core.alphabet().into_iter().collect();
    let comps = gamma_components(core.ctx().graph(), &support);
    let mut blocks: Vec<(usize, Block)> = Vec::new();
    for comp in comps {
        let members: BTreeSet<usize> = comp.iter().copied().collect();
        let syllables: Vec<Syllable> = core
            .syllables()
            .iter()
            .copied()
            .filter(|s| members.contains(&s.vertex))
            .collect();
        let first = core
            .syllables()
            .iter()
            .position(|s| members.contains(&s.vertex))
            .expect("component has a syllable");
        let kind = if syllables.len() == 1 { BlockKind::Singular } else { BlockKind::Regular };
        let word = NormalForm::from_raw(core.ctx(), syllables);
        blocks.push((first, Block { word, kind }));
    }
    blocks.sort_by_key(|(first, _)| *first);
    Ok(BlockDecomposition {
        blocks: blocks.into_iter().map(|(_, b)| b).collect(),
        core: core.clone(),
    })
}

/// Vertices outside the element's alphabet that are adjacent to every vertex
/// of the alphabet; they generate the link subgroup.
pub fn link_subgroup(core: &NormalForm) -> BTreeSet<usize> {
    let g = core.ctx().graph();
    let alpha = core.alphabet();
    (0..g.len())
        .filter(|v| !alpha.contains(v) && alpha.iter().all(|&u| g.adjacent(*v, u)))
        .collect()
}

/// Symbolic generator description of the centralizer of a cyclically reduced
/// element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralizerDescription {
    /// Vertex ids (indices) of the singular blocks' vertex groups.
    pub vertex_factors: Vec<usize>,
    /// Regular blocks, each generating an infinite cyclic factor.
    pub cyclic_factors: Vec<NormalForm>,
    /// Vertices generating the link subgroup.
    pub link_vertices: Vec<usize>,
}

impl CentralizerDescription {
    /// One generator per factor, as normal forms.
    pub fn generators(&self, core: &NormalForm) -> Vec<NormalForm> {
        let ctx = core.ctx();
        let mut gens = Vec::new();
        for &v in &self.vertex_factors {
            gens.push(NormalForm::generator(ctx, v, 1).expect("vertex in range"));
        }
        gens.extend(self.cyclic_factors.iter().cloned());
        for &v in &self.link_vertices {
            gens.push(NormalForm::generator(ctx, v, 1).expect("vertex in range"));
        }
        gens
    }
}

/// The centralizer of a cyclically reduced element, per its block
/// decomposition and link subgroup.
pub fn centralizer(core: &NormalForm) -> Result<CentralizerDescription> {
    let decomp = block_decomposition(core)?;
    let mut vertex_factors = Vec::new();
    let mut cyclic_factors = Vec::new();
    for block in decomp.blocks {
        match block.kind {
            BlockKind::Singular => vertex_factors.push(block.syllables()[0].vertex),
            BlockKind::Regular => cyclic_factors.push(block.word),
        }
    }
    Ok(CentralizerDescription {
        vertex_factors,
        cyclic_factors,
        link_vertices: link_subgroup(core).into_iter().collect(),
    })
}

/// True iff the two elements commute: `uv = vu` on canonical forms.
pub fn commutes(u: &NormalForm, v: &NormalForm) -> Result<bool> {
    Ok(u.multiply(v)? == v.multiply(u)?)
}
