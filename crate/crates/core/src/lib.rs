//! Computation in graph products of finite abelian groups.
//!
//! A graph product interpolates between the free product (no edges) and the
//! direct product (complete graph) of its vertex groups; right-angled
//! Coxeter groups are the special case where every vertex group is `Z_2`.
//! This crate builds the marked graph of such a group, computes canonical
//! normal forms, block decompositions and centralizers, constructs the
//! characteristic exists-forall sentence of a group, and decides elementary
//! equivalence of two graph products by marked-graph isomorphism.

pub mod blocks;
pub mod cli;
pub mod error;
pub mod logic;
pub mod marked_graph;
pub mod oracle;
pub mod spec;
pub mod witness;
pub mod words;

pub use error::{Error, Result};
pub use marked_graph::{
    build_marked_graph, decide_elementary_equivalence, find_marked_embedding, marked_isomorphic,
    EeVerdict, Mark, MarkedEmbedding, MarkedGraph,
};
pub use spec::GroupProductSpec;
pub use words::{parse_word, ElementOrder, GroupContext, NormalForm, Syllable};
