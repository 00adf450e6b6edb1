//! Boxes, triangles and the unfolding of an automaton.
//!
//! Triangles of height `h` are assembled from boxes of smaller height;
//! boxes over a connected action set are assembled from several linked
//! copies of the triangles over the same set, boxes over an unconnected
//! set from boxes over its components. Every piece carries a morphism back
//! to the source automaton.

pub mod audit;
mod builder;
mod marked;
mod piece;

pub use builder::{
    unfold, AddedTransition, ConnectedBoxLog, MissingSet, Unfolder, DEFAULT_STATE_LIMIT,
};
pub use marked::MarkedState;
pub use piece::{min_rank, PieceKind, UnfoldingPiece};

#[cfg(test)]
mod tests;
