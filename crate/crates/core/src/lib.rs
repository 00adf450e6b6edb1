//! Unfolding of asynchronous systems into non-deterministic asynchronous
//! automata over Mazurkiewicz traces, with bounded-language oracles for the
//! construction's correctness properties.

pub mod alphabet;
pub mod asyncauto;
pub mod automaton;
pub mod cli;
mod error;
pub mod harness;
pub mod par;
pub mod synthesis;
pub mod trace;
pub mod unfold;

pub use alphabet::{Action, ActionSet, IndependenceAlphabet, Word};
pub use asyncauto::{AsyncAutomaton, Distribution, ExplicitRelations, GlobalState, LocalRelations};
pub use automaton::{check_morphism, Automaton, IdViolation, MorphismMap, StateId, Transition};
pub use error::{Error, Result};
pub use par::Strategy;
pub use synthesis::{
    build_extended, extend_alphabet, process_reach, project_rho, synthesize, ExtendedAlphabet,
    ReachRelation, SynthesisBundle,
};
pub use unfold::{unfold, Unfolder, UnfoldingPiece};
