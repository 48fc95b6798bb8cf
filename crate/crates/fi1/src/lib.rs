//! Exact computation in the monogenic free inverse semigroup.
//!
//! Elements are triples `(-a, p, b)` recording the reach and displacement
//! of a walk on the integer line. The crate provides:
//!
//! - [`element`]: triple arithmetic, word evaluation, canonical words, the
//!   D-class grading and the natural order on idempotents;
//! - [`munn`]: DOT/ASCII rendering of element trees and the idempotent grid;
//! - [`ptrans`]: partial transformations of `{0, ..., n}`, the two
//!   distinguished maps whose relation tables stop holding past the level,
//!   and the level maps used as commutativity obstructions;
//! - [`analysis`]: closure enumeration, the finite-presentability decision
//!   procedure for finitely generated subsemigroups, constructive
//!   non-presentability witnesses, and the decomposition of positive
//!   subsemigroups into numerical pieces;
//! - [`numerical`]: subsemigroups of the positive integers (membership,
//!   minimal generators, Frobenius data, minimal presentations);
//! - [`presentation`]: defining relation families, bounded derivation
//!   search, presentation synthesis and bounded verification.
//!
//! The `parallel` feature (on by default) runs the data-parallel inner
//! loops on rayon; without it every entry point falls back to the
//! sequential implementation with identical results.

pub mod analysis;
pub mod element;
pub mod error;
pub mod munn;
pub mod numerical;
pub mod presentation;
pub mod ptrans;
pub mod word;

pub use analysis::{
    classify, count_idempotents, decompose_positive, enumerate_closure, non_fp_witness,
    ClassificationReport, Decomposition, GeneratorSet, IdempotentCount, Verdict, Witness,
};
pub use element::{canonical_word, eval_word, Element, Sign};
pub use error::{Error, Result};
pub use numerical::NumericalSgp;
pub use presentation::{build_presentation, verify_presentation, Presentation};
pub use ptrans::{schein_check, PartialMap, ScheinReport};
pub use word::{Letter, Word};
