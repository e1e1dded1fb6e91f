//! Cyclic sequent calculus for the provability logic GL.
//!
//! * [`formula`]: NNF formulas, concrete syntax, marked-literal vocabularies.
//! * [`sequent`]: multiset sequents and split sequents.
//! * [`proofs`]: proof certificates and their checkers.
//! * [`prover`]: circular and GL_Seq proof search.
//! * [`interpolation`]: Lyndon interpolants from split circular proofs.
//! * [`oracle`]: Kripke semantics over finite strict partial orders.
//! * [`corpus`]: deterministic random formula generation.
//! * [`suites`]: extensional admissibility checks over a corpus.

pub mod corpus;
pub mod formula;
pub mod interpolation;
pub mod oracle;
pub mod proofs;
pub mod prover;
pub mod sequent;
pub mod suites;

pub use formula::{parse, render, Formula};
pub use sequent::{Sequent, SplitSequent};
