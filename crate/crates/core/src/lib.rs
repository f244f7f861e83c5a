//! Model checking for Halpern-Shoham interval temporal logic fragments over
//! finite Kripke structures.
//!
//! Intervals are identified with the structure's traces (non-empty finite
//! paths), atomic statements constrain the word of state labels along a trace
//! through propositional regular expressions, and a structure satisfies a
//! formula when every trace starting at the initial state does.
//!
//! The crate provides:
//!
//! * [`kripke`]: structures, traces, and the model file format.
//! * [`relang`]: propositional regular expressions and their automata.
//! * [`hsformula`]: formula syntax, parsing, and structural measures.
//! * [`summary`]: trace summaries (endpoint states plus automaton run
//!   relations) and their interning.
//! * [`bisim`]: prefix samplings, bounded prefix bisimilarity, and the
//!   trace contraction they license.
//! * [`checker`]: the certificate-based decision procedure.
//! * [`oracle`]: a direct bounded-depth evaluator used for cross-checking.
//! * [`tiling`]: generation of structure/formula pairs encoding tiling
//!   problems, used as hard benchmark instances.
//! * [`cli`]: the command line front end.

pub mod bisim;
mod bits;
pub mod checker;
pub mod cli;
pub mod hsformula;
pub mod kripke;
pub mod oracle;
pub mod relang;
pub mod summary;
#[cfg(test)]
mod testutil;
pub mod tiling;
