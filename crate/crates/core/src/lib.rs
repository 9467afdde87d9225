//! Bound certification for probabilistic while-programs.
//!
//! The crate is organised around the pipeline a certificate check walks
//! through:
//!
//! * [`syntax`] — the pGCL dialect, the expectation language, state domains,
//!   and their parsers / printers.
//! * [`algebra`] — extended-real values, expectation evaluation,
//!   substitution, and pointwise comparison over finite domains.
//! * [`transformers`] — weakest-preexpectation (`wp`) and expected-runtime
//!   (`ert`) transformers: symbolic on loop-free code, characteristic
//!   functions for loops, and a numeric least-fixed-point engine.
//! * [`simulator`] — a seeded Monte-Carlo interpreter used as an independent
//!   cross-check on every verdict.
//! * [`certificates`] — the proof rules themselves (Park induction upper
//!   bounds, optional-stopping lower bounds, bounded-expectation lower
//!   bounds, and the expected-runtime lower bound), each of which checks its
//!   side conditions mechanically and reports witnesses on failure.

pub mod algebra;
pub mod certificates;
pub mod simulator;
pub mod syntax;
pub mod transformers;
