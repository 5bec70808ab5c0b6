//! Generation and exact analysis of weak abelian periodicity in infinite words.
//!
//! An infinite word is *weak abelian periodic* (WAP) when it factorizes into
//! finite blocks that all share the same letter frequencies. This crate
//! provides
//!
//! * word generators: morphic fixed points, Toeplitz words, periodic and
//!   block-built words ([`words`]);
//! * the lattice-path ("graphic") view of a word and exact integer
//!   discrepancy profiles along rational-slope lines ([`graphic`]);
//! * prefix-based analyzers for frequencies, balance, WAP witnesses and
//!   abelian periods ([`analysis`]);
//! * exact decision procedures for WAP and bounded WAP of fixed points of
//!   binary uniform morphisms, plus an exhaustive census ([`deciders`]);
//! * shift-orbit tooling: occurrences, return words and the construction of
//!   a WAP point in an orbit closure ([`subshift`]);
//! * the `wap` command line front end ([`cli`]).
//!
//! All verdict-carrying arithmetic is exact: integers and reduced rationals,
//! never floating point.

pub mod analysis;
pub mod cli;
pub mod deciders;
pub mod error;
pub mod graphic;
pub mod subshift;
pub mod words;

pub use error::{Error, Result};
pub use graphic::Rational;
pub use words::{FiniteWord, Letter, Morphism, WordStream};
