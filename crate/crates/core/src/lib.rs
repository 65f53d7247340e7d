//! Exact continuous valuations on finite T0 spaces and on projective
//! limits of them.
//!
//! A finite T0 space is a poset whose opens are its up-sets ([`order`]).
//! Valuations are kept as exact point weights ([`valuation`], [`value`]).
//! Projective systems over finite directed indices and ω-chains live in
//! [`projective`]; [`constructions`] builds valuations on their limits in
//! three ways and cross-checks them. [`document`] and [`cli`] are the file
//! format and the `valim` command; [`gallery`] and [`suite`] hold worked
//! examples and the seeded property suites.

// errors carry label witnesses; matrix loops read better indexed
#![allow(clippy::result_large_err, clippy::needless_range_loop)]

pub mod order;
pub mod pointset;
pub mod valuation;
pub mod value;
pub mod projective;
pub mod generate;
pub mod constructions;
pub mod gallery;
pub mod suite;
pub mod document;
pub mod cli;
