//! Construction, analysis, and decoding of binary triorthogonal CSS codes.
//!
//! The crate is organized around a small dense GF(2) linear-algebra kernel
//! ([`gf2`]) on top of which sit:
//!
//! - [`analysis`] — weight enumerators, Krawtchouk/MacWilliams transforms,
//!   triorthogonality checks, and CSS code assembly with exact quantum
//!   distance computation,
//! - [`ilp`] — an integer feasibility search that constructs even-weight
//!   triorthogonal matrices with a prescribed dual minimum distance,
//!   optionally reduced by a cyclic column-type symmetry,
//! - [`channel`] — deterministic, seedable dephasing-channel sampling,
//! - [`decoder`] — bounded-distance analytics, min-sum belief propagation
//!   with ordered-statistics post-processing, and a guess-based syndrome
//!   decoder, all adapted to decoding up to stabilizers,
//! - [`cost`] — binary-operation cost estimates for the decoders,
//! - [`sim`] — a Monte Carlo logical-error-rate harness plus an exhaustive
//!   exact-LER oracle for small codes,
//! - [`io`] — the plain-text matrix file format used by the CLI.
//!
//! With the `parallel` feature (default) the Monte Carlo harness, the exact
//! LER oracle, and weight-distribution enumeration run on rayon; the
//! sequential fallbacks remain available as `*_sequential` entry points and
//! are guaranteed to produce bit-identical results.

pub mod analysis;
pub mod channel;
pub mod cost;
pub mod decoder;
pub mod gf2;
pub mod ilp;
pub mod io;
pub mod sim;
