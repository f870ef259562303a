//! Exact-arithmetic toolkit for hyperplane arrangements in projective space:
//! general-position certification (linear and quadric), Fermat covers and
//! finite-field sampling on them, the explicit determinantal symmetric
//! differentials with all their chart identities checked modulo the cover
//! ideal, and a deterministic certificate tree for the stratified
//! hyperbolicity thresholds.
//!
//! Everything computes over exact rationals or word-size prime fields; there
//! is no floating point anywhere. Randomized verdicts always carry their
//! (prime, seed, trials) provenance and are reproducible bit for bit.

pub mod arrangement;
pub mod certify;
pub mod differentials;
pub mod error;
pub mod exactalg;
pub mod fermat;
pub mod io;
pub mod mpoly;
pub mod random;

pub use error::{Error, Result};
