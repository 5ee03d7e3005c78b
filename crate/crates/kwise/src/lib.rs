//! d-wise independent sample spaces: coding-theoretic constructions, exact
//! independence verification, and entropy lower bounds.
//!
//! The crate is organized around four pieces:
//!
//! - [`space`] — finite joint distributions with exact rational
//!   probabilities, Shannon entropy and min-entropy.
//! - [`construct`] — Hadamard (Sylvester/Paley), extended-Hamming, and BCH
//!   dual-code constructions of low-entropy d-wise independent spaces, plus
//!   the parity lifting that turns d-wise independence into many pairwise
//!   independent bits.
//! - [`verify`] — exhaustive, exact d-wise independence checking and the
//!   orthonormal witness matrix that certifies pairwise independence.
//! - [`bounds`] — every entropy/min-entropy lower bound as an evaluable
//!   formula, including the phase-angle solver used by the finite-outcome
//!   witness construction.
//!
//! All probability arithmetic is exact (`BigRational`); floats appear only
//! in entropies, bound values and witness matrices.

pub mod bounds;
mod comb;
pub mod construct;
pub mod rational;
pub mod space;
pub mod verify;

pub use num_rational::BigRational;
pub use space::{Marginal, SampleSpace, SpaceError};
