//! Exact tools for the real-Clifford+CH fragment of quantum circuits.
//!
//! Everything here is computed over the ring Z[1/√2] with arbitrary-precision
//! integers, so every equality test in the crate is exact:
//!
//! - [`ring`]: the ring elements and dense matrices over them.
//! - [`circuit`]: the circuit IR (primitive + macro gates) and its semantics.
//! - [`words`]: words over the one/two-level generator set G_N and the
//!   paired set P_N, with semantics and parity counters.
//! - [`synth`]: exact synthesis of any element of U_N(Z[1/√2]) into a
//!   generator word, and into paired generators when the parities are even.
//! - [`graycode`]: the reflected Gray code and its inverse.
//! - [`codec`]: circuit↔word translation (2-qubit and n-qubit, Gray-indexed).
//! - [`normalform`]: canonical forms for H-free and low-H words and for
//!   1-qubit {H,Z} circuits.
//! - [`axioms`]: machine-readable equation catalogs, exact soundness
//!   checking, and the Reidemeister–Schreier transport generator.

pub mod axioms;
pub mod circuit;
pub mod codec;
pub mod graycode;
pub mod normalform;
pub mod ring;
pub mod selftest;
pub mod synth;
pub mod words;

pub use ring::{RingElem, RingMatrix};
pub use synth::matrix_parities;
