//! Computational noncommutative geometry: fuzzy spheres and Berezin
//! quantization, quantum metric estimates, Hochschild and cyclic homology of
//! finite-dimensional algebras, universal differential calculi, Clifford
//! algebras, and Hopf-axiom checks for q-deformed algebras.

pub mod calculus;
pub mod clifford;
pub mod error;
pub mod exact;
pub mod fuzzy_berezin;
pub mod homology;
pub mod hopf_rewrite;
pub mod numeric;
pub mod qmetric;
pub mod su2_reps;

pub use error::{Error, Result};
