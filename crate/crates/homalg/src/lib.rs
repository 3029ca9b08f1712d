//! Exact-arithmetic homological algebra over the rationals: chain complexes,
//! dg (co)algebras and (co)modules, cobar/bar constructions, twisted
//! extensions and Koszul duality, Cotor/Ext/Coext and spectral sequences,
//! with a catalog of rational models for standard simply-connected spaces.
//!
//! Every construction works inside an explicit degree window and tracks
//! which degrees are complete; all arithmetic is exact.

pub mod algebra;
pub mod barcobar;
pub mod check;
pub mod coalgebra;
pub mod error;
pub mod graded;
pub mod label;
pub mod lie;
pub mod linalg;
pub mod models;
pub mod record;
pub mod simplicial;
pub mod derived;
pub mod twisted;

pub use error::{Error, Result};

/// Caps the global thread pool used by the parallel per-degree loops.
/// Effective only before the first parallel computation.
pub fn set_thread_count(n: usize) -> bool {
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_ok()
}

pub use graded::DegreeWindow;
pub use label::Label;
pub use linalg::Rational;
