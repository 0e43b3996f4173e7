//! Exact quadratic, hermitian and quaternion form machinery, with decision
//! procedures for isotropy, hyperbolicity, isometry and Pfister similarity,
//! and executable checks for totally decomposable symplectic and unitary
//! involutions.

pub mod algebras;
pub mod cli;
pub mod error;
pub mod fields;
pub mod forms;
pub mod hermitian;
pub mod involutions;
pub mod linalg;

pub use error::{Error, Result};
