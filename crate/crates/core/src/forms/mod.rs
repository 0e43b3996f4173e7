//! Bilinear and quadratic forms: constructors, Pfister forms, tensor
//! products, Witt decomposition, invariants, isometry and similarity.

pub mod bilinear;
pub mod invariants;
pub mod pfister;
pub mod quadratic;
pub mod witt;

pub use bilinear::{bilinear_pfister, diagonal_bilinear, tensor_bb, BilinearForm};
pub use invariants::{invariants, Invariants};
pub use pfister::{
    binary_quadratic, pfister_similarity, quadratic_pfister, PfisterCertificate, PfisterObstruction, PfisterSimilarity,
};
pub use quadratic::{tensor, QuadraticForm};
pub use witt::{global_index, is_hyperbolic, isometric, witt_decompose, witt_index, WittDecomposition};
