//! Exact and prime-field dense linear algebra.

pub mod backend;
pub mod bareiss;
pub mod gram;
pub mod matrix;
pub mod modp;
pub mod span;

pub use backend::{
    backend, ExactBackend, KernelWitness, ModularBackend, RankBackend, RankOutcome, BACKEND_NAMES,
};
pub use bareiss::rank_exact;
pub use gram::{gram_power_matrix, gram_power_matrix_mod_p};
pub use matrix::RatMatrix;
pub use modp::{is_prime, rank_mod_p, PrimeFieldMatrix, DEFAULT_PRIME};
pub use span::{in_span, kernel_vector, solve, EchelonBasis, Rref};
