//! Exact-arithmetic tensor rank toolkit.

pub mod certificates;
pub mod constructions;
pub mod error;
pub mod linalg;
pub mod rank_bounds;
pub mod rational;
pub mod tensor;
pub mod wset;

pub use error::{Error, Result};
pub use linalg::RatMatrix;
pub use rational::Rational;
pub use tensor::{PolyForm, Tensor};
