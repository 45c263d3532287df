//! Rank backends selectable by name at runtime.

use super::bareiss::rank_exact;
use super::gram::{gram_power_matrix, gram_power_matrix_mod_p};
use super::matrix::RatMatrix;
use super::modp::{check_modulus, rank_mod_p, DEFAULT_PRIME};
use super::span::kernel_vector;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Witness of a rank deficiency: a null vector of the matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelWitness {
    Exact(Vec<Rational>),
    Modular { modulus: u64, residues: Vec<u64> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOutcome {
    pub rank: usize,
    pub size: usize,
    /// `None` for exact arithmetic, otherwise the prime used.
    pub modulus: Option<u64>,
    pub witness: Option<KernelWitness>,
}

impl RankOutcome {
    pub fn is_full(&self) -> bool {
        self.rank == self.size
    }
}

pub trait RankBackend: Send + Sync {
    fn name(&self) -> &'static str;

    fn rank(&self, m: &RatMatrix) -> Result<usize>;

    /// Rank of the Gram matrix of `{u^{⊗d}}`; attaches a null vector when deficient.
    fn gram_rank(&self, vectors: &[Vec<Rational>], d: u32) -> Result<RankOutcome>;
}

pub struct ExactBackend;

impl RankBackend for ExactBackend {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn rank(&self, m: &RatMatrix) -> Result<usize> {
        Ok(rank_exact(m))
    }

    fn gram_rank(&self, vectors: &[Vec<Rational>], d: u32) -> Result<RankOutcome> {
        let g = gram_power_matrix(vectors, d)?;
        let rank = rank_exact(&g);
        let witness = (rank < vectors.len())
            .then(|| kernel_vector(&g).map(KernelWitness::Exact))
            .flatten();
        Ok(RankOutcome {
            rank,
            size: vectors.len(),
            modulus: None,
            witness,
        })
    }
}

pub struct ModularBackend {
    pub modulus: u64,
}

impl RankBackend for ModularBackend {
    fn name(&self) -> &'static str {
        "modular"
    }

    fn rank(&self, m: &RatMatrix) -> Result<usize> {
        rank_mod_p(m, self.modulus)
    }

    fn gram_rank(&self, vectors: &[Vec<Rational>], d: u32) -> Result<RankOutcome> {
        let g = gram_power_matrix_mod_p(vectors, d, self.modulus)?;
        let rank = g.rank();
        let witness = (rank < vectors.len())
            .then(|| {
                g.kernel_vector().map(|residues| KernelWitness::Modular {
                    modulus: self.modulus,
                    residues,
                })
            })
            .flatten();
        Ok(RankOutcome {
            rank,
            size: vectors.len(),
            modulus: Some(self.modulus),
            witness,
        })
    }
}

pub const BACKEND_NAMES: [&str; 2] = ["exact", "modular"];

/// Looks up a backend by name; `modulus` is used by the modular backend only.
pub fn backend(name: &str, modulus: Option<u64>) -> Result<Box<dyn RankBackend>> {
    match name {
        "exact" => Ok(Box::new(ExactBackend)),
        "modular" => {
            let p = modulus.unwrap_or(DEFAULT_PRIME);
            check_modulus(p)?;
            Ok(Box::new(ModularBackend { modulus: p }))
        }
        other => Err(Error::UnknownName(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_int(x)).collect()
    }

    #[test]
    fn registry_lookup() {
        for name in BACKEND_NAMES {
            assert_eq!(backend(name, None).unwrap().name(), name);
        }
        assert!(matches!(
            backend("floating", None),
            Err(Error::UnknownName(_))
        ));
        assert!(matches!(
            backend("modular", Some(15)),
            Err(Error::NotPrime(15))
        ));
    }

    #[test]
    fn duplicate_vector_gives_witness() {
        let vs = vec![ints(&[1, 2]), ints(&[3, 1]), ints(&[1, 2])];
        for name in BACKEND_NAMES {
            let out = backend(name, None).unwrap().gram_rank(&vs, 3).unwrap();
            assert_eq!(out.rank, 2, "{name}");
            assert!(out.witness.is_some());
        }
    }
}
