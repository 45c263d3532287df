//! The symmetric adjoining of the order-6 set to the clone of `x^6 - 3y^6`,
//! kept implicit behind an entry oracle.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::tensor::{sym_power, CloneTensor, Tensor, TensorBuilder};
use crate::wset::{build_w_order6, WSet};

/// `SAdj(C, {u^{⊗5} : u ∈ W})` where `C` is the `2n` clone of `x^6 - 3y^6`.
#[derive(Clone, Debug)]
pub struct ImplicitCounterexample {
    core: CloneTensor,
    vectors: Vec<Vec<Rational>>,
    w: WSet,
}

/// Sizes and rank bookkeeping of the assembled tensor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    pub n: usize,
    pub order: usize,
    pub core_size: usize,
    pub w1: usize,
    pub w: usize,
    pub dims: usize,
    pub rank: usize,
    pub symmetric_rank: usize,
    pub border_rank_upper: usize,
    pub reduced_dim: usize,
}

/// The binary tensor of `x^6 - 3y^6`.
pub fn binary_sextic() -> Tensor {
    let mut b = TensorBuilder::new(vec![2; 6]).expect("64 entries");
    b.set0(&[0; 6], Rational::one());
    b.set0(&[1; 6], Rational::from_int(-3));
    b.build()
}

impl ImplicitCounterexample {
    /// Adjoins the fifth powers of `w` to the clone core of size `4n`.
    pub fn new(w: WSet) -> Result<Self> {
        if w.order != 5 {
            return Err(Error::DegreeMismatch {
                expected: 5,
                found: w.order,
            });
        }
        if let Some(v) = w.vectors().find(|v| v.u.len() != 4 * w.n) {
            return Err(Error::BadLength(v.u.len()));
        }
        let core = CloneTensor::new(binary_sextic(), 2 * w.n)?;
        let vectors = w.vectors().map(|v| v.u.clone()).collect();
        Ok(ImplicitCounterexample { core, vectors, w })
    }

    pub fn n(&self) -> usize {
        self.w.n
    }

    pub fn core(&self) -> &CloneTensor {
        &self.core
    }

    pub fn wset(&self) -> &WSet {
        &self.w
    }

    /// Size of every mode: `4n + |W|`.
    pub fn dim(&self) -> usize {
        self.core.size() + self.vectors.len()
    }

    /// Entry at a zero-based index: the core entry when all indices are core
    /// indices, `Π u_a` over the other five when exactly one index is the
    /// adjoined index `a`, and zero otherwise.
    pub fn entry0(&self, idx: &[usize]) -> Rational {
        let base = self.core.size();
        let mut adjoined = idx.iter().enumerate().filter(|(_, &i)| i >= base);
        match (adjoined.next(), adjoined.next()) {
            (None, _) => self.core.get0(idx),
            (Some((pos, &a)), None) => {
                let u = &self.vectors[a - base];
                let mut p = Rational::one();
                for (k, &i) in idx.iter().enumerate() {
                    if k != pos {
                        if u[i].is_zero() {
                            return Rational::zero();
                        }
                        p *= &u[i];
                    }
                }
                p
            }
            _ => Rational::zero(),
        }
    }

    /// Entry at a 1-based index.
    pub fn entry(&self, idx: &[usize]) -> Result<Rational> {
        let dim = self.dim();
        if idx.len() != 6 || idx.iter().any(|&i| i == 0 || i > dim) {
            return Err(Error::IndexOutOfRange(format!(
                "{idx:?} in a tensor of order 6 with modes of size {dim}"
            )));
        }
        let zero_based: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        Ok(self.entry0(&zero_based))
    }

    /// The fifth powers `u^{⊗5}` as explicit tensors, in adjoining order.
    pub fn adjoined_tensors(&self) -> Vec<Tensor> {
        self.vectors.iter().map(|u| sym_power(u, 5)).collect()
    }

    pub fn report(&self) -> CounterexampleReport {
        let w = self.vectors.len();
        let dims = self.dim();
        CounterexampleReport {
            n: self.w.n,
            order: 6,
            core_size: self.core.size(),
            w1: self.w.w1.len(),
            w,
            dims,
            rank: 1 + 6 * w,
            symmetric_rank: 2 + 6 * w,
            border_rank_upper: 2 + 2 * w,
            reduced_dim: dims - 2,
        }
    }
}

pub fn assemble_counterexample(n: usize) -> Result<ImplicitCounterexample> {
    if n < 7 {
        return Err(Error::NTooSmall { n, min: 7 });
    }
    ImplicitCounterexample::new(build_w_order6(n)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_cases() {
        let mut w = build_w_order6(5).unwrap();
        w.w1.truncate(2);
        w.w2.truncate(1);
        let t = ImplicitCounterexample::new(w).unwrap();
        assert_eq!(t.dim(), 23);
        assert_eq!(t.entry(&[1; 6]).unwrap(), Rational::one());
        assert_eq!(t.entry(&[20; 6]).unwrap(), Rational::from_int(-3));
        assert_eq!(t.entry(&[1, 1, 1, 1, 1, 20]).unwrap(), Rational::zero());
        // First vector is (α_1+...+α_4 | 0): ones at positions 1..8.
        assert_eq!(t.entry(&[21, 1, 2, 3, 4, 8]).unwrap(), Rational::one());
        assert_eq!(t.entry(&[1, 21, 2, 3, 4, 9]).unwrap(), Rational::zero());
        assert_eq!(t.entry(&[21, 21, 1, 1, 1, 1]).unwrap(), Rational::zero());
        assert!(t.entry(&[24, 1, 1, 1, 1, 1]).is_err());
    }

    #[test]
    fn needs_seven() {
        assert_eq!(
            assemble_counterexample(6).unwrap_err(),
            Error::NTooSmall { n: 6, min: 7 }
        );
    }
}
