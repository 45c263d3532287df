use std::collections::BTreeMap;

use super::{next_index, Tensor, TensorBuilder};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Block of a zero-based index in a clone with block size `n`: 0 for `E`, 1 for `ℰ`.
pub fn block_of(i: usize, n: usize) -> usize {
    usize::from(i >= n)
}

fn check_binary(t: &Tensor) -> Result<()> {
    if t.dims().iter().any(|&d| d != 2) {
        return Err(Error::NotBinary(t.dims().to_vec()));
    }
    Ok(())
}

/// The `n` clone: every index `k` of the result maps to block `E = {1..n}` or
/// `ℰ = {n+1..2n}`, and the entry is the binary entry of the block tuple.
pub fn n_clone(t: &Tensor, n: usize) -> Result<Tensor> {
    check_binary(t)?;
    let d = t.order();
    let mut b = TensorBuilder::new(vec![2 * n; d])?;
    if n == 0 {
        return Ok(b.build());
    }
    let inner = vec![n; d];
    let mut idx = vec![0usize; d];
    for (cell, v) in t.nonzeros0() {
        let mut pos = vec![0usize; d];
        loop {
            for k in 0..d {
                idx[k] = cell[k] * n + pos[k];
            }
            b.set0(&idx, v.clone());
            if !next_index(&mut pos, &inner) {
                break;
            }
        }
    }
    Ok(b.build())
}

/// Recovers the binary tensor `U` with `t = clone(U, n)`, if there is one.
pub fn is_clone(t: &Tensor, n: usize) -> Result<Option<Tensor>> {
    if n == 0 || t.dims().iter().any(|&d| d != 2 * n) {
        return Err(Error::DimensionMismatch(format!(
            "dims {:?} are not all 2n = {}",
            t.dims(),
            2 * n
        )));
    }
    let d = t.order();
    let mut cells: BTreeMap<Vec<usize>, (Rational, u128)> = BTreeMap::new();
    for (idx, v) in t.nonzeros0() {
        let cell: Vec<usize> = idx.iter().map(|&i| block_of(i, n)).collect();
        let slot = cells.entry(cell).or_insert_with(|| (v.clone(), 0));
        if &slot.0 != v {
            return Ok(None);
        }
        slot.1 += 1;
    }
    let full = (n as u128).pow(d as u32);
    if cells.values().any(|(_, count)| *count != full) {
        return Ok(None);
    }
    let mut b = TensorBuilder::new(vec![2; d])?;
    for (cell, (v, _)) in cells {
        b.set0(&cell, v);
    }
    Ok(Some(b.build()))
}

/// Subtensor on the given 1-based index lists, one per mode.
pub fn restrict(t: &Tensor, blocks: &[Vec<usize>]) -> Result<Tensor> {
    if blocks.len() != t.order() {
        return Err(Error::DimensionMismatch(format!(
            "{} index lists for order-{} tensor",
            blocks.len(),
            t.order()
        )));
    }
    let mut positions: Vec<Vec<Vec<usize>>> = Vec::with_capacity(blocks.len());
    for (m, block) in blocks.iter().enumerate() {
        let size = t.dims()[m];
        let mut pos = vec![Vec::new(); size];
        for (p, &i) in block.iter().enumerate() {
            if i == 0 || i > size {
                return Err(Error::IndexOutOfRange(format!(
                    "index {i} in mode {}",
                    m + 1
                )));
            }
            pos[i - 1].push(p);
        }
        positions.push(pos);
    }
    let dims = blocks.iter().map(Vec::len).collect();
    let mut b = TensorBuilder::new(dims)?;
    for (idx, v) in t.nonzeros0() {
        let choices: Vec<&Vec<usize>> = idx.iter().zip(&positions).map(|(&i, p)| &p[i]).collect();
        if choices.iter().any(|c| c.is_empty()) {
            continue;
        }
        let sizes: Vec<usize> = choices.iter().map(|c| c.len()).collect();
        let mut pick = vec![0usize; idx.len()];
        let mut out = vec![0usize; idx.len()];
        loop {
            for k in 0..idx.len() {
                out[k] = choices[k][pick[k]];
            }
            b.set0(&out, v.clone());
            if !next_index(&mut pick, &sizes) {
                break;
            }
        }
    }
    Ok(b.build())
}

/// The all-ones tensor `𝕀(E, d)` with `|E| = size`.
pub fn ones_tensor(size: usize, d: usize) -> Result<Tensor> {
    Tensor::from_fn0(vec![size; d], |_| Rational::one())
}

/// A clone kept implicit: the binary tensor plus the block size.
#[derive(Clone, Debug)]
pub struct CloneTensor {
    base: Tensor,
    n: usize,
}

impl CloneTensor {
    pub fn new(base: Tensor, n: usize) -> Result<Self> {
        check_binary(&base)?;
        Ok(CloneTensor { base, n })
    }

    pub fn base(&self) -> &Tensor {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.base.order()
    }

    pub fn size(&self) -> usize {
        2 * self.n
    }

    /// Entry at a zero-based index of `(R^{2n})^{⊗d}`.
    pub fn get0(&self, idx: &[usize]) -> Rational {
        let cell: Vec<usize> = idx.iter().map(|&i| block_of(i, self.n)).collect();
        self.base.get0(&cell)
    }

    pub fn materialize(&self) -> Result<Tensor> {
        n_clone(&self.base, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn identity2() -> Tensor {
        Tensor::dense(vec![2, 2], vec![q(1, 1), q(0, 1), q(0, 1), q(1, 1)]).unwrap()
    }

    #[test]
    fn clone_of_identity_is_block_matrix() {
        let c = n_clone(&identity2(), 2).unwrap();
        let expected: Vec<i64> = vec![1, 1, 0, 0, 1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1];
        let expected: Vec<Rational> = expected.into_iter().map(Rational::from_int).collect();
        assert_eq!(c.dense_entries().unwrap(), expected);
        assert_eq!(is_clone(&c, 2).unwrap(), Some(identity2()));
        assert_eq!(n_clone(&identity2(), 1).unwrap(), identity2());
    }

    #[test]
    fn perturbed_clone_is_rejected() {
        let c = n_clone(&identity2(), 2).unwrap();
        let bumped = c
            .add(&Tensor::from_coo(vec![4, 4], vec![(vec![1, 2], q(1, 1))]).unwrap())
            .unwrap();
        assert_eq!(is_clone(&bumped, 2).unwrap(), None);
        let holed = c
            .sub(&Tensor::from_coo(vec![4, 4], vec![(vec![1, 2], q(1, 1))]).unwrap())
            .unwrap();
        assert_eq!(is_clone(&holed, 2).unwrap(), None);
        assert!(is_clone(&c, 3).is_err());
    }

    #[test]
    fn not_binary() {
        let t = Tensor::zeros(vec![2, 3]).unwrap();
        assert_eq!(n_clone(&t, 2), Err(Error::NotBinary(vec![2, 3])));
    }

    #[test]
    fn restrict_blocks() {
        let c = n_clone(&identity2(), 3).unwrap();
        let e: Vec<usize> = (1..=3).collect();
        assert_eq!(
            restrict(&c, &[e.clone(), e.clone()]).unwrap(),
            ones_tensor(3, 2).unwrap()
        );
        let all: Vec<usize> = (1..=6).collect();
        assert_eq!(restrict(&c, &[all.clone(), all]).unwrap(), c);
        assert!(restrict(&c, &[vec![7], vec![1]]).is_err());
    }

    #[test]
    fn implicit_matches_materialized() {
        let base = Tensor::from_coo(vec![2, 2, 2], vec![(vec![1, 2, 2], q(3, 1))]).unwrap();
        let ct = CloneTensor::new(base, 2).unwrap();
        let m = ct.materialize().unwrap();
        let full = Tensor::from_fn0(vec![4; 3], |i| ct.get0(i)).unwrap();
        assert_eq!(m, full);
    }
}
