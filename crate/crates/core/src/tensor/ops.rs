use std::collections::BTreeMap;

use super::poly::{distinct_permutations, orbit_size_of_index};
use super::{check_modes, next_index, Tensor, TensorBuilder, DENSE_LIMIT};
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::rational::Rational;

/// The slice obtained by fixing mode `j` to index `i` (both 1-based).
pub fn slice(t: &Tensor, j: usize, i: usize) -> Result<Tensor> {
    multi_slice(t, &[j], &[i])
}

/// Fixes each mode `modes[k]` to `idx[k]` (1-based); the remaining modes keep
/// their order. Fixing every mode gives an order-0 tensor holding the entry.
pub fn multi_slice(t: &Tensor, modes: &[usize], idx: &[usize]) -> Result<Tensor> {
    let d = t.order();
    check_modes(d, modes)?;
    if modes.len() != idx.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} modes but {} indices",
            modes.len(),
            idx.len()
        )));
    }
    let mut fixed: Vec<Option<usize>> = vec![None; d];
    for (&m, &i) in modes.iter().zip(idx) {
        if i == 0 || i > t.dims()[m - 1] {
            return Err(Error::IndexOutOfRange(format!(
                "index {i} in mode {m} of size {}",
                t.dims()[m - 1]
            )));
        }
        fixed[m - 1] = Some(i - 1);
    }
    let free: Vec<usize> = (0..d).filter(|&h| fixed[h].is_none()).collect();
    let dims: Vec<usize> = free.iter().map(|&h| t.dims()[h]).collect();
    let mut b = TensorBuilder::new(dims)?;
    let mut out = vec![0usize; free.len()];
    for (full, v) in t.nonzeros0() {
        if fixed
            .iter()
            .zip(&full)
            .all(|(f, &x)| f.is_none_or(|fi| fi == x))
        {
            for (o, &h) in out.iter_mut().zip(&free) {
                *o = full[h];
            }
            b.set0(&out, v.clone());
        }
    }
    Ok(b.build())
}

fn complement(d: usize, modes: &[usize]) -> Vec<usize> {
    (1..=d).filter(|m| !modes.contains(m)).collect()
}

fn group_index(full: &[usize], modes: &[usize], dims: &[usize]) -> usize {
    modes
        .iter()
        .fold(0usize, |acc, &m| acc * dims[m - 1] + full[m - 1])
}

/// The flattening `T^(J)`: rows run over the modes in `J`, columns over the
/// rest, both in row-major order. An empty `J` gives the vectorisation as a
/// single row.
pub fn flatten(t: &Tensor, modes: &[usize]) -> Result<RatMatrix> {
    let d = t.order();
    check_modes(d, modes)?;
    let mut rows_modes = modes.to_vec();
    rows_modes.sort_unstable();
    let cols_modes = complement(d, &rows_modes);
    let size = |ms: &[usize]| {
        ms.iter()
            .map(|&m| t.dims()[m - 1] as u128)
            .product::<u128>()
    };
    let (r, c) = (size(&rows_modes), size(&cols_modes));
    if r * c > DENSE_LIMIT {
        return Err(Error::TooLarge(r * c));
    }
    let mut m = RatMatrix::zeros(r as usize, c as usize);
    for (full, v) in t.nonzeros0() {
        m.set(
            group_index(&full, &rows_modes, t.dims()),
            group_index(&full, &cols_modes, t.dims()),
            v.clone(),
        );
    }
    Ok(m)
}

/// Regroups modes: block `k` of the partition becomes mode `k` of the result,
/// indexed row-major over the block's modes in increasing order.
pub fn unfold(t: &Tensor, partition: &[Vec<usize>]) -> Result<Tensor> {
    let d = t.order();
    let all: Vec<usize> = partition.iter().flatten().copied().collect();
    check_modes(d, &all).map_err(|e| Error::InvalidPartition(e.to_string()))?;
    if all.len() != d || partition.iter().any(Vec::is_empty) {
        return Err(Error::InvalidPartition(format!(
            "{partition:?} does not cover modes 1..{d} with nonempty blocks"
        )));
    }
    let blocks: Vec<Vec<usize>> = partition
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.sort_unstable();
            b
        })
        .collect();
    let dims = blocks
        .iter()
        .map(|b| b.iter().map(|&m| t.dims()[m - 1]).product())
        .collect();
    let mut builder = TensorBuilder::new(dims)?;
    for (full, v) in t.nonzeros0() {
        let idx: Vec<usize> = blocks
            .iter()
            .map(|b| group_index(&full, b, t.dims()))
            .collect();
        builder.set0(&idx, v.clone());
    }
    Ok(builder.build())
}

/// `v_1 ⊗ ... ⊗ v_d`.
pub fn outer(vectors: &[Vec<Rational>]) -> Tensor {
    let dims: Vec<usize> = vectors.iter().map(Vec::len).collect();
    let supports: Vec<Vec<usize>> = vectors
        .iter()
        .map(|v| (0..v.len()).filter(|&i| !v[i].is_zero()).collect())
        .collect();
    let mut b = TensorBuilder::new(dims).expect("outer product dims overflow");
    if supports.iter().any(Vec::is_empty) {
        return b.build();
    }
    let sizes: Vec<usize> = supports.iter().map(Vec::len).collect();
    let mut pos = vec![0usize; vectors.len()];
    let mut idx = vec![0usize; vectors.len()];
    loop {
        let mut v = Rational::one();
        for (k, &p) in pos.iter().enumerate() {
            idx[k] = supports[k][p];
            v *= &vectors[k][idx[k]];
        }
        b.set0(&idx, v);
        if !next_index(&mut pos, &sizes) {
            break;
        }
    }
    b.build()
}

/// `u^{⊗d}`.
pub fn sym_power(u: &[Rational], d: usize) -> Tensor {
    outer(&vec![u.to_vec(); d])
}

/// Average over all permutations of the modes.
pub fn symmetrize(t: &Tensor) -> Result<Tensor> {
    if !t.is_cubical() {
        return Err(Error::NonCubicalTensor(t.dims().to_vec()));
    }
    let mut b = TensorBuilder::new(t.dims().to_vec())?;
    for (full, v) in t.nonzeros0() {
        let share = v / Rational::from_bigint(orbit_size_of_index(&full));
        let mut sorted = full.clone();
        sorted.sort_unstable();
        for p in distinct_permutations(&sorted) {
            b.add0(&p, &share);
        }
    }
    Ok(b.build())
}

/// Invariance under every adjacent transposition of modes.
pub fn is_symmetric(t: &Tensor) -> Result<bool> {
    if !t.is_cubical() {
        return Err(Error::NonCubicalTensor(t.dims().to_vec()));
    }
    for (mut idx, v) in t.nonzeros0() {
        for k in 1..idx.len() {
            if idx[k - 1] != idx[k] {
                idx.swap(k - 1, k);
                let swapped = t.get0(&idx);
                idx.swap(k - 1, k);
                if &swapped != v {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// True iff `t` is nonzero and every single-mode flattening has rank one.
pub fn is_rank_one(t: &Tensor) -> bool {
    !t.is_zero() && (0..t.order()).all(|j| mode_rank_at_most_one(t, j))
}

fn mode_rank_at_most_one(t: &Tensor, j: usize) -> bool {
    let mut columns: BTreeMap<Vec<usize>, BTreeMap<usize, Rational>> = BTreeMap::new();
    for (mut idx, v) in t.nonzeros0() {
        let row = idx.remove(j);
        columns.entry(idx).or_default().insert(row, v.clone());
    }
    let mut iter = columns.values();
    let Some(reference) = iter.next() else {
        return true;
    };
    iter.all(|col| {
        if col.len() != reference.len() || !col.keys().eq(reference.keys()) {
            return false;
        }
        let (k0, r0) = reference.iter().next().expect("nonempty column");
        let ratio = &col[k0] / r0;
        reference.iter().all(|(k, r)| col[k] == r * &ratio)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_int(x)).collect()
    }

    fn e(i: usize, n: usize) -> Vec<Rational> {
        (0..n)
            .map(|k| Rational::from_int((k == i) as i64))
            .collect()
    }

    #[test]
    fn slice_of_rank_one() {
        let (a, b, c) = (ints(&[1, 2]), ints(&[3, -1, 2]), ints(&[5, 7]));
        let t = outer(&[a.clone(), b.clone(), c.clone()]);
        let s = slice(&t, 2, 3).unwrap();
        assert_eq!(s, outer(&[a, c]).scale(&b[2]));
    }

    #[test]
    fn full_multi_slice_is_scalar() {
        let t = outer(&[ints(&[1, 2]), ints(&[3, 4])]);
        let s = multi_slice(&t, &[2, 1], &[1, 2]).unwrap();
        assert_eq!(s.order(), 0);
        assert_eq!(s.get0(&[]), Rational::from_int(6));
        assert!(multi_slice(&t, &[1], &[3]).is_err());
        assert!(multi_slice(&t, &[3], &[1]).is_err());
    }

    #[test]
    fn flatten_and_complement_transpose() {
        let t = Tensor::from_fn0(vec![2, 3, 2], |i| {
            Rational::from_int((i[0] * 6 + i[1] * 2 + i[2]) as i64)
        })
        .unwrap();
        assert_eq!(
            flatten(&t, &[2]).unwrap().transpose(),
            flatten(&t, &[1, 3]).unwrap()
        );
        let v = flatten(&t, &[]).unwrap();
        assert_eq!((v.rows(), v.cols()), (1, 12));
    }

    #[test]
    fn unfold_singletons_is_identity() {
        let t = outer(&[ints(&[1, 2]), ints(&[3, 4, 5]), ints(&[1, -1])]);
        assert_eq!(unfold(&t, &[vec![1], vec![2], vec![3]]).unwrap(), t);
        assert!(unfold(&t, &[vec![1], vec![2]]).is_err());
        assert!(unfold(&t, &[vec![1, 2], vec![2, 3]]).is_err());
    }

    #[test]
    fn symmetrize_matrix() {
        let t = outer(&[e(0, 2), e(1, 2)]);
        let s = symmetrize(&t).unwrap();
        assert_eq!(
            s.dense_entries().unwrap(),
            vec![q(0, 1), q(1, 2), q(1, 2), q(0, 1)]
        );
        assert_eq!(symmetrize(&s).unwrap(), s);
        assert!(symmetrize(&outer(&[e(0, 2), e(0, 3)])).is_err());
    }

    #[test]
    fn rank_one_checks() {
        assert!(is_rank_one(&outer(&[e(0, 3), e(1, 3), e(2, 3)])));
        let sum = outer(&[e(0, 2), e(0, 2)])
            .add(&outer(&[e(1, 2), e(1, 2)]))
            .unwrap();
        assert!(!is_rank_one(&sum));
        assert!(!is_rank_one(&Tensor::zeros(vec![2, 2]).unwrap()));
    }

    #[test]
    fn sym_power_all_ones() {
        let t = sym_power(&ints(&[1, 1]), 2);
        assert_eq!(t.dense_entries().unwrap(), ints(&[1, 1, 1, 1]));
        assert!(is_symmetric(&t).unwrap());
    }
}
