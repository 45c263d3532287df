//! Tensors over exact rationals.
//!
//! Public operations take 1-based modes and indices. Methods with a `0`
//! suffix (`get0`, `add0`, ...) are zero-based and meant for inner loops.

mod clone;
mod ops;
mod poly;

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub use clone::{block_of, is_clone, n_clone, ones_tensor, restrict, CloneTensor};
pub use ops::{
    flatten, is_rank_one, is_symmetric, multi_slice, outer, slice, sym_power, symmetrize, unfold,
};
pub use poly::{
    default_vars, distinct_permutations, monomial_orbit, orbit_size, poly_to_tensor,
    tensor_to_poly, PolyForm,
};

/// Tensors with more entries than this are stored sparse.
pub const DENSE_LIMIT: u128 = 1_000_000;

#[derive(Clone, Debug)]
enum Storage {
    Dense(Vec<Rational>),
    Sparse(BTreeMap<u128, Rational>),
}

#[derive(Clone, Debug)]
pub struct Tensor {
    dims: Vec<usize>,
    strides: Vec<u128>,
    storage: Storage,
}

fn strides_for(dims: &[usize]) -> Result<(Vec<u128>, u128)> {
    let mut strides = vec![0u128; dims.len()];
    let mut acc: u128 = 1;
    for (s, &d) in strides.iter_mut().zip(dims).rev() {
        *s = acc;
        acc = acc
            .checked_mul(d as u128)
            .ok_or(Error::TooLarge(u128::MAX))?;
    }
    Ok((strides, acc))
}

impl Tensor {
    /// The zero tensor; dense when small enough, sparse otherwise.
    pub fn zeros(dims: Vec<usize>) -> Result<Self> {
        Ok(TensorBuilder::new(dims)?.build())
    }

    /// Dense tensor from row-major entries (last mode varies fastest).
    pub fn dense(dims: Vec<usize>, entries: Vec<Rational>) -> Result<Self> {
        let (strides, total) = strides_for(&dims)?;
        if total > DENSE_LIMIT {
            return Err(Error::TooLarge(total));
        }
        if entries.len() as u128 != total {
            return Err(Error::DimensionMismatch(format!(
                "dims {dims:?} need {total} entries, got {}",
                entries.len()
            )));
        }
        Ok(Tensor {
            dims,
            strides,
            storage: Storage::Dense(entries),
        })
    }

    /// Sparse tensor from 1-based coordinate entries; duplicates are rejected
    /// and explicit zeros dropped.
    pub fn from_coo(
        dims: Vec<usize>,
        entries: impl IntoIterator<Item = (Vec<usize>, Rational)>,
    ) -> Result<Self> {
        let (strides, _) = strides_for(&dims)?;
        let mut map = BTreeMap::new();
        for (idx, v) in entries {
            check_index1(&dims, &idx)?;
            let lin = idx
                .iter()
                .zip(&strides)
                .map(|(&i, &s)| (i - 1) as u128 * s)
                .sum();
            if map.insert(lin, v).is_some() {
                return Err(Error::InconsistentInputs(format!(
                    "duplicate index {idx:?}"
                )));
            }
        }
        map.retain(|_, v| !v.is_zero());
        Ok(Tensor {
            dims,
            strides,
            storage: Storage::Sparse(map),
        })
    }

    /// Builds a tensor from a function of zero-based indices.
    pub fn from_fn0(dims: Vec<usize>, f: impl Fn(&[usize]) -> Rational) -> Result<Self> {
        let mut b = TensorBuilder::new(dims)?;
        let dims = b.dims.clone();
        let mut idx = vec![0usize; dims.len()];
        if dims.iter().all(|&d| d > 0) {
            loop {
                let v = f(&idx);
                if !v.is_zero() {
                    b.set0(&idx, v);
                }
                if !next_index(&mut idx, &dims) {
                    break;
                }
            }
        }
        Ok(b.build())
    }

    pub fn scalar(v: Rational) -> Self {
        Tensor {
            dims: vec![],
            strides: vec![],
            storage: Storage::Dense(vec![v]),
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    /// Number of entries, zero or not.
    pub fn len(&self) -> u128 {
        self.dims.iter().map(|&d| d as u128).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Dense(v) => v.iter().filter(|x| !x.is_zero()).count(),
            Storage::Sparse(m) => m.len(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn is_cubical(&self) -> bool {
        self.dims.windows(2).all(|w| w[0] == w[1])
    }

    pub fn linear0(&self, idx: &[usize]) -> u128 {
        idx.iter()
            .zip(&self.strides)
            .map(|(&i, &s)| i as u128 * s)
            .sum()
    }

    pub fn unravel(&self, mut lin: u128) -> Vec<usize> {
        self.strides
            .iter()
            .map(|&s| {
                let i = lin / s;
                lin %= s;
                i as usize
            })
            .collect()
    }

    /// Entry at a zero-based index.
    pub fn get0(&self, idx: &[usize]) -> Rational {
        let lin = self.linear0(idx);
        match &self.storage {
            Storage::Dense(v) => v[lin as usize].clone(),
            Storage::Sparse(m) => m.get(&lin).cloned().unwrap_or_else(Rational::zero),
        }
    }

    /// Entry at a 1-based index.
    pub fn entry(&self, idx: &[usize]) -> Result<Rational> {
        check_index1(&self.dims, idx)?;
        let idx0: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        Ok(self.get0(&idx0))
    }

    /// Nonzero entries as `(linear index, value)` in increasing index order.
    pub fn nonzeros(&self) -> Box<dyn Iterator<Item = (u128, &Rational)> + '_> {
        match &self.storage {
            Storage::Dense(v) => Box::new(
                v.iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(i, x)| (i as u128, x)),
            ),
            Storage::Sparse(m) => Box::new(m.iter().map(|(&k, v)| (k, v))),
        }
    }

    /// Nonzero entries with zero-based index tuples.
    pub fn nonzeros0(&self) -> impl Iterator<Item = (Vec<usize>, &Rational)> + '_ {
        self.nonzeros().map(|(lin, v)| (self.unravel(lin), v))
    }

    pub fn to_dense(&self) -> Result<Self> {
        let total = self.len();
        if total > DENSE_LIMIT {
            return Err(Error::TooLarge(total));
        }
        let mut v = vec![Rational::zero(); total as usize];
        for (lin, x) in self.nonzeros() {
            v[lin as usize] = x.clone();
        }
        Tensor::dense(self.dims.clone(), v)
    }

    pub fn to_sparse(&self) -> Self {
        Tensor {
            dims: self.dims.clone(),
            strides: self.strides.clone(),
            storage: Storage::Sparse(self.nonzeros().map(|(k, v)| (k, v.clone())).collect()),
        }
    }

    /// Dense row-major entries, when the tensor is small enough.
    pub fn dense_entries(&self) -> Result<Vec<Rational>> {
        match self.to_dense()?.storage {
            Storage::Dense(v) => Ok(v),
            Storage::Sparse(_) => unreachable!(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut b = TensorBuilder::new(self.dims.clone()).expect("valid dims");
        if !c.is_zero() {
            for (lin, v) in self.nonzeros() {
                b.set_linear(lin, v * c);
            }
        }
        b.build()
    }

    pub fn add(&self, other: &Tensor) -> Result<Self> {
        self.combine(other, &Rational::one())
    }

    pub fn sub(&self, other: &Tensor) -> Result<Self> {
        self.combine(other, &Rational::from_int(-1))
    }

    /// `self + c * other`.
    pub fn combine(&self, other: &Tensor, c: &Rational) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "{:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        let mut b = TensorBuilder::new(self.dims.clone())?;
        for (lin, v) in self.nonzeros() {
            b.add_linear(lin, v);
        }
        for (lin, v) in other.nonzeros() {
            b.add_linear(lin, &(v * c));
        }
        Ok(b.build())
    }
}

impl PartialEq for Tensor {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims && self.nonzeros().eq(other.nonzeros())
    }
}

impl Eq for Tensor {}

/// Accumulates entries by zero-based index, choosing dense or sparse storage
/// from the size of the result.
pub struct TensorBuilder {
    dims: Vec<usize>,
    strides: Vec<u128>,
    acc: Storage,
}

impl TensorBuilder {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        let (strides, total) = strides_for(&dims)?;
        let acc = if total <= DENSE_LIMIT {
            Storage::Dense(vec![Rational::zero(); total as usize])
        } else {
            Storage::Sparse(BTreeMap::new())
        };
        Ok(TensorBuilder { dims, strides, acc })
    }

    /// Forces sparse storage regardless of size.
    pub fn new_sparse(dims: Vec<usize>) -> Result<Self> {
        let (strides, _) = strides_for(&dims)?;
        Ok(TensorBuilder {
            dims,
            strides,
            acc: Storage::Sparse(BTreeMap::new()),
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    fn lin(&self, idx: &[usize]) -> u128 {
        debug_assert!(idx.iter().zip(&self.dims).all(|(i, d)| i < d));
        idx.iter()
            .zip(&self.strides)
            .map(|(&i, &s)| i as u128 * s)
            .sum()
    }

    pub fn add0(&mut self, idx: &[usize], v: &Rational) {
        let lin = self.lin(idx);
        self.add_linear(lin, v);
    }

    pub fn set0(&mut self, idx: &[usize], v: Rational) {
        let lin = self.lin(idx);
        self.set_linear(lin, v);
    }

    fn add_linear(&mut self, lin: u128, v: &Rational) {
        if v.is_zero() {
            return;
        }
        match &mut self.acc {
            Storage::Dense(e) => e[lin as usize] += v,
            Storage::Sparse(m) => *m.entry(lin).or_insert_with(Rational::zero) += v,
        }
    }

    fn set_linear(&mut self, lin: u128, v: Rational) {
        match &mut self.acc {
            Storage::Dense(e) => e[lin as usize] = v,
            Storage::Sparse(m) => {
                m.insert(lin, v);
            }
        }
    }

    pub fn build(self) -> Tensor {
        let storage = match self.acc {
            Storage::Sparse(mut m) => {
                m.retain(|_, v| !v.is_zero());
                Storage::Sparse(m)
            }
            dense => dense,
        };
        Tensor {
            dims: self.dims,
            strides: self.strides,
            storage,
        }
    }
}

/// Advances a zero-based odometer; returns false after the last index.
pub fn next_index(idx: &mut [usize], dims: &[usize]) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < dims[k] {
            return true;
        }
        idx[k] = 0;
    }
    false
}

fn check_index1(dims: &[usize], idx: &[usize]) -> Result<()> {
    if idx.len() != dims.len() {
        return Err(Error::IndexOutOfRange(format!(
            "index {idx:?} for order-{} tensor",
            dims.len()
        )));
    }
    if idx.iter().zip(dims).any(|(&i, &d)| i == 0 || i > d) {
        return Err(Error::IndexOutOfRange(format!(
            "index {idx:?} outside dims {dims:?}"
        )));
    }
    Ok(())
}

pub(crate) fn check_modes(d: usize, modes: &[usize]) -> Result<()> {
    let mut seen = vec![false; d];
    for &m in modes {
        if m == 0 || m > d {
            return Err(Error::IndexOutOfRange(format!(
                "mode {m} of order-{d} tensor"
            )));
        }
        if std::mem::replace(&mut seen[m - 1], true) {
            return Err(Error::InvalidPartition(format!("mode {m} repeated")));
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Dense,
    Coo,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawEntry {
    Value(Rational),
    Coord(Vec<usize>, Rational),
}

#[derive(Deserialize)]
struct RawTensor {
    dims: Vec<usize>,
    format: Format,
    entries: Vec<RawEntry>,
}

impl Serialize for Tensor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Tensor", 3)?;
        st.serialize_field("dims", &self.dims)?;
        match &self.storage {
            Storage::Dense(v) => {
                st.serialize_field("format", &Format::Dense)?;
                st.serialize_field("entries", v)?;
            }
            Storage::Sparse(_) => {
                st.serialize_field("format", &Format::Coo)?;
                let coo: Vec<(Vec<usize>, &Rational)> = self
                    .nonzeros0()
                    .map(|(idx, v)| (idx.iter().map(|i| i + 1).collect(), v))
                    .collect();
                st.serialize_field("entries", &coo)?;
            }
        }
        st.end()
    }
}

impl<'de> Deserialize<'de> for Tensor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawTensor::deserialize(d)?;
        let t = match raw.format {
            Format::Dense => {
                let vals = raw
                    .entries
                    .into_iter()
                    .map(|e| match e {
                        RawEntry::Value(v) => Ok(v),
                        RawEntry::Coord(..) => {
                            Err(D::Error::custom("coordinate entry in dense tensor"))
                        }
                    })
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                Tensor::dense(raw.dims, vals)
            }
            Format::Coo => {
                let coords = raw
                    .entries
                    .into_iter()
                    .map(|e| match e {
                        RawEntry::Coord(i, v) => Ok((i, v)),
                        RawEntry::Value(_) => Err(D::Error::custom("bare value in coo tensor")),
                    })
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                Tensor::from_coo(raw.dims, coords)
            }
        };
        t.map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn dense_and_sparse_compare_equal() {
        let d = Tensor::dense(vec![2, 2], vec![q(1, 1), q(0, 1), q(0, 1), q(-1, 2)]).unwrap();
        let s = Tensor::from_coo(
            vec![2, 2],
            vec![(vec![1, 1], q(1, 1)), (vec![2, 2], q(-1, 2))],
        )
        .unwrap();
        assert_eq!(d, s);
        assert_eq!(d.to_sparse(), s.to_dense().unwrap());
    }

    #[test]
    fn json_round_trips() {
        let s = Tensor::from_coo(vec![2, 3], vec![(vec![2, 3], q(5, 3))]).unwrap();
        let js = serde_json::to_string(&s).unwrap();
        assert_eq!(
            js,
            r#"{"dims":[2,3],"format":"coo","entries":[[[2,3],"5/3"]]}"#
        );
        assert_eq!(serde_json::from_str::<Tensor>(&js).unwrap(), s);
        let d = s.to_dense().unwrap();
        let js = serde_json::to_string(&d).unwrap();
        assert!(js.starts_with(r#"{"dims":[2,3],"format":"dense","entries":["0/1""#));
        assert_eq!(serde_json::from_str::<Tensor>(&js).unwrap(), d);
    }

    #[test]
    fn json_rejects_bad_input() {
        let dup = r#"{"dims":[2],"format":"coo","entries":[[[1],"1"],[[1],"2"]]}"#;
        assert!(serde_json::from_str::<Tensor>(dup).is_err());
        let out = r#"{"dims":[2],"format":"coo","entries":[[[3],"1"]]}"#;
        assert!(serde_json::from_str::<Tensor>(out).is_err());
        let short = r#"{"dims":[2],"format":"dense","entries":["1"]}"#;
        assert!(serde_json::from_str::<Tensor>(short).is_err());
    }

    #[test]
    fn big_tensors_go_sparse() {
        let t = Tensor::zeros(vec![100, 100, 101]).unwrap();
        assert!(!t.is_dense());
        assert!(Tensor::zeros(vec![100, 100, 100]).unwrap().is_dense());
    }

    #[test]
    fn entry_is_one_based() {
        let t = Tensor::from_coo(vec![3, 3], vec![(vec![1, 3], q(2, 1))]).unwrap();
        assert_eq!(t.entry(&[1, 3]).unwrap(), q(2, 1));
        assert!(t.entry(&[0, 1]).is_err());
        assert!(t.entry(&[4, 1]).is_err());
    }
}
