//! Slice spaces, decomposable-flattening-rank certificates, Sylvester-type
//! lower bounds and symmetric decompositions.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{in_span, EchelonBasis};
use crate::rational::Rational;
use crate::tensor::{
    default_vars, flatten, is_rank_one, is_symmetric, orbit_size, sym_power, tensor_to_poly,
    unfold, PolyForm, Tensor,
};

/// A maximal independent set of `J^c` slices, chosen greedily in
/// lexicographic slice order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceSpaceBasis {
    pub modes: Vec<usize>,
    pub basis: Vec<Tensor>,
    pub dim: usize,
}

fn sorted_modes(t: &Tensor, modes: &[usize]) -> Result<Vec<usize>> {
    let mut j = modes.to_vec();
    j.sort_unstable();
    if j.windows(2).any(|w| w[0] == w[1]) || j.iter().any(|&m| m == 0 || m > t.order()) {
        return Err(Error::InvalidPartition(format!(
            "{modes:?} is not a subset of modes 1..{}",
            t.order()
        )));
    }
    Ok(j)
}

/// Basis of the slice space `L_J`: each slice fixes the modes outside `J`,
/// leaving an order-`|J|` tensor.
pub fn slice_space_basis(t: &Tensor, modes: &[usize]) -> Result<SliceSpaceBasis> {
    let j = sorted_modes(t, modes)?;
    let flat = flatten(t, &j)?;
    let slice_dims: Vec<usize> = j.iter().map(|&m| t.dims()[m - 1]).collect();
    let mut echelon = EchelonBasis::new();
    let mut basis = Vec::new();
    for c in 0..flat.cols() {
        let col = flat.column(c);
        if echelon.insert(&col) {
            basis.push(Tensor::from_fn0(slice_dims.clone(), |idx| {
                let row = idx
                    .iter()
                    .zip(&slice_dims)
                    .fold(0, |acc, (&i, &d)| acc * d + i);
                col[row].clone()
            })?);
        }
    }
    Ok(SliceSpaceBasis {
        modes: j,
        dim: basis.len(),
        basis,
    })
}

fn vectorise(t: &Tensor) -> Result<Vec<Rational>> {
    t.dense_entries()
}

/// Expansion of every slice-space basis element in the generators; proves
/// `drk_J <= |gens|` (or `sdrk_J` when the generators are symmetric).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanningCertificate {
    pub modes: Vec<usize>,
    pub symmetric: bool,
    pub generators: Vec<Tensor>,
    pub slice_space_dim: usize,
    pub coefficients: Vec<Vec<Rational>>,
}

pub fn verify_spanning_certificate(
    t: &Tensor,
    modes: &[usize],
    gens: &[Tensor],
    symmetric: bool,
) -> Result<SpanningCertificate> {
    let basis = slice_space_basis(t, modes)?;
    let slice_dims: Vec<usize> = basis.modes.iter().map(|&m| t.dims()[m - 1]).collect();
    for (i, g) in gens.iter().enumerate() {
        if g.dims() != slice_dims.as_slice() {
            return Err(Error::DimensionMismatch(format!(
                "generator {} has dims {:?}, slices have {slice_dims:?}",
                i + 1,
                g.dims()
            )));
        }
        if !is_rank_one(g) {
            return Err(Error::GeneratorNotRankOne(i + 1));
        }
        if symmetric && !is_symmetric(g)? {
            return Err(Error::GeneratorNotSymmetric(i + 1));
        }
    }
    let gen_vecs = gens.iter().map(vectorise).collect::<Result<Vec<_>>>()?;
    let mut coefficients = Vec::with_capacity(basis.dim);
    for (k, b) in basis.basis.iter().enumerate() {
        match in_span(&vectorise(b)?, &gen_vecs)? {
            Some(c) => coefficients.push(c),
            None => return Err(Error::SpanFailure(k + 1)),
        }
    }
    Ok(SpanningCertificate {
        modes: basis.modes,
        symmetric,
        generators: gens.to_vec(),
        slice_space_dim: basis.dim,
        coefficients,
    })
}

/// The order-(|J|+1) unfolding whose last-mode slices are the `J^c` slices;
/// its rank is `drk_J`.
pub fn drk_unfolding(t: &Tensor, modes: &[usize]) -> Result<Tensor> {
    let j = sorted_modes(t, modes)?;
    if j.is_empty() || j.len() == t.order() {
        return Err(Error::InvalidPartition(format!(
            "{modes:?} must be a nonempty proper subset"
        )));
    }
    let rest: Vec<usize> = (1..=t.order()).filter(|m| !j.contains(m)).collect();
    let mut partition: Vec<Vec<usize>> = j.iter().map(|&m| vec![m]).collect();
    partition.push(rest);
    unfold(t, &partition)
}

/// `rank T >= drk_J + drk_{J^c} - rank T^(J)`.
pub fn sylvester_bound(drk_j: usize, drk_jc: usize, flat_rank: usize) -> Result<usize> {
    if flat_rank > drk_j.min(drk_jc) {
        return Err(Error::InconsistentInputs(format!(
            "flattening rank {flat_rank} exceeds min({drk_j}, {drk_jc})"
        )));
    }
    Ok(drk_j + drk_jc - flat_rank)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymTerm {
    pub coeff: Rational,
    pub vector: Vec<Rational>,
}

/// `Σ coeff_i · vector_i^{⊗degree}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymDecomposition {
    pub degree: usize,
    pub terms: Vec<SymTerm>,
}

impl SymDecomposition {
    pub fn new(degree: usize, terms: impl IntoIterator<Item = (Rational, Vec<Rational>)>) -> Self {
        SymDecomposition {
            degree,
            terms: terms
                .into_iter()
                .map(|(coeff, vector)| SymTerm { coeff, vector })
                .collect(),
        }
    }

    pub fn nvars(&self) -> Option<usize> {
        self.terms.first().map(|t| t.vector.len())
    }

    /// Expands the sum as a polynomial in `nvars` variables.
    pub fn to_poly(&self, nvars: usize) -> Result<PolyForm> {
        let mut acc: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for term in &self.terms {
            if term.vector.len() != nvars {
                return Err(Error::DimensionMismatch(format!(
                    "term vector of length {} in {nvars} variables",
                    term.vector.len()
                )));
            }
            let support: Vec<usize> = (0..nvars).filter(|&i| !term.vector[i].is_zero()).collect();
            let mut exps = vec![0u32; nvars];
            for_each_composition(self.degree as u32, support.len(), &mut |parts| {
                exps.iter_mut().for_each(|e| *e = 0);
                let mut c = term.coeff.clone();
                for (&var, &e) in support.iter().zip(parts) {
                    exps[var] = e;
                    c *= &term.vector[var].pow(e as i32);
                }
                c *= &Rational::from_bigint(orbit_size(&exps));
                *acc.entry(exps.clone()).or_insert_with(Rational::zero) += c;
            });
        }
        PolyForm::new(default_vars(nvars), self.degree, acc)
    }

    /// The sum as a tensor.
    pub fn to_tensor(&self, nvars: usize) -> Result<Tensor> {
        let mut total = Tensor::zeros(vec![nvars; self.degree])?;
        for term in &self.terms {
            if term.vector.len() != nvars {
                return Err(Error::BadLength(term.vector.len()));
            }
            total = total.combine(&sym_power(&term.vector, self.degree), &term.coeff)?;
        }
        Ok(total)
    }
}

/// Calls `f` with every way of writing `total` as an ordered sum of `parts`
/// nonnegative integers.
fn for_each_composition(total: u32, parts: usize, f: &mut impl FnMut(&[u32])) {
    fn rec(left: u32, k: usize, buf: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if k == 1 {
            buf.push(left);
            f(buf);
            buf.pop();
            return;
        }
        for e in (0..=left).rev() {
            buf.push(e);
            rec(left - e, k - 1, buf, f);
            buf.pop();
        }
    }
    if parts == 0 {
        if total == 0 {
            f(&[]);
        }
        return;
    }
    rec(total, parts, &mut Vec::with_capacity(parts), f);
}

/// The decomposition `Σ μ_i (λ_i x + y)^d` with `μ_i = 1 / Π_{j≠i}(λ_i - λ_j)`
/// of `x^{d-1}(αx + dy)`, where `d` is the number of lambdas.
pub fn monomial_decomposition(
    alpha: &Rational,
    d: usize,
    lambdas: &[Rational],
) -> Result<SymDecomposition> {
    if lambdas.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "{} lambdas for degree {d}",
            lambdas.len()
        )));
    }
    for i in 0..d {
        if lambdas[..i].contains(&lambdas[i]) {
            return Err(Error::LambdasNotDistinct);
        }
    }
    let sum: Rational = lambdas.iter().sum();
    if &sum != alpha {
        return Err(Error::SumMismatch {
            sum: sum.to_string(),
            alpha: alpha.to_string(),
        });
    }
    let terms = lambdas.iter().enumerate().map(|(i, li)| {
        let denom: Rational = lambdas
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, lj)| li - lj)
            .product();
        (denom.recip(), vec![li.clone(), Rational::one()])
    });
    Ok(SymDecomposition::new(d, terms))
}

/// `x^{d-1}(αx + dy)` as a binary form.
pub fn monomial_target(alpha: &Rational, d: usize) -> Result<PolyForm> {
    PolyForm::new(
        default_vars(2),
        d,
        [
            (vec![d as u32, 0], alpha.clone()),
            (vec![d as u32 - 1, 1], Rational::from_int(d as i64)),
        ],
    )
}

/// Either side of a symmetric decomposition check.
#[derive(Clone, Debug)]
pub enum SymTarget {
    Tensor(Tensor),
    Poly(PolyForm),
}

/// Exact equality of `Σ λ_i v_i^{⊗d}` with the target.
pub fn verify_sym_decomposition(target: &SymTarget, dec: &SymDecomposition) -> Result<bool> {
    let poly = match target {
        SymTarget::Poly(p) => p.clone(),
        SymTarget::Tensor(t) => {
            if t.order() != dec.degree {
                return Err(Error::DegreeMismatch {
                    expected: t.order(),
                    found: dec.degree,
                });
            }
            match tensor_to_poly(t) {
                Ok(p) => p,
                Err(Error::NotSymmetric) => return Ok(false),
                Err(e) => return Err(e),
            }
        }
    };
    if poly.degree() != dec.degree {
        return Err(Error::DegreeMismatch {
            expected: poly.degree(),
            found: dec.degree,
        });
    }
    let expanded = dec.to_poly(poly.vars().len())?;
    Ok(expanded.terms() == poly.terms())
}

/// A symmetric rank-one member `(x + αy)^d` of `(x^d - k y^d) Mod {x^{d-2}y, ..., xy^{d-2}}`,
/// where `α` is the real root of `α^d = -k` with `α >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankOneWitness {
    pub degree: usize,
    pub alpha_power: Rational,
    /// `α` itself when it is rational.
    pub alpha: Option<Rational>,
}

/// Decides whether the Mod space contains a symmetric rank-one tensor.
///
/// Every member keeps the `x^d` coefficient 1 and the `y^d` coefficient `-k`,
/// since the adjoined monomials are mixed. A symmetric rank-one tensor with
/// leading coefficient 1 is `(x + αy)^d`, which needs `α^d = -k`; for even
/// `d` this has a real solution iff `k <= 0`, and the mixed coefficients can
/// then always be matched by slice increments.
pub fn binary_sym_rank_one_in_modspace(k: &Rational, d: usize) -> Result<Option<RankOneWitness>> {
    if d % 2 == 1 {
        return Err(Error::OddDegree(d));
    }
    if d < 4 {
        return Err(Error::DegreeMismatch {
            expected: 4,
            found: d,
        });
    }
    if k.is_positive() {
        return Ok(None);
    }
    let target = -k;
    Ok(Some(RankOneWitness {
        degree: d,
        alpha: exact_root(&target, d as u32),
        alpha_power: target,
    }))
}

fn exact_root(x: &Rational, d: u32) -> Option<Rational> {
    let root = |n: &BigInt| {
        let r = n.nth_root(d);
        (num_traits::Pow::pow(&r, d) == *n).then_some(r)
    };
    let (n, m) = (root(x.numer())?, root(x.denom())?);
    Rational::from_big(n, m).ok()
}
