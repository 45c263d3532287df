use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::ops::is_symmetric;
use super::{Tensor, TensorBuilder};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A homogeneous form; the coefficient of each monomial is keyed by its
/// exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPoly", into = "RawPoly")]
pub struct PolyForm {
    vars: Vec<String>,
    degree: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

#[derive(Serialize, Deserialize)]
struct RawPoly {
    vars: Vec<String>,
    degree: usize,
    terms: Vec<(Vec<u32>, Rational)>,
}

impl TryFrom<RawPoly> for PolyForm {
    type Error = Error;
    fn try_from(raw: RawPoly) -> Result<Self> {
        PolyForm::new(raw.vars, raw.degree, raw.terms)
    }
}

impl From<PolyForm> for RawPoly {
    fn from(p: PolyForm) -> Self {
        RawPoly {
            vars: p.vars,
            degree: p.degree,
            terms: p.terms.into_iter().collect(),
        }
    }
}

/// `x, y, z, w` for up to four variables, `x1, x2, ...` beyond.
pub fn default_vars(n: usize) -> Vec<String> {
    if n <= 4 {
        ["x", "y", "z", "w"][..n]
            .iter()
            .map(|s| s.to_string())
            .collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

impl PolyForm {
    /// Repeated monomials are summed and zero coefficients dropped.
    pub fn new(
        vars: Vec<String>,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (exps, c) in terms {
            if exps.len() != vars.len() {
                return Err(Error::DimensionMismatch(format!(
                    "exponents {exps:?} for {} variables",
                    vars.len()
                )));
            }
            let total: u32 = exps.iter().sum();
            if total as usize != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: total as usize,
                });
            }
            *map.entry(exps).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(PolyForm {
            vars,
            degree,
            terms: map,
        })
    }

    /// Form in the default variables from `(coefficient, exponents)` pairs.
    pub fn from_terms(nvars: usize, degree: usize, terms: &[(Rational, &[u32])]) -> Result<Self> {
        PolyForm::new(
            default_vars(nvars),
            degree,
            terms.iter().map(|(c, e)| (e.to_vec(), c.clone())),
        )
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// Evaluates at a point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&k, x)| acc * x.pow(k as i32))
            })
            .sum()
    }
}

impl fmt::Display for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (exps, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c:?}")?;
            for (v, &e) in self.vars.iter().zip(exps) {
                match e {
                    0 => {}
                    1 => write!(f, "*{v}")?,
                    _ => write!(f, "*{v}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * k)
}

/// Number of distinct index tuples with the given exponent vector.
pub fn orbit_size(exps: &[u32]) -> BigInt {
    let d: usize = exps.iter().map(|&e| e as usize).sum();
    exps.iter()
        .fold(factorial(d), |acc, &e| acc / factorial(e as usize))
}

pub(crate) fn orbit_size_of_index(idx: &[usize]) -> BigInt {
    let mut counts: BTreeMap<usize, u32> = BTreeMap::new();
    for &i in idx {
        *counts.entry(i).or_default() += 1;
    }
    orbit_size(&counts.into_values().collect::<Vec<_>>())
}

fn exps_to_index(exps: &[u32]) -> Vec<usize> {
    exps.iter()
        .enumerate()
        .flat_map(|(v, &e)| std::iter::repeat_n(v, e as usize))
        .collect()
}

/// All distinct rearrangements of a sorted multiset, in lexicographic order.
pub fn distinct_permutations(sorted: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = sorted.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// The symmetric tensor of `p`, each coefficient split equally over its orbit.
pub fn poly_to_tensor(p: &PolyForm) -> Result<Tensor> {
    let mut b = TensorBuilder::new(vec![p.vars.len(); p.degree])?;
    for (exps, c) in &p.terms {
        let share = c / Rational::from_bigint(orbit_size(exps));
        for idx in distinct_permutations(&exps_to_index(exps)) {
            b.set0(&idx, share.clone());
        }
    }
    Ok(b.build())
}

/// Inverse of [`poly_to_tensor`]: each coefficient is the sum of its orbit.
pub fn tensor_to_poly(t: &Tensor) -> Result<PolyForm> {
    if !is_symmetric(t)? {
        return Err(Error::NotSymmetric);
    }
    let nvars = t.dims().first().copied().unwrap_or(0);
    let mut terms = Vec::new();
    for (idx, v) in t.nonzeros0() {
        if idx.windows(2).all(|w| w[0] <= w[1]) {
            let mut exps = vec![0u32; nvars];
            for &i in &idx {
                exps[i] += 1;
            }
            terms.push((exps, v * Rational::from_bigint(orbit_size_of_index(&idx))));
        }
    }
    PolyForm::new(default_vars(nvars), t.order(), terms)
}

/// Tensor with entry 1 on every index tuple of the monomial's orbit.
pub fn monomial_orbit(nvars: usize, exps: &[u32]) -> Result<Tensor> {
    if exps.len() != nvars {
        return Err(Error::DimensionMismatch(format!(
            "exponents {exps:?} for {nvars} variables"
        )));
    }
    let d = exps.iter().sum::<u32>() as usize;
    let mut b = TensorBuilder::new(vec![nvars; d])?;
    for idx in distinct_permutations(&exps_to_index(exps)) {
        b.set0(&idx, Rational::one());
    }
    Ok(b.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn permutations_of_multiset() {
        assert_eq!(distinct_permutations(&[0, 0, 1]).len(), 3);
        assert_eq!(distinct_permutations(&[0, 1, 2]).len(), 6);
        assert_eq!(distinct_permutations(&[]), vec![Vec::<usize>::new()]);
        assert_eq!(orbit_size(&[2, 1, 1]), BigInt::from(12));
    }

    #[test]
    fn x3y_splits_over_four_entries() {
        let p = PolyForm::from_terms(2, 4, &[(Rational::one(), &[3, 1])]).unwrap();
        let t = poly_to_tensor(&p).unwrap();
        assert_eq!(t.nnz(), 4);
        assert_eq!(t.get0(&[0, 1, 0, 0]), q(1, 4));
        assert_eq!(tensor_to_poly(&t).unwrap(), p);
    }

    #[test]
    fn binary_quartic_is_diagonal() {
        let p = PolyForm::from_terms(2, 4, &[(q(1, 1), &[4, 0]), (q(-3, 1), &[0, 4])]).unwrap();
        let t = poly_to_tensor(&p).unwrap();
        assert_eq!(t.nnz(), 2);
        assert_eq!(t.get0(&[1, 1, 1, 1]), q(-3, 1));
    }

    #[test]
    fn rejects_bad_terms() {
        assert!(PolyForm::from_terms(2, 4, &[(q(1, 1), &[3, 0])]).is_err());
        assert!(PolyForm::from_terms(2, 3, &[(q(1, 1), &[3, 0, 0])]).is_err());
        let p = PolyForm::from_terms(2, 2, &[(q(1, 1), &[2, 0]), (q(-1, 1), &[2, 0])]).unwrap();
        assert!(p.terms().is_empty());
    }

    #[test]
    fn json_shape() {
        let p = PolyForm::from_terms(2, 2, &[(q(1, 2), &[1, 1])]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(
            s,
            r#"{"vars":["x","y"],"degree":2,"terms":[[[1,1],"1/2"]]}"#
        );
        assert_eq!(serde_json::from_str::<PolyForm>(&s).unwrap(), p);
    }

    #[test]
    fn non_symmetric_rejected() {
        let t = Tensor::from_coo(vec![2, 2], vec![(vec![1, 2], q(1, 1))]).unwrap();
        assert_eq!(tensor_to_poly(&t), Err(Error::NotSymmetric));
    }
}
