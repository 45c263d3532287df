//! Adjoining slices, Mod spaces and substitution families.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{solve, RatMatrix};
use crate::rational::Rational;
use crate::tensor::{is_symmetric, multi_slice, Tensor, TensorBuilder};

/// A core tensor together with, for each mode `j`, the list `M_j` of
/// order-(d-1) tensors to adjoin as new `j` slices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjoinSpec {
    pub core: Tensor,
    pub adjoined: Vec<Vec<Tensor>>,
}

fn dims_without(dims: &[usize], j: usize) -> Vec<usize> {
    let mut d = dims.to_vec();
    d.remove(j);
    d
}

fn check_family(core: &Tensor, family: &[Vec<Tensor>]) -> Result<()> {
    let d = core.order();
    if family.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "{} generator lists for an order-{d} core",
            family.len()
        )));
    }
    for (j, list) in family.iter().enumerate() {
        let want = dims_without(core.dims(), j);
        if let Some(m) = list.iter().find(|m| m.dims() != want.as_slice()) {
            return Err(Error::DimensionMismatch(format!(
                "mode {} expects dims {want:?}, got {:?}",
                j + 1,
                m.dims()
            )));
        }
    }
    Ok(())
}

fn insert_at(rest: &[usize], j: usize, k: usize) -> Vec<usize> {
    let mut full = Vec::with_capacity(rest.len() + 1);
    full.extend_from_slice(&rest[..j]);
    full.push(k);
    full.extend_from_slice(&rest[j..]);
    full
}

/// `Adjoin(C, M_1, ..., M_d)`: mode `j` grows by `|M_j|`, the `w`-th new `j`
/// slice is `M_j^(w)` on the core indices, and every entry with two or more
/// adjoined indices is zero.
pub fn adjoin(spec: &AdjoinSpec) -> Result<Tensor> {
    check_family(&spec.core, &spec.adjoined)?;
    let core = &spec.core;
    let dims: Vec<usize> = core
        .dims()
        .iter()
        .zip(&spec.adjoined)
        .map(|(&n, m)| n + m.len())
        .collect();
    let mut b = TensorBuilder::new(dims)?;
    for (idx, v) in core.nonzeros0() {
        b.set0(&idx, v.clone());
    }
    for (j, list) in spec.adjoined.iter().enumerate() {
        let base = core.dims()[j];
        for (w, m) in list.iter().enumerate() {
            for (rest, v) in m.nonzeros0() {
                b.set0(&insert_at(&rest, j, base + w), v.clone());
            }
        }
    }
    Ok(b.build())
}

/// `SAdj(C, M)`: the same list adjoined in every mode.
pub fn sadjoin(core: &Tensor, m: &[Tensor]) -> Result<Tensor> {
    if !is_symmetric(core)? {
        return Err(Error::NotSymmetric);
    }
    for t in m {
        if t.order() + 1 != core.order() || !is_symmetric(t)? {
            return Err(Error::NotSymmetric);
        }
    }
    adjoin(&AdjoinSpec {
        core: core.clone(),
        adjoined: vec![m.to_vec(); core.order()],
    })
}

/// `C Mod (M_1, ..., M_d)`, kept as the core plus the labelled generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModSpace {
    pub core: Tensor,
    pub increments: Vec<Vec<Tensor>>,
}

/// For each mode `j` and slice `k` of that mode, the coefficients of the
/// generators of `M_j` added to slice `k`.
pub type ModParams = Vec<Vec<Vec<Rational>>>;

impl ModSpace {
    pub fn new(core: Tensor, increments: Vec<Vec<Tensor>>) -> Result<Self> {
        check_family(&core, &increments)?;
        Ok(ModSpace { core, increments })
    }

    /// `C Mod M` with the same generators in every mode.
    pub fn symmetric(core: Tensor, m: Vec<Tensor>) -> Result<Self> {
        let d = core.order();
        ModSpace::new(core, vec![m; d])
    }

    /// Number of free parameters: `Σ_j |I_j| · |M_j|`.
    pub fn param_count(&self) -> usize {
        self.core
            .dims()
            .iter()
            .zip(&self.increments)
            .map(|(n, m)| n * m.len())
            .sum()
    }

    pub fn zero_params(&self) -> ModParams {
        self.core
            .dims()
            .iter()
            .zip(&self.increments)
            .map(|(&n, m)| vec![vec![Rational::zero(); m.len()]; n])
            .collect()
    }

    fn check_params(&self, params: &ModParams) -> Result<()> {
        let ok = params.len() == self.increments.len()
            && params
                .iter()
                .zip(self.core.dims())
                .zip(&self.increments)
                .all(|((p, &n), m)| p.len() == n && p.iter().all(|c| c.len() == m.len()));
        if ok {
            Ok(())
        } else {
            Err(Error::ParameterShapeMismatch(format!(
                "expected {} modes with slices {:?} and generator counts {:?}",
                self.increments.len(),
                self.core.dims(),
                self.increments.iter().map(Vec::len).collect::<Vec<_>>()
            )))
        }
    }
}

/// The member of the Mod space with the given parameters.
pub fn mod_space_sample(ms: &ModSpace, params: &ModParams) -> Result<Tensor> {
    ms.check_params(params)?;
    let mut b = TensorBuilder::new(ms.core.dims().to_vec())?;
    for (idx, v) in ms.core.nonzeros0() {
        b.add0(&idx, v);
    }
    for (j, (per_slice, gens)) in params.iter().zip(&ms.increments).enumerate() {
        for (k, coeffs) in per_slice.iter().enumerate() {
            for (c, g) in coeffs.iter().zip(gens) {
                if c.is_zero() {
                    continue;
                }
                for (rest, v) in g.nonzeros0() {
                    b.add0(&insert_at(&rest, j, k), &(c * v));
                }
            }
        }
    }
    Ok(b.build())
}

/// Parameters `p` with `mod_space_sample(ms, p) = t`, if any exist.
///
/// Membership is one linear system over all entries at once, since every
/// entry receives a contribution from each mode.
pub fn mod_space_contains(ms: &ModSpace, t: &Tensor) -> Result<Option<ModParams>> {
    if t.dims() != ms.core.dims() {
        return Err(Error::DimensionMismatch(format!(
            "{:?} vs core {:?}",
            t.dims(),
            ms.core.dims()
        )));
    }
    let residual = t.sub(&ms.core)?;
    let mut unknowns = Vec::new();
    for (j, gens) in ms.increments.iter().enumerate() {
        for k in 0..ms.core.dims()[j] {
            for g in 0..gens.len() {
                unknowns.push((j, k, g));
            }
        }
    }
    let mut rows: BTreeMap<u128, BTreeMap<usize, Rational>> = BTreeMap::new();
    for (col, &(j, k, g)) in unknowns.iter().enumerate() {
        for (rest, v) in ms.increments[j][g].nonzeros0() {
            let lin = residual.linear0(&insert_at(&rest, j, k));
            rows.entry(lin).or_default().insert(col, v.clone());
        }
    }
    for (lin, _) in residual.nonzeros() {
        if !rows.contains_key(&lin) {
            return Ok(None);
        }
    }
    let a = if rows.is_empty() {
        RatMatrix::zeros(0, unknowns.len())
    } else {
        RatMatrix::from_rows(
            rows.values()
                .map(|r| {
                    let mut row = vec![Rational::zero(); unknowns.len()];
                    for (&c, v) in r {
                        row[c] = v.clone();
                    }
                    row
                })
                .collect(),
        )?
    };
    let rhs: Vec<Rational> = rows
        .keys()
        .map(|&lin| residual.get0(&residual.unravel(lin)))
        .collect();
    let Some(x) = solve(&a, &rhs)? else {
        return Ok(None);
    };
    let mut params = ms.zero_params();
    for (&(j, k, g), v) in unknowns.iter().zip(x) {
        params[j][k][g] = v;
    }
    Ok(Some(params))
}

/// `(T_1 + c_1 T_n | ... | T_{n-1} + c_{n-1} T_n)` along one mode, with the
/// parameters left free until [`SubstitutionFamily::evaluate`].
#[derive(Clone, Debug)]
pub struct SubstitutionFamily {
    source: Tensor,
    mode: usize,
}

pub fn substitution_family(t: &Tensor, j: usize) -> Result<SubstitutionFamily> {
    if j == 0 || j > t.order() {
        return Err(Error::IndexOutOfRange(format!(
            "mode {j} of order-{} tensor",
            t.order()
        )));
    }
    if t.dims()[j - 1] < 2 {
        return Err(Error::IndexOutOfRange(format!(
            "mode {j} has size {} < 2",
            t.dims()[j - 1]
        )));
    }
    Ok(SubstitutionFamily {
        source: t.clone(),
        mode: j,
    })
}

impl SubstitutionFamily {
    pub fn mode(&self) -> usize {
        self.mode
    }

    /// Number of parameters, `n - 1`.
    pub fn param_count(&self) -> usize {
        self.source.dims()[self.mode - 1] - 1
    }

    /// The `j` slices `T_1, ..., T_n` of the source.
    pub fn slices(&self) -> Result<Vec<Tensor>> {
        (1..=self.param_count() + 1)
            .map(|i| multi_slice(&self.source, &[self.mode], &[i]))
            .collect()
    }

    pub fn evaluate(&self, c: &[Rational]) -> Result<Tensor> {
        let n = self.param_count() + 1;
        if c.len() != n - 1 {
            return Err(Error::ParameterShapeMismatch(format!(
                "{} parameters for a family with {}",
                c.len(),
                n - 1
            )));
        }
        let j = self.mode - 1;
        let mut dims = self.source.dims().to_vec();
        dims[j] = n - 1;
        let mut b = TensorBuilder::new(dims)?;
        for (idx, v) in self.source.nonzeros0() {
            if idx[j] + 1 < n {
                b.add0(&idx, v);
            } else {
                for (k, ck) in c.iter().enumerate() {
                    if !ck.is_zero() {
                        let mut target = idx.clone();
                        target[j] = k;
                        b.add0(&target, &(ck * v));
                    }
                }
            }
        }
        Ok(b.build())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::tensor::{is_rank_one, outer};

    fn e(i: usize, n: usize) -> Vec<Rational> {
        (0..n)
            .map(|k| Rational::from_int((k == i) as i64))
            .collect()
    }

    #[test]
    fn empty_adjoin_is_core() {
        let core = outer(&[e(0, 2), e(1, 2), e(1, 2)]);
        let spec = AdjoinSpec {
            core: core.clone(),
            adjoined: vec![vec![], vec![], vec![]],
        };
        assert_eq!(adjoin(&spec).unwrap(), core);
        assert_eq!(
            sadjoin(&outer(&[e(0, 2), e(0, 2)]), &[]).unwrap(),
            outer(&[e(0, 2), e(0, 2)])
        );
    }

    #[test]
    fn zero_core_single_slice() {
        let m = outer(&[e(0, 2), e(1, 2)]);
        let spec = AdjoinSpec {
            core: Tensor::zeros(vec![2, 2, 2]).unwrap(),
            adjoined: vec![vec![m.clone()], vec![], vec![]],
        };
        let t = adjoin(&spec).unwrap();
        assert_eq!(t.dims(), &[3, 2, 2]);
        assert_eq!(multi_slice(&t, &[1], &[3]).unwrap(), m);
        assert_eq!(t.nnz(), 1);
    }

    #[test]
    fn wrong_generator_dims() {
        let spec = AdjoinSpec {
            core: Tensor::zeros(vec![2, 2]).unwrap(),
            adjoined: vec![vec![Tensor::zeros(vec![3]).unwrap()], vec![]],
        };
        assert!(matches!(adjoin(&spec), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn sample_and_recover() {
        let core = outer(&[e(0, 2), e(0, 2)]);
        let ms = ModSpace::symmetric(core.clone(), vec![outer(&[e(1, 2)])]).unwrap();
        assert_eq!(mod_space_sample(&ms, &ms.zero_params()).unwrap(), core);
        let params = vec![
            vec![vec![q(1, 2)], vec![q(3, 1)]],
            vec![vec![q(0, 1)], vec![q(-1, 1)]],
        ];
        let t = mod_space_sample(&ms, &params).unwrap();
        let found = mod_space_contains(&ms, &t).unwrap().unwrap();
        assert_eq!(mod_space_sample(&ms, &found).unwrap(), t);
        assert!(mod_space_sample(&ms, &vec![vec![vec![q(1, 1)]]]).is_err());
    }

    #[test]
    fn unreachable_support() {
        let core = Tensor::zeros(vec![2, 2]).unwrap();
        let ms = ModSpace::symmetric(core, vec![outer(&[e(1, 2)])]).unwrap();
        let target = outer(&[e(0, 2), e(0, 2)]);
        assert_eq!(mod_space_contains(&ms, &target).unwrap(), None);
    }

    #[test]
    fn substitution_drops_last_slice() {
        let t = Tensor::from_fn0(vec![2, 2], |i| {
            Rational::from_int((1 + i[0] * 2 + i[1]) as i64)
        })
        .unwrap();
        let fam = substitution_family(&t, 1).unwrap();
        let first_row = Tensor::dense(vec![1, 2], vec![q(1, 1), q(2, 1)]).unwrap();
        assert_eq!(fam.evaluate(&[q(0, 1)]).unwrap(), first_row);
        let r1 = outer(&[vec![q(1, 1), q(2, 1), q(-1, 1)], vec![q(3, 1), q(1, 1)]]);
        let f = substitution_family(&r1, 1).unwrap();
        assert!(is_rank_one(&f.evaluate(&[q(5, 1), q(-2, 7)]).unwrap()));
        assert!(substitution_family(&r1, 3).is_err());
    }
}
