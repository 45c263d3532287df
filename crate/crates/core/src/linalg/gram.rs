//! Gram matrices of symmetric powers: `<u^{⊗d}, v^{⊗d}> = <u, v>^d`.

use rayon::prelude::*;

use super::matrix::RatMatrix;
use super::modp::{check_modulus, Montgomery, PrimeFieldMatrix};
use crate::error::{Error, Result};
use crate::rational::Rational;

fn check_lengths(vectors: &[Vec<Rational>]) -> Result<()> {
    let len = vectors.first().map_or(0, Vec::len);
    match vectors.iter().find(|v| v.len() != len) {
        Some(v) => Err(Error::DimensionMismatch(format!(
            "vectors of length {len} and {}",
            v.len()
        ))),
        None => Ok(()),
    }
}

fn dot(u: &[Rational], v: &[Rational]) -> Rational {
    u.iter()
        .zip(v)
        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
        .map(|(a, b)| a * b)
        .sum()
}

/// `G[i][j] = <u_i, u_j>^d`, exactly.
pub fn gram_power_matrix(vectors: &[Vec<Rational>], d: u32) -> Result<RatMatrix> {
    check_lengths(vectors)?;
    let k = vectors.len();
    let upper: Vec<Vec<Rational>> = (0..k)
        .into_par_iter()
        .map(|i| {
            (i..k)
                .map(|j| dot(&vectors[i], &vectors[j]).pow(d as i32))
                .collect()
        })
        .collect();
    Ok(RatMatrix::from_fn(k, k, |i, j| {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        upper[a][b - a].clone()
    }))
}

/// The same Gram matrix reduced modulo `p`, computed from residues directly.
pub fn gram_power_matrix_mod_p(
    vectors: &[Vec<Rational>],
    d: u32,
    p: u64,
) -> Result<PrimeFieldMatrix> {
    check_lengths(vectors)?;
    check_modulus(p)?;
    let residues = vectors
        .iter()
        .map(|v| {
            v.iter()
                .map(|x| x.to_residue(p).ok_or(Error::DenominatorDivisibleByP(p)))
                .collect::<Result<Vec<u64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mont = Montgomery::new(p);
    let mont_vecs: Vec<Vec<u64>> = residues
        .iter()
        .map(|v| v.iter().map(|&x| mont.to_mont(x)).collect())
        .collect();
    let k = vectors.len();
    let power = |x: u64| {
        let mut acc = mont.to_mont(1);
        for _ in 0..d {
            acc = mont.mul(acc, x);
        }
        acc
    };
    let entries: Vec<u64> = (0..k)
        .into_par_iter()
        .flat_map_iter(|i| {
            let ui = &mont_vecs[i];
            let mv = &mont_vecs;
            (0..k).map(move |j| {
                let s = ui.iter().zip(&mv[j]).fold(0u64, |acc, (&a, &b)| {
                    let t = acc + mont.mul(a, b);
                    if t >= p {
                        t - p
                    } else {
                        t
                    }
                });
                mont.leave_mont(power(s))
            })
        })
        .collect();
    PrimeFieldMatrix::new(p, k, k, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::modp::DEFAULT_PRIME;
    use crate::rational::q;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_int(x)).collect()
    }

    #[test]
    fn unit_vectors() {
        let g = gram_power_matrix(&[ints(&[1, 0]), ints(&[0, 1])], 3).unwrap();
        assert_eq!(g, RatMatrix::identity(2));
    }

    #[test]
    fn single_vector() {
        let g = gram_power_matrix(&[ints(&[1, 2, -1])], 5).unwrap();
        assert_eq!(g.get(0, 0), &Rational::from_int(6i64.pow(5)));
    }

    #[test]
    fn residues_agree() {
        let vs = vec![
            ints(&[1, 2, 3]),
            vec![q(1, 2), q(-1, 3), q(2, 1)],
            ints(&[0, 0, 5]),
        ];
        let exact = gram_power_matrix(&vs, 5).unwrap();
        let modular = gram_power_matrix_mod_p(&vs, 5, DEFAULT_PRIME).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(
                    exact.get(i, j).to_residue(DEFAULT_PRIME).unwrap(),
                    modular.get(i, j)
                );
            }
        }
    }
}
