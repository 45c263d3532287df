//! The generator sets adjoined to the clone core: the order-6 set, parametric
//! in `n`, and the fixed order-4 set on `n = 5`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// One generating vector `u`; the adjoined slice is `u^{⊗order}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WVector {
    pub u: Vec<Rational>,
    /// 1-based family number in table order.
    pub family: usize,
    /// The increasing `i` tuple and `k` tuple, 1-based.
    pub idx: (Vec<usize>, Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WSet {
    pub n: usize,
    /// Power each vector is raised to: 5 for the order-6 set, 3 for order 4.
    pub order: usize,
    pub w1: Vec<WVector>,
    pub w2: Vec<WVector>,
}

impl WSet {
    pub fn len(&self) -> usize {
        self.w1.len() + self.w2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w1.is_empty() && self.w2.is_empty()
    }

    /// All vectors, `w1` first.
    pub fn vectors(&self) -> impl Iterator<Item = &WVector> {
        self.w1.iter().chain(&self.w2)
    }

    /// Length of each vector, `4n`.
    pub fn dim(&self) -> usize {
        4 * self.n
    }
}

/// `α_i ∈ R^{2n}` with ones at positions `2i-1` and `2i`.
pub fn alpha(i: usize, n: usize) -> Result<Vec<Rational>> {
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange(format!(
            "alpha index {i} for n = {n}"
        )));
    }
    let mut v = vec![Rational::zero(); 2 * n];
    v[2 * i - 2] = Rational::one();
    v[2 * i - 1] = Rational::one();
    Ok(v)
}

/// `(i_1..i_2n | k_1..k_2n) -> (k_2..k_2n, k_1 | i_2..i_2n, i_1)`.
pub fn pi_permute<T: Clone>(v: &[T]) -> Result<Vec<T>> {
    if v.is_empty() || !v.len().is_multiple_of(4) {
        return Err(Error::BadLength(v.len()));
    }
    let (i, k) = v.split_at(v.len() / 2);
    let mut out = Vec::with_capacity(v.len());
    out.extend_from_slice(&k[1..]);
    out.push(k[0].clone());
    out.extend_from_slice(&i[1..]);
    out.push(i[0].clone());
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(p) = (0..k).rev().find(|&p| cur[p] < n - (k - 1 - p)) else {
            return out;
        };
        cur[p] += 1;
        for q in p + 1..k {
            cur[q] = cur[q - 1] + 1;
        }
    }
}

/// Writes `c (Σ_{b ∈ blocks} α_b)` into the half of `u` starting at `offset`.
fn put_blocks(u: &mut [Rational], offset: usize, blocks: &[usize], c: &Rational) {
    for &b in blocks {
        u[offset + 2 * b - 2] = c.clone();
        u[offset + 2 * b - 1] = c.clone();
    }
}

struct Family {
    i_size: usize,
    k_size: usize,
    i_coeff: Rational,
    k_coeff: Rational,
}

fn expand(n: usize, families: &[Family]) -> Vec<WVector> {
    let mut out = Vec::new();
    for (f, fam) in families.iter().enumerate() {
        let is = combinations(n, fam.i_size);
        let ks = combinations(n, fam.k_size);
        for i in &is {
            for k in &ks {
                let mut u = vec![Rational::zero(); 4 * n];
                put_blocks(&mut u, 0, i, &fam.i_coeff);
                put_blocks(&mut u, 2 * n, k, &fam.k_coeff);
                out.push(WVector {
                    u,
                    family: f + 1,
                    idx: (i.clone(), k.clone()),
                });
            }
        }
    }
    out
}

fn with_images(n: usize, order: usize, w1: Vec<WVector>) -> WSet {
    let w2 = w1
        .iter()
        .map(|w| WVector {
            u: pi_permute(&w.u).expect("vectors have length 4n"),
            family: w.family,
            idx: w.idx.clone(),
        })
        .collect();
    WSet { n, order, w1, w2 }
}

fn order6_families(n: usize) -> Vec<Family> {
    let n = Rational::from_int(n as i64);
    let m = |k: i64| &n - Rational::from_int(k);
    let one = Rational::one;
    let zero = Rational::zero;
    let fam = |i_size, k_size, k_coeff: Rational| Family {
        i_size,
        k_size,
        i_coeff: if i_size > 0 { one() } else { zero() },
        k_coeff,
    };
    vec![
        fam(4, 0, zero()),
        fam(3, 0, zero()),
        fam(2, 0, zero()),
        fam(1, 0, zero()),
        fam(4, 1, one()),
        fam(2, 1, m(2) * m(2) / (m(3) * m(1))),
        fam(1, 1, m(2) / m(3)),
        fam(1, 1, m(1) / m(4)),
        fam(3, 2, one()),
        fam(2, 2, m(2) / m(3)),
        fam(2, 1, m(2) / m(4)),
        fam(0, 1, one()),
        fam(3, 1, m(3) / m(4)),
        fam(3, 1, m(2) / m(1)),
        fam(1, 2, m(1) / m(3)),
        fam(0, 2, one()),
    ]
}

/// The order-6 set: sixteen families of `w1` in table order, each over
/// lexicographic index tuples, and `w2 = π(w1)`.
pub fn build_w_order6(n: usize) -> Result<WSet> {
    if n < 5 {
        return Err(Error::NTooSmall { n, min: 5 });
    }
    let w1 = expand(n, &order6_families(n));
    Ok(with_images(n, 5, w1))
}

/// The order-4 set on `n = 5`, families
/// `(α_i+α_j|α_k)`, `(α_i+α_j|0)`, `(3α_i|4α_k)`, `(α_i|0)`, `(0|α_k)`.
pub fn build_w_order4() -> WSet {
    let int = Rational::from_int;
    let fam = |i_size, k_size, i_coeff: i64, k_coeff: i64| Family {
        i_size,
        k_size,
        i_coeff: int(i_coeff),
        k_coeff: int(k_coeff),
    };
    let families = [
        fam(2, 1, 1, 1),
        fam(2, 0, 1, 0),
        fam(1, 1, 3, 4),
        fam(1, 0, 1, 0),
        fam(0, 1, 0, 1),
    ];
    with_images(5, 3, expand(5, &families))
}

fn choose(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

/// `|w1|` for the order-6 set.
pub fn w1_count(n: usize) -> u64 {
    let n = n as u64;
    let c = |k| choose(n, k);
    c(4) + c(3)
        + c(2)
        + n
        + c(4) * n
        + c(2) * n
        + 2 * n * n
        + c(3) * c(2)
        + c(2) * c(2)
        + c(2) * n
        + n
        + 2 * c(3) * n
        + n * c(2)
        + c(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn alpha_vectors() {
        let a1 = alpha(1, 2).unwrap();
        assert_eq!(a1, vec![q(1, 1), q(1, 1), q(0, 1), q(0, 1)]);
        assert_eq!(alpha(2, 2).unwrap()[2..], [q(1, 1), q(1, 1)]);
        assert!(alpha(0, 2).is_err());
        assert!(alpha(3, 2).is_err());
    }

    #[test]
    fn pi_small_cases() {
        assert_eq!(
            pi_permute(&['a', 'b', 'c', 'd']).unwrap(),
            ['d', 'c', 'b', 'a']
        );
        assert!(matches!(pi_permute(&[1, 2, 3]), Err(Error::BadLength(3))));
        assert!(pi_permute::<u8>(&[]).is_err());
        let v: Vec<usize> = (0..12).collect();
        let mut w = v.clone();
        for _ in 0..12 {
            w = pi_permute(&w).unwrap();
        }
        assert_eq!(w, v);
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![1, 4],
                vec![2, 3],
                vec![2, 4],
                vec![3, 4]
            ]
        );
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn family_sizes_at_seven() {
        let w = build_w_order6(7).unwrap();
        let mut sizes = vec![0usize; 16];
        for v in &w.w1 {
            sizes[v.family - 1] += 1;
        }
        assert_eq!(
            sizes,
            vec![35, 35, 21, 7, 245, 147, 49, 49, 735, 441, 147, 7, 245, 245, 147, 21]
        );
        assert_eq!(w.w1.len(), 2576);
        assert_eq!(w.len(), 5152);
        assert_eq!(w1_count(7), 2576);
    }

    #[test]
    fn too_small() {
        assert_eq!(
            build_w_order6(4).unwrap_err(),
            Error::NTooSmall { n: 4, min: 5 }
        );
    }

    #[test]
    fn order4_set() {
        let w = build_w_order4();
        assert_eq!(w.w1.len(), 95);
        assert_eq!(w.len(), 190);
        assert_eq!(w.w1[0].u.len(), 20);
        assert_eq!(w.w1.iter().filter(|v| v.family == 1).count(), 50);
        let third = w.w1.iter().find(|v| v.family == 3).unwrap();
        assert_eq!(third.u[0], q(3, 1));
        assert_eq!(third.u[10], q(4, 1));
    }

    #[test]
    fn json_shape() {
        let w = WVector {
            u: vec![q(1, 1), q(1, 2)],
            family: 3,
            idx: (vec![1], vec![]),
        };
        assert_eq!(
            serde_json::to_string(&w).unwrap(),
            r#"{"u":["1/1","1/2"],"family":3,"idx":[[1],[]]}"#
        );
    }
}
