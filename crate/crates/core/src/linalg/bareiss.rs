//! Fraction-free (Bareiss) elimination over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::RatMatrix;

/// Clears denominators row by row, giving an integer matrix with the same rank.
pub(crate) fn integer_rows(m: &RatMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|r| {
            let row = m.row(r);
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect()
}

/// Rank over the rationals.
///
/// Each step picks the nonzero entry of smallest magnitude in the remaining
/// submatrix as pivot, then applies the Bareiss update
/// `a[i][j] = (p * a[i][j] - a[i][k] * a[k][j]) / prev`, where every division
/// is exact.
pub fn rank_exact(m: &RatMatrix) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    let mut a = integer_rows(m);
    bareiss_rank(&mut a)
}

pub(crate) fn bareiss_rank(a: &mut [Vec<BigInt>]) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut col_of: Vec<usize> = (0..cols).collect();
    let mut prev = BigInt::one();
    let mut k = 0;
    while k < rows.min(cols) {
        let Some((pr, pc)) = smallest_pivot(a, k, &col_of) else {
            break;
        };
        a.swap(k, pr);
        col_of.swap(k, pc);
        let (head, tail) = a.split_at_mut(k + 1);
        let pivot_row = &head[k];
        let pivot = pivot_row[col_of[k]].clone();
        for row in tail.iter_mut() {
            let lead = std::mem::take(&mut row[col_of[k]]);
            for &c in &col_of[k + 1..] {
                let mut v = &pivot * &row[c];
                if !lead.is_zero() {
                    v -= &lead * &pivot_row[c];
                }
                row[c] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = pivot;
        k += 1;
    }
    k
}

fn smallest_pivot(a: &[Vec<BigInt>], k: usize, col_of: &[usize]) -> Option<(usize, usize)> {
    let mut best: Option<(u64, &BigInt, usize, usize)> = None;
    for (r, row) in a.iter().enumerate().skip(k) {
        for (ci, &c) in col_of.iter().enumerate().skip(k) {
            let v = &row[c];
            if v.is_zero() {
                continue;
            }
            let bits = v.bits();
            let better = match best {
                None => true,
                Some((b, bv, _, _)) => bits < b || (bits == b && v.abs() < bv.abs()),
            };
            if better {
                best = Some((bits, v, r, ci));
                if bits == 1 {
                    return Some((r, ci));
                }
            }
        }
    }
    best.map(|(_, _, r, c)| (r, c))
}
