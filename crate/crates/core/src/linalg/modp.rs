//! Dense linear algebra over a prime field `Z/pZ` with `p < 2^62`.
//!
//! Elimination runs in Montgomery form; the rank is unaffected by the change
//! of representation since it maps zero to zero and is a field isomorphism.

use rayon::prelude::*;

use super::matrix::RatMatrix;
use crate::error::{Error, Result};

/// The Mersenne prime 2^61 - 1.
pub const DEFAULT_PRIME: u64 = (1 << 61) - 1;

const MAX_MODULUS: u64 = 1 << 62;

pub fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let quot = r / new_r;
        (t, new_t) = (new_t, t - quot * new_t);
        (r, new_r) = (new_r, r - quot * new_r);
    }
    assert_eq!(r, 1, "{a} is not invertible modulo {p}");
    t.rem_euclid(p as i128) as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the witness set is exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Accepts odd primes below 2^62.
pub fn check_modulus(p: u64) -> Result<()> {
    if p >= MAX_MODULUS || p == 2 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// Montgomery arithmetic for an odd modulus below 2^62.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Montgomery {
    p: u64,
    neg_inv: u64,
    r2: u64,
}

impl Montgomery {
    pub(crate) fn new(p: u64) -> Self {
        debug_assert!(p % 2 == 1 && p < MAX_MODULUS);
        // Newton iteration for p^-1 mod 2^64.
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = mul_mod(r, r, p);
        Montgomery {
            p,
            neg_inv: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline(always)]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    /// Reduces the high word so that `t < p 2^64`, as [`Self::redc`] requires.
    #[inline(always)]
    fn fold(&self, t: u128) -> u128 {
        let hi = ((t >> 64) as u64) % self.p;
        ((hi as u128) << 64) | (t as u64 as u128)
    }

    /// How many products of reduced values can be added to a folded sum
    /// without overflowing `u128`.
    fn batch(&self) -> usize {
        let p = self.p as u128;
        let room = u128::MAX - (p << 64);
        (room / ((p - 1) * (p - 1)).max(1)).min(PANEL as u128) as usize
    }

    #[inline(always)]
    pub(crate) fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline(always)]
    pub(crate) fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub(crate) fn to_mont(self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    pub(crate) fn leave_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    fn inv(&self, a: u64) -> u64 {
        self.to_mont(inv_mod(self.leave_mont(a), self.p))
    }
}

/// Matrix with entries in `[0, modulus)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeFieldMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl PrimeFieldMatrix {
    pub fn new(modulus: u64, rows: usize, cols: usize, entries: Vec<u64>) -> Result<Self> {
        check_modulus(modulus)?;
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix with {} entries",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|&&e| e >= modulus) {
            return Err(Error::InconsistentInputs(format!(
                "entry {bad} not reduced modulo {modulus}"
            )));
        }
        Ok(PrimeFieldMatrix {
            modulus,
            rows,
            cols,
            entries,
        })
    }

    /// Reduces an exact matrix entrywise.
    pub fn reduce(m: &RatMatrix, p: u64) -> Result<Self> {
        check_modulus(p)?;
        let entries = m
            .entries()
            .iter()
            .map(|x| x.to_residue(p).ok_or(Error::DenominatorDivisibleByP(p)))
            .collect::<Result<Vec<_>>>()?;
        Ok(PrimeFieldMatrix {
            modulus: p,
            rows: m.rows(),
            cols: m.cols(),
            entries,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mont = Montgomery::new(self.modulus);
        let mut a: Vec<u64> = self.entries.par_iter().map(|&x| mont.to_mont(x)).collect();
        eliminate(&mont, &mut a, self.rows, self.cols)
    }

    /// A nonzero vector `c` with `M c = 0`, if the columns are dependent.
    pub fn kernel_vector(&self) -> Option<Vec<u64>> {
        let p = self.modulus;
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.entries.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(pr) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
                continue;
            };
            for j in 0..cols {
                a.swap(r * cols + j, pr * cols + j);
            }
            let inv = inv_mod(a[r * cols + c], p);
            for j in 0..cols {
                a[r * cols + j] = mul_mod(a[r * cols + j], inv, p);
            }
            for i in 0..rows {
                if i != r && a[i * cols + c] != 0 {
                    let f = a[i * cols + c];
                    for j in 0..cols {
                        let t = mul_mod(f, a[r * cols + j], p);
                        a[i * cols + j] = (a[i * cols + j] + p - t) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let free = (0..cols).find(|c| !pivots.contains(c))?;
        let mut x = vec![0u64; cols];
        x[free] = 1;
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = (p - a[row * cols + free]) % p;
        }
        Some(x)
    }
}

/// Columns handled per panel in [`eliminate`].
const PANEL: usize = 32;

/// Row-echelon elimination in place; returns the rank.
///
/// Columns are processed in panels. Within a panel the pivots are found and
/// the multipliers recorded; the columns right of the panel are then updated
/// once per row with all of the panel's pivots, summing products in `u128`
/// and reducing at the end.
pub(crate) fn eliminate(mont: &Montgomery, a: &mut [u64], rows: usize, cols: usize) -> usize {
    let mut mult = vec![0u64; rows * PANEL];
    let mut r = 0;
    let mut c0 = 0;
    while c0 < cols && r < rows {
        let c1 = (c0 + PANEL).min(cols);
        mult[r * PANEL..].fill(0);
        let found = factor_panel(mont, a, &mut mult, r, rows, cols, c0, c1);
        let (top, bottom) = a.split_at_mut((r + found) * cols);
        let pivots = &mut top[r * cols..];
        for k in 1..found {
            let (done, rest) = pivots.split_at_mut(k * cols);
            let row = &mut rest[..cols];
            for (kk, &f) in mult[(r + k) * PANEL..][..k].iter().enumerate() {
                if f != 0 {
                    let src = &done[kk * cols..(kk + 1) * cols];
                    for (x, &y) in row[c1..].iter_mut().zip(&src[c1..]) {
                        *x = mont.sub(*x, mont.mul(f, y));
                    }
                }
            }
        }
        if found > 0 && c1 < cols {
            let pivots = &*pivots;
            bottom
                .par_chunks_mut(cols)
                .zip(mult[(r + found) * PANEL..].par_chunks(PANEL))
                .for_each_init(
                    || vec![0u128; cols - c1],
                    |acc, (row, fs)| apply_panel(mont, row, &fs[..found], pivots, cols, c1, acc),
                );
        }
        r += found;
        c0 = c1;
    }
    r
}

/// Plain elimination of rows `r..` restricted to columns `c0..c1`; pivot rows
/// are moved to `r, r+1, ...` and multipliers stored in `mult`.
#[allow(clippy::too_many_arguments)]
fn factor_panel(
    mont: &Montgomery,
    a: &mut [u64],
    mult: &mut [u64],
    r: usize,
    rows: usize,
    cols: usize,
    c0: usize,
    c1: usize,
) -> usize {
    let mut found = 0;
    for c in c0..c1 {
        let pr = r + found;
        if pr == rows {
            break;
        }
        let Some(hit) = (pr..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if hit != pr {
            for j in 0..cols {
                a.swap(pr * cols + j, hit * cols + j);
            }
            for j in 0..PANEL {
                mult.swap(pr * PANEL + j, hit * PANEL + j);
            }
        }
        let (top, bottom) = a.split_at_mut((pr + 1) * cols);
        let pivot_row = &top[pr * cols..];
        let inv = mont.inv(pivot_row[c]);
        bottom
            .par_chunks_mut(cols)
            .zip(mult[(pr + 1) * PANEL..].par_chunks_mut(PANEL))
            .for_each(|(row, fs)| {
                let lead = row[c];
                if lead == 0 {
                    return;
                }
                let f = mont.mul(lead, inv);
                fs[found] = f;
                row[c] = 0;
                for (x, &y) in row[c + 1..c1].iter_mut().zip(&pivot_row[c + 1..c1]) {
                    *x = mont.sub(*x, mont.mul(f, y));
                }
            });
        found += 1;
    }
    found
}

/// `row[c1..] -= Σ_k fs[k] pivots_k[c1..]` with delayed reduction.
fn apply_panel(
    mont: &Montgomery,
    row: &mut [u64],
    fs: &[u64],
    pivots: &[u64],
    cols: usize,
    c1: usize,
    acc: &mut [u128],
) {
    if fs.iter().all(|&f| f == 0) {
        return;
    }
    acc.fill(0);
    let batch = mont.batch();
    let mut pending = 0;
    for (k, &f) in fs.iter().enumerate() {
        if f == 0 {
            continue;
        }
        if pending == batch {
            acc.iter_mut().for_each(|t| *t = mont.fold(*t));
            pending = 0;
        }
        let src = &pivots[k * cols + c1..(k + 1) * cols];
        for (t, &y) in acc.iter_mut().zip(src) {
            *t += f as u128 * y as u128;
        }
        pending += 1;
    }
    for (x, &t) in row[c1..].iter_mut().zip(acc.iter()) {
        *x = mont.sub(*x, mont.redc(mont.fold(t)));
    }
}

/// Rank of the reduction of `m` modulo the prime `p`.
pub fn rank_mod_p(m: &RatMatrix, p: u64) -> Result<usize> {
    Ok(PrimeFieldMatrix::reduce(m, p)?.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    const P31: u64 = (1 << 31) - 1;

    #[test]
    fn primality() {
        assert!(is_prime(DEFAULT_PRIME));
        assert!(is_prime(P31));
        assert!(!is_prime(1));
        assert!(!is_prime(DEFAULT_PRIME - 2));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
        assert!(check_modulus(1 << 62).is_err());
    }

    #[test]
    fn montgomery_matches_plain() {
        let m = Montgomery::new(DEFAULT_PRIME);
        for (a, b) in [
            (3u64, 5u64),
            (DEFAULT_PRIME - 1, DEFAULT_PRIME - 1),
            (123456789, 987654321),
        ] {
            let got = m.leave_mont(m.mul(m.to_mont(a), m.to_mont(b)));
            assert_eq!(got, mul_mod(a, b, DEFAULT_PRIME));
        }
    }

    #[test]
    fn identity_rank() {
        assert_eq!(rank_mod_p(&RatMatrix::identity(5), P31).unwrap(), 5);
    }

    #[test]
    fn denominator_divisible() {
        let m = RatMatrix::from_rows(vec![vec![q(1, P31 as i64)]]).unwrap();
        assert_eq!(
            rank_mod_p(&m, P31),
            Err(Error::DenominatorDivisibleByP(P31))
        );
    }

    #[test]
    fn rank_can_drop_mod_small_prime() {
        let m = RatMatrix::from_int_rows(&[vec![1, 1], vec![1, 4]]);
        assert_eq!(rank_mod_p(&m, 3).unwrap(), 1);
        assert_eq!(rank_mod_p(&m, 5).unwrap(), 2);
    }

    #[test]
    fn kernel_mod_p() {
        let m = RatMatrix::from_int_rows(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let pm = PrimeFieldMatrix::reduce(&m, 101).unwrap();
        let x = pm.kernel_vector().unwrap();
        for r in 0..2 {
            let s: u64 = (0..3)
                .map(|c| mul_mod(pm.get(r, c), x[c], 101))
                .sum::<u64>()
                % 101;
            assert_eq!(s, 0);
        }
        assert!(PrimeFieldMatrix::reduce(&RatMatrix::identity(3), 101)
            .unwrap()
            .kernel_vector()
            .is_none());
    }

    fn plain_rank(mut a: Vec<u64>, rows: usize, cols: usize, p: u64) -> usize {
        let mut r = 0;
        for c in 0..cols {
            let Some(pr) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
                continue;
            };
            for j in 0..cols {
                a.swap(r * cols + j, pr * cols + j);
            }
            let inv = inv_mod(a[r * cols + c], p);
            for i in r + 1..rows {
                let f = mul_mod(a[i * cols + c], inv, p);
                for j in 0..cols {
                    let t = mul_mod(f, a[r * cols + j], p);
                    a[i * cols + j] = (a[i * cols + j] + p - t) % p;
                }
            }
            r += 1;
        }
        r
    }

    #[test]
    fn panels_match_plain_elimination() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for &(p, rows, cols, inner) in &[
            (7u64, 70usize, 90usize, 40usize),
            (DEFAULT_PRIME, 80, 75, 80),
            ((1 << 62) - 57, 66, 66, 50),
            (3, 100, 40, 40),
        ] {
            // Product of random rows x inner and inner x cols factors.
            let l: Vec<u64> = (0..rows * inner).map(|_| rng.gen_range(0..p)).collect();
            let u: Vec<u64> = (0..inner * cols)
                .map(|_| {
                    if rng.gen_bool(0.3) {
                        0
                    } else {
                        rng.gen_range(0..p)
                    }
                })
                .collect();
            let mut a = vec![0u64; rows * cols];
            for i in 0..rows {
                for k in 0..inner {
                    for j in 0..cols {
                        let t = mul_mod(l[i * inner + k], u[k * cols + j], p);
                        a[i * cols + j] = (a[i * cols + j] + t) % p;
                    }
                }
            }
            let m = PrimeFieldMatrix::new(p, rows, cols, a.clone()).unwrap();
            assert_eq!(m.rank(), plain_rank(a, rows, cols, p), "p = {p}");
        }
    }
}
