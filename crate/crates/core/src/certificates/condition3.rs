//! Exact membership of the clones of `x^4y` and `x^3y^2` in the span of the
//! first half of the order-6 set, and of their mirror images in the second half.

use std::collections::HashMap;

use serde_json::json;

use super::{Certificate, Verdict};
use crate::error::{Error, Result};
use crate::rational::{binomial, Rational};
use crate::wset::{build_w_order6, WSet, WVector};

const D: usize = 5;

type Key = [u16; D];

/// The coefficients `λ_1..λ_8` and `μ_1..μ_10` of the two linear combinations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition3Coefficients {
    pub lambda: Vec<Rational>,
    pub mu: Vec<Rational>,
}

impl Condition3Coefficients {
    pub fn printed(n: usize) -> Self {
        let b = move |k: u64| binomial(n as u64, k);
        let n = Rational::from_int(n as i64);
        let m = |k: i64| &n - Rational::from_int(k);
        let int = Rational::from_int;
        let (m1, m2, m3, m4) = (m(1), m(2), m(3), m(4));

        let lambda = vec![
            -(m4.pow(2)) / &m3,
            &m3 * m4.pow(2) / (int(2) * &m2),
            -(&m2 * &m3 * m4.pow(2)) / (int(6) * &m1),
            -n.clone(),
            m4.pow(2) * &n / &m3,
            -(&m3 * m4.pow(2) * &n) / (int(2) * &m2),
            &m2 * &m3 * m4.pow(2) * &n / (int(6) * &m1),
            -(b(4) - m3.pow(4) / m4.pow(3) * b(3) + &m3 * m2.pow(4) / (int(2) * m4.pow(3)) * b(2)
                - &m2 * &m3 * m1.pow(4) * &n / (int(6) * m4.pow(3))),
        ];
        let mu = vec![
            -(m3.pow(3)) / m2.pow(2),
            &m2 * m3.pow(3) / (int(2) * m1.pow(2)),
            -(m1.pow(2)) / &m2,
            m1.pow(2) * m3.pow(3) / m2.pow(3),
            -(m3.pow(3)) / int(2),
            -b(2) + m1.pow(2) * &n / &m2,
            m3.pow(3) / m2.pow(2) * b(2) - m1.pow(2) * m3.pow(3) * &n / m2.pow(3),
            -(&m2 * m3.pow(3)) / (int(2) * m1.pow(2)) * b(2) + m3.pow(3) * &n / int(2),
            m2.pow(4) / m1.pow(3) * b(3) - m2.pow(7) / (m1.pow(3) * m3.pow(2)) * b(2)
                + m2.pow(5) * &n / (int(2) * m3.pow(2)),
            -b(3) + b(2) * m2.pow(3) / m3.pow(2) - m1.pow(3) * &m2 * &n / (int(2) * m3.pow(2)),
        ];
        Condition3Coefficients { lambda, mu }
    }

    /// Family number to coefficient for the `x^4y` combination.
    fn x4y(&self) -> Vec<(usize, Rational)> {
        let l = &self.lambda;
        let mut out = vec![(5, Rational::one())];
        for (f, c) in [13, 11, 8, 1, 2, 3, 4, 12].into_iter().zip(l) {
            out.push((f, c.clone()));
        }
        out
    }

    /// Family number to coefficient for the `x^3y^2` combination.
    fn x3y2(&self) -> Vec<(usize, Rational)> {
        let mut out = vec![(9, Rational::one())];
        for (f, c) in [10, 15, 14, 6, 7, 2, 3, 4, 12, 16]
            .into_iter()
            .zip(&self.mu)
        {
            out.push((f, c.clone()));
        }
        out
    }
}

/// `Σ c_f u^{⊗5}` over the vectors of the listed families, keyed by sorted
/// index tuples (the sum is symmetric).
fn accumulate(vectors: &[WVector], coeffs: &[(usize, Rational)]) -> HashMap<Key, Rational> {
    fn rec(
        u: &[Rational],
        support: &[usize],
        from: usize,
        depth: usize,
        prod: &Rational,
        key: &mut Key,
        acc: &mut HashMap<Key, Rational>,
    ) {
        if depth == D {
            *acc.entry(*key).or_insert_with(Rational::zero) += prod;
            return;
        }
        for s in from..support.len() {
            key[depth] = support[s] as u16;
            let next = prod * &u[support[s]];
            rec(u, support, s, depth + 1, &next, key, acc);
        }
    }
    let mut acc = HashMap::new();
    for v in vectors {
        let Some((_, c)) = coeffs.iter().find(|(f, _)| *f == v.family) else {
            continue;
        };
        let support: Vec<usize> = (0..v.u.len()).filter(|&i| !v.u[i].is_zero()).collect();
        rec(&v.u, &support, 0, 0, c, &mut [0; D], &mut acc);
    }
    acc
}

/// Number of sorted tuples with exactly `e` of the 5 indices in the second block.
fn clone_support(n: usize, e: usize) -> u64 {
    let multisets = |k: usize| -> u64 {
        let b = binomial((2 * n + k - 1) as u64, k as u64);
        b.numer().try_into().expect("count fits")
    };
    multisets(e) * multisets(D - e)
}

fn second_block_count(key: &Key, n: usize) -> usize {
    key.iter().filter(|&&i| i as usize >= 2 * n).count()
}

struct Mismatch {
    index: Key,
    found: Rational,
    expected: Rational,
}

/// Compares the sum with the clone whose entries are 1 exactly on tuples with
/// `e` indices in the second block.
fn compare(
    acc: &HashMap<Key, Rational>,
    n: usize,
    e: usize,
) -> std::result::Result<u64, Box<Mismatch>> {
    let mut keys: Vec<&Key> = acc.keys().collect();
    keys.sort_unstable();
    let mut hits = 0u64;
    for key in keys {
        let v = &acc[key];
        let want = second_block_count(key, n) == e;
        if want && v.is_one() {
            hits += 1;
        } else if want || !v.is_zero() {
            return Err(Box::new(Mismatch {
                index: *key,
                found: v.clone(),
                expected: Rational::from_int(want as i64),
            }));
        }
    }
    let needed = clone_support(n, e);
    if hits == needed {
        return Ok(hits);
    }
    // Some target tuple never appeared in the sum; find the first one.
    let mut key = [0u16; D];
    let size = 4 * n as u16;
    loop {
        if second_block_count(&key, n) == e && !acc.contains_key(&key) {
            return Err(Box::new(Mismatch {
                index: key,
                found: Rational::zero(),
                expected: Rational::one(),
            }));
        }
        let Some(p) = (0..D).rev().find(|&p| key[p] + 1 < size) else {
            unreachable!("hit count below the target support size");
        };
        key[p] += 1;
        for q in p + 1..D {
            key[q] = key[p];
        }
    }
}

/// Checks both combinations exactly, using the printed coefficients.
pub fn verify_condition3(n: usize) -> Result<Certificate> {
    verify_condition3_with(n, &Condition3Coefficients::printed(n))
}

pub fn verify_condition3_with(n: usize, coeffs: &Condition3Coefficients) -> Result<Certificate> {
    if n < 5 {
        return Err(Error::NTooSmall { n, min: 5 });
    }
    if coeffs.lambda.len() != 8 || coeffs.mu.len() != 10 {
        return Err(Error::BadLength(coeffs.lambda.len() + coeffs.mu.len()));
    }
    let w: WSet = build_w_order6(n)?;
    let cases = [
        ("x^4y", &w.w1, coeffs.x4y(), 1),
        ("x^3y^2", &w.w1, coeffs.x3y2(), 2),
        ("x^2y^3", &w.w2, coeffs.x3y2(), 3),
        ("xy^4", &w.w2, coeffs.x4y(), 4),
    ];
    let mut cert = Certificate::new(
        "cond3",
        "clones of x^4y, x^3y^2 lie in Span W1; their images under pi lie in Span W2",
    )
    .with("n", json!(n));
    let mut verdict = Verdict::Pass;
    for (name, half, combo, e) in cases {
        let acc = accumulate(half, &combo);
        let detail = match compare(&acc, n, e) {
            Ok(hits) => json!({ "status": "exact", "support": hits, "terms": combo.len() }),
            Err(m) => {
                verdict = Verdict::Fail;
                json!({
                    "status": "mismatch",
                    "first_mismatch": {
                        "index": m.index.iter().map(|&i| i + 1).collect::<Vec<_>>(),
                        "found": m.found.to_string(),
                        "expected": m.expected.to_string(),
                    }
                })
            }
        };
        cert.details.insert(name.to_string(), detail);
    }
    cert.verdict = verdict;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn printed_values_at_seven() {
        let c = Condition3Coefficients::printed(7);
        assert_eq!(c.lambda[0], q(-9, 4));
        assert_eq!(c.lambda[3], q(-7, 1));
        assert_eq!(c.mu[4], q(-32, 1));
    }

    #[test]
    fn support_sizes() {
        // n = 1: positions {0, 1} and {2, 3}; one second-block index.
        assert_eq!(clone_support(1, 1), 2 * 5);
        assert_eq!(clone_support(1, 0), 6);
    }

    #[test]
    fn identities_hold_at_five() {
        let cert = verify_condition3(5).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass, "{:?}", cert.details);
    }

    #[test]
    fn perturbed_lambda_fails() {
        let mut c = Condition3Coefficients::printed(5);
        c.lambda[1] += &Rational::one();
        let cert = verify_condition3_with(5, &c).unwrap();
        assert_eq!(cert.verdict, Verdict::Fail);
        assert_eq!(cert.details["x^4y"]["status"], "mismatch");
        assert_eq!(cert.details["x^3y^2"]["status"], "exact");
    }
}
