//! Entries at which every adjoined tensor vanishes, and the entries of the
//! core that no Mod-space element can change.

use serde_json::json;

use super::{Certificate, Verdict};
use crate::error::Result;
use crate::rational::Rational;
use crate::wset::{build_w_order6, WSet, WVector};

/// A 1-based entry `(k_1|...|k_5)` of `u^{⊗5}`, checked on all of `W` or only `W1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroPattern {
    pub coords: Vec<usize>,
    pub w1_only: bool,
}

impl ZeroPattern {
    pub fn all(coords: Vec<usize>) -> Self {
        ZeroPattern {
            coords,
            w1_only: false,
        }
    }

    pub fn first_half(coords: Vec<usize>) -> Self {
        ZeroPattern {
            coords,
            w1_only: true,
        }
    }
}

/// `(1|3|5|7|9)` on all of `W`; `(2n+1|2n+3|...|2n+9)`, `(1|1|2n+1|2n+3|2n+5)`
/// and `(1|2n+1|2n+3|2n+5|2n+7)` on `W1`.
pub fn standard_zero_patterns(n: usize) -> Vec<ZeroPattern> {
    let m = 2 * n;
    vec![
        ZeroPattern::all(vec![1, 3, 5, 7, 9]),
        ZeroPattern::first_half(vec![m + 1, m + 3, m + 5, m + 7, m + 9]),
        ZeroPattern::first_half(vec![1, 1, m + 1, m + 3, m + 5]),
        ZeroPattern::first_half(vec![1, m + 1, m + 3, m + 5, m + 7]),
    ]
}

fn product_at(u: &[Rational], coords: &[usize]) -> Option<Rational> {
    let mut p = Rational::one();
    for &c in coords {
        p *= u.get(c.checked_sub(1)?)?;
    }
    Some(p)
}

fn label(w: &WSet, half: usize, pos: usize) -> serde_json::Value {
    let v: &WVector = if half == 1 { &w.w1[pos] } else { &w.w2[pos] };
    json!({ "half": half, "position": pos + 1, "family": v.family, "idx": v.idx })
}

/// Indices `(i | i+2 | ... | i+10) mod 2n`, 1-based, when all pairwise
/// cyclic gaps are at least 2.
pub fn forced_one_indices(n: usize, shift: usize) -> Option<Vec<usize>> {
    let m = 2 * n;
    if m < 12 || shift == 0 || shift > m {
        return None;
    }
    Some((0..6).map(|t| (shift - 1 + 2 * t) % m + 1).collect())
}

fn five_subsets(six: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..six.len()).map(move |skip| {
        six.iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, &x)| x)
            .collect()
    })
}

/// The standard patterns, plus every 5-subset of each forced-ones index
/// set on all of `W` when `n >= 6`.
pub fn verify_zero_patterns(w: &WSet) -> Certificate {
    let mut patterns = standard_zero_patterns(w.n);
    for shift in 1..=2 * w.n {
        if let Some(six) = forced_one_indices(w.n, shift) {
            patterns.extend(five_subsets(&six).map(ZeroPattern::all));
        }
    }
    verify_zero_patterns_with(w, &patterns)
}

pub fn verify_zero_patterns_with(w: &WSet, patterns: &[ZeroPattern]) -> Certificate {
    let mut cert = Certificate::new(
        "patterns",
        "entries at which every u^{⊗5} in W (or W1) vanishes",
    )
    .with("n", json!(w.n))
    .with("patterns", json!(patterns.len()));
    if w.order != 5 {
        cert.verdict = Verdict::NotApplicable;
        return cert.with("reason", json!("zero patterns are stated for fifth powers"));
    }
    let mut violations = Vec::new();
    let mut total = 0usize;
    let mut checked = 0usize;
    for p in patterns {
        let halves: &[usize] = if p.w1_only { &[1] } else { &[1, 2] };
        for &h in halves {
            let list = if h == 1 { &w.w1 } else { &w.w2 };
            for (pos, v) in list.iter().enumerate() {
                checked += 1;
                let zero = product_at(&v.u, &p.coords).is_none_or(|x| x.is_zero());
                if !zero {
                    total += 1;
                    if violations.len() < 10 {
                        violations.push(json!({ "pattern": p.coords, "vector": label(w, h, pos) }));
                    }
                }
            }
        }
    }
    cert.verdict = if total == 0 {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    cert.with("evaluations", json!(checked))
        .with("violations", json!(total))
        .with("first_violations", json!(violations))
}

/// For each shift, every generator restricted to the first block vanishes on
/// every 5-subset of the forced-ones index set, so that entry of any member of
/// `𝕀(E,6) Mod W_E` equals the core entry 1.
pub fn verify_forced_ones(n: usize) -> Result<Certificate> {
    let w = build_w_order6(n)?;
    let mut cert = Certificate::new(
        "ones",
        "entries of I(E,6) Mod W_E with all cyclic gaps >= 2 are forced to 1",
    )
    .with("n", json!(n))
    .with("quantified_statement", json!("proof-backed"));
    let m = 2 * n;
    if forced_one_indices(n, 1).is_none() {
        cert.verdict = Verdict::NotApplicable;
        return Ok(cert.with(
            "reason",
            json!(format!("indices i, i+2, ..., i+10 collide modulo {m}")),
        ));
    }
    let mut entries = Vec::new();
    let mut failures = Vec::new();
    for shift in 1..=m {
        let six = forced_one_indices(n, shift).expect("gap condition holds for n >= 6");
        let mut ok = true;
        for (h, list) in [(1, &w.w1), (2, &w.w2)] {
            for (pos, v) in list.iter().enumerate() {
                let e_part = &v.u[..m];
                for five in five_subsets(&six) {
                    if product_at(e_part, &five).is_some_and(|x| !x.is_zero()) {
                        ok = false;
                        if failures.len() < 10 {
                            failures.push(json!({ "shift": shift, "pattern": five, "vector": label(&w, h, pos) }));
                        }
                    }
                }
            }
        }
        entries.push(
            json!({ "shift": shift, "index": six, "entry": if ok { "1/1" } else { "free" } }),
        );
    }
    cert.verdict = if failures.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(cert
        .with("shifts", json!(m))
        .with("entries", json!(entries))
        .with("failures", json!(failures)))
}
