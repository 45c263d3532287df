//! Linear independence of the symmetric powers `u^{⊗d}` through the Gram matrix.

use serde_json::json;

use super::{Certificate, Verdict};
use crate::error::Result;
use crate::linalg::{KernelWitness, RankBackend};
use crate::rational::Rational;
use crate::wset::WSet;

/// Full rank of `G_ij = <u_i, u_j>^d` certifies independence, exactly or
/// modulo a prime (a nonzero minor mod p is nonzero over Q). A deficiency
/// found in exact arithmetic is a dependency, reported with its kernel vector.
pub fn verify_independence(w: &WSet, backend: &dyn RankBackend) -> Result<Certificate> {
    let vectors: Vec<Vec<Rational>> = w.vectors().map(|v| v.u.clone()).collect();
    let outcome = backend.gram_rank(&vectors, w.order as u32)?;
    let claimed = match w.order {
        3 => true,
        _ => w.n >= 7,
    };
    let mut cert = Certificate::new(
        format!("indep.order{}", w.order + 1),
        "the tensors u^{⊗d}, u in W, are linearly independent",
    )
    .with("n", json!(w.n))
    .with("vectors", json!(outcome.size))
    .with("degree", json!(w.order))
    .with("rank", json!(outcome.rank))
    .with("backend", json!(backend.name()))
    .with("claim_covers_n", json!(claimed));
    if let Some(p) = outcome.modulus {
        cert = cert.with("modulus", json!(p.to_string()));
    }
    if outcome.is_full() {
        cert.verdict = Verdict::Pass;
        return Ok(cert);
    }
    cert.verdict = Verdict::Fail;
    let witness = match &outcome.witness {
        Some(KernelWitness::Exact(c)) => json!({
            "kind": "exact",
            "coefficients": c.iter().map(Rational::to_string).collect::<Vec<_>>(),
        }),
        Some(KernelWitness::Modular { modulus, residues }) => json!({
            "kind": "modular",
            "modulus": modulus.to_string(),
            "residues": residues.iter().map(u64::to_string).collect::<Vec<_>>(),
            "note": "a deficiency modulo p does not by itself prove a dependency over Q",
        }),
        None => serde_json::Value::Null,
    };
    Ok(cert.with("kernel_witness", witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::backend;
    use crate::wset::build_w_order4;

    #[test]
    fn duplicate_vector_fails_with_witness() {
        let mut w = build_w_order4();
        w.w1.truncate(6);
        w.w2.truncate(5);
        w.w2.push(w.w1[2].clone());
        for name in ["exact", "modular"] {
            let b = backend(name, None).unwrap();
            let c = verify_independence(&w, b.as_ref()).unwrap();
            assert_eq!(c.verdict, Verdict::Fail);
            assert_eq!(c.details["rank"], 11);
            assert!(c.details["kernel_witness"].is_object());
        }
    }
}
