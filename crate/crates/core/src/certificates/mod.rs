//! Verdict records for the finite claims behind the counterexample, and a
//! registry of named checks.

mod condition3;
mod counterexample;
mod examples;
mod independence;
mod patterns;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use condition3::{verify_condition3, verify_condition3_with, Condition3Coefficients};
pub use counterexample::{
    assemble_counterexample, binary_sextic, CounterexampleReport, ImplicitCounterexample,
};
pub use examples::{
    binary_quartic_modspace, check_rank_one_witness, cubic_rank_one_basis, rank_one_parameters,
    rank_one_witness, six_term_decomposition, six_term_target, verify_worked_examples,
};
pub use independence::verify_independence;
pub use patterns::{
    forced_one_indices, standard_zero_patterns, verify_forced_ones, verify_zero_patterns,
    verify_zero_patterns_with, ZeroPattern,
};

use crate::error::{Error, Result};
use crate::linalg::{ExactBackend, RankBackend};
use crate::wset::{build_w_order4, build_w_order6};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Probabilistic,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub claim_id: String,
    pub verdict: Verdict,
    pub paper_anchor: String,
    pub details: BTreeMap<String, Value>,
}

impl Certificate {
    /// A certificate with verdict `Fail` until a check sets it.
    pub fn new(claim_id: impl Into<String>, anchor: impl Into<String>) -> Self {
        Certificate {
            claim_id: claim_id.into(),
            verdict: Verdict::Fail,
            paper_anchor: anchor.into(),
            details: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: Value) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }

    fn verdict_if(mut self, ok: bool) -> Self {
        self.verdict = if ok { Verdict::Pass } else { Verdict::Fail };
        self
    }

    /// Pass, or a modular match that is accepted as a pass.
    pub fn accepted(&self) -> bool {
        matches!(self.verdict, Verdict::Pass | Verdict::Probabilistic)
    }
}

/// Parameters shared by the registered checks.
pub struct CheckContext {
    pub n: usize,
    /// Used for the order-6 independence check; the order-4 check is always exact.
    pub backend: Box<dyn RankBackend>,
}

pub trait Check: Send + Sync {
    fn name(&self) -> &'static str;
    fn run(&self, ctx: &CheckContext) -> Result<Vec<Certificate>>;
}

struct Cond3;
struct Patterns;
struct Ones;
struct Indep;
struct Examples;

impl Check for Cond3 {
    fn name(&self) -> &'static str {
        "cond3"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<Certificate>> {
        Ok(vec![verify_condition3(ctx.n)?])
    }
}

impl Check for Patterns {
    fn name(&self) -> &'static str {
        "patterns"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<Certificate>> {
        Ok(vec![verify_zero_patterns(&build_w_order6(ctx.n)?)])
    }
}

impl Check for Ones {
    fn name(&self) -> &'static str {
        "ones"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<Certificate>> {
        Ok(vec![verify_forced_ones(ctx.n)?])
    }
}

impl Check for Indep {
    fn name(&self) -> &'static str {
        "indep"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Vec<Certificate>> {
        Ok(vec![
            verify_independence(&build_w_order4(), &ExactBackend)?,
            verify_independence(&build_w_order6(ctx.n)?, ctx.backend.as_ref())?,
        ])
    }
}

impl Check for Examples {
    fn name(&self) -> &'static str {
        "examples"
    }
    fn run(&self, _: &CheckContext) -> Result<Vec<Certificate>> {
        verify_worked_examples()
    }
}

pub const CHECK_NAMES: [&str; 5] = ["cond3", "patterns", "ones", "indep", "examples"];

/// Every registered check, in `CHECK_NAMES` order.
pub fn checks() -> Vec<Box<dyn Check>> {
    vec![
        Box::new(Cond3),
        Box::new(Patterns),
        Box::new(Ones),
        Box::new(Indep),
        Box::new(Examples),
    ]
}

/// Runs one named check, or all of them for `"all"`; certificates come back
/// in registry order whatever order the checks finish in.
pub fn run_checks(name: &str, ctx: &CheckContext) -> Result<Vec<Certificate>> {
    let selected: Vec<Box<dyn Check>> = checks()
        .into_iter()
        .filter(|c| name == "all" || c.name() == name)
        .collect();
    if selected.is_empty() {
        return Err(Error::UnknownName(name.to_string()));
    }
    let results: Vec<Result<Vec<Certificate>>> = selected.par_iter().map(|c| c.run(ctx)).collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names() {
        let names: Vec<_> = checks().iter().map(|c| c.name()).collect();
        assert_eq!(names, CHECK_NAMES);
        let ctx = CheckContext {
            n: 7,
            backend: Box::new(ExactBackend),
        };
        assert!(matches!(
            run_checks("nope", &ctx),
            Err(Error::UnknownName(_))
        ));
    }

    #[test]
    fn verdict_json() {
        let c = Certificate::new("x", "y").with("k", Value::from(1));
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"claim_id":"x","verdict":"fail","paper_anchor":"y","details":{"k":1}}"#
        );
        assert_eq!(
            serde_json::to_string(&Verdict::NotApplicable).unwrap(),
            r#""not_applicable""#
        );
    }
}
