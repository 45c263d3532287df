//! Small worked examples: a six-term Waring decomposition, a rank-one member
//! of a Mod space with no symmetric rank-one member, and a Mod space
//! containing zero.

use serde_json::json;

use super::Certificate;
use crate::constructions::{mod_space_contains, mod_space_sample, ModSpace};
use crate::error::Result;
use crate::rank_bounds::{
    binary_sym_rank_one_in_modspace, verify_sym_decomposition, SymDecomposition, SymTarget,
};
use crate::rational::{q, Rational};
use crate::tensor::{is_rank_one, monomial_orbit, poly_to_tensor, sym_power, PolyForm, Tensor};

/// `x^4 + 12x^2yz`.
pub fn six_term_target() -> PolyForm {
    PolyForm::from_terms(3, 4, &[(q(1, 1), &[4, 0, 0]), (q(12, 1), &[2, 1, 1])])
        .expect("valid quartic")
}

/// Six fourth powers of linear forms in `x, y, z` summing to [`six_term_target`].
pub fn six_term_decomposition() -> SymDecomposition {
    let terms = [
        (q(1, 24), [1, -3, 1]),
        (q(-1, 30), [2, -3, 1]),
        (q(-1, 120), [-3, -3, 1]),
        (q(-1, 60), [1, 3, 1]),
        (q(1, 84), [3, 3, 1]),
        (q(1, 210), [-4, 3, 1]),
    ];
    SymDecomposition::new(
        4,
        terms
            .into_iter()
            .map(|(c, v)| (c, v.iter().map(|&x| Rational::from_int(x)).collect())),
    )
}

/// `(x^4 - 3y^4) Mod {x^2y, xy^2}` with the two generators as orbit indicators.
pub fn binary_quartic_modspace() -> Result<ModSpace> {
    let core = poly_to_tensor(&PolyForm::from_terms(
        2,
        4,
        &[(q(1, 1), &[4, 0]), (q(-3, 1), &[0, 4])],
    )?)?;
    let gens = vec![monomial_orbit(2, &[2, 1])?, monomial_orbit(2, &[1, 2])?];
    ModSpace::symmetric(core, gens)
}

/// The member of [`binary_quartic_modspace`] obtained by adding `x^2y + xy^2`
/// to the first mode-4 slice and `-3(x^2y + xy^2)` to the second, then `a_j x^2y`
/// to the first and `b_j xy^2` to the second mode-`j` slice.
pub fn rank_one_witness(a: &[Rational; 4], b: &[Rational; 4]) -> Result<Tensor> {
    let ms = binary_quartic_modspace()?;
    let zero = Rational::zero;
    let mut params = ms.zero_params();
    for j in 0..4 {
        params[j][0] = vec![a[j].clone(), zero()];
        params[j][1] = vec![zero(), b[j].clone()];
    }
    params[3][0] = vec![Rational::one() + &a[3], Rational::one()];
    params[3][1] = vec![q(-3, 1), q(-3, 1) + &b[3]];
    mod_space_sample(&ms, &params)
}

/// The standard choice `a = (-1,-1,-1,2)`, `b = (1/3,1/3,1/3,-2/3)`.
pub fn rank_one_parameters() -> ([Rational; 4], [Rational; 4]) {
    (
        [q(-1, 1), q(-1, 1), q(-1, 1), q(2, 1)],
        [q(1, 3), q(1, 3), q(1, 3), q(-2, 3)],
    )
}

pub fn check_rank_one_witness(a: &[Rational; 4], b: &[Rational; 4]) -> Result<Certificate> {
    let t = rank_one_witness(a, b)?;
    let ok = is_rank_one(&t);
    let show = |v: &[Rational; 4]| v.iter().map(Rational::to_string).collect::<Vec<_>>();
    Ok(Certificate::new(
        "examples.rank_one_witness",
        "(x^4 - 3y^4) Mod {x^2y, xy^2} contains a decomposable tensor",
    )
    .with("a", json!(show(a)))
    .with("b", json!(show(b)))
    .with("nonzeros", json!(t.nnz()))
    .verdict_if(ok))
}

/// Rank-one generators `x^3`, `y^3`, `(x+y)^3`, `(x-y)^3`; they span all
/// symmetric binary cubics.
pub fn cubic_rank_one_basis() -> Vec<Tensor> {
    [[1, 0], [0, 1], [1, 1], [1, -1]]
        .iter()
        .map(|v| sym_power(&[Rational::from_int(v[0]), Rational::from_int(v[1])], 3))
        .collect()
}

/// Runs the fixed battery of worked examples.
pub fn verify_worked_examples() -> Result<Vec<Certificate>> {
    let mut out = Vec::new();

    let dec = six_term_decomposition();
    let ok = verify_sym_decomposition(&SymTarget::Poly(six_term_target()), &dec)?;
    out.push(
        Certificate::new(
            "examples.six_term",
            "x^4 + 12x^2yz is a sum of six fourth powers",
        )
        .with("terms", json!(dec.terms.len()))
        .verdict_if(ok),
    );

    let (a, b) = rank_one_parameters();
    out.push(check_rank_one_witness(&a, &b)?);

    let mut absent = true;
    let mut degrees = Vec::new();
    for d in [4, 6] {
        let w = binary_sym_rank_one_in_modspace(&q(3, 1), d)?;
        absent &= w.is_none();
        degrees.push(json!({ "degree": d, "symmetric_rank_one": w.is_some() }));
    }
    out.push(
        Certificate::new(
            "examples.no_symmetric_rank_one",
            "(x^d - 3y^d) Mod {x^{d-2}y, ..., xy^{d-2}} has no real symmetric rank-one member",
        )
        .with("degrees", json!(degrees))
        .verdict_if(absent),
    );

    let ms = binary_quartic_modspace()?;
    let ms = ModSpace::symmetric(ms.core, cubic_rank_one_basis())?;
    let zero = Tensor::zeros(ms.core.dims().to_vec())?;
    let params = mod_space_contains(&ms, &zero)?;
    out.push(
        Certificate::new(
            "examples.minrk_zero",
            "zero lies in (x^4 - 3y^4) Mod a rank-one basis of binary cubics",
        )
        .with("generators", json!(ms.increments[0].len()))
        .verdict_if(params.is_some()),
    );
    Ok(out)
}
