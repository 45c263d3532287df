use proptest::prelude::*;

use tensorium::constructions::{adjoin, AdjoinSpec};
use tensorium::linalg::{
    gram_power_matrix, gram_power_matrix_mod_p, rank_exact, rank_mod_p, Rref, DEFAULT_PRIME,
};
use tensorium::tensor::{flatten, poly_to_tensor, slice, symmetrize, tensor_to_poly};
use tensorium::wset::pi_permute;
use tensorium::{RatMatrix, Rational, Tensor};

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=12).prop_map(|(n, d)| Rational::new(n, d))
}

fn small_int() -> impl Strategy<Value = Rational> {
    (-3i64..=3).prop_map(Rational::from_int)
}

fn matrix() -> impl Strategy<Value = RatMatrix> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
        prop::collection::vec(small_int(), r * c)
            .prop_map(move |e| RatMatrix::new(r, c, e).unwrap())
    })
}

/// Low-rank products, so rank deficiency is actually exercised.
fn low_rank_matrix() -> impl Strategy<Value = RatMatrix> {
    (1usize..6, 1usize..6, 1usize..4).prop_flat_map(|(r, c, k)| {
        (
            prop::collection::vec(small_int(), r * k),
            prop::collection::vec(small_int(), k * c),
        )
            .prop_map(move |(a, b)| {
                RatMatrix::from_fn(r, c, |i, j| {
                    (0..k).map(|t| &a[i * k + t] * &b[t * c + j]).sum()
                })
            })
    })
}

fn tensor(order: std::ops::Range<usize>) -> impl Strategy<Value = Tensor> {
    prop::collection::vec(1usize..4, order).prop_flat_map(|dims| {
        let len: usize = dims.iter().product();
        prop::collection::vec(small_int(), len)
            .prop_map(move |e| Tensor::dense(dims.clone(), e).unwrap())
    })
}

fn cubical(n: usize, d: usize) -> impl Strategy<Value = Tensor> {
    prop::collection::vec(small_int(), n.pow(d as u32))
        .prop_map(move |e| Tensor::dense(vec![n; d], e).unwrap())
}

proptest! {
    #[test]
    fn rational_string_round_trip(x in rational()) {
        let s = x.to_string();
        prop_assert_eq!(s.parse::<Rational>().unwrap(), x.clone());
        let json = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), x);
    }

    #[test]
    fn rank_backends_agree(m in prop_oneof![matrix(), low_rank_matrix()]) {
        let r = rank_exact(&m);
        prop_assert_eq!(Rref::new(&m).rank(), r);
        prop_assert_eq!(rank_mod_p(&m, DEFAULT_PRIME).unwrap(), r);
        prop_assert_eq!(rank_exact(&m.transpose()), r);
    }

    #[test]
    fn complementary_flattenings_are_transposes(t in tensor(2..5), mask in 1u32..15) {
        let d = t.order();
        let j: Vec<usize> = (1..=d).filter(|m| mask >> (m - 1) & 1 == 1).collect();
        let jc: Vec<usize> = (1..=d).filter(|m| !j.contains(m)).collect();
        prop_assume!(!j.is_empty() && !jc.is_empty());
        prop_assert_eq!(flatten(&t, &j).unwrap().transpose(), flatten(&t, &jc).unwrap());
    }

    #[test]
    fn symmetrize_is_idempotent(t in cubical(3, 3)) {
        let s = symmetrize(&t).unwrap();
        prop_assert_eq!(symmetrize(&s).unwrap(), s);
    }

    #[test]
    fn poly_tensor_round_trip(t in cubical(3, 3)) {
        let s = symmetrize(&t).unwrap();
        let p = tensor_to_poly(&s).unwrap();
        prop_assert_eq!(poly_to_tensor(&p).unwrap(), s);
    }

    #[test]
    fn pi_has_order_2n(n in 1usize..8, a in rational(), b in rational()) {
        let v: Vec<usize> = (0..4 * n).collect();
        let mut w = pi_permute(&v).unwrap();
        let mut order = 1;
        while w != v {
            w = pi_permute(&w).unwrap();
            order += 1;
        }
        prop_assert_eq!(order, 2 * n);

        let mut blocks = vec![a.clone(); 2 * n];
        blocks.extend(vec![b.clone(); 2 * n]);
        let mut swapped = vec![b; 2 * n];
        swapped.extend(vec![a; 2 * n]);
        prop_assert_eq!(pi_permute(&blocks).unwrap(), swapped);
    }

    #[test]
    fn tensor_json_round_trip(t in tensor(0..4)) {
        let json = serde_json::to_string(&t).unwrap();
        prop_assert_eq!(serde_json::from_str::<Tensor>(&json).unwrap(), t.clone());
        let sparse = t.to_sparse();
        let json = serde_json::to_string(&sparse).unwrap();
        prop_assert_eq!(serde_json::from_str::<Tensor>(&json).unwrap().to_dense().unwrap(), t);
    }

    #[test]
    fn gram_ranks_agree(
        vs in prop::collection::vec(prop::collection::vec(small_int(), 4), 1..7),
        d in 1u32..4,
    ) {
        let exact = rank_exact(&gram_power_matrix(&vs, d).unwrap());
        let modular = gram_power_matrix_mod_p(&vs, d, DEFAULT_PRIME).unwrap().rank();
        prop_assert_eq!(exact, modular);
    }

    #[test]
    fn adjoined_slices_recover_generators(
        core in cubical(2, 3),
        gens in prop::collection::vec(cubical(2, 2), 0..3),
        mode in 1usize..=3,
    ) {
        let mut adjoined = vec![Vec::new(); 3];
        adjoined[mode - 1] = gens.clone();
        let t = adjoin(&AdjoinSpec { core: core.clone(), adjoined }).unwrap();
        for (w, g) in gens.iter().enumerate() {
            let s = slice(&t, mode, 3 + w).unwrap();
            for i in 1..=2 {
                for k in 1..=2 {
                    prop_assert_eq!(s.entry(&[i, k]).unwrap(), g.entry(&[i, k]).unwrap());
                }
            }
        }
        for i in 1..=2 {
            let kept = slice(&t, mode, i).unwrap().dense_entries().unwrap();
            prop_assert_eq!(kept, slice(&core, mode, i).unwrap().dense_entries().unwrap());
        }
    }
}
