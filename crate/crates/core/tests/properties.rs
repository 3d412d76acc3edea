use nichols_core::braided_space::{
    biderivation_algebra, AbelianGroup, Character, DiagonalBraiding, EndV, GroupElement,
    YDRealization,
};
use nichols_core::linalg::Lin;
use nichols_core::tensor_algebra::{
    apply_derivation, braid_generator, braid_lift, concat, coproduct, extend_derivation,
    permutations, quantum_symmetrizer, words, LinOp, TensorElement, Word,
};
use nichols_core::{root_of_unity, CycScalar, RootOfUnity};
use proptest::prelude::*;

fn scalar_strategy() -> impl Strategy<Value = CycScalar> {
    (
        prop::sample::select(vec![3u32, 4, 5, 12]),
        prop::collection::vec(-4i64..=4, 1..5),
    )
        .prop_map(|(m, cs)| {
            cs.iter()
                .enumerate()
                .fold(CycScalar::zero(), |acc, (k, &c)| {
                    &acc + &(&root_of_unity(m, k as i64) * &CycScalar::from_int(c))
                })
        })
}

/// Braiding with entries `ζ_m^k`.
fn braiding_strategy(max_theta: usize) -> impl Strategy<Value = DiagonalBraiding> {
    (1..=max_theta, 2u32..=6).prop_flat_map(|(theta, m)| {
        prop::collection::vec(0i64..m as i64, theta * theta).prop_map(move |ks| {
            let q = (0..theta)
                .map(|i| {
                    (0..theta)
                        .map(|j| root_of_unity(m, ks[i * theta + j]))
                        .collect()
                })
                .collect();
            DiagonalBraiding::new(q).unwrap()
        })
    })
}

fn element_strategy(theta: usize, n: usize) -> impl Strategy<Value = TensorElement> {
    prop::collection::vec((prop::collection::vec(0..theta as u8, n), -3i64..=3), 1..4).prop_map(
        |terms| {
            let mut v = Lin::new();
            for (w, c) in terms {
                v.add_term(w, CycScalar::from_int(c));
            }
            v
        },
    )
}

/// Brute force: a permutation acts on a word by moving the letter at p to
/// perm[p], picking up `q_{w_p w_p'}` for every inverted pair p < p'.
fn lift_oracle(perm: &[usize], w: &[u8], b: &DiagonalBraiding) -> (CycScalar, Word) {
    let n = w.len();
    let mut c = CycScalar::one();
    for p in 0..n {
        for pp in p + 1..n {
            if perm[p] > perm[pp] {
                c = &c * b.q(w[p] as usize, w[pp] as usize);
            }
        }
    }
    let mut out = vec![0u8; n];
    for p in 0..n {
        out[perm[p]] = w[p];
    }
    (c, out)
}

fn symmetrizer_oracle(n: usize, b: &DiagonalBraiding) -> LinOp {
    LinOp::from_fn(b.theta(), n, n, |w| {
        let mut v = Lin::new();
        for perm in permutations(n) {
            let (c, u) = lift_oracle(&perm, w, b);
            v.add_term(u, c);
        }
        v
    })
}

fn tensor_product(
    a: &Lin<(Word, Word)>,
    b: &Lin<(Word, Word)>,
    br: &DiagonalBraiding,
) -> Lin<(Word, Word)> {
    let mut out = Lin::new();
    for ((a1, a2), ca) in a.iter() {
        for ((b1, b2), cb) in b.iter() {
            // (a1 ⊗ a2)(b1 ⊗ b2) = c(a2, b1) a1 b1 ⊗ a2 b2
            let mut c = ca * cb;
            for &x in a2 {
                for &y in b1 {
                    c = &c * br.q(x as usize, y as usize);
                }
            }
            let mut l = a1.clone();
            l.extend_from_slice(b1);
            let mut r = a2.clone();
            r.extend_from_slice(b2);
            out.add_term((l, r), c);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(a in scalar_strategy(), b in scalar_strategy(), c in scalar_strategy()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn braid_relations(b in braiding_strategy(3), n in 3usize..=4) {
        for i in 1..n {
            let si = braid_generator(n, i, &b).unwrap();
            for j in 1..n {
                let sj = braid_generator(n, j, &b).unwrap();
                if i + 1 == j {
                    prop_assert_eq!(si.compose(&sj).compose(&si), sj.compose(&si).compose(&sj));
                } else if i.abs_diff(j) > 1 {
                    prop_assert_eq!(si.compose(&sj), sj.compose(&si));
                }
            }
        }
    }

    #[test]
    fn lifts_match_closed_form(b in braiding_strategy(2), n in 1usize..=4) {
        for perm in permutations(n) {
            let op = braid_lift(&perm, &b).unwrap();
            for w in words(b.theta(), n) {
                let (c, u) = lift_oracle(&perm, &w, &b);
                prop_assert_eq!(op.column(&w), Lin::single(u, c));
            }
        }
    }

    #[test]
    fn symmetrizer_is_sum_of_lifts(b in braiding_strategy(2), n in 1usize..=4) {
        prop_assert_eq!(quantum_symmetrizer(n, &b), symmetrizer_oracle(n, &b));
    }

    #[test]
    fn shuffle_coproduct_coassociative(b in braiding_strategy(2), v in element_strategy(2, 4)) {
        prop_assume!(b.theta() == 2);
        let d = coproduct(&v, &b);
        let left: Lin<(Word, Word, Word)> = d.apply(|(x, y)| coproduct(&Lin::basis(x.clone()), &b).map_keys(|(p, q)| (p.clone(), q.clone(), y.clone())));
        let right: Lin<(Word, Word, Word)> = d.apply(|(x, y)| coproduct(&Lin::basis(y.clone()), &b).map_keys(|(p, q)| (x.clone(), p.clone(), q.clone())));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn shuffle_coproduct_multiplicative(b in braiding_strategy(2), u in element_strategy(2, 2), v in element_strategy(2, 2)) {
        prop_assume!(b.theta() == 2);
        let lhs = coproduct(&concat(&u, &v), &b);
        let rhs = tensor_product(&coproduct(&u, &b), &coproduct(&v, &b), &b);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn leibniz(rows in prop::collection::vec(-2i64..=2, 4), u in element_strategy(2, 2), v in element_strategy(2, 3)) {
        let d = EndV::from_rows(vec![
            vec![CycScalar::from_int(rows[0]), CycScalar::from_int(rows[1])],
            vec![CycScalar::from_int(rows[2]), CycScalar::from_int(rows[3])],
        ]).unwrap();
        let lhs = apply_derivation(&d, &concat(&u, &v));
        let rhs = concat(&apply_derivation(&d, &u), &v).add(&concat(&u, &apply_derivation(&d, &v)));
        prop_assert_eq!(lhs, rhs);
    }
}

/// A realization over `(Z/m)^2` with random `(g_i, χ_i)`; generators 0 and 1
/// share their pair when `merge` is set, so `bd_V` contains a `gl(2)` block.
fn random_realization(
    m: u32,
    gs: &[(u32, u32)],
    chis: &[(i64, i64)],
    merge: bool,
) -> YDRealization {
    let group = AbelianGroup::new(vec![m, m]).unwrap();
    let theta = gs.len();
    let mut pairs: Vec<(GroupElement, Character)> = (0..theta)
        .map(|i| {
            let g = GroupElement(vec![gs[i].0 % m, gs[i].1 % m]);
            let chi = Character::new(vec![
                RootOfUnity::new(m, chis[i].0),
                RootOfUnity::new(m, chis[i].1),
            ]);
            (g, chi)
        })
        .collect();
    if merge {
        pairs[1] = pairs[0].clone();
    }
    let q = (0..theta)
        .map(|i| (0..theta).map(|j| pairs[j].1.eval(&pairs[i].0)).collect())
        .collect();
    YDRealization::new(group, pairs, DiagonalBraiding::new(q).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn derivations_commute_with_braid_lifts(
        m in 2u32..=4,
        gs in prop::collection::vec((0u32..4, 0u32..4), 3),
        chis in prop::collection::vec((0i64..4, 0i64..4), 3),
        merge in any::<bool>(),
    ) {
        let r = random_realization(m, &gs, &chis, merge);
        let b = r.braiding().clone();
        let bd = biderivation_algebra(&r);
        for n in 1..=3 {
            let s = quantum_symmetrizer(n, &b);
            for d in bd.basis_maps() {
                let dn = extend_derivation(d, n);
                prop_assert_eq!(dn.compose(&s), s.compose(&dn));
                for perm in permutations(n) {
                    let l = braid_lift(&perm, &b).unwrap();
                    prop_assert_eq!(dn.compose(&l), l.compose(&dn));
                }
            }
        }
    }
}
