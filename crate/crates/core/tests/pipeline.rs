use std::collections::BTreeMap;

use nichols_core::braided_space::{
    biderivation_algebra, derive_realization, lie_algebra_of_maps, torus_lie_algebra, AbelianGroup,
    Character, DiagonalBraiding, EndV, GroupElement, LieAction, LieStructure, YDRealization,
};
use nichols_core::hopf_core::{
    bosonize, group_algebra, solve_antipode, verify_hopf, TruncatedHopf,
};
use nichols_core::linalg::Lin;
use nichols_core::nichols::{
    hilbert_series, nichols_truncated, pre_nichols_quotient, relations_in_degree, NicholsError,
};
use nichols_core::pairing::{
    derivation_from_generators, lemma_transfer_check, nichols_dual_pairing, transport_action,
    verify_hopf_pairing,
};
use nichols_core::scalars::{parse_scalar, q_factorial};
use nichols_core::tensor_algebra::parse_element;
use nichols_core::unrolled::{
    bosonization_action, check_comodule_hopf_via_grading, gk_growth, pointed_criterion,
    smash_for_growth, unrolled_bosonization, HopfAction, UnrolledError,
};
use nichols_core::{root_of_unity, CycScalar, RootOfUnity};

fn int(n: i64) -> CycScalar {
    CycScalar::from_int(n)
}

fn rank_one(m: u32) -> DiagonalBraiding {
    DiagonalBraiding::rank_one(root_of_unity(m, 1)).unwrap()
}

fn cartan_a2() -> DiagonalBraiding {
    let z = root_of_unity(3, 1);
    DiagonalBraiding::new(vec![vec![z.clone(), root_of_unity(3, 2)], vec![int(1), z]]).unwrap()
}

fn exterior() -> DiagonalBraiding {
    DiagonalBraiding::new(vec![vec![int(-1), int(1)], vec![int(1), int(-1)]]).unwrap()
}

/// Coefficients of a product of polynomials given by coefficient lists.
fn poly_mul(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[test]
fn rank_one_dimensions_follow_q_factorials() {
    for m in 2..=6u32 {
        let q = root_of_unity(m, 1);
        let gq = nichols_truncated(&rank_one(m), 8).unwrap();
        let hs = hilbert_series(&gq);
        for n in 0..=8 {
            let expect = usize::from(!q_factorial(&q, n).is_zero());
            assert_eq!(hs.dims[n], expect, "m = {m}, degree {n}");
        }
        assert_eq!(hs.total_dim, Some(m as usize));
    }
}

#[test]
fn generic_parameter_never_vanishes() {
    let b = DiagonalBraiding::rank_one(parse_scalar("2").unwrap()).unwrap();
    let hs = hilbert_series(&nichols_truncated(&b, 6).unwrap());
    assert_eq!(hs.dims, vec![1; 7]);
    assert!(!hs.is_finite());
}

#[test]
fn cartan_a2_hilbert_series() {
    // (1 + t + t^2)^2 (1 + t^2 + t^4): one factor per positive root.
    let expect = poly_mul(&poly_mul(&[1, 1, 1], &[1, 1, 1]), &[1, 0, 1, 0, 1]);
    let hs = hilbert_series(&nichols_truncated(&cartan_a2(), 9).unwrap());
    assert_eq!(&hs.dims[..9], &expect[..]);
    assert_eq!(hs.dims[9], 0);
    assert_eq!(hs.total_dim, Some(27));
}

#[test]
fn symmetric_algebra_dimensions() {
    let b = DiagonalBraiding::new(vec![vec![int(1), int(1)], vec![int(1), int(1)]]).unwrap();
    assert_eq!(
        hilbert_series(&nichols_truncated(&b, 4).unwrap()).dims,
        vec![1, 2, 3, 4, 5]
    );
}

#[test]
fn pre_nichols_quotients() {
    let b = rank_one(3);
    let cube = parse_element("x1*x1*x1", 1).unwrap();
    let (gq, rep) = pre_nichols_quotient(&b, &[cube], 5).unwrap();
    assert_eq!(gq.dims(), nichols_truncated(&b, 5).unwrap().dims());
    assert!(rep.gap_to_nichols.iter().all(|&g| g == 0));

    let a2 = cartan_a2();
    let gens: Vec<_> = (2..=4).flat_map(|n| relations_in_degree(n, &a2)).collect();
    let (gq, _) = pre_nichols_quotient(&a2, &gens, 4).unwrap();
    assert_eq!(gq.dims(), nichols_truncated(&a2, 4).unwrap().dims());

    // At a 4th root of unity x^3 is not killed by the symmetrizer.
    let bad = pre_nichols_quotient(&rank_one(4), &[parse_element("x1*x1*x1", 1).unwrap()], 4);
    assert!(matches!(bad, Err(NicholsError::NotPreNichols { .. })));

    // The free algebra is pre-Nichols with a gap in every degree from 2 on.
    let (_, rep) = pre_nichols_quotient(&rank_one(2), &[], 4).unwrap();
    assert_eq!(rep.gap_to_nichols, vec![0, 0, 1, 1, 1]);
}

fn bosonization(b: &DiagonalBraiding, cap: usize) -> TruncatedHopf {
    let gq = nichols_truncated(b, cap).unwrap();
    solve_antipode(&bosonize(&gq, &derive_realization(b).unwrap()).unwrap()).unwrap()
}

#[test]
fn bosonizations_are_hopf_and_torus_graded() {
    for b in [rank_one(2), rank_one(3), rank_one(4), exterior()] {
        let h = bosonization(&b, 6);
        assert!(h.is_finite());
        assert!(verify_hopf(&h, None).passed());
        assert!(check_comodule_hopf_via_grading(&h).unwrap().passed());
    }
}

#[test]
fn unrolled_gl2_on_symmetric_algebra() {
    let b = DiagonalBraiding::new(vec![vec![int(1), int(1)], vec![int(1), int(1)]]).unwrap();
    let r = derive_realization(&b).unwrap();
    let bd = biderivation_algebra(&r);
    assert_eq!(bd.dim(), 4);
    let gq = nichols_truncated(&b, 3).unwrap();
    let h = unrolled_bosonization(&gq, &r, &bd, 3).unwrap();
    assert!(verify_hopf(&h, Some(3)).passed());
    assert!(check_comodule_hopf_via_grading(&h).unwrap().passed());
}

#[test]
fn maps_outside_bd_v_are_refused() {
    let b = exterior();
    let r = derive_realization(&b).unwrap();
    let mix = lie_algebra_of_maps(2, vec![EndV::elementary(2, 1, 0)]).unwrap();
    let gq = nichols_truncated(&b, 3).unwrap();
    assert_eq!(
        unrolled_bosonization(&gq, &r, &mix, 2).unwrap_err(),
        UnrolledError::NotInBdV(0)
    );
}

/// `D(x) = x·g` on the bosonization of a rank-one space over `Z/m`.
fn twisted(h: &TruncatedHopf) -> HopfAction {
    let g = h.index_of("1#g(1)").unwrap();
    HopfAction::from_fn(h, LieStructure::abelian(1), |_, i| {
        // Right multiplication by g on the x-line, zero elsewhere.
        if h.degree(i) == 1 {
            h.mult(i, g).unwrap().clone()
        } else {
            Lin::new()
        }
    })
    .unwrap()
}

struct PointedCase {
    name: &'static str,
    h: TruncatedHopf,
    act: HopfAction,
    expect: bool,
}

fn pointed_cases() -> Vec<PointedCase> {
    let mut cases = Vec::new();
    for (name, b, hs) in [
        ("sweedler torus", rank_one(2), vec![vec![int(1)]]),
        ("zeta3 torus", rank_one(3), vec![vec![int(1)]]),
        ("zeta4 torus", rank_one(4), vec![vec![int(2)]]),
        (
            "exterior torus",
            exterior(),
            vec![vec![int(1), int(0)], vec![int(0), int(1)]],
        ),
    ] {
        let gq = nichols_truncated(&b, 5).unwrap();
        let r = derive_realization(&b).unwrap();
        let h = solve_antipode(&bosonize(&gq, &r).unwrap()).unwrap();
        let t = torus_lie_algebra(b.theta(), &hs).unwrap();
        let act = bosonization_action(&h, &gq, &r, &t).unwrap();
        cases.push(PointedCase {
            name,
            h,
            act,
            expect: true,
        });
    }
    let sw = bosonization(&rank_one(2), 4);
    cases.push(PointedCase {
        name: "zero action",
        act: HopfAction::zero(&sw, LieStructure::abelian(2)),
        h: sw.clone(),
        expect: true,
    });
    cases.push(PointedCase {
        name: "sweedler x -> xg",
        act: twisted(&sw),
        h: sw,
        expect: false,
    });
    let z3 = bosonization(&rank_one(3), 4);
    cases.push(PointedCase {
        name: "zeta3 x -> xg",
        act: twisted(&z3),
        h: z3,
        expect: false,
    });
    let b = exterior();
    let gq = nichols_truncated(&b, 3).unwrap();
    let r = derive_realization(&b).unwrap();
    let h = solve_antipode(&bosonize(&gq, &r).unwrap()).unwrap();
    let mix = lie_algebra_of_maps(2, vec![EndV::elementary(2, 1, 0)]).unwrap();
    let act = bosonization_action(&h, &gq, &r, &mix).unwrap();
    cases.push(PointedCase {
        name: "exterior x1 -> x2",
        h,
        act,
        expect: false,
    });
    cases
}

#[test]
fn pointed_criterion_matches_biderivations() {
    let cases = pointed_cases();
    assert!(cases.len() >= 6);
    assert!(cases.iter().filter(|c| !c.expect).count() >= 2);
    for c in cases {
        let rep =
            pointed_criterion(&c.h, &c.act, None).unwrap_or_else(|e| panic!("{}: {e}", c.name));
        assert_eq!(rep.stability.passed(), c.expect, "{}", c.name);
        assert_eq!(rep.biderivation.passed(), c.expect, "{}", c.name);
    }
}

#[test]
fn pointed_criterion_needs_trivial_group_action() {
    let h = bosonization(&rank_one(2), 3);
    let g = h.index_of("1#g(1)").unwrap();
    let act = HopfAction::from_fn(&h, LieStructure::abelian(1), |_, i| {
        if i == g {
            Lin::basis(g)
        } else {
            Lin::new()
        }
    })
    .unwrap();
    assert!(matches!(
        pointed_criterion(&h, &act, None),
        Err(UnrolledError::HypothesisFailed(_))
    ));
    // Group-likes alone do not generate Sweedler's algebra.
    let grouplikes: Vec<_> = h.grouplikes().into_iter().map(Lin::basis).collect();
    let zero = HopfAction::zero(&h, LieStructure::abelian(1));
    assert!(matches!(
        pointed_criterion(&h, &zero, Some(&grouplikes)),
        Err(UnrolledError::HypothesisFailed(_))
    ));
}

#[test]
fn growth_degree_is_lie_dimension() {
    let b = rank_one(2);
    let gq = nichols_truncated(&b, 3).unwrap();
    let r = derive_realization(&b).unwrap();
    let h = solve_antipode(&bosonize(&gq, &r).unwrap()).unwrap();
    let t = torus_lie_algebra(1, &[vec![int(1)]]).unwrap();
    for d in 1..=3usize {
        let act = bosonization_action(&h, &gq, &r, &t)
            .unwrap()
            .with_central(&h, d - 1);
        let g = gk_growth(&smash_for_growth(&h, &act, 10).unwrap()).unwrap();
        assert_eq!(g.fitted_degree, Some(d));
        let binom = |n: usize| (1..=d).fold(1usize, |acc, k| acc * (n + k) / k);
        assert_eq!(g.dims, (0..=10).map(|n| 4 * binom(n)).collect::<Vec<_>>());
    }
}

#[test]
fn pairing_transfer_metamorphic() {
    for m in [3u32, 4] {
        let b = rank_one(m);
        let (gq, p) = nichols_dual_pairing(&b, 6).unwrap();
        assert!(verify_hopf_pairing(&p, 6).passed());
        let t: LieAction = torus_lie_algebra(1, &[vec![int(1)]]).unwrap();
        let left = nichols_core::unrolled::nichols_action(&p.left, &gq, &t).unwrap();
        let right = transport_action(&p, &left).unwrap();
        let v = lemma_transfer_check(&p, &left, &right, 6).unwrap();
        assert!(v.left_passed && v.right_passed);

        let x = p.left.index_of("x1").unwrap();
        let x2 = p.left.index_of("x1*x1").unwrap();
        let bad =
            derivation_from_generators(&p.left, &[BTreeMap::from([(x, Lin::basis(x2))])]).unwrap();
        let right = transport_action(&p, &bad).unwrap();
        let v = lemma_transfer_check(&p, &bad, &right, 6).unwrap();
        assert!(!v.left_passed && !v.right_passed);
    }
}

#[test]
fn explicit_realization_with_shared_component() {
    let group = AbelianGroup::new(vec![2]).unwrap();
    let pair = (
        GroupElement(vec![1]),
        Character::new(vec![RootOfUnity::new(2, 1)]),
    );
    let b = DiagonalBraiding::new(vec![vec![int(-1), int(-1)], vec![int(-1), int(-1)]]).unwrap();
    let r = YDRealization::new(group, vec![pair.clone(), pair], b.clone()).unwrap();
    let bd = biderivation_algebra(&r);
    assert_eq!(bd.dim(), 4);
    let gq = nichols_truncated(&b, 3).unwrap();
    let h = unrolled_bosonization(&gq, &r, &bd, 2).unwrap();
    assert!(verify_hopf(&h, Some(2)).passed());
    let k = group_algebra(r.group());
    assert!(verify_hopf(&k, None).passed());
}
