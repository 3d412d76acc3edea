//! Hopf pairings `( | ): H ⊗ U → k` given by tables on bases, and the
//! transfer of Lie actions across a non-degenerate pairing.
//!
//! Tensor squares pair with a flip: `(a ⊗ ã | u ⊗ ũ) = (a|ũ)(ã|u)`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::braided_space::DiagonalBraiding;
use crate::hopf_core::{
    braided_hopf, solve_antipode, AxiomReport, Element, HopfError, TruncatedHopf,
};
use crate::linalg::{rank, Lin, TrackedEchelon};
use crate::nichols::{nichols_truncated, pre_nichols_quotient, GradedQuotient};
use crate::scalars::CycScalar;
use crate::tensor_algebra::{shuffle_coproduct_word, Word};
use crate::unrolled::{check_module_hopf, HopfAction};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PairingError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("the two actions are by different Lie algebras")]
    MismatchedLieAlgebras,
    #[error("no transported image for right basis element {0}")]
    NotTransportable(usize),
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error("{0}")]
    Construction(String),
}

#[derive(Clone, Debug)]
pub struct PairingTable {
    pub left: TruncatedHopf,
    pub right: TruncatedHopf,
    values: HashMap<(usize, usize), CycScalar>,
}

impl PairingTable {
    pub fn new(
        left: TruncatedHopf,
        right: TruncatedHopf,
        values: HashMap<(usize, usize), CycScalar>,
    ) -> Self {
        let values = values.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        PairingTable {
            left,
            right,
            values,
        }
    }

    pub fn zero(left: TruncatedHopf, right: TruncatedHopf) -> Self {
        Self::new(left, right, HashMap::new())
    }

    pub fn value(&self, i: usize, j: usize) -> CycScalar {
        self.values
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(CycScalar::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, c: CycScalar) {
        if c.is_zero() {
            self.values.remove(&(i, j));
        } else {
            self.values.insert((i, j), c);
        }
    }

    pub fn pair(&self, a: &Element, u: &Element) -> CycScalar {
        let mut s = CycScalar::zero();
        for (i, ca) in a.iter() {
            for (j, cu) in u.iter() {
                if let Some(v) = self.values.get(&(*i, *j)) {
                    s = &s + &(&(ca * cu) * v);
                }
            }
        }
        s
    }

    /// `(a ⊗ ã | u ⊗ ũ) = (a|ũ)(ã|u)`.
    pub fn pair_tensor(&self, a: &Lin<(usize, usize)>, u: &Lin<(usize, usize)>) -> CycScalar {
        let mut s = CycScalar::zero();
        for ((a1, a2), ca) in a.iter() {
            for ((u1, u2), cu) in u.iter() {
                let p = &self.value(*a1, *u2) * &self.value(*a2, *u1);
                if !p.is_zero() {
                    s = &s + &(&(ca * cu) * &p);
                }
            }
        }
        s
    }

    /// Gram matrix between the degree-n pieces, one row per left basis
    /// element.
    pub fn gram(&self, n: usize) -> (Vec<usize>, Vec<usize>, Vec<Vec<CycScalar>>) {
        let rows: Vec<usize> = (0..self.left.dim())
            .filter(|&i| self.left.degree(i) == n)
            .collect();
        let cols: Vec<usize> = (0..self.right.dim())
            .filter(|&j| self.right.degree(j) == n)
            .collect();
        let m = rows
            .iter()
            .map(|&i| cols.iter().map(|&j| self.value(i, j)).collect())
            .collect();
        (rows, cols, m)
    }

    pub fn rank_in_degree(&self, n: usize) -> usize {
        let (_, cols, m) = self.gram(n);
        rank(m.into_iter().map(|row| {
            row.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect::<Lin<usize>>()
        }))
        .min(cols.len())
    }

    fn top_degree(&self) -> usize {
        let l = (0..self.left.dim())
            .map(|i| self.left.degree(i))
            .max()
            .unwrap_or(0);
        let r = (0..self.right.dim())
            .map(|j| self.right.degree(j))
            .max()
            .unwrap_or(0);
        l.max(r)
    }

    /// Per-degree non-degeneracy within `cap`.
    pub fn nondegeneracy(&self, cap: usize) -> Vec<DegreeRank> {
        (0..=cap.min(self.top_degree()))
            .map(|n| {
                let (rows, cols, _) = self.gram(n);
                let r = self.rank_in_degree(n);
                DegreeRank {
                    degree: n,
                    left_dim: rows.len(),
                    right_dim: cols.len(),
                    rank: r,
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeRank {
    pub degree: usize,
    pub left_dim: usize,
    pub right_dim: usize,
    pub rank: usize,
}

impl DegreeRank {
    pub fn nondegenerate(&self) -> bool {
        self.rank == self.left_dim && self.rank == self.right_dim
    }
}

/// `(x_i · w | u) = Σ (x_i | u_2)(w | u_1)` over the `(n−1, 1)` component
/// of the shuffle coproduct of u.
fn word_pairing(
    b: &DiagonalBraiding,
    a: &Word,
    u: &Word,
    memo: &mut HashMap<(Word, Word), CycScalar>,
) -> CycScalar {
    if a.len() != u.len() {
        return CycScalar::zero();
    }
    if a.is_empty() {
        return CycScalar::one();
    }
    if let Some(v) = memo.get(&(a.clone(), u.clone())) {
        return v.clone();
    }
    let n = u.len();
    let mut s = CycScalar::zero();
    for ((u1, u2), c) in shuffle_coproduct_word(u, n - 1, b).iter() {
        if u2[0] == a[0] {
            s = &s + &(c * &word_pairing(b, &a[1..].to_vec(), u1, memo));
        }
    }
    memo.insert((a.clone(), u.clone()), s.clone());
    s
}

fn table_between(
    b: &DiagonalBraiding,
    left: &[Word],
    right: &[Word],
) -> HashMap<(usize, usize), CycScalar> {
    let mut memo = HashMap::new();
    let mut values = HashMap::new();
    for (i, a) in left.iter().enumerate() {
        for (j, u) in right.iter().enumerate() {
            if a.len() == u.len() {
                let v = word_pairing(b, a, u, &mut memo);
                if !v.is_zero() {
                    values.insert((i, j), v);
                }
            }
        }
    }
    values
}

/// The braided tensor algebra `T(V)` truncated at `cap`, with antipode.
pub fn tensor_hopf(
    b: &DiagonalBraiding,
    cap: usize,
) -> Result<(GradedQuotient, TruncatedHopf), PairingError> {
    let (gq, _) =
        pre_nichols_quotient(b, &[], cap).map_err(|e| PairingError::Construction(e.to_string()))?;
    let h = solve_antipode(&braided_hopf(&gq))?;
    Ok((gq, h))
}

/// Pairing between `T(V)` and `T(V*)` (same braiding matrix) with
/// `(x_i | y_j) = δ_ij`, extended so that products pair with coproducts.
pub fn graded_dual_pairing(b: &DiagonalBraiding, cap: usize) -> Result<PairingTable, PairingError> {
    let (gq, h) = tensor_hopf(b, cap)?;
    let words = gq.basis();
    let values = table_between(b, &words, &words);
    Ok(PairingTable::new(h.clone(), h, values))
}

/// The same pairing descended to `B(V) × B(V*)`, where it is non-degenerate
/// in every degree.
pub fn nichols_dual_pairing(
    b: &DiagonalBraiding,
    cap: usize,
) -> Result<(GradedQuotient, PairingTable), PairingError> {
    let gq = nichols_truncated(b, cap).map_err(|e| PairingError::Construction(e.to_string()))?;
    let h = solve_antipode(&braided_hopf(&gq))?;
    let words = gq.basis();
    let values = table_between(b, &words, &words);
    Ok((gq, PairingTable::new(h.clone(), h, values)))
}

pub const AX_PRODUCT_COPRODUCT: &str = "product pairs with coproduct";
pub const AX_COPRODUCT_PRODUCT: &str = "coproduct pairs with product";
pub const AX_ANTIPODES: &str = "antipodes are adjoint";
pub const AX_UNITS: &str = "units pair with counits";
pub const AX_ORTHOGONAL: &str = "degree orthogonality";
pub const AX_ACTION_ADJOINT: &str = "action is adjoint up to the antipode";

/// Checks the Hopf pairing identities on basis tuples of degree at most `cap`.
pub fn verify_hopf_pairing(p: &PairingTable, cap: usize) -> AxiomReport {
    let (h, u) = (&p.left, &p.right);
    let mut rep = AxiomReport::new(Some(cap));
    for name in [
        AX_PRODUCT_COPRODUCT,
        AX_COPRODUCT_PRODUCT,
        AX_UNITS,
        AX_ORTHOGONAL,
    ] {
        rep.declare(name);
    }
    let hs: Vec<usize> = (0..h.dim()).filter(|&i| h.degree(i) <= cap).collect();
    let us: Vec<usize> = (0..u.dim()).filter(|&j| u.degree(j) <= cap).collect();
    let lh = |i: usize| h.element(i).label.clone();
    let lu = |j: usize| u.element(j).label.clone();

    for &j in &us {
        let v = p.value(h.unit(), j);
        rep.record(AX_UNITS, v == *u.counit(j), || {
            (
                format!("(1 | {})", lu(j)),
                v.to_string(),
                u.counit(j).to_string(),
            )
        });
    }
    for &i in &hs {
        let v = p.value(i, u.unit());
        rep.record(AX_UNITS, v == *h.counit(i), || {
            (
                format!("({} | 1)", lh(i)),
                v.to_string(),
                h.counit(i).to_string(),
            )
        });
    }
    for &i in &hs {
        for &j in &us {
            let v = p.value(i, j);
            if !v.is_zero() {
                let same = h.element(i).zdeg == u.element(j).zdeg && h.degree(i) == u.degree(j);
                rep.record(AX_ORTHOGONAL, same, || {
                    (
                        format!("({} | {})", lh(i), lu(j)),
                        v.to_string(),
                        "0".into(),
                    )
                });
            }
        }
    }
    // (a ã | u) = (a | u_2)(ã | u_1)
    for &a in &hs {
        for &b in &hs {
            if h.degree(a) + h.degree(b) > cap {
                continue;
            }
            let Some(ab) = h.mult(a, b) else { continue };
            let flat = Lin::basis((a, b));
            for &j in &us {
                let lhs = p.pair(ab, &Lin::basis(j));
                let rhs = p.pair_tensor(&flat, u.comult(j));
                rep.record(AX_PRODUCT_COPRODUCT, lhs == rhs, || {
                    (
                        format!("({} * {} | {})", lh(a), lh(b), lu(j)),
                        lhs.to_string(),
                        rhs.to_string(),
                    )
                });
            }
        }
    }
    // (a | u ũ) = (a_2 | u)(a_1 | ũ)
    for &x in &us {
        for &y in &us {
            if u.degree(x) + u.degree(y) > cap {
                continue;
            }
            let Some(xy) = u.mult(x, y) else { continue };
            let flat = Lin::basis((x, y));
            for &i in &hs {
                let lhs = p.pair(&Lin::basis(i), xy);
                let rhs = p.pair_tensor(h.comult(i), &flat);
                rep.record(AX_COPRODUCT_PRODUCT, lhs == rhs, || {
                    (
                        format!("({} | {} * {})", lh(i), lu(x), lu(y)),
                        lhs.to_string(),
                        rhs.to_string(),
                    )
                });
            }
        }
    }
    if let (Some(sh), Some(su)) = (h.antipode(), u.antipode()) {
        rep.declare(AX_ANTIPODES);
        for &i in &hs {
            for &j in &us {
                let (Some(a), Some(b)) = (sh.get(&i), su.get(&j)) else {
                    continue;
                };
                let lhs = p.pair(a, &Lin::basis(j));
                let rhs = p.pair(&Lin::basis(i), b);
                rep.record(AX_ANTIPODES, lhs == rhs, || {
                    (
                        format!("(S({}) | {})", lh(i), lu(j)),
                        lhs.to_string(),
                        rhs.to_string(),
                    )
                });
            }
        }
    }
    rep
}

/// `(x·a | u) = −(a | x·u)` for every Lie basis element x.
pub fn verify_action_compatibility(
    p: &PairingTable,
    act_l: &HopfAction,
    act_r: &HopfAction,
    cap: usize,
) -> Result<AxiomReport, PairingError> {
    if act_l.lie() != act_r.lie() {
        return Err(PairingError::MismatchedLieAlgebras);
    }
    let (h, u) = (&p.left, &p.right);
    let mut rep = AxiomReport::new(Some(cap));
    rep.declare(AX_ACTION_ADJOINT);
    for k in 0..act_l.lie_dim() {
        for i in (0..h.dim()).filter(|&i| h.degree(i) <= cap) {
            for j in (0..u.dim()).filter(|&j| u.degree(j) <= cap) {
                let lhs = p.pair(act_l.act(k, i), &Lin::basis(j));
                let rhs = -p.pair(&Lin::basis(i), act_r.act(k, j));
                rep.record(AX_ACTION_ADJOINT, lhs == rhs, || {
                    (
                        format!(
                            "u{} with ({} | {})",
                            k + 1,
                            h.element(i).label,
                            u.element(j).label
                        ),
                        lhs.to_string(),
                        rhs.to_string(),
                    )
                });
            }
        }
    }
    Ok(rep)
}

/// The unique right action with `(x·a | u) = −(a | x·u)`, computed through
/// the Gram matrix; requires a non-degenerate pairing on finite algebras.
pub fn transport_action(p: &PairingTable, act_l: &HopfAction) -> Result<HopfAction, PairingError> {
    let (h, u) = (&p.left, &p.right);
    // Column j of the Gram matrix: the functional a ↦ (a | e_j).
    let mut ech: TrackedEchelon<usize, usize> = TrackedEchelon::new();
    for j in 0..u.dim() {
        let col: Lin<usize> = (0..h.dim())
            .map(|i| (i, p.value(i, j)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        if ech.push(Lin::basis(j), col).is_some() {
            return Err(PairingError::PreconditionFailed(
                "pairing is degenerate on the right".into(),
            ));
        }
    }
    let mut table = Vec::with_capacity(act_l.lie_dim());
    for k in 0..act_l.lie_dim() {
        let mut row = Vec::with_capacity(u.dim());
        for j in 0..u.dim() {
            let target: Lin<usize> = (0..h.dim())
                .map(|i| (i, -p.pair(act_l.act(k, i), &Lin::basis(j))))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            row.push(
                ech.solve(&target)
                    .ok_or(PairingError::NotTransportable(j))?,
            );
        }
        table.push(row);
    }
    HopfAction::new(u, act_l.lie().clone(), table)
        .map_err(|e| PairingError::Construction(e.to_string()))
}

/// Outcome of running the module-Hopf suite on both sides of a pairing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaVerdict {
    pub pairing: AxiomReport,
    pub compatibility: AxiomReport,
    pub ranks: Vec<DegreeRank>,
    pub left: AxiomReport,
    pub right: AxiomReport,
    pub left_passed: bool,
    pub right_passed: bool,
}

impl LemmaVerdict {
    /// Whether the two sides agree, as the transfer lemma predicts.
    pub fn agree(&self) -> bool {
        self.left_passed == self.right_passed
    }
}

/// Runs the module Hopf algebra checks on both sides independently after
/// confirming the hypotheses of the transfer lemma.
pub fn lemma_transfer_check(
    p: &PairingTable,
    act_l: &HopfAction,
    act_r: &HopfAction,
    cap: usize,
) -> Result<LemmaVerdict, PairingError> {
    let pairing = verify_hopf_pairing(p, cap);
    if !pairing.passed() {
        return Err(PairingError::PreconditionFailed(format!(
            "not a Hopf pairing: {}",
            pairing.failed_axioms().join(", ")
        )));
    }
    let ranks = p.nondegeneracy(cap);
    if let Some(d) = ranks.iter().find(|d| !d.nondegenerate()) {
        return Err(PairingError::PreconditionFailed(format!(
            "pairing is degenerate in degree {}",
            d.degree
        )));
    }
    let compatibility = verify_action_compatibility(p, act_l, act_r, cap)?;
    if !compatibility.passed() {
        return Err(PairingError::PreconditionFailed(
            "actions are not adjoint".into(),
        ));
    }
    let left = check_module_hopf(&p.left, act_l, Some(cap));
    let right = check_module_hopf(&p.right, act_r, Some(cap));
    Ok(LemmaVerdict {
        left_passed: left.passed(),
        right_passed: right.passed(),
        pairing,
        compatibility,
        ranks,
        left,
        right,
    })
}

/// Action on a braided Hopf algebra on words given by images of generators
/// as arbitrary elements, extended by the Leibniz rule.
pub fn derivation_from_generators(
    h: &TruncatedHopf,
    images: &[BTreeMap<usize, Element>],
) -> Result<HopfAction, PairingError> {
    let lie = crate::braided_space::LieStructure::abelian(images.len());
    let mut table = vec![vec![Lin::new(); h.dim()]; images.len()];
    let mut order: Vec<usize> = (0..h.dim()).collect();
    order.sort_by_key(|&i| h.degree(i));
    for (k, gens) in images.iter().enumerate() {
        for &i in &order {
            if let Some(v) = gens.get(&i) {
                table[k][i] = v.clone();
                continue;
            }
            if i == h.unit() || h.degree(i) == 0 {
                continue;
            }
            // Write e_i = x · e_rest via the first letter of its label.
            let label = &h.element(i).label;
            let (first, rest) = label.split_once('*').unwrap_or((label, "1"));
            let (Some(f), Some(r)) = (h.index_of(first), h.index_of(rest)) else {
                return Err(PairingError::Construction(format!("cannot factor {label}")));
            };
            let prod = h.mult(f, r).cloned().unwrap_or_default();
            if prod != Lin::basis(i) {
                return Err(PairingError::Construction(format!(
                    "{label} is not the product of its letters"
                )));
            }
            let a = h.mul(&table[k][f], &Lin::basis(r)).unwrap_or_default();
            let b = h.mul(&Lin::basis(f), &table[k][r]).unwrap_or_default();
            table[k][i] = a.add(&b);
        }
    }
    HopfAction::new(h, lie, table).map_err(|e| PairingError::Construction(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braided_space::torus_lie_algebra;
    use crate::nichols::hilbert_series;
    use crate::scalars::{q_integer, root_of_unity};
    use crate::unrolled::nichols_action;

    fn rank_one(m: u32) -> DiagonalBraiding {
        DiagonalBraiding::rank_one(root_of_unity(m, 1)).unwrap()
    }

    #[test]
    fn degree_two_rank_one() {
        let b = rank_one(5);
        let p = graded_dual_pairing(&b, 3).unwrap();
        let x2 = p.left.index_of("x1*x1").unwrap();
        assert_eq!(p.value(x2, x2), q_integer(&root_of_unity(5, 1), 2));
        let x = p.left.index_of("x1").unwrap();
        assert_eq!(p.value(x, x), CycScalar::one());
        assert!(p.value(x, x2).is_zero());
    }

    #[test]
    fn tensor_pairing_is_hopf_and_radical_is_kernel() {
        for m in [2, 3, 4] {
            let b = rank_one(m);
            let p = graded_dual_pairing(&b, 4).unwrap();
            let rep = verify_hopf_pairing(&p, 4);
            assert!(rep.passed(), "{:?}", rep.violations);
            let hs = hilbert_series(&nichols_truncated(&b, 4).unwrap());
            for n in 0..=4 {
                assert_eq!(p.rank_in_degree(n), hs.dims[n]);
            }
        }
    }

    #[test]
    fn cartan_a2_pairing() {
        let z = root_of_unity(3, 1);
        let z2 = root_of_unity(3, 2);
        let b = DiagonalBraiding::new(vec![vec![z.clone(), z2.clone()], vec![CycScalar::one(), z]])
            .unwrap();
        let p = graded_dual_pairing(&b, 4).unwrap();
        let rep = verify_hopf_pairing(&p, 4);
        assert!(rep.passed(), "{:?}", rep.violations);
        let hs = hilbert_series(&nichols_truncated(&b, 4).unwrap());
        for n in 0..=4 {
            assert_eq!(p.rank_in_degree(n), hs.dims[n]);
        }
    }

    #[test]
    fn corrupted_entry_fails() {
        let b = rank_one(3);
        let mut p = graded_dual_pairing(&b, 3).unwrap();
        let x2 = p.left.index_of("x1*x1").unwrap();
        p.set(x2, x2, CycScalar::from_int(7));
        let rep = verify_hopf_pairing(&p, 3);
        assert_eq!(rep.axiom_passed(AX_PRODUCT_COPRODUCT), Some(false));
        assert!(rep.violations.iter().any(|v| v.witness.contains("x1 * x1")));
    }

    #[test]
    fn zero_pairing_is_degenerate() {
        let b = rank_one(3);
        let (_, p) = nichols_dual_pairing(&b, 4).unwrap();
        let z = PairingTable::zero(p.left.clone(), p.right.clone());
        let rep = verify_hopf_pairing(&z, 3);
        assert_eq!(rep.axiom_passed(AX_UNITS), Some(false));
        assert!(z.nondegeneracy(3).iter().all(|d| !d.nondegenerate()));
    }

    #[test]
    fn torus_actions_transfer() {
        let b = rank_one(3);
        let (gq, p) = nichols_dual_pairing(&b, 4).unwrap();
        assert!(verify_hopf_pairing(&p, 4).passed());
        let t = torus_lie_algebra(1, &[vec![CycScalar::from_int(1)]]).unwrap();
        let left = nichols_action(&p.left, &gq, &t).unwrap();
        let right = transport_action(&p, &left).unwrap();
        let contra = nichols_action(&p.right, &gq, &t.contragredient()).unwrap();
        assert_eq!(right, contra);
        let v = lemma_transfer_check(&p, &left, &right, 4).unwrap();
        assert!(v.left_passed && v.right_passed);
        // Same action on both sides is not adjoint.
        let same = verify_action_compatibility(&p, &left, &left, 4).unwrap();
        assert!(!same.passed());
        let zero = HopfAction::zero(&p.right, left.lie().clone());
        assert!(!verify_action_compatibility(&p, &left, &zero, 4)
            .unwrap()
            .passed());
        let zl = HopfAction::zero(&p.left, left.lie().clone());
        assert!(verify_action_compatibility(&p, &zl, &zero, 4)
            .unwrap()
            .passed());
    }

    #[test]
    fn fault_transfers_to_fault() {
        let b = rank_one(3);
        let (_, p) = nichols_dual_pairing(&b, 4).unwrap();
        let x = p.left.index_of("x1").unwrap();
        let x2 = p.left.index_of("x1*x1").unwrap();
        let d =
            derivation_from_generators(&p.left, &[BTreeMap::from([(x, Lin::basis(x2))])]).unwrap();
        let right = transport_action(&p, &d).unwrap();
        let v = lemma_transfer_check(&p, &d, &right, 4).unwrap();
        assert!(!v.left_passed && !v.right_passed);
        assert!(v.agree());
    }

    #[test]
    fn degenerate_pairing_refused() {
        let b = rank_one(3);
        let p = graded_dual_pairing(&b, 4).unwrap();
        let z = HopfAction::zero(&p.left, crate::braided_space::LieStructure::abelian(1));
        assert!(matches!(
            lemma_transfer_check(&p, &z, &z, 4),
            Err(PairingError::PreconditionFailed(_))
        ));
    }
}
