//! Degreewise presentations `T(V)/I` of Nichols algebras and user-supplied
//! pre-Nichols algebras.
//!
//! Each degree keeps the relation space `I_n ⊆ T^n(V)` in semi-echelon form
//! with the largest word of each row as pivot. Lexicographic order on words
//! of a fixed length is compatible with concatenation, so the non-pivot
//! ("normal") words form a basis of the quotient in each degree and reduction
//! modulo `I_n` is the projection onto their span.

use crate::braided_space::{DiagonalBraiding, LieAction};
use crate::linalg::{Lin, Subspace, TrackedEchelon};
use crate::tensor_algebra::{
    apply_derivation, concat, homogeneous_degree, render_element, shuffle_coproduct_word, words,
    Symmetrizer, TensorElement, Word,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NicholsError {
    #[error("truncation degree must be at least 1")]
    CapTooSmall,
    #[error("generator {0} is not Z^theta-homogeneous")]
    NotHomogeneous(usize),
    #[error("generator {0} has a nonzero counit")]
    CounitNonzero(usize),
    #[error(
        "the ideal is not a coideal in degree {degree}: coproduct of {witness} leaves I⊗T + T⊗I"
    )]
    NotCoideal { degree: usize, witness: String },
    #[error(
        "the ideal is not contained in the kernel of the symmetrizer in degree {degree}: {witness}"
    )]
    NotPreNichols { degree: usize, witness: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuotientKind {
    Nichols,
    PreNichols,
}

#[derive(Clone, Debug)]
struct DegreePiece {
    relations: Subspace<Word>,
    normal: Vec<Word>,
}

/// A graded quotient of T(V), known up to degree `cap`.
#[derive(Clone, Debug)]
pub struct GradedQuotient {
    braiding: DiagonalBraiding,
    cap: usize,
    kind: QuotientKind,
    pieces: Vec<DegreePiece>,
    vanishes_from: Option<usize>,
}

fn piece_from_relations(theta: usize, n: usize, relations: Subspace<Word>) -> DegreePiece {
    let normal = words(theta, n)
        .into_iter()
        .filter(|w| !relations.is_pivot(w))
        .collect();
    DegreePiece { relations, normal }
}

/// Basis of `ker S_n`, each vector with a distinct leading word.
pub fn relations_in_degree(n: usize, b: &DiagonalBraiding) -> Vec<TensorElement> {
    symmetrizer_kernel(n, &Symmetrizer::new(b.clone()))
}

fn symmetrizer_kernel(n: usize, sym: &Symmetrizer) -> Vec<TensorElement> {
    let mut ech: TrackedEchelon<Word, Word> = TrackedEchelon::new();
    words(sym.braiding().theta(), n)
        .into_iter()
        .filter_map(|w| {
            let img = sym.apply_word(&w);
            ech.push(Lin::basis(w), img)
        })
        .collect()
}

/// The Nichols algebra `B(V) = T(V)/ker S` up to degree `cap`.
pub fn nichols_truncated(b: &DiagonalBraiding, cap: usize) -> Result<GradedQuotient, NicholsError> {
    if cap < 1 {
        return Err(NicholsError::CapTooSmall);
    }
    let theta = b.theta();
    let sym = Symmetrizer::new(b.clone());
    let mut pieces = Vec::with_capacity(cap + 1);
    let mut vanishes_from = None;
    for n in 0..=cap {
        if vanishes_from.is_some() {
            break;
        }
        let mut rel = Subspace::new();
        for r in symmetrizer_kernel(n, &sym) {
            rel.insert(&r);
        }
        let piece = piece_from_relations(theta, n, rel);
        if piece.normal.is_empty() {
            vanishes_from = Some(n);
        }
        pieces.push(piece);
    }
    Ok(GradedQuotient {
        braiding: b.clone(),
        cap,
        kind: QuotientKind::Nichols,
        pieces,
        vanishes_from,
    })
}

/// Per-generator and per-degree outcome of the pre-Nichols construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreNicholsReport {
    /// `dim I_n` for `n ≤ cap`.
    pub ideal_dims: Vec<usize>,
    /// `dim J_n − dim I_n`: zero where the ideal agrees with `ker S_n`.
    pub gap_to_nichols: Vec<usize>,
    /// Always "verified up to degree cap".
    pub verified_up_to: usize,
}

/// `T(V)/I` with I the two-sided ideal generated by homogeneous `gens`,
/// checked to be a Hopf ideal inside `ker S` up to degree `cap`.
pub fn pre_nichols_quotient(
    b: &DiagonalBraiding,
    gens: &[TensorElement],
    cap: usize,
) -> Result<(GradedQuotient, PreNicholsReport), NicholsError> {
    if cap < 1 {
        return Err(NicholsError::CapTooSmall);
    }
    let theta = b.theta();
    let mut by_degree: Vec<Vec<&TensorElement>> = vec![Vec::new(); cap + 1];
    for (k, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        if homogeneous_degree(g, theta).is_none() {
            return Err(NicholsError::NotHomogeneous(k));
        }
        let n = g.keys().next().map(Vec::len).unwrap_or(0);
        if n == 0 {
            return Err(NicholsError::CounitNonzero(k));
        }
        if n <= cap {
            by_degree[n].push(g);
        }
    }

    let mut pieces: Vec<DegreePiece> = Vec::with_capacity(cap + 1);
    let mut vanishes_from = None;
    for n in 0..=cap {
        if vanishes_from.is_some() {
            break;
        }
        let mut rel = Subspace::new();
        if n > 0 {
            for r in pieces[n - 1].relations.basis() {
                for a in 0..theta as u8 {
                    let letter = Lin::basis(vec![a]);
                    rel.insert(&concat(&letter, r));
                    rel.insert(&concat(r, &letter));
                }
            }
        }
        for g in &by_degree[n] {
            rel.insert(g);
        }
        let piece = piece_from_relations(theta, n, rel);
        if piece.normal.is_empty() {
            vanishes_from = Some(n);
        }
        pieces.push(piece);
    }
    let gq = GradedQuotient {
        braiding: b.clone(),
        cap,
        kind: QuotientKind::PreNichols,
        pieces,
        vanishes_from,
    };

    let sym = Symmetrizer::new(b.clone());
    let mut ideal_dims = Vec::new();
    let mut gap = Vec::new();
    for n in 0..=cap {
        let rels = gq.relations(n);
        for r in &rels {
            if !sym.apply(r).is_zero() {
                return Err(NicholsError::NotPreNichols {
                    degree: n,
                    witness: render_element(r),
                });
            }
            for p in 1..n {
                let mut delta = Lin::new();
                for (w, c) in r.iter() {
                    delta.add_scaled(&shuffle_coproduct_word(w, p, b), c);
                }
                if !gq.project_tensor(&delta).is_zero() {
                    return Err(NicholsError::NotCoideal {
                        degree: n,
                        witness: render_element(r),
                    });
                }
            }
        }
        let nichols_rel = symmetrizer_kernel(n, &sym).len();
        ideal_dims.push(rels.len());
        gap.push(nichols_rel - rels.len());
    }
    Ok((
        gq,
        PreNicholsReport {
            ideal_dims,
            gap_to_nichols: gap,
            verified_up_to: cap,
        },
    ))
}

impl GradedQuotient {
    pub fn braiding(&self) -> &DiagonalBraiding {
        &self.braiding
    }

    pub fn theta(&self) -> usize {
        self.braiding.theta()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn kind(&self) -> QuotientKind {
        self.kind
    }

    /// First degree where the quotient is zero, if reached within `cap`.
    pub fn vanishes_from(&self) -> Option<usize> {
        self.vanishes_from
    }

    pub fn is_finite(&self) -> bool {
        self.vanishes_from.is_some()
    }

    /// Largest degree with a nonzero component that is known, i.e. the top
    /// degree when finite and `cap` otherwise.
    pub fn top_degree(&self) -> usize {
        self.vanishes_from.map(|n| n - 1).unwrap_or(self.cap)
    }

    /// `dim` of the degree-n component; `None` beyond the truncation.
    pub fn dim(&self, n: usize) -> Option<usize> {
        match self.pieces.get(n) {
            Some(p) => Some(p.normal.len()),
            None if self.vanishes_from.is_some() => Some(0),
            None => None,
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.cap).map(|n| self.dim(n).unwrap_or(0)).collect()
    }

    /// Normal words of degree n: a basis of the quotient's degree-n piece.
    pub fn normal_words(&self, n: usize) -> &[Word] {
        self.pieces
            .get(n)
            .map(|p| p.normal.as_slice())
            .unwrap_or(&[])
    }

    /// All normal words of degree ≤ min(cap, top degree), by degree then lex.
    pub fn basis(&self) -> Vec<Word> {
        self.pieces
            .iter()
            .flat_map(|p| p.normal.iter().cloned())
            .collect()
    }

    pub fn is_normal(&self, w: &[u8]) -> bool {
        self.pieces
            .get(w.len())
            .map(|p| !p.relations.is_pivot(&w.to_vec()))
            .unwrap_or(false)
    }

    /// Basis of the relation space in degree n (empty beyond the truncation
    /// unless the quotient vanished, in which case all words are relations).
    pub fn relations(&self, n: usize) -> Vec<TensorElement> {
        match self.pieces.get(n) {
            Some(p) => p.relations.basis().cloned().collect(),
            None if self.vanishes_from.is_some() => {
                words(self.theta(), n).into_iter().map(Lin::basis).collect()
            }
            None => Vec::new(),
        }
    }

    pub fn relation_count(&self, n: usize) -> usize {
        match self.pieces.get(n) {
            Some(p) => p.relations.dim(),
            None => self.theta().pow(n as u32),
        }
    }

    fn project_word_into(
        &self,
        w: &[u8],
        c: &crate::scalars::CycScalar,
        out: &mut TensorElement,
    ) -> bool {
        match self.pieces.get(w.len()) {
            Some(p) => {
                let red = p.relations.reduce(&Lin::basis(w.to_vec()));
                out.add_scaled(&red, c);
                true
            }
            None => self.vanishes_from.is_some(),
        }
    }

    /// Normal form of `v`; `None` if some term lies beyond the truncation of
    /// a quotient not known to vanish there.
    pub fn project(&self, v: &TensorElement) -> Option<TensorElement> {
        let mut out = Lin::new();
        for (w, c) in v.iter() {
            if !self.project_word_into(w, c, &mut out) {
                return None;
            }
        }
        Some(out)
    }

    /// Whether `v` lies in the ideal (within the truncation).
    pub fn in_ideal(&self, v: &TensorElement) -> Option<bool> {
        self.project(v).map(|p| p.is_zero())
    }

    /// `(π ⊗ π)` on a tensor of words. Components beyond the truncation must
    /// not occur.
    pub fn project_tensor(&self, v: &Lin<(Word, Word)>) -> Lin<(Word, Word)> {
        let mut out = Lin::new();
        for ((l, r), c) in v.iter() {
            let pl = self
                .project(&Lin::basis(l.clone()))
                .expect("left factor within truncation");
            if pl.is_zero() {
                continue;
            }
            let pr = self
                .project(&Lin::basis(r.clone()))
                .expect("right factor within truncation");
            for (a, ca) in pl.iter() {
                for (b, cb) in pr.iter() {
                    out.add_term((a.clone(), b.clone()), &(c * ca) * cb);
                }
            }
        }
        out
    }

    /// Product of normal forms; `None` above the truncation.
    pub fn multiply(&self, u: &[u8], v: &[u8]) -> Option<TensorElement> {
        let mut w = u.to_vec();
        w.extend_from_slice(v);
        self.project(&Lin::basis(w))
    }

    /// Braided coproduct `(π ⊗ π) Δ(w)` of a word.
    pub fn coproduct(&self, w: &[u8]) -> Lin<(Word, Word)> {
        let mut out = Lin::new();
        for p in 0..=w.len() {
            out.add_assign(&self.project_tensor(&shuffle_coproduct_word(w, p, &self.braiding)));
        }
        out
    }
}

/// Dimensions per degree with a finiteness certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertData {
    pub dims: Vec<usize>,
    /// First degree with dimension 0, when reached within the truncation.
    pub vanishes_from: Option<usize>,
    pub total_dim: Option<usize>,
}

impl HilbertData {
    pub fn is_finite(&self) -> bool {
        self.vanishes_from.is_some()
    }
}

pub fn hilbert_series(gq: &GradedQuotient) -> HilbertData {
    let dims = gq.dims();
    let total_dim = gq.vanishes_from().map(|_| dims.iter().sum());
    HilbertData {
        dims,
        vanishes_from: gq.vanishes_from(),
        total_dim,
    }
}

/// A relation `r ∈ I_n` whose image under some Lie basis map leaves `I_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityViolation {
    pub map_index: usize,
    pub degree: usize,
    pub relation: String,
    pub image: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StabilityReport {
    pub violations: Vec<StabilityViolation>,
    pub checked_up_to: usize,
}

impl StabilityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that the Leibniz extension of every Lie basis map preserves each
/// relation space `I_n`, `n ≤ cap`.
pub fn stability_check(gq: &GradedQuotient, action: &LieAction) -> StabilityReport {
    let mut report = StabilityReport {
        violations: Vec::new(),
        checked_up_to: gq.cap(),
    };
    for n in 2..=gq.cap().min(gq.top_degree()) {
        for r in gq.relations(n) {
            for (k, d) in action.basis_maps().iter().enumerate() {
                let img = apply_derivation(d, &r);
                if gq.in_ideal(&img) == Some(false) {
                    report.violations.push(StabilityViolation {
                        map_index: k,
                        degree: n,
                        relation: render_element(&r),
                        image: render_element(&img),
                    });
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{q_factorial, root_of_unity, CycScalar};
    use crate::tensor_algebra::parse_element;

    fn int(n: i64) -> CycScalar {
        CycScalar::from_int(n)
    }

    #[test]
    fn kernel_in_degree_two() {
        let b = DiagonalBraiding::rank_one(int(3)).unwrap();
        assert!(relations_in_degree(2, &b).is_empty());
        let b = DiagonalBraiding::rank_one(int(-1)).unwrap();
        assert_eq!(relations_in_degree(2, &b), vec![Lin::basis(vec![0, 0])]);
        let b = DiagonalBraiding::new(vec![vec![int(1); 2]; 2]).unwrap();
        let rel = relations_in_degree(2, &b);
        assert_eq!(rel.len(), 1);
        let mut anti = Lin::basis(vec![1, 0]);
        anti.add_term(vec![0, 1], int(-1));
        assert_eq!(rel[0], anti);
    }

    #[test]
    fn rank_one_dims_follow_q_factorial() {
        for m in 2..=6u32 {
            let q = root_of_unity(m, 1);
            let gq = nichols_truncated(&DiagonalBraiding::rank_one(q.clone()).unwrap(), 8).unwrap();
            for n in 0..=8 {
                let expect = usize::from(!q_factorial(&q, n).is_zero());
                assert_eq!(gq.dim(n), Some(expect), "m={m} n={n}");
            }
            assert_eq!(hilbert_series(&gq).total_dim, Some(m as usize));
        }
    }

    #[test]
    fn non_root_of_unity_and_symmetric_cases() {
        let gq = nichols_truncated(&DiagonalBraiding::rank_one(int(2)).unwrap(), 6).unwrap();
        let h = hilbert_series(&gq);
        assert_eq!(h.dims, vec![1; 7]);
        assert_eq!(h.total_dim, None);
        let gq = nichols_truncated(&DiagonalBraiding::new(vec![vec![int(1); 2]; 2]).unwrap(), 4)
            .unwrap();
        assert_eq!(gq.dims(), vec![1, 2, 3, 4, 5]);
        assert_eq!(
            nichols_truncated(&DiagonalBraiding::rank_one(int(2)).unwrap(), 0).unwrap_err(),
            NicholsError::CapTooSmall
        );
    }

    #[test]
    fn hilbert_examples() {
        let gq = nichols_truncated(&DiagonalBraiding::rank_one(root_of_unity(4, 1)).unwrap(), 6)
            .unwrap();
        let h = hilbert_series(&gq);
        assert_eq!(h.dims, vec![1, 1, 1, 1, 0, 0, 0]);
        assert_eq!(h.total_dim, Some(4));
        assert_eq!(h.vanishes_from, Some(4));
        let gq = nichols_truncated(&DiagonalBraiding::rank_one(int(-1)).unwrap(), 5).unwrap();
        assert_eq!(hilbert_series(&gq).dims, vec![1, 1, 0, 0, 0, 0]);
    }

    #[test]
    fn pre_nichols_examples() {
        let b = DiagonalBraiding::rank_one(root_of_unity(4, 1)).unwrap();
        let x4 = parse_element("x1^4", 1).unwrap();
        let (gq, rep) = pre_nichols_quotient(&b, &[x4], 6).unwrap();
        assert_eq!(gq.dims(), vec![1, 1, 1, 1, 0, 0, 0]);
        assert!(rep.gap_to_nichols.iter().all(|&g| g == 0));

        let b2 = DiagonalBraiding::new(vec![vec![int(-1), int(1)], vec![int(1), int(-1)]]).unwrap();
        let (gq, _) = pre_nichols_quotient(&b2, &[], 3).unwrap();
        assert_eq!(gq.dims(), vec![1, 2, 4, 8]);

        let gens: Vec<_> = (2..=4).flat_map(|n| relations_in_degree(n, &b2)).collect();
        let (gq, rep) = pre_nichols_quotient(&b2, &gens, 4).unwrap();
        assert_eq!(gq.dims(), nichols_truncated(&b2, 4).unwrap().dims());
        assert!(rep.gap_to_nichols.iter().all(|&g| g == 0));
    }

    #[test]
    fn pre_nichols_errors() {
        let b = DiagonalBraiding::rank_one(root_of_unity(4, 1)).unwrap();
        let bad = parse_element("x1^2 + x1^3", 1).unwrap();
        assert_eq!(
            pre_nichols_quotient(&b, &[bad], 4).unwrap_err(),
            NicholsError::NotHomogeneous(0)
        );
        let unit = parse_element("1", 1).unwrap();
        assert_eq!(
            pre_nichols_quotient(&b, &[unit], 4).unwrap_err(),
            NicholsError::CounitNonzero(0)
        );
        // x^2 is not killed by S_2 = 1 + q when q = ζ_4
        let sq = parse_element("x1^2", 1).unwrap();
        assert!(matches!(
            pre_nichols_quotient(&b, &[sq], 4),
            Err(NicholsError::NotPreNichols { degree: 2, .. })
        ));
        // x1*x2 in the symmetric plane is not a coideal generator
        let b2 = DiagonalBraiding::new(vec![vec![int(1); 2]; 2]).unwrap();
        let g = parse_element("x1*x2", 2).unwrap();
        assert!(pre_nichols_quotient(&b2, &[g], 3).is_err());
    }

    #[test]
    fn quotient_multiplication_and_coproduct() {
        let b = DiagonalBraiding::rank_one(root_of_unity(3, 1)).unwrap();
        let gq = nichols_truncated(&b, 5).unwrap();
        assert_eq!(gq.multiply(&[0], &[0, 0]), Some(Lin::new()));
        assert_eq!(gq.multiply(&[0], &[0]), Some(Lin::basis(vec![0, 0])));
        let d = gq.coproduct(&[0, 0]);
        let mut expect = Lin::basis((vec![0, 0], vec![]));
        expect.add_term((vec![], vec![0, 0]), int(1));
        expect.add_term((vec![0], vec![0]), &int(1) + &root_of_unity(3, 1));
        assert_eq!(d, expect);
    }
}
