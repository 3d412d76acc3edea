//! Diagonal braided vector spaces, their principal realizations over finite
//! abelian groups, and the Lie algebras `bd_V` (endomorphisms of the
//! Yetter–Drinfeld module) and `t_V` (diagonal maps).

use std::fmt;

use num_integer::Integer;

use crate::linalg::{Lin, TrackedEchelon};
use crate::scalars::{CycScalar, RootOfUnity};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BraidingError {
    #[error("braiding matrix must be square and nonempty")]
    NotSquare,
    #[error("braiding entry q[{0}][{1}] is zero")]
    ZeroEntry(usize, usize),
    #[error("braiding entry q[{0}][{1}] is not a root of unity")]
    NotRootOfUnity(usize, usize),
    #[error("realization is malformed: {0}")]
    Malformed(String),
}

/// The matrix `q` of a braiding `c(x_i ⊗ x_j) = q_ij x_j ⊗ x_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalBraiding {
    q: Vec<Vec<CycScalar>>,
}

impl DiagonalBraiding {
    pub fn new(q: Vec<Vec<CycScalar>>) -> Result<Self, BraidingError> {
        let theta = q.len();
        if theta == 0 || q.iter().any(|row| row.len() != theta) {
            return Err(BraidingError::NotSquare);
        }
        for (i, row) in q.iter().enumerate() {
            if let Some(j) = row.iter().position(CycScalar::is_zero) {
                return Err(BraidingError::ZeroEntry(i, j));
            }
        }
        Ok(DiagonalBraiding { q })
    }

    /// Rank one braiding `c(x ⊗ x) = q x ⊗ x`.
    pub fn rank_one(q: CycScalar) -> Result<Self, BraidingError> {
        Self::new(vec![vec![q]])
    }

    pub fn theta(&self) -> usize {
        self.q.len()
    }

    pub fn q(&self, i: usize, j: usize) -> &CycScalar {
        &self.q[i][j]
    }

    pub fn matrix(&self) -> &[Vec<CycScalar>] {
        &self.q
    }

    /// Braiding scalar between homogeneous elements of degrees β and γ:
    /// `∏ q_ij^{β_i γ_j}`.
    pub fn factor(&self, beta: &[i64], gamma: &[i64]) -> CycScalar {
        let mut acc = CycScalar::one();
        for (i, &b) in beta.iter().enumerate() {
            if b == 0 {
                continue;
            }
            for (j, &c) in gamma.iter().enumerate() {
                if c != 0 {
                    acc = &acc
                        * &self.q[i][j]
                            .pow(b * c)
                            .expect("braiding entries are nonzero");
                }
            }
        }
        acc
    }
}

/// A finite abelian group `Z/N_1 × … × Z/N_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    exponents: Vec<u32>,
}

/// Element of an [`AbelianGroup`], as a residue vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(pub Vec<u32>);

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g(")?;
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl AbelianGroup {
    pub fn new(exponents: Vec<u32>) -> Result<Self, BraidingError> {
        if exponents.iter().any(|&n| n == 0) {
            return Err(BraidingError::Malformed(
                "cyclic factor orders must be ≥ 1".into(),
            ));
        }
        Ok(AbelianGroup { exponents })
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    pub fn order(&self) -> usize {
        self.exponents.iter().map(|&n| n as usize).product()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.0.len() == self.rank() && g.0.iter().zip(&self.exponents).all(|(a, n)| a < n)
    }

    /// All elements, mixed-radix order with the last factor varying fastest.
    pub fn elements(&self) -> Vec<GroupElement> {
        (0..self.order()).map(|idx| self.element_at(idx)).collect()
    }

    pub fn element_at(&self, mut idx: usize) -> GroupElement {
        let mut out = vec![0; self.rank()];
        for t in (0..self.rank()).rev() {
            let n = self.exponents[t] as usize;
            out[t] = (idx % n) as u32;
            idx /= n;
        }
        GroupElement(out)
    }

    pub fn index_of(&self, g: &GroupElement) -> usize {
        g.0.iter()
            .zip(&self.exponents)
            .fold(0, |acc, (&a, &n)| acc * n as usize + a as usize)
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.exponents)
                .map(|((x, y), n)| (x + y) % n)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.exponents)
                .map(|(x, n)| (n - x % n) % n)
                .collect(),
        )
    }

    pub fn scale(&self, a: &GroupElement, k: i64) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.exponents)
                .map(|(&x, &n)| (x as i64 * k).rem_euclid(n as i64) as u32)
                .collect(),
        )
    }
}

/// A character of an abelian group, given by its values on the generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    values: Vec<RootOfUnity>,
}

impl Character {
    pub fn new(values: Vec<RootOfUnity>) -> Self {
        Character { values }
    }

    pub fn trivial(rank: usize) -> Self {
        Character {
            values: vec![RootOfUnity::one(); rank],
        }
    }

    pub fn values(&self) -> &[RootOfUnity] {
        &self.values
    }

    pub fn eval_symbolic(&self, g: &GroupElement) -> RootOfUnity {
        self.values
            .iter()
            .zip(&g.0)
            .fold(RootOfUnity::one(), |acc, (v, &a)| acc.mul(&v.pow(a as i64)))
    }

    pub fn eval(&self, g: &GroupElement) -> CycScalar {
        self.eval_symbolic(g).value()
    }

    pub fn mul(&self, other: &Character) -> Character {
        Character {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.mul(b))
                .collect(),
        }
    }

    pub fn inverse(&self) -> Character {
        Character {
            values: self.values.iter().map(|v| v.pow(-1)).collect(),
        }
    }

    /// Whether the t-th value has order dividing `N_t`.
    pub fn is_valid_on(&self, group: &AbelianGroup) -> bool {
        self.values.len() == group.rank()
            && self
                .values
                .iter()
                .zip(group.exponents())
                .all(|(v, &n)| n % v.multiplicative_order() == 0)
    }
}

/// A principal realization `(Γ, (g_i, χ_i))` of a diagonal braiding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YDRealization {
    group: AbelianGroup,
    pairs: Vec<(GroupElement, Character)>,
    braiding: DiagonalBraiding,
}

impl YDRealization {
    /// Assembles a realization; structural checks only. Use
    /// [`validate_realization`] for `χ_j(g_i) = q_ij`.
    pub fn new(
        group: AbelianGroup,
        pairs: Vec<(GroupElement, Character)>,
        braiding: DiagonalBraiding,
    ) -> Result<Self, BraidingError> {
        if pairs.len() != braiding.theta() {
            return Err(BraidingError::Malformed(format!(
                "expected {} (g, chi) pairs, got {}",
                braiding.theta(),
                pairs.len()
            )));
        }
        for (i, (g, chi)) in pairs.iter().enumerate() {
            if !group.contains(g) {
                return Err(BraidingError::Malformed(format!(
                    "g_{} is not in the group",
                    i + 1
                )));
            }
            if !chi.is_valid_on(&group) {
                return Err(BraidingError::Malformed(format!(
                    "chi_{} is not a character of the group",
                    i + 1
                )));
            }
        }
        Ok(YDRealization {
            group,
            pairs,
            braiding,
        })
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn pairs(&self) -> &[(GroupElement, Character)] {
        &self.pairs
    }

    pub fn braiding(&self) -> &DiagonalBraiding {
        &self.braiding
    }

    pub fn theta(&self) -> usize {
        self.braiding.theta()
    }

    /// `g_β = Σ β_i g_i` for a multidegree β.
    pub fn group_degree(&self, beta: &[i64]) -> GroupElement {
        let mut acc = self.group.identity();
        for (i, &b) in beta.iter().enumerate() {
            acc = self.group.add(&acc, &self.group.scale(&self.pairs[i].0, b));
        }
        acc
    }

    /// `χ_β(g) = ∏ χ_i(g)^{β_i}`.
    pub fn character_value(&self, beta: &[i64], g: &GroupElement) -> CycScalar {
        let mut acc = RootOfUnity::one();
        for (i, &b) in beta.iter().enumerate() {
            if b != 0 {
                acc = acc.mul(&self.pairs[i].1.eval_symbolic(g).pow(b));
            }
        }
        acc.value()
    }

    /// Whether `x_i` and `x_j` lie in the same isotypic component `V_g^χ`.
    pub fn same_component(&self, i: usize, j: usize) -> bool {
        self.pairs[i] == self.pairs[j]
    }

    /// The realization `(g_i^{-1}, χ_i^{-1})`; it realizes the same matrix q.
    pub fn inverse_data(&self) -> YDRealization {
        let pairs = self
            .pairs
            .iter()
            .map(|(g, chi)| (self.group.neg(g), chi.inverse()))
            .collect();
        YDRealization {
            group: self.group.clone(),
            pairs,
            braiding: self.braiding.clone(),
        }
    }
}

/// Canonical realization over `(Z/m)^θ`, `m` the lcm of the orders of the q_ij.
pub fn derive_realization(braiding: &DiagonalBraiding) -> Result<YDRealization, BraidingError> {
    let theta = braiding.theta();
    let mut roots = vec![vec![RootOfUnity::one(); theta]; theta];
    let mut m: u32 = 1;
    for i in 0..theta {
        for j in 0..theta {
            let r = RootOfUnity::from_scalar(braiding.q(i, j))
                .ok_or(BraidingError::NotRootOfUnity(i, j))?;
            m = m.lcm(&r.multiplicative_order());
            roots[i][j] = r;
        }
    }
    let group = AbelianGroup::new(vec![m; theta])?;
    let pairs = (0..theta)
        .map(|i| {
            let mut g = vec![0; theta];
            g[i] = 1 % m;
            // χ_i(e_k) = q_{k i}
            let chi = Character::new((0..theta).map(|k| roots[k][i]).collect());
            (GroupElement(g), chi)
        })
        .collect();
    YDRealization::new(group, pairs, braiding.clone())
}

/// A pair (i, j) where `χ_j(g_i) ≠ q_ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizationViolation {
    pub i: usize,
    pub j: usize,
    pub character_value: CycScalar,
    pub braiding_value: CycScalar,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RealizationReport {
    pub violations: Vec<RealizationViolation>,
}

impl RealizationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_realization(r: &YDRealization) -> RealizationReport {
    let mut report = RealizationReport::default();
    for i in 0..r.theta() {
        for j in 0..r.theta() {
            let lhs = r.pairs[j].1.eval(&r.pairs[i].0);
            let rhs = r.braiding.q(i, j).clone();
            if lhs != rhs {
                report.violations.push(RealizationViolation {
                    i,
                    j,
                    character_value: lhs,
                    braiding_value: rhs,
                });
            }
        }
    }
    report
}

/// An endomorphism of V: `entry(i, j)` is the coefficient of `x_i` in the
/// image of `x_j`.
#[derive(Clone, PartialEq, Eq)]
pub struct EndV {
    n: usize,
    entries: Vec<Vec<CycScalar>>,
}

impl fmt::Debug for EndV {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.iter()).finish()
    }
}

impl EndV {
    pub fn zero(n: usize) -> Self {
        EndV {
            n,
            entries: vec![vec![CycScalar::zero(); n]; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![CycScalar::one(); n])
    }

    pub fn from_rows(rows: Vec<Vec<CycScalar>>) -> Result<Self, BraidingError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(BraidingError::NotSquare);
        }
        Ok(EndV { n, entries: rows })
    }

    /// `E_ij`: sends `x_j` to `x_i`, kills the other basis vectors.
    pub fn elementary(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(n);
        m.entries[i][j] = CycScalar::one();
        m
    }

    pub fn diagonal(h: &[CycScalar]) -> Self {
        let mut m = Self::zero(h.len());
        for (i, v) in h.iter().enumerate() {
            m.entries[i][i] = v.clone();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &CycScalar {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<CycScalar>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(CycScalar::is_zero)
    }

    /// Image of the basis vector `x_j` as a combination of letters.
    pub fn column(&self, j: usize) -> Vec<(usize, CycScalar)> {
        (0..self.n)
            .filter(|&i| !self.entries[i][j].is_zero())
            .map(|i| (i, self.entries[i][j].clone()))
            .collect()
    }

    pub fn compose(&self, other: &EndV) -> EndV {
        let mut out = Self::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = CycScalar::zero();
                for k in 0..self.n {
                    let a = &self.entries[i][k];
                    let b = &other.entries[k][j];
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }

    pub fn add(&self, other: &EndV) -> EndV {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &EndV) -> EndV {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &CycScalar) -> EndV {
        EndV {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|a| a * c).collect())
                .collect(),
        }
    }

    fn zip(&self, other: &EndV, f: impl Fn(&CycScalar, &CycScalar) -> CycScalar) -> EndV {
        EndV {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(r, s)| r.iter().zip(s).map(|(a, b)| f(a, b)).collect())
                .collect(),
        }
    }

    /// `[A, B] = AB − BA`.
    pub fn bracket(&self, other: &EndV) -> EndV {
        self.compose(other).sub(&other.compose(self))
    }

    pub fn transpose(&self) -> EndV {
        let mut out = Self::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.entries[j][i] = self.entries[i][j].clone();
            }
        }
        out
    }

    fn as_lin(&self) -> Lin<(usize, usize)> {
        let mut v = Lin::new();
        for i in 0..self.n {
            for j in 0..self.n {
                v.add_term((i, j), self.entries[i][j].clone());
            }
        }
        v
    }

    /// Z^θ-degree shift when the map is homogeneous (`α_i − α_j` for every
    /// nonzero entry (i, j)); `None` otherwise or for the zero map.
    pub fn degree_shift(&self) -> Option<Vec<i64>> {
        let mut shift: Option<Vec<i64>> = None;
        for i in 0..self.n {
            for j in 0..self.n {
                if self.entries[i][j].is_zero() {
                    continue;
                }
                let mut s = vec![0i64; self.n];
                s[i] += 1;
                s[j] -= 1;
                match &shift {
                    None => shift = Some(s),
                    Some(prev) if *prev == s => {}
                    Some(_) => return None,
                }
            }
        }
        shift.or_else(|| Some(vec![0; self.n]))
    }

    /// Whether the map preserves each isotypic component `V_g^χ`.
    pub fn is_yd_morphism(&self, r: &YDRealization) -> bool {
        (0..self.n)
            .all(|i| (0..self.n).all(|j| self.entries[i][j].is_zero() || r.same_component(i, j)))
    }
}

/// The diagonal map `D_h(x_i) = h_i x_i`.
pub fn torus_action(h: &[CycScalar]) -> EndV {
    EndV::diagonal(h)
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("map {0} does not preserve the isotypic components of V")]
    NotYDMorphism(usize),
    #[error("map {0} is linearly dependent on the previous maps")]
    LinearlyDependent(usize),
    #[error("the bracket of maps {0} and {1} leaves their span")]
    NotClosed(usize, usize),
    #[error("structure constants violate antisymmetry or the Jacobi identity")]
    NotALieAlgebra,
    #[error("map {0} has the wrong size")]
    WrongSize(usize),
}

/// A finite-dimensional Lie algebra of endomorphisms of V, with structure
/// constants `[e_a, e_b] = Σ_k c_ab^k e_k` in its chosen basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAction {
    theta: usize,
    basis_maps: Vec<EndV>,
    structure: Vec<Vec<Vec<CycScalar>>>,
}

impl LieAction {
    /// The zero Lie algebra acting on a θ-dimensional V.
    pub fn zero(theta: usize) -> Self {
        LieAction {
            theta,
            basis_maps: Vec::new(),
            structure: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis_maps.len()
    }

    pub fn theta(&self) -> usize {
        self.theta
    }

    pub fn basis_maps(&self) -> &[EndV] {
        &self.basis_maps
    }

    pub fn basis_map(&self, a: usize) -> &EndV {
        &self.basis_maps[a]
    }

    /// Coefficients of `[e_a, e_b]` in the basis.
    pub fn bracket_coeffs(&self, a: usize, b: usize) -> &[CycScalar] {
        &self.structure[a][b]
    }

    pub fn is_abelian(&self) -> bool {
        self.structure
            .iter()
            .flatten()
            .flatten()
            .all(CycScalar::is_zero)
    }

    /// The contragredient action on V*: each map `A` becomes `−Aᵀ`.
    pub fn contragredient(&self) -> LieAction {
        let maps = self
            .basis_maps
            .iter()
            .map(|m| m.transpose().scale(&CycScalar::from_int(-1)))
            .collect();
        LieAction {
            theta: self.theta,
            basis_maps: maps,
            structure: self.structure.clone(),
        }
    }

    /// Abstract structure constants, tagged with the Z^θ-degree shift of each
    /// basis map when every map is homogeneous.
    pub fn structure(&self) -> LieStructure {
        let tags: Option<Vec<Vec<i64>>> = self.basis_maps.iter().map(EndV::degree_shift).collect();
        LieStructure {
            constants: self.structure.clone(),
            degree_tags: tags,
        }
    }

    /// Whether every basis map lies in `bd_V` for the realization.
    pub fn first_non_yd_morphism(&self, r: &YDRealization) -> Option<usize> {
        self.basis_maps.iter().position(|m| !m.is_yd_morphism(r))
    }
}

fn span_structure(theta: usize, maps: &[EndV]) -> Result<Vec<Vec<Vec<CycScalar>>>, LieError> {
    let mut ech: TrackedEchelon<(usize, usize), usize> = TrackedEchelon::new();
    for (k, m) in maps.iter().enumerate() {
        if m.dim() != theta {
            return Err(LieError::WrongSize(k));
        }
        if ech.push(Lin::basis(k), m.as_lin()).is_some() {
            return Err(LieError::LinearlyDependent(k));
        }
    }
    let d = maps.len();
    let mut structure = vec![vec![vec![CycScalar::zero(); d]; d]; d];
    for a in 0..d {
        for b in 0..d {
            let br = maps[a].bracket(&maps[b]);
            let coeffs = ech.solve(&br.as_lin()).ok_or(LieError::NotClosed(a, b))?;
            for (k, c) in coeffs {
                structure[a][b][k] = c;
            }
        }
    }
    Ok(structure)
}

/// Checks that `maps` are Yetter–Drinfeld endomorphisms spanning a Lie
/// algebra and computes its structure constants.
pub fn close_under_bracket(r: &YDRealization, maps: Vec<EndV>) -> Result<LieAction, LieError> {
    for (k, m) in maps.iter().enumerate() {
        if m.dim() != r.theta() {
            return Err(LieError::WrongSize(k));
        }
        if !m.is_yd_morphism(r) {
            return Err(LieError::NotYDMorphism(k));
        }
    }
    let structure = span_structure(r.theta(), &maps)?;
    Ok(LieAction {
        theta: r.theta(),
        basis_maps: maps,
        structure,
    })
}

/// Like [`close_under_bracket`] without the Yetter–Drinfeld condition; used to
/// build actions by arbitrary endomorphisms of V.
pub fn lie_algebra_of_maps(theta: usize, maps: Vec<EndV>) -> Result<LieAction, LieError> {
    let structure = span_structure(theta, &maps)?;
    Ok(LieAction {
        theta,
        basis_maps: maps,
        structure,
    })
}

/// The Lie algebra `t_V` (or a subalgebra) spanned by `D_h` for the given h.
pub fn torus_lie_algebra(theta: usize, hs: &[Vec<CycScalar>]) -> Result<LieAction, LieError> {
    let maps: Vec<EndV> = hs.iter().map(|h| torus_action(h)).collect();
    if let Some(k) = maps.iter().position(|m| m.dim() != theta) {
        return Err(LieError::WrongSize(k));
    }
    lie_algebra_of_maps(theta, maps)
}

/// `bd_V = End(V) ∩ YD-morphisms ≅ ⊕ gl(d_g^χ)`: all `E_ij` with
/// `(g_i, χ_i) = (g_j, χ_j)`, listed row-major.
pub fn biderivation_algebra(r: &YDRealization) -> LieAction {
    let theta = r.theta();
    let maps: Vec<EndV> = (0..theta)
        .flat_map(|i| (0..theta).map(move |j| (i, j)))
        .filter(|&(i, j)| r.same_component(i, j))
        .map(|(i, j)| EndV::elementary(theta, i, j))
        .collect();
    close_under_bracket(r, maps).expect("elementary matrices of isotypic blocks span gl-blocks")
}

/// A Lie algebra given by structure constants `[e_a, e_b] = Σ_k c_ab^k e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieStructure {
    constants: Vec<Vec<Vec<CycScalar>>>,
    degree_tags: Option<Vec<Vec<i64>>>,
}

impl LieStructure {
    /// Validates antisymmetry and the Jacobi identity.
    pub fn new(constants: Vec<Vec<Vec<CycScalar>>>) -> Result<Self, LieError> {
        let d = constants.len();
        if constants
            .iter()
            .any(|row| row.len() != d || row.iter().any(|c| c.len() != d))
        {
            return Err(LieError::NotALieAlgebra);
        }
        for a in 0..d {
            for b in 0..d {
                for k in 0..d {
                    if constants[a][b][k] != -&constants[b][a][k] {
                        return Err(LieError::NotALieAlgebra);
                    }
                }
            }
        }
        // Σ_cyclic [[a,b],c] = 0
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for m in 0..d {
                        let mut acc = CycScalar::zero();
                        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                            for k in 0..d {
                                acc = &acc + &(&constants[x][y][k] * &constants[k][z][m]);
                            }
                        }
                        if !acc.is_zero() {
                            return Err(LieError::NotALieAlgebra);
                        }
                    }
                }
            }
        }
        Ok(LieStructure {
            constants,
            degree_tags: None,
        })
    }

    pub fn abelian(dim: usize) -> Self {
        LieStructure {
            constants: vec![vec![vec![CycScalar::zero(); dim]; dim]; dim],
            degree_tags: None,
        }
    }

    pub fn with_degree_tags(mut self, tags: Vec<Vec<i64>>) -> Self {
        assert_eq!(tags.len(), self.dim());
        self.degree_tags = Some(tags);
        self
    }

    pub fn dim(&self) -> usize {
        self.constants.len()
    }

    /// Direct sum with an n-dimensional central ideal (degree 0).
    pub fn extend_central(&self, n: usize) -> LieStructure {
        let d = self.dim() + n;
        let mut constants = vec![vec![vec![CycScalar::zero(); d]; d]; d];
        for (a, row) in self.constants.iter().enumerate() {
            for (b, c) in row.iter().enumerate() {
                constants[a][b][..c.len()].clone_from_slice(c);
            }
        }
        let degree_tags = self.degree_tags.as_ref().map(|t| {
            let width = t.first().map_or(0, Vec::len);
            t.iter()
                .cloned()
                .chain(std::iter::repeat(vec![0; width]).take(n))
                .collect()
        });
        LieStructure {
            constants,
            degree_tags,
        }
    }

    pub fn bracket(&self, a: usize, b: usize) -> &[CycScalar] {
        &self.constants[a][b]
    }

    pub fn degree_tags(&self) -> Option<&[Vec<i64>]> {
        self.degree_tags.as_deref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::root_of_unity;

    fn int(n: i64) -> CycScalar {
        CycScalar::from_int(n)
    }

    #[test]
    fn rank_one_minus_one_realization() {
        let b = DiagonalBraiding::rank_one(int(-1)).unwrap();
        let r = derive_realization(&b).unwrap();
        assert_eq!(r.group().exponents(), &[2]);
        assert_eq!(r.pairs()[0].0, GroupElement(vec![1]));
        assert_eq!(r.pairs()[0].1.eval(&GroupElement(vec![1])), int(-1));
        assert!(validate_realization(&r).passed());
    }

    #[test]
    fn rank_one_zeta4_realization() {
        let b = DiagonalBraiding::rank_one(root_of_unity(4, 1)).unwrap();
        let r = derive_realization(&b).unwrap();
        assert_eq!(r.group().exponents(), &[4]);
        assert_eq!(r.pairs()[0].1.eval(&r.pairs()[0].0), root_of_unity(4, 1));
    }

    #[test]
    fn trivial_braiding_gives_trivial_group() {
        let b = DiagonalBraiding::new(vec![vec![int(1), int(1)], vec![int(1), int(1)]]).unwrap();
        let r = derive_realization(&b).unwrap();
        assert_eq!(r.group().exponents(), &[1, 1]);
        assert_eq!(r.group().order(), 1);
        assert!(r.same_component(0, 1));
        assert!(validate_realization(&r).passed());
    }

    #[test]
    fn not_root_of_unity_is_rejected() {
        let b = DiagonalBraiding::new(vec![vec![int(-1), int(2)], vec![int(1), int(-1)]]).unwrap();
        assert_eq!(
            derive_realization(&b),
            Err(BraidingError::NotRootOfUnity(0, 1))
        );
    }

    #[test]
    fn corrupted_character_fails_validation() {
        let q = root_of_unity(3, 1);
        let b = DiagonalBraiding::rank_one(q.clone()).unwrap();
        let group = AbelianGroup::new(vec![3]).unwrap();
        // χ_1(g_1) set to q^2 instead of q
        let chi = Character::new(vec![RootOfUnity::new(3, 2)]);
        let r = YDRealization::new(group, vec![(GroupElement(vec![1]), chi)], b).unwrap();
        let rep = validate_realization(&r);
        assert_eq!(rep.violations.len(), 1);
        assert_eq!((rep.violations[0].i, rep.violations[0].j), (0, 0));
        assert_eq!(rep.violations[0].character_value, &q * &q);
    }

    #[test]
    fn diagonal_minus_one_pair_validates() {
        let b = DiagonalBraiding::new(vec![vec![int(-1), int(1)], vec![int(1), int(-1)]]).unwrap();
        assert!(validate_realization(&derive_realization(&b).unwrap()).passed());
    }

    #[test]
    fn bd_v_dimensions() {
        // distinct pairs: bd_V = t_V
        let b = DiagonalBraiding::new(vec![vec![int(-1), int(1)], vec![int(1), int(-1)]]).unwrap();
        let r = derive_realization(&b).unwrap();
        let bd = biderivation_algebra(&r);
        assert_eq!(bd.dim(), 2);
        assert!(bd
            .basis_maps()
            .iter()
            .all(|m| m.degree_shift() == Some(vec![0, 0])));
        // equal pairs: gl(2)
        let b =
            DiagonalBraiding::new(vec![vec![int(-1), int(-1)], vec![int(-1), int(-1)]]).unwrap();
        let chi = Character::new(vec![RootOfUnity::new(2, 1)]);
        let g = GroupElement(vec![1]);
        let r = YDRealization::new(
            AbelianGroup::new(vec![2]).unwrap(),
            vec![(g.clone(), chi.clone()), (g, chi)],
            b,
        )
        .unwrap();
        assert!(validate_realization(&r).passed());
        assert!(r.same_component(0, 1));
        let bd = biderivation_algebra(&r);
        assert_eq!(bd.dim(), 4);
        assert!(!bd.is_abelian());
        // θ = 1
        let r = derive_realization(&DiagonalBraiding::rank_one(int(-1)).unwrap()).unwrap();
        assert_eq!(biderivation_algebra(&r).dim(), 1);
    }

    #[test]
    fn torus_maps() {
        assert!(torus_action(&[int(0), int(0)]).is_zero());
        assert_eq!(torus_action(&[int(1), int(1)]), EndV::identity(2));
        let a = torus_action(&[int(1), int(2)]);
        let b = torus_action(&[int(3), int(-1)]);
        assert!(a.bracket(&b).is_zero());
    }

    #[test]
    fn closure_detects_missing_cartan_element() {
        let b = DiagonalBraiding::new(vec![vec![int(1), int(1)], vec![int(1), int(1)]]).unwrap();
        let r = derive_realization(&b).unwrap();
        let e12 = EndV::elementary(2, 0, 1);
        let e21 = EndV::elementary(2, 1, 0);
        assert_eq!(
            close_under_bracket(&r, vec![e12.clone(), e21.clone()]),
            Err(LieError::NotClosed(0, 1))
        );
        let h = EndV::elementary(2, 0, 0).sub(&EndV::elementary(2, 1, 1));
        let sl2 = close_under_bracket(&r, vec![e12, e21, h]).unwrap();
        assert_eq!(sl2.dim(), 3);
        // [e, f] = h
        assert_eq!(sl2.bracket_coeffs(0, 1), &[int(0), int(0), int(1)]);
        assert!(close_under_bracket(&r, vec![torus_action(&[int(1), int(2)])]).is_ok());
    }

    #[test]
    fn non_yd_map_rejected() {
        let b = DiagonalBraiding::new(vec![vec![int(-1), int(1)], vec![int(1), int(-1)]]).unwrap();
        let r = derive_realization(&b).unwrap();
        assert_eq!(
            close_under_bracket(&r, vec![EndV::elementary(2, 0, 1)]),
            Err(LieError::NotYDMorphism(0))
        );
    }

    #[test]
    fn bd_v_commutes_with_group_action_and_grading() {
        let z = root_of_unity(3, 1);
        let b = DiagonalBraiding::new(vec![vec![z.clone(), z.clone()], vec![z.clone(), z.clone()]])
            .unwrap();
        let r = derive_realization(&b).unwrap();
        let bd = biderivation_algebra(&r);
        for m in bd.basis_maps() {
            for j in 0..2 {
                for (i, _) in m.column(j) {
                    // x_j ↦ x_i must keep the Γ-degree and Γ-character
                    assert_eq!(r.pairs()[i], r.pairs()[j]);
                }
            }
        }
    }
}
