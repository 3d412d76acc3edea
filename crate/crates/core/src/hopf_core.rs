//! Finite and truncated Hopf algebras given by structure tables.
//!
//! A [`TruncatedHopf`] stores a basis tagged with filtration degrees, a
//! multiplication table, a coproduct and counit, and optionally an antipode.
//! When `cap` is set the multiplication table only holds products of basis
//! elements whose degrees add up to at most `cap`; everything above is
//! overflow and is never consulted by the verifiers. When `braiding` is set
//! the object is a Hopf algebra in the braided category of Z^θ-graded spaces
//! with diagonal braiding, and the basis must carry Z^θ-degrees.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::braided_space::{AbelianGroup, DiagonalBraiding, LieStructure, YDRealization};
use crate::linalg::{kernel, Lin, TrackedEchelon};
use crate::nichols::GradedQuotient;
use crate::scalars::{parse_scalar, CycScalar};
use crate::tensor_algebra::{multidegree, render_word, Word};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HopfError {
    #[error("realization does not match the braiding: {0}")]
    RealizationMismatch(String),
    #[error("no antipode: the convolution equation has no solution in degree {degree}")]
    NoAntipode { degree: usize },
    #[error("basis element {0} is not group-like")]
    NotGrouplike(usize),
    #[error("structure constants do not define a Lie algebra")]
    NotALieAlgebra,
    #[error("malformed Hopf data: {0}")]
    Malformed(String),
    #[error("serialization: {0}")]
    Serialization(String),
}

/// A basis vector with its tags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub label: String,
    /// Filtration degree.
    pub degree: usize,
    /// Z^θ-degree, when the algebra is graded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zdeg: Option<Vec<i64>>,
    pub grouplike: bool,
}

/// Bookkeeping for a smash product `H ⋊ U(g)`: basis element k is
/// `host_index[k] ⊗ (PBW monomial of degree pbw_degree[k])`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmashInfo {
    pub host_dim: usize,
    pub lie_dim: usize,
    pub host_index: Vec<usize>,
    pub pbw_degree: Vec<usize>,
}

pub type Element = Lin<usize>;
pub type Tensor2 = Lin<(usize, usize)>;

#[derive(Clone, Debug)]
pub struct TruncatedHopf {
    basis: Vec<BasisElement>,
    unit: usize,
    cap: Option<usize>,
    mult: HashMap<(usize, usize), Element>,
    comult: Vec<Tensor2>,
    counit: Vec<CycScalar>,
    antipode: Option<BTreeMap<usize, Element>>,
    braiding: Option<DiagonalBraiding>,
    smash: Option<SmashInfo>,
}

impl TruncatedHopf {
    /// Assembles a Hopf algebra from tables; checks only their shapes.
    pub fn new(
        basis: Vec<BasisElement>,
        unit: usize,
        cap: Option<usize>,
        mult: HashMap<(usize, usize), Element>,
        comult: Vec<Tensor2>,
        counit: Vec<CycScalar>,
    ) -> Result<Self, HopfError> {
        let n = basis.len();
        if unit >= n {
            return Err(HopfError::Malformed("unit index out of range".into()));
        }
        if comult.len() != n || counit.len() != n {
            return Err(HopfError::Malformed(
                "coproduct or counit table has the wrong length".into(),
            ));
        }
        let bad_index = mult
            .iter()
            .any(|(&(i, j), v)| i >= n || j >= n || v.keys().any(|&k| k >= n))
            || comult
                .iter()
                .any(|t| t.keys().any(|&(i, j)| i >= n || j >= n));
        if bad_index {
            return Err(HopfError::Malformed(
                "table refers to a missing basis element".into(),
            ));
        }
        if let Some(c) = cap {
            for i in 0..n {
                for j in 0..n {
                    if basis[i].degree + basis[j].degree <= c && !mult.contains_key(&(i, j)) {
                        return Err(HopfError::Malformed(format!(
                            "product {} * {} missing below the truncation",
                            basis[i].label, basis[j].label
                        )));
                    }
                }
            }
        } else if mult.len() != n * n {
            return Err(HopfError::Malformed(
                "finite algebra needs a complete multiplication table".into(),
            ));
        }
        Ok(TruncatedHopf {
            basis,
            unit,
            cap,
            mult,
            comult,
            counit,
            antipode: None,
            braiding: None,
            smash: None,
        })
    }

    pub fn with_braiding(mut self, b: DiagonalBraiding) -> Result<Self, HopfError> {
        if self
            .basis
            .iter()
            .any(|e| e.zdeg.as_ref().map(Vec::len) != Some(b.theta()))
        {
            return Err(HopfError::Malformed(
                "braided algebra needs Z^theta-degrees on every basis element".into(),
            ));
        }
        self.braiding = Some(b);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn element(&self, i: usize) -> &BasisElement {
        &self.basis[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.label == label)
    }

    pub fn degree(&self, i: usize) -> usize {
        self.basis[i].degree
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn cap(&self) -> Option<usize> {
        self.cap
    }

    pub fn braiding(&self) -> Option<&DiagonalBraiding> {
        self.braiding.as_ref()
    }

    pub fn smash_info(&self) -> Option<&SmashInfo> {
        self.smash.as_ref()
    }

    pub(crate) fn set_smash_info(&mut self, info: SmashInfo) {
        self.smash = Some(info);
    }

    pub fn is_finite(&self) -> bool {
        self.cap.is_none()
    }

    /// Whether a product of total degree `d` is inside the truncation.
    pub fn within(&self, d: usize) -> bool {
        self.cap.map_or(true, |c| d <= c)
    }

    pub fn unit_element(&self) -> Element {
        Lin::basis(self.unit)
    }

    pub fn mult(&self, i: usize, j: usize) -> Option<&Element> {
        self.mult.get(&(i, j))
    }

    pub fn comult(&self, i: usize) -> &Tensor2 {
        &self.comult[i]
    }

    pub fn counit(&self, i: usize) -> &CycScalar {
        &self.counit[i]
    }

    pub fn antipode(&self) -> Option<&BTreeMap<usize, Element>> {
        self.antipode.as_ref()
    }

    pub fn grouplikes(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.basis[i].grouplike)
            .collect()
    }

    /// Overrides one multiplication table entry.
    pub fn set_mult_entry(&mut self, i: usize, j: usize, value: Element) {
        self.mult.insert((i, j), value);
    }

    /// Overrides the Z^θ-degree tag of one basis element.
    pub fn set_zdeg(&mut self, i: usize, zdeg: Option<Vec<i64>>) {
        self.basis[i].zdeg = zdeg;
    }

    pub fn set_antipode(&mut self, s: BTreeMap<usize, Element>) {
        self.antipode = Some(s);
    }

    /// Product of two elements; `None` if some product lies in the overflow.
    pub fn mul(&self, a: &Element, b: &Element) -> Option<Element> {
        let mut out = Lin::new();
        for (i, ca) in a.iter() {
            for (j, cb) in b.iter() {
                let p = self.mult.get(&(*i, *j))?;
                out.add_scaled(p, &(ca * cb));
            }
        }
        Some(out)
    }

    pub fn comult_of(&self, a: &Element) -> Tensor2 {
        let mut out = Lin::new();
        for (i, c) in a.iter() {
            out.add_scaled(&self.comult[*i], c);
        }
        out
    }

    pub fn counit_of(&self, a: &Element) -> CycScalar {
        a.iter().fold(CycScalar::zero(), |acc, (i, c)| {
            &acc + &(c * &self.counit[*i])
        })
    }

    /// Braiding scalar picked up when basis element `j` passes basis element `i`
    /// in the braided tensor product (1 for ordinary algebras).
    pub fn braid_factor(&self, i: usize, j: usize) -> CycScalar {
        match &self.braiding {
            None => CycScalar::one(),
            Some(b) => {
                let (Some(di), Some(dj)) = (&self.basis[i].zdeg, &self.basis[j].zdeg) else {
                    return CycScalar::one();
                };
                b.factor(di, dj)
            }
        }
    }

    /// Product in `H ⊗ H`: `(a⊗b)(c⊗d) = c(b,c) ac ⊗ bd`, the braiding factor
    /// being trivial for ordinary Hopf algebras.
    pub fn tensor_mul(&self, x: &Tensor2, y: &Tensor2) -> Option<Tensor2> {
        let mut out = Lin::new();
        for ((a, b), cx) in x.iter() {
            for ((c, d), cy) in y.iter() {
                let ac = self.mult.get(&(*a, *c))?;
                let bd = self.mult.get(&(*b, *d))?;
                let coeff = &(cx * cy) * &self.braid_factor(*b, *c);
                for (p, cp) in ac.iter() {
                    for (q, cq) in bd.iter() {
                        out.add_term((*p, *q), &(&coeff * cp) * cq);
                    }
                }
            }
        }
        Some(out)
    }

    pub fn render(&self, v: &Element) -> String {
        render_lin(v, |i| self.basis[*i].label.clone())
    }

    pub fn render_tensor(&self, v: &Tensor2) -> String {
        render_lin(v, |(i, j)| {
            format!("{} ⊗ {}", self.basis[*i].label, self.basis[*j].label)
        })
    }

    fn indices_up_to(&self, d: Option<usize>) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| d.map_or(true, |d| self.basis[i].degree <= d))
            .collect()
    }

    /// Inverse of a group-like basis element.
    pub fn grouplike_inverse(&self, h: usize) -> Option<usize> {
        self.grouplikes().into_iter().find(|&k| {
            self.mult(h, k)
                .map_or(false, |p| *p == Lin::basis(self.unit))
        })
    }
}

/// Renders a sparse combination with the given key printer.
pub fn render_lin<K: Ord + Clone>(v: &Lin<K>, mut key: impl FnMut(&K) -> String) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (b, c)) in v.iter().enumerate() {
        let (neg, mag) = match c.as_rational() {
            Some(r) if r.is_negative() => (true, -c),
            _ => (false, c.clone()),
        };
        s.push_str(match (k, neg) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        let label = key(b);
        if mag.is_one() {
            s.push_str(&label);
        } else if mag.as_rational().is_some() {
            s.push_str(&format!("{mag}*{label}"));
        } else {
            s.push_str(&format!("({mag})*{label}"));
        }
    }
    s
}

// ---------------------------------------------------------------------------
// Reports

/// Count of checked cases and failures for one axiom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub cases: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: String,
    pub witness: String,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of a family of identity checks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    /// Checks were quantified over tuples with degree sum at most this.
    pub truncation: Option<usize>,
    pub checks: Vec<AxiomCheck>,
    pub violations: Vec<Violation>,
}

const MAX_WITNESSES_PER_AXIOM: usize = 8;

impl AxiomReport {
    pub fn new(truncation: Option<usize>) -> Self {
        AxiomReport {
            truncation,
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }

    pub fn failed_axioms(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| c.failures > 0)
            .map(|c| c.axiom.as_str())
            .collect()
    }

    pub fn axiom_passed(&self, axiom: &str) -> Option<bool> {
        self.checks
            .iter()
            .find(|c| c.axiom == axiom)
            .map(|c| c.failures == 0)
    }

    fn entry(&mut self, axiom: &str) -> &mut AxiomCheck {
        if let Some(k) = self.checks.iter().position(|c| c.axiom == axiom) {
            return &mut self.checks[k];
        }
        self.checks.push(AxiomCheck {
            axiom: axiom.into(),
            cases: 0,
            failures: 0,
        });
        self.checks.last_mut().unwrap()
    }

    /// Registers an axiom with no cases (so it appears as passed).
    pub fn declare(&mut self, axiom: &str) {
        self.entry(axiom);
    }

    /// Records one case; `detail` yields (witness, lhs, rhs) on failure.
    pub fn record(
        &mut self,
        axiom: &str,
        ok: bool,
        detail: impl FnOnce() -> (String, String, String),
    ) {
        let e = self.entry(axiom);
        e.cases += 1;
        if ok {
            return;
        }
        e.failures += 1;
        if e.failures <= MAX_WITNESSES_PER_AXIOM {
            let (witness, lhs, rhs) = detail();
            self.violations.push(Violation {
                axiom: axiom.into(),
                witness,
                lhs,
                rhs,
            });
        }
    }

    pub fn merge(&mut self, other: AxiomReport) {
        for c in other.checks {
            let e = self.entry(&c.axiom);
            e.cases += c.cases;
            e.failures += c.failures;
        }
        self.violations.extend(other.violations);
    }
}

pub const AX_UNIT: &str = "unit";
pub const AX_ASSOC: &str = "associativity";
pub const AX_COASSOC: &str = "coassociativity";
pub const AX_COUNIT: &str = "counit";
pub const AX_DELTA_MULT: &str = "comultiplication is an algebra map";
pub const AX_EPS_MULT: &str = "counit is an algebra map";
pub const AX_ANTIPODE: &str = "antipode";

/// Checks the Hopf axioms on all basis tuples with degree sum at most `cap`
/// (further limited by the algebra's own truncation).
pub fn verify_hopf(h: &TruncatedHopf, cap: Option<usize>) -> AxiomReport {
    let limit = match (cap, h.cap) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    let mut rep = AxiomReport::new(limit);
    let fits = |d: usize| limit.map_or(true, |l| d <= l);
    let idx = h.indices_up_to(limit);
    let deg = |i: usize| h.basis[i].degree;
    let label = |i: usize| h.basis[i].label.clone();
    let one = h.unit_element();

    // unit and (co)unit on 1
    for &i in &idx {
        let e = Lin::basis(i);
        let l = h.mult(h.unit, i).cloned().unwrap_or_default();
        let r = h.mult(i, h.unit).cloned().unwrap_or_default();
        rep.record(AX_UNIT, l == e && r == e, || {
            (label(i), h.render(&l), h.render(&r))
        });
    }
    let d1 = h.comult(h.unit).clone();
    rep.record(
        AX_UNIT,
        d1 == Lin::basis((h.unit, h.unit)) && h.counit(h.unit).is_one(),
        || {
            (
                "Δ(1), ε(1)".into(),
                h.render_tensor(&d1),
                h.counit(h.unit).to_string(),
            )
        },
    );

    // associativity
    for &i in &idx {
        for &j in &idx {
            if !fits(deg(i) + deg(j)) {
                continue;
            }
            let ij = h.mult(i, j).expect("within truncation").clone();
            for &k in &idx {
                if !fits(deg(i) + deg(j) + deg(k)) {
                    continue;
                }
                let lhs = h.mul(&ij, &Lin::basis(k));
                let jk = h.mult(j, k).expect("within truncation");
                let rhs = h.mul(&Lin::basis(i), jk);
                rep.record(AX_ASSOC, lhs.is_some() && lhs == rhs, || {
                    (
                        format!("({}, {}, {})", label(i), label(j), label(k)),
                        lhs.map(|v| h.render(&v)).unwrap_or("overflow".into()),
                        rhs.map(|v| h.render(&v)).unwrap_or("overflow".into()),
                    )
                });
            }
        }
    }

    for &i in &idx {
        let d = h.comult(i);
        // coassociativity
        let mut left: Lin<(usize, usize, usize)> = Lin::new();
        let mut right: Lin<(usize, usize, usize)> = Lin::new();
        for ((a, b), c) in d.iter() {
            for ((p, q), cp) in h.comult(*a).iter() {
                left.add_term((*p, *q, *b), c * cp);
            }
            for ((p, q), cp) in h.comult(*b).iter() {
                right.add_term((*a, *p, *q), c * cp);
            }
        }
        rep.record(AX_COASSOC, left == right, || {
            let r3 = |v: &Lin<(usize, usize, usize)>| {
                render_lin(v, |(a, b, c)| {
                    format!("{} ⊗ {} ⊗ {}", label(*a), label(*b), label(*c))
                })
            };
            (label(i), r3(&left), r3(&right))
        });
        // counit
        let mut l = Lin::new();
        let mut r = Lin::new();
        for ((a, b), c) in d.iter() {
            l.add_term(*b, c * h.counit(*a));
            r.add_term(*a, c * h.counit(*b));
        }
        let e = Lin::basis(i);
        rep.record(AX_COUNIT, l == e && r == e, || {
            (label(i), h.render(&l), h.render(&r))
        });
    }

    // Δ and ε multiplicative
    for &i in &idx {
        for &j in &idx {
            if !fits(deg(i) + deg(j)) {
                continue;
            }
            let ij = h.mult(i, j).expect("within truncation");
            let lhs = h.comult_of(ij);
            let rhs = h.tensor_mul(h.comult(i), h.comult(j));
            rep.record(AX_DELTA_MULT, rhs.as_ref() == Some(&lhs), || {
                (
                    format!("({}, {})", label(i), label(j)),
                    h.render_tensor(&lhs),
                    rhs.map(|v| h.render_tensor(&v))
                        .unwrap_or("overflow".into()),
                )
            });
            let el = h.counit_of(ij);
            let er = h.counit(i) * h.counit(j);
            rep.record(AX_EPS_MULT, el == er, || {
                (
                    format!("({}, {})", label(i), label(j)),
                    el.to_string(),
                    er.to_string(),
                )
            });
        }
    }

    // antipode
    if let Some(s) = &h.antipode {
        for &i in &idx {
            let expect = one.scaled(h.counit(i));
            let mut l = Some(Lin::new());
            let mut r = Some(Lin::new());
            for ((a, b), c) in h.comult(i).iter() {
                let sa = s.get(a);
                let sb = s.get(b);
                l = match (l, sa) {
                    (Some(mut acc), Some(sa)) => h.mul(sa, &Lin::basis(*b)).map(|p| {
                        acc.add_scaled(&p, c);
                        acc
                    }),
                    _ => None,
                };
                r = match (r, sb) {
                    (Some(mut acc), Some(sb)) => h.mul(&Lin::basis(*a), sb).map(|p| {
                        acc.add_scaled(&p, c);
                        acc
                    }),
                    _ => None,
                };
            }
            let ok = l.as_ref() == Some(&expect) && r.as_ref() == Some(&expect);
            rep.record(AX_ANTIPODE, ok, || {
                (
                    label(i),
                    l.map(|v| h.render(&v)).unwrap_or("undefined".into()),
                    r.map(|v| h.render(&v)).unwrap_or("undefined".into()),
                )
            });
        }
    }
    rep
}

/// Solves `m(S ⊗ id)Δ = uε` degree by degree.
///
/// For each basis element `a`, the terms `a ⊗ y` of `Δ(a)` give the unknown
/// `S(a)·y`; all other terms must involve elements whose antipode is already
/// known. When `y` is a multiple of a group-like the equation is solved by
/// inverting it, otherwise by a linear solve for `S(a)` among elements of
/// degree at most `deg a`.
pub fn solve_antipode(h: &TruncatedHopf) -> Result<TruncatedHopf, HopfError> {
    let mut s: BTreeMap<usize, Element> = BTreeMap::new();
    let mut pending: Vec<usize> = (0..h.dim()).filter(|&i| h.within(h.degree(i))).collect();
    pending.sort_by_key(|&i| (h.degree(i), i));
    let one = h.unit_element();
    while !pending.is_empty() {
        let mut progressed = false;
        let mut still = Vec::new();
        for &a in &pending {
            match solve_one(h, a, &s, &one)? {
                Some(v) => {
                    s.insert(a, v);
                    progressed = true;
                }
                None => still.push(a),
            }
        }
        if !progressed {
            let degree = still.iter().map(|&i| h.degree(i)).min().unwrap_or(0);
            return Err(HopfError::NoAntipode { degree });
        }
        pending = still;
    }
    let mut out = h.clone();
    out.antipode = Some(s);
    Ok(out)
}

/// `Ok(None)` when dependencies are not yet solved.
fn solve_one(
    h: &TruncatedHopf,
    a: usize,
    s: &BTreeMap<usize, Element>,
    one: &Element,
) -> Result<Option<Element>, HopfError> {
    let mut y: Element = Lin::new();
    let mut rhs = one.scaled(h.counit(a));
    for ((i, j), c) in h.comult(a).iter() {
        if *i == a {
            y.add_term(*j, c.clone());
            continue;
        }
        let Some(si) = s.get(i) else { return Ok(None) };
        let p = h.mul(si, &Lin::basis(*j)).ok_or(HopfError::NoAntipode {
            degree: h.degree(a),
        })?;
        rhs.sub_assign(&p.scaled(c));
    }
    let fail = HopfError::NoAntipode {
        degree: h.degree(a),
    };
    if y.is_zero() {
        return Err(fail);
    }
    if y.len() == 1 {
        let (hidx, c) = y.iter().next().map(|(k, c)| (*k, c.clone())).unwrap();
        if h.basis[hidx].grouplike {
            if let Some(inv) = h.grouplike_inverse(hidx) {
                let z = h.mul(&rhs, &Lin::basis(inv)).ok_or(fail.clone())?;
                return Ok(Some(z.scaled(&c.inv().expect("nonzero coefficient"))));
            }
        }
    }
    let mut ech: TrackedEchelon<usize, usize> = TrackedEchelon::new();
    for k in 0..h.dim() {
        if h.degree(k) > h.degree(a) {
            continue;
        }
        if let Some(img) = h.mul(&Lin::basis(k), &y) {
            ech.push(Lin::basis(k), img);
        }
    }
    ech.solve(&rhs).map(Some).ok_or(fail)
}

/// `P_{g,t} = {a : Δ(a) = g⊗a + a⊗t}` among elements of degree at most
/// `max_degree` (all of H when `None`).
pub fn skew_primitive_space(
    h: &TruncatedHopf,
    g: usize,
    t: usize,
    max_degree: Option<usize>,
) -> Result<Vec<Element>, HopfError> {
    for x in [g, t] {
        if x >= h.dim() || !h.basis[x].grouplike {
            return Err(HopfError::NotGrouplike(x));
        }
    }
    let cols = h.indices_up_to(max_degree).into_iter().map(|k| {
        let mut v = h.comult(k).clone();
        v.add_term((g, k), CycScalar::from_int(-1));
        v.add_term((k, t), CycScalar::from_int(-1));
        (k, v)
    });
    Ok(kernel(cols))
}

// ---------------------------------------------------------------------------
// Constructions

/// The group algebra kΓ.
pub fn group_algebra(group: &AbelianGroup) -> TruncatedHopf {
    let elems = group.elements();
    let basis = elems
        .iter()
        .map(|g| BasisElement {
            label: g.to_string(),
            degree: 0,
            zdeg: Some(Vec::new()),
            grouplike: true,
        })
        .collect();
    let mut mult = HashMap::new();
    for (i, a) in elems.iter().enumerate() {
        for (j, b) in elems.iter().enumerate() {
            mult.insert((i, j), Lin::basis(group.index_of(&group.add(a, b))));
        }
    }
    let comult = (0..elems.len()).map(|i| Lin::basis((i, i))).collect();
    let counit = vec![CycScalar::one(); elems.len()];
    let unit = group.index_of(&group.identity());
    let mut h =
        TruncatedHopf::new(basis, unit, None, mult, comult, counit).expect("well-formed tables");
    let s = elems
        .iter()
        .enumerate()
        .map(|(i, g)| (i, Lin::basis(group.index_of(&group.neg(g)))))
        .collect();
    h.antipode = Some(s);
    h
}

/// Straightening of products of Lie generators into PBW order.
pub(crate) struct Pbw<'a> {
    lie: &'a LieStructure,
    memo: HashMap<Word, Lin<Word>>,
}

impl<'a> Pbw<'a> {
    pub(crate) fn new(lie: &'a LieStructure) -> Self {
        Pbw {
            lie,
            memo: HashMap::new(),
        }
    }

    /// Normal form of a product of generators (a word in generator indices).
    pub(crate) fn straighten(&mut self, w: &[u8]) -> Lin<Word> {
        let Some(i) = (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1]) else {
            return Lin::basis(w.to_vec());
        };
        if let Some(v) = self.memo.get(w) {
            return v.clone();
        }
        let mut swapped = w.to_vec();
        swapped.swap(i, i + 1);
        let mut out = self.straighten(&swapped);
        let (a, b) = (w[i] as usize, w[i + 1] as usize);
        let br: Vec<(usize, CycScalar)> = self
            .lie
            .bracket(a, b)
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, c.clone()))
            .collect();
        for (k, c) in br {
            let mut v = w[..i].to_vec();
            v.push(k as u8);
            v.extend_from_slice(&w[i + 2..]);
            out.add_scaled(&self.straighten(&v), &c);
        }
        self.memo.insert(w.to_vec(), out.clone());
        out
    }
}

/// Sorted generator words (PBW monomials) of degree ≤ cap, by degree then lex.
pub(crate) fn pbw_monomials(dim: usize, cap: usize) -> Vec<Word> {
    let mut out: Vec<Word> = vec![Vec::new()];
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..cap {
        let mut next = Vec::new();
        for w in &layer {
            let start = w.last().copied().unwrap_or(0);
            for a in start..dim as u8 {
                let mut v = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub(crate) fn pbw_label(w: &[u8]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let mut parts = Vec::new();
    let mut k = 0;
    while k < w.len() {
        let mut e = 1;
        while k + e < w.len() && w[k + e] == w[k] {
            e += 1;
        }
        parts.push(if e == 1 {
            format!("u{}", w[k] + 1)
        } else {
            format!("u{}^{}", w[k] + 1, e)
        });
        k += e;
    }
    parts.join("*")
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// `Δ(x^α) = Σ_{γ ≤ α} binom(α, γ) x^γ ⊗ x^{α−γ}` on a sorted word.
pub(crate) fn pbw_coproduct(w: &[u8]) -> Vec<(Word, Word, i64)> {
    let mut runs: Vec<(u8, usize)> = Vec::new();
    for &a in w {
        match runs.last_mut() {
            Some((b, e)) if *b == a => *e += 1,
            _ => runs.push((a, 1)),
        }
    }
    let mut out = vec![(Vec::new(), Vec::new(), 1i64)];
    for (a, e) in runs {
        let mut next = Vec::new();
        for (l, r, c) in &out {
            for g in 0..=e {
                let mut l2 = l.clone();
                l2.extend(std::iter::repeat(a).take(g));
                let mut r2 = r.clone();
                r2.extend(std::iter::repeat(a).take(e - g));
                next.push((l2, r2, c * binomial(e, g)));
            }
        }
        out = next;
    }
    out
}

fn pbw_zdeg(lie: &LieStructure, w: &[u8]) -> Option<Vec<i64>> {
    let tags = lie.degree_tags()?;
    let theta = tags.first().map(Vec::len).unwrap_or(0);
    let mut d = vec![0i64; theta];
    for &a in w {
        for (x, y) in d.iter_mut().zip(&tags[a as usize]) {
            *x += y;
        }
    }
    Some(d)
}

/// `U(g)` truncated to PBW degree ≤ cap.
pub fn enveloping_truncated(lie: &LieStructure, cap: usize) -> TruncatedHopf {
    let d = lie.dim();
    let monos = pbw_monomials(d, cap);
    let index: HashMap<Word, usize> = monos
        .iter()
        .cloned()
        .enumerate()
        .map(|(k, w)| (w, k))
        .collect();
    let basis = monos
        .iter()
        .map(|w| BasisElement {
            label: pbw_label(w),
            degree: w.len(),
            zdeg: pbw_zdeg(lie, w),
            grouplike: w.is_empty(),
        })
        .collect();
    let mut pbw = Pbw::new(lie);
    let to_idx = |v: Lin<Word>| v.map_keys(|w| index[w]);
    let mut mult = HashMap::new();
    for (i, u) in monos.iter().enumerate() {
        for (j, v) in monos.iter().enumerate() {
            if u.len() + v.len() > cap {
                continue;
            }
            let mut w = u.clone();
            w.extend_from_slice(v);
            mult.insert((i, j), to_idx(pbw.straighten(&w)));
        }
    }
    let comult = monos
        .iter()
        .map(|w| {
            pbw_coproduct(w)
                .into_iter()
                .map(|(l, r, c)| ((index[&l], index[&r]), CycScalar::from_int(c)))
                .collect()
        })
        .collect();
    let counit = monos
        .iter()
        .map(|w| {
            if w.is_empty() {
                CycScalar::one()
            } else {
                CycScalar::zero()
            }
        })
        .collect();
    let mut h =
        TruncatedHopf::new(basis, 0, Some(cap), mult, comult, counit).expect("well-formed tables");
    // S(x_1 … x_k) = (−1)^k x_k … x_1
    let s = monos
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let rev: Word = w.iter().rev().copied().collect();
            let sign = CycScalar::from_int(if w.len() % 2 == 0 { 1 } else { -1 });
            (i, to_idx(pbw.straighten(&rev)).scaled(&sign))
        })
        .collect();
    h.antipode = Some(s);
    h
}

/// The Nichols (or pre-Nichols) algebra as a braided Hopf algebra on its
/// normal words.
pub fn braided_hopf(gq: &GradedQuotient) -> TruncatedHopf {
    let theta = gq.theta();
    let words = gq.basis();
    let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(k, w)| (w, k)).collect();
    let cap = if gq.is_finite() { None } else { Some(gq.cap()) };
    let basis = words
        .iter()
        .map(|w| BasisElement {
            label: render_word(w),
            degree: w.len(),
            zdeg: Some(multidegree(w, theta)),
            grouplike: w.is_empty(),
        })
        .collect();
    let mut mult = HashMap::new();
    for (i, u) in words.iter().enumerate() {
        for (j, v) in words.iter().enumerate() {
            if let Some(p) = gq.multiply(u, v) {
                mult.insert((i, j), p.map_keys(|w| index[w]));
            }
        }
    }
    let comult = words
        .iter()
        .map(|w| gq.coproduct(w).map_keys(|(l, r)| (index[l], index[r])))
        .collect();
    let counit = words
        .iter()
        .map(|w| {
            if w.is_empty() {
                CycScalar::one()
            } else {
                CycScalar::zero()
            }
        })
        .collect();
    TruncatedHopf::new(basis, 0, cap, mult, comult, counit)
        .and_then(|h| h.with_braiding(gq.braiding().clone()))
        .expect("well-formed tables")
}

/// The bosonization `B # kΓ` via the smash product and smash coproduct:
/// `(u#g)(w#h) = χ_w(g) uw # gh` and
/// `Δ(w#g) = Σ w_(1) # g_{w_(2)} g ⊗ w_(2) # g`.
pub fn bosonize(gq: &GradedQuotient, r: &YDRealization) -> Result<TruncatedHopf, HopfError> {
    if r.braiding() != gq.braiding() {
        return Err(HopfError::RealizationMismatch(
            "different braiding matrices".into(),
        ));
    }
    let report = crate::braided_space::validate_realization(r);
    if let Some(v) = report.violations.first() {
        return Err(HopfError::RealizationMismatch(format!(
            "chi_{}(g_{}) = {} but q_{}{} = {}",
            v.j + 1,
            v.i + 1,
            v.character_value,
            v.i + 1,
            v.j + 1,
            v.braiding_value
        )));
    }
    let theta = gq.theta();
    let group = r.group();
    let elems = group.elements();
    let ng = elems.len();
    let words = gq.basis();
    let windex: HashMap<&Word, usize> = words.iter().enumerate().map(|(k, w)| (w, k)).collect();
    let idx = |w: usize, g: usize| w * ng + g;
    let cap = if gq.is_finite() { None } else { Some(gq.cap()) };

    let mut basis = Vec::with_capacity(words.len() * ng);
    for w in &words {
        for g in &elems {
            basis.push(BasisElement {
                label: format!("{}#{}", render_word(w), g),
                degree: w.len(),
                zdeg: Some(multidegree(w, theta)),
                grouplike: w.is_empty(),
            });
        }
    }
    let wdeg: Vec<Vec<i64>> = words.iter().map(|w| multidegree(w, theta)).collect();

    let mut mult = HashMap::new();
    for (iu, u) in words.iter().enumerate() {
        for (iw, w) in words.iter().enumerate() {
            let Some(p) = gq.multiply(u, w) else { continue };
            for (ig, g) in elems.iter().enumerate() {
                let chi = r.character_value(&wdeg[iw], g);
                for (ih, hh) in elems.iter().enumerate() {
                    let gh = group.index_of(&group.add(g, hh));
                    let v: Element = p
                        .iter()
                        .map(|(x, c)| (idx(windex[x], gh), c * &chi))
                        .collect();
                    mult.insert((idx(iu, ig), idx(iw, ih)), v);
                }
            }
        }
    }

    let mut comult = Vec::with_capacity(basis.len());
    for w in &words {
        let dw = gq.coproduct(w);
        for g in &elems {
            let mut t = Lin::new();
            for ((w1, w2), c) in dw.iter() {
                let gw2 = r.group_degree(&multidegree(w2, theta));
                let left = group.index_of(&group.add(&gw2, g));
                let gi = group.index_of(g);
                t.add_term((idx(windex[w1], left), idx(windex[w2], gi)), c.clone());
            }
            comult.push(t);
        }
    }
    let counit = words
        .iter()
        .flat_map(|w| {
            std::iter::repeat(if w.is_empty() {
                CycScalar::one()
            } else {
                CycScalar::zero()
            })
            .take(ng)
        })
        .collect();
    let unit = idx(windex[&Vec::new()], group.index_of(&group.identity()));
    TruncatedHopf::new(basis, unit, cap, mult, comult, counit)
}

// ---------------------------------------------------------------------------
// Serialization

#[derive(Serialize, Deserialize)]
struct Term {
    index: usize,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct TensorTerm {
    left: usize,
    right: usize,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct MultEntry {
    left: usize,
    right: usize,
    value: Vec<Term>,
}

#[derive(Serialize, Deserialize)]
struct AntipodeEntry {
    index: usize,
    value: Vec<Term>,
}

/// On-disk form of a [`TruncatedHopf`]. Scalars use the textual scalar
/// syntax; table entries are sorted by index.
#[derive(Serialize, Deserialize)]
struct HopfDocument {
    version: u32,
    cap: Option<usize>,
    unit: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    braiding: Option<Vec<Vec<String>>>,
    basis: Vec<BasisElement>,
    mult: Vec<MultEntry>,
    comult: Vec<Vec<TensorTerm>>,
    counit: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    antipode: Option<Vec<AntipodeEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    smash: Option<SmashInfo>,
}

pub const HOPF_FORMAT_VERSION: u32 = 1;

fn terms(v: &Element) -> Vec<Term> {
    v.iter()
        .map(|(k, c)| Term {
            index: *k,
            coeff: c.to_string(),
        })
        .collect()
}

fn scalar(s: &str) -> Result<CycScalar, HopfError> {
    parse_scalar(s).map_err(|e| HopfError::Serialization(format!("bad scalar {s:?}: {e}")))
}

fn from_terms(ts: &[Term]) -> Result<Element, HopfError> {
    ts.iter()
        .map(|t| Ok((t.index, scalar(&t.coeff)?)))
        .collect::<Result<Vec<_>, _>>()
        .map(|v| v.into_iter().collect())
}

impl TruncatedHopf {
    pub fn to_json(&self) -> String {
        let mut keys: Vec<&(usize, usize)> = self.mult.keys().collect();
        keys.sort();
        let doc = HopfDocument {
            version: HOPF_FORMAT_VERSION,
            cap: self.cap,
            unit: self.unit,
            braiding: self.braiding.as_ref().map(|b| {
                b.matrix()
                    .iter()
                    .map(|r| r.iter().map(|c| c.to_string()).collect())
                    .collect()
            }),
            basis: self.basis.clone(),
            mult: keys
                .into_iter()
                .map(|&(i, j)| MultEntry {
                    left: i,
                    right: j,
                    value: terms(&self.mult[&(i, j)]),
                })
                .collect(),
            comult: self
                .comult
                .iter()
                .map(|t| {
                    t.iter()
                        .map(|((l, r), c)| TensorTerm {
                            left: *l,
                            right: *r,
                            coeff: c.to_string(),
                        })
                        .collect()
                })
                .collect(),
            counit: self.counit.iter().map(|c| c.to_string()).collect(),
            antipode: self.antipode.as_ref().map(|s| {
                s.iter()
                    .map(|(k, v)| AntipodeEntry {
                        index: *k,
                        value: terms(v),
                    })
                    .collect()
            }),
            smash: self.smash.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable document")
    }

    pub fn from_json(src: &str) -> Result<Self, HopfError> {
        let doc: HopfDocument =
            serde_json::from_str(src).map_err(|e| HopfError::Serialization(e.to_string()))?;
        if doc.version != HOPF_FORMAT_VERSION {
            return Err(HopfError::Serialization(format!(
                "unsupported version {}",
                doc.version
            )));
        }
        let mut mult = HashMap::new();
        for e in &doc.mult {
            mult.insert((e.left, e.right), from_terms(&e.value)?);
        }
        let comult = doc
            .comult
            .iter()
            .map(|ts| {
                ts.iter()
                    .map(|t| Ok(((t.left, t.right), scalar(&t.coeff)?)))
                    .collect::<Result<Vec<_>, HopfError>>()
            })
            .map(|r| r.map(|v| v.into_iter().collect()))
            .collect::<Result<Vec<Tensor2>, _>>()?;
        let counit = doc
            .counit
            .iter()
            .map(|s| scalar(s))
            .collect::<Result<Vec<_>, _>>()?;
        let mut h = TruncatedHopf::new(doc.basis, doc.unit, doc.cap, mult, comult, counit)?;
        if let Some(rows) = doc.braiding {
            let q = rows
                .iter()
                .map(|r| r.iter().map(|s| scalar(s)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            let b =
                DiagonalBraiding::new(q).map_err(|e| HopfError::Serialization(e.to_string()))?;
            h = h.with_braiding(b)?;
        }
        if let Some(entries) = doc.antipode {
            let mut s = BTreeMap::new();
            for e in entries {
                s.insert(e.index, from_terms(&e.value)?);
            }
            h.antipode = Some(s);
        }
        h.smash = doc.smash;
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braided_space::derive_realization;
    use crate::nichols::nichols_truncated;
    use crate::scalars::root_of_unity;

    fn sweedler() -> TruncatedHopf {
        let b = DiagonalBraiding::rank_one(CycScalar::from_int(-1)).unwrap();
        let gq = nichols_truncated(&b, 4).unwrap();
        bosonize(&gq, &derive_realization(&b).unwrap()).unwrap()
    }

    #[test]
    fn group_algebras() {
        for ex in [vec![1], vec![2], vec![2, 2], vec![3]] {
            let g = AbelianGroup::new(ex).unwrap();
            let h = group_algebra(&g);
            assert_eq!(h.dim(), g.order());
            assert!(verify_hopf(&h, None).passed());
        }
        let z2 = group_algebra(&AbelianGroup::new(vec![2]).unwrap());
        assert_eq!(z2.antipode().unwrap()[&1], Lin::basis(1));
    }

    #[test]
    fn sweedler_structure() {
        let h = sweedler();
        assert_eq!(h.dim(), 4);
        let x = h.index_of("x1#g(0)").unwrap();
        let g = h.index_of("1#g(1)").unwrap();
        let xg = h.index_of("x1#g(1)").unwrap();
        assert!(h.mult(x, x).unwrap().is_zero());
        assert_eq!(
            h.mult(g, x).unwrap(),
            &Lin::single(xg, CycScalar::from_int(-1))
        );
        let mut dx = Lin::basis((x, h.unit()));
        dx.add_term((g, x), CycScalar::one());
        assert_eq!(h.comult(x), &dx);
        assert!(verify_hopf(&h, None).passed());
        let h = solve_antipode(&h).unwrap();
        assert!(verify_hopf(&h, None).passed());
        // S(x) = −g⁻¹x = −gx = xg
        assert_eq!(h.antipode().unwrap()[&x], Lin::basis(xg));
    }

    #[test]
    fn corrupted_entry_is_reported() {
        let mut h = sweedler();
        let x = h.index_of("x1#g(0)").unwrap();
        let g = h.index_of("1#g(1)").unwrap();
        h.set_mult_entry(x, g, Lin::basis(x));
        let rep = verify_hopf(&h, None);
        assert!(!rep.passed());
        assert!(rep.violations.iter().any(|v| v.witness.contains("x1#g(0)")));
    }

    #[test]
    fn enveloping_examples() {
        let h = enveloping_truncated(&LieStructure::abelian(0), 3);
        assert_eq!(h.dim(), 1);
        let h = enveloping_truncated(&LieStructure::abelian(1), 3);
        assert_eq!(h.dim(), 4);
        let x2 = h.index_of("u1^2").unwrap();
        let x = h.index_of("u1").unwrap();
        let mut expect = Lin::basis((x2, 0));
        expect.add_term((x, x), CycScalar::from_int(2));
        expect.add_term((0, x2), CycScalar::one());
        assert_eq!(h.comult(x2), &expect);
        assert!(verify_hopf(&h, None).passed());
        let h2 = enveloping_truncated(&LieStructure::abelian(2), 2);
        assert_eq!(h2.dim(), 6);
        for i in 0..6 {
            for j in 0..6 {
                if let (Some(a), Some(b)) = (h2.mult(i, j), h2.mult(j, i)) {
                    assert_eq!(a, b);
                }
            }
        }
        let s = solve_antipode(&h).unwrap();
        assert_eq!(
            s.antipode().unwrap()[&x],
            Lin::single(x, CycScalar::from_int(-1))
        );
        assert_eq!(s.antipode(), h.antipode());
    }

    #[test]
    fn sl2_enveloping_is_hopf() {
        let one = CycScalar::one();
        let zero = CycScalar::zero();
        let two = CycScalar::from_int(2);
        // basis e, f, h: [e,f]=h, [h,e]=2e, [h,f]=-2f
        let mut c = vec![vec![vec![zero.clone(); 3]; 3]; 3];
        c[0][1][2] = one.clone();
        c[1][0][2] = -&one;
        c[2][0][0] = two.clone();
        c[0][2][0] = -&two;
        c[2][1][1] = -&two;
        c[1][2][1] = two.clone();
        let lie = LieStructure::new(c).unwrap();
        let h = enveloping_truncated(&lie, 3);
        assert_eq!(h.dim(), 20);
        let rep = verify_hopf(&h, None);
        assert!(rep.passed(), "{:?}", rep.violations);
        // cocommutative
        for i in 0..h.dim() {
            let flipped = h.comult(i).map_keys(|(a, b)| (*b, *a));
            assert_eq!(&flipped, h.comult(i));
        }
    }

    #[test]
    fn skew_primitives() {
        let h = solve_antipode(&sweedler()).unwrap();
        let g = h.index_of("1#g(1)").unwrap();
        let p = skew_primitive_space(&h, g, h.unit(), None).unwrap();
        assert_eq!(p.len(), 2);
        let u = enveloping_truncated(&LieStructure::abelian(2), 3);
        let p = skew_primitive_space(&u, 0, 0, None).unwrap();
        assert_eq!(p.len(), 2);
        let ga = group_algebra(&AbelianGroup::new(vec![3]).unwrap());
        let p = skew_primitive_space(&ga, 1, 2, None).unwrap();
        assert_eq!(p.len(), 1);
        let mut expect = Lin::basis(2);
        expect.add_term(1, CycScalar::from_int(-1));
        assert!(p[0] == expect || p[0] == expect.neg());
        assert_eq!(
            skew_primitive_space(&h, h.index_of("x1#g(0)").unwrap(), 0, None),
            Err(HopfError::NotGrouplike(2))
        );
    }

    #[test]
    fn rank_one_bosonizations() {
        for m in 2..=4u32 {
            let b = DiagonalBraiding::rank_one(root_of_unity(m, 1)).unwrap();
            let gq = nichols_truncated(&b, m as usize + 1).unwrap();
            let h =
                solve_antipode(&bosonize(&gq, &derive_realization(&b).unwrap()).unwrap()).unwrap();
            assert_eq!(h.dim(), (m * m) as usize);
            let rep = verify_hopf(&h, None);
            assert!(rep.passed(), "{:?}", rep.violations);
        }
    }

    #[test]
    fn braided_nichols_is_braided_hopf() {
        let b = DiagonalBraiding::rank_one(root_of_unity(3, 1)).unwrap();
        let h = solve_antipode(&braided_hopf(&nichols_truncated(&b, 4).unwrap())).unwrap();
        assert_eq!(h.dim(), 3);
        assert!(verify_hopf(&h, None).passed());
    }

    #[test]
    fn json_round_trip() {
        let h = solve_antipode(&sweedler()).unwrap();
        let s = h.to_json();
        let back = TruncatedHopf::from_json(&s).unwrap();
        assert_eq!(back.to_json(), s);
        assert!(verify_hopf(&back, None).passed());
        assert!(TruncatedHopf::from_json("{\"version\": 9}").is_err());
    }

    #[test]
    fn mismatched_realization() {
        let b = DiagonalBraiding::rank_one(root_of_unity(4, 1)).unwrap();
        let other = DiagonalBraiding::rank_one(CycScalar::from_int(-1)).unwrap();
        let gq = nichols_truncated(&b, 5).unwrap();
        let r = derive_realization(&other).unwrap();
        assert!(matches!(
            bosonize(&gq, &r),
            Err(HopfError::RealizationMismatch(_))
        ));
    }
}
