//! The tensor algebra T(V) of a diagonal braided vector space: words,
//! braid-group lifts, the quantum symmetrizer, the braided shuffle coproduct
//! and Leibniz extensions of endomorphisms of V.
//!
//! Letters are 0-based internally and rendered as `x1 … xθ`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::braided_space::{DiagonalBraiding, EndV};
use crate::linalg::Lin;
use crate::scalars::{parse_expr, CycScalar, Expr, ParseError};

pub type Word = Vec<u8>;
pub type TensorElement = Lin<Word>;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TensorError {
    #[error("braid position {position} out of range for length {len}")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("not a permutation")]
    NotAPermutation,
    #[error("{0}")]
    Parse(ParseError),
    #[error("letter x{letter} exceeds dimension {theta}")]
    LetterOutOfRange { letter: usize, theta: usize },
}

/// Letter counts of a word.
pub fn multidegree(w: &[u8], theta: usize) -> Vec<i64> {
    let mut d = vec![0i64; theta];
    for &a in w {
        d[a as usize] += 1;
    }
    d
}

/// All θⁿ words of length n in lexicographic order.
pub fn words(theta: usize, n: usize) -> Vec<Word> {
    let mut out: Vec<Word> = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..theta as u8).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

/// Position of a word in [`words`].
pub fn word_rank(w: &[u8], theta: usize) -> usize {
    w.iter().fold(0, |acc, &a| acc * theta + a as usize)
}

/// A linear map `T^n(V) → T^m(V)`, stored column by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinOp {
    source_len: usize,
    target_len: usize,
    columns: BTreeMap<Word, TensorElement>,
}

impl LinOp {
    pub fn zero(source_len: usize, target_len: usize) -> Self {
        LinOp {
            source_len,
            target_len,
            columns: BTreeMap::new(),
        }
    }

    pub fn identity(theta: usize, n: usize) -> Self {
        Self::from_fn(theta, n, n, |w| Lin::basis(w.to_vec()))
    }

    /// Builds the operator from its action on basis words.
    pub fn from_fn(
        theta: usize,
        source_len: usize,
        target_len: usize,
        mut f: impl FnMut(&[u8]) -> TensorElement,
    ) -> Self {
        let mut op = Self::zero(source_len, target_len);
        for w in words(theta, source_len) {
            let img = f(&w);
            op.set_column(w, img);
        }
        op
    }

    pub fn source_len(&self) -> usize {
        self.source_len
    }

    pub fn target_len(&self) -> usize {
        self.target_len
    }

    fn set_column(&mut self, w: Word, img: TensorElement) {
        if img.is_zero() {
            self.columns.remove(&w);
        } else {
            self.columns.insert(w, img);
        }
    }

    pub fn column(&self, w: &[u8]) -> TensorElement {
        self.columns.get(w).cloned().unwrap_or_default()
    }

    pub fn entry(&self, row: &[u8], col: &[u8]) -> CycScalar {
        self.columns
            .get(col)
            .map(|c| c.coeff(&row.to_vec()))
            .unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn apply(&self, v: &TensorElement) -> TensorElement {
        let mut out = Lin::new();
        for (w, c) in v.iter() {
            if let Some(col) = self.columns.get(w) {
                out.add_scaled(col, c);
            }
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinOp) -> LinOp {
        let mut out = Self::zero(other.source_len, self.target_len);
        for (w, col) in &other.columns {
            out.set_column(w.clone(), self.apply(col));
        }
        out
    }

    pub fn add(&self, other: &LinOp) -> LinOp {
        let mut out = self.clone();
        for (w, col) in &other.columns {
            let sum = out.column(w).add(col);
            out.set_column(w.clone(), sum);
        }
        out
    }

    pub fn sub(&self, other: &LinOp) -> LinOp {
        self.add(&other.scale(&CycScalar::from_int(-1)))
    }

    pub fn scale(&self, c: &CycScalar) -> LinOp {
        let mut out = Self::zero(self.source_len, self.target_len);
        for (w, col) in &self.columns {
            out.set_column(w.clone(), col.scaled(c));
        }
        out
    }

    pub fn columns(&self) -> impl Iterator<Item = (&Word, &TensorElement)> {
        self.columns.iter()
    }
}

/// Action of `σ_i` (1-based `position`) on a single word.
pub fn braid_word(w: &[u8], position: usize, b: &DiagonalBraiding) -> (CycScalar, Word) {
    let (p, s) = (position - 1, position);
    let mut out = w.to_vec();
    out.swap(p, s);
    (b.q(w[p] as usize, w[s] as usize).clone(), out)
}

/// The operator `σ_i = id^{⊗(i−1)} ⊗ c ⊗ id^{⊗(n−i−1)}` on `T^n(V)`.
pub fn braid_generator(
    n: usize,
    position: usize,
    b: &DiagonalBraiding,
) -> Result<LinOp, TensorError> {
    if position == 0 || position >= n {
        return Err(TensorError::PositionOutOfRange { position, len: n });
    }
    Ok(LinOp::from_fn(b.theta(), n, n, |w| {
        let (c, v) = braid_word(w, position, b);
        Lin::single(v, c)
    }))
}

fn check_perm(perm: &[usize]) -> Result<(), TensorError> {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return Err(TensorError::NotAPermutation);
        }
        seen[p] = true;
    }
    Ok(())
}

/// A reduced expression for `perm`, given in one-line notation with the
/// convention that the letter at position p moves to position `perm[p]`
/// (both 0-based). Returns 1-based generator positions `[i_1, …, i_k]` with
/// `perm = s_{i_1} ∘ … ∘ s_{i_k}`. With `last_descent` the bubble sort picks
/// the rightmost descent at each step, which gives a different reduced word
/// in general.
pub fn reduced_word(perm: &[usize], last_descent: bool) -> Result<Vec<usize>, TensorError> {
    check_perm(perm)?;
    let mut w = perm.to_vec();
    let mut rev = Vec::new();
    loop {
        let mut descents = (0..w.len().saturating_sub(1)).filter(|&i| w[i] > w[i + 1]);
        let d = if last_descent {
            descents.next_back()
        } else {
            descents.next()
        };
        match d {
            // w = (w ∘ s_i) ∘ s_i
            Some(i) => {
                w.swap(i, i + 1);
                rev.push(i + 1);
            }
            None => break,
        }
    }
    rev.reverse();
    Ok(rev)
}

/// Composes `σ_{i_1} ∘ … ∘ σ_{i_k}` on a word.
pub fn lift_reduced_word_on(
    word: &[u8],
    gens: &[usize],
    b: &DiagonalBraiding,
) -> (CycScalar, Word) {
    let mut coeff = CycScalar::one();
    let mut w = word.to_vec();
    for &i in gens.iter().rev() {
        let (c, v) = braid_word(&w, i, b);
        coeff = &coeff * &c;
        w = v;
    }
    (coeff, w)
}

pub fn lift_reduced_word(
    n: usize,
    gens: &[usize],
    b: &DiagonalBraiding,
) -> Result<LinOp, TensorError> {
    if let Some(&i) = gens.iter().find(|&&i| i == 0 || i >= n) {
        return Err(TensorError::PositionOutOfRange {
            position: i,
            len: n,
        });
    }
    Ok(LinOp::from_fn(b.theta(), n, n, |w| {
        let (c, v) = lift_reduced_word_on(w, gens, b);
        Lin::single(v, c)
    }))
}

/// The Matsumoto lift of a permutation to the braid group, acting on `T^n(V)`.
pub fn braid_lift(perm: &[usize], b: &DiagonalBraiding) -> Result<LinOp, TensorError> {
    let gens = reduced_word(perm, false)?;
    lift_reduced_word(perm.len(), &gens, b)
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                rec(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Memoized quantum symmetrizer for one braiding.
///
/// Uses `S_n = (S_{n−1} ⊗ id) ∘ U_n`, where `U_n` moves the letter at
/// position p to the end past the letters on its right, picking up
/// `∏_{k>p} q_{w_p w_k}`. The permutations moving a single letter to the last
/// slot are the minimal left coset representatives of `S_{n−1}`, so each
/// product is length-additive and the lifts multiply.
#[derive(Debug)]
pub struct Symmetrizer {
    braiding: DiagonalBraiding,
    cache: RefCell<HashMap<Word, TensorElement>>,
}

impl Symmetrizer {
    pub fn new(braiding: DiagonalBraiding) -> Self {
        Symmetrizer {
            braiding,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn braiding(&self) -> &DiagonalBraiding {
        &self.braiding
    }

    pub fn apply_word(&self, w: &[u8]) -> TensorElement {
        if w.len() <= 1 {
            return Lin::basis(w.to_vec());
        }
        if let Some(v) = self.cache.borrow().get(w) {
            return v.clone();
        }
        let n = w.len();
        let mut out = Lin::new();
        for p in 0..n {
            let mut coeff = CycScalar::one();
            for k in p + 1..n {
                coeff = &coeff * self.braiding.q(w[p] as usize, w[k] as usize);
            }
            let mut rest = w.to_vec();
            let last = rest.remove(p);
            let inner = self.apply_word(&rest);
            for (u, c) in inner.iter() {
                let mut v = u.clone();
                v.push(last);
                out.add_term(v, c * &coeff);
            }
        }
        self.cache.borrow_mut().insert(w.to_vec(), out.clone());
        out
    }

    pub fn apply(&self, v: &TensorElement) -> TensorElement {
        let mut out = Lin::new();
        for (w, c) in v.iter() {
            out.add_scaled(&self.apply_word(w), c);
        }
        out
    }

    pub fn operator(&self, n: usize) -> LinOp {
        LinOp::from_fn(self.braiding.theta(), n, n, |w| self.apply_word(w))
    }
}

/// The quantum symmetrizer `S_n = Σ_{w ∈ S_n} lift(w)` on `T^n(V)`.
pub fn quantum_symmetrizer(n: usize, b: &DiagonalBraiding) -> LinOp {
    Symmetrizer::new(b.clone()).operator(n)
}

/// Free product of T(V).
pub fn concat(a: &TensorElement, b: &TensorElement) -> TensorElement {
    crate::linalg::bilinear(a, b, |u, v| {
        let mut w = u.clone();
        w.extend_from_slice(v);
        Lin::basis(w)
    })
}

/// `(p, n−p)`-component of the braided coproduct on a word:
/// `Σ_{|P|=p} (∏_{i∉P, j∈P, i<j} q_{w_i w_j}) w_P ⊗ w_{P^c}`.
pub fn shuffle_coproduct_word(w: &[u8], p: usize, b: &DiagonalBraiding) -> Lin<(Word, Word)> {
    let n = w.len();
    let mut out = Lin::new();
    if p > n {
        return out;
    }
    for subset in subsets(n, p) {
        let mut coeff = CycScalar::one();
        let (mut left, mut right) = (Vec::with_capacity(p), Vec::with_capacity(n - p));
        for j in 0..n {
            if subset[j] {
                left.push(w[j]);
                for i in 0..j {
                    if !subset[i] {
                        coeff = &coeff * b.q(w[i] as usize, w[j] as usize);
                    }
                }
            } else {
                right.push(w[j]);
            }
        }
        out.add_term((left, right), coeff);
    }
    out
}

fn subsets(n: usize, p: usize) -> Vec<Vec<bool>> {
    fn rec(start: usize, left: usize, cur: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..=cur.len() - left {
            cur[i] = true;
            rec(i + 1, left - 1, cur, out);
            cur[i] = false;
        }
    }
    let mut out = Vec::new();
    rec(0, p, &mut vec![false; n], &mut out);
    out
}

/// Full braided coproduct of an element, summed over all splittings.
pub fn coproduct(v: &TensorElement, b: &DiagonalBraiding) -> Lin<(Word, Word)> {
    let mut out = Lin::new();
    for (w, c) in v.iter() {
        for p in 0..=w.len() {
            out.add_scaled(&shuffle_coproduct_word(w, p, b), c);
        }
    }
    out
}

/// `Δ_{p,n−p}` as an operator; the target `T^p ⊗ T^{n−p}` is identified with
/// `T^n` by concatenating the two tensor factors.
pub fn shuffle_coproduct(n: usize, p: usize, b: &DiagonalBraiding) -> LinOp {
    LinOp::from_fn(b.theta(), n, n, |w| {
        shuffle_coproduct_word(w, p, b).map_keys(|(l, r)| {
            let mut v = l.clone();
            v.extend_from_slice(r);
            v
        })
    })
}

/// Splits a concatenated tensor `T^n ≅ T^p ⊗ T^{n−p}` back into pairs.
pub fn split_at(v: &TensorElement, p: usize) -> Lin<(Word, Word)> {
    v.map_keys(|w| (w[..p].to_vec(), w[p..].to_vec()))
}

/// Leibniz extension of `d ∈ End(V)` applied to a word.
pub fn derivation_on_word(d: &EndV, w: &[u8]) -> TensorElement {
    let mut out = Lin::new();
    for j in 0..w.len() {
        for (i, c) in d.column(w[j] as usize) {
            let mut v = w.to_vec();
            v[j] = i as u8;
            out.add_term(v, c);
        }
    }
    out
}

pub fn apply_derivation(d: &EndV, v: &TensorElement) -> TensorElement {
    let mut out = Lin::new();
    for (w, c) in v.iter() {
        out.add_scaled(&derivation_on_word(d, w), c);
    }
    out
}

/// `Σ_j id^{⊗(j−1)} ⊗ d ⊗ id^{⊗(n−j)}` on `T^n(V)`.
pub fn extend_derivation(d: &EndV, n: usize) -> LinOp {
    LinOp::from_fn(d.dim(), n, n, |w| derivation_on_word(d, w))
}

/// Renders a word as `x1*x2*x1`, or `1` for the empty word.
pub fn render_word(w: &[u8]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|a| format!("x{}", a + 1))
        .collect::<Vec<_>>()
        .join("*")
}

fn needs_parens(c: &CycScalar) -> bool {
    let s = c.to_string();
    s.trim_start_matches('-').contains(['+', '-'])
}

/// Renders an element in the element syntax, e.g. `x1*x2 - z(3)*x2*x1`.
pub fn render_element(v: &TensorElement) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (w, c)) in v.iter().enumerate() {
        let (neg, mag) = match c.as_rational() {
            Some(r) if r.is_negative() => (true, -c),
            _ => (false, c.clone()),
        };
        match (k, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        let word = render_word(w);
        if mag.is_one() {
            s.push_str(&word);
        } else {
            let coeff = if needs_parens(&mag) {
                format!("({mag})")
            } else {
                mag.to_string()
            };
            if w.is_empty() {
                s.push_str(&coeff);
            } else {
                let _ = write!(s, "{coeff}*{word}");
            }
        }
    }
    s
}

fn eval_element(e: &Expr, theta: usize) -> Result<TensorElement, ParseError> {
    let pe = |m: String| ParseError {
        column: 0,
        message: m,
    };
    Ok(match e {
        Expr::Int(_) | Expr::Zeta(_) => Lin::single(Vec::new(), crate::scalars::eval_scalar(e)?),
        Expr::Letter(i) => {
            if *i >= theta {
                return Err(pe(format!("letter x{} exceeds dimension {theta}", i + 1)));
            }
            Lin::basis(vec![*i as u8])
        }
        Expr::Neg(a) => eval_element(a, theta)?.neg(),
        Expr::Add(a, b) => eval_element(a, theta)?.add(&eval_element(b, theta)?),
        Expr::Sub(a, b) => eval_element(a, theta)?.sub(&eval_element(b, theta)?),
        Expr::Mul(a, b) => concat(&eval_element(a, theta)?, &eval_element(b, theta)?),
        Expr::Div(a, b, col) => {
            let d = eval_element(b, theta)?;
            let scalar = match d.iter().next() {
                Some((w, c)) if d.len() == 1 && w.is_empty() => c.clone(),
                _ => {
                    return Err(ParseError {
                        column: *col,
                        message: "can only divide by a nonzero scalar".into(),
                    })
                }
            };
            let inv = scalar.inv().map_err(|_| ParseError {
                column: *col,
                message: "division by zero".into(),
            })?;
            eval_element(a, theta)?.scaled(&inv)
        }
        Expr::Pow(a, k, col) => {
            let base = eval_element(a, theta)?;
            let is_scalar = base.keys().all(|w| w.is_empty());
            if is_scalar {
                let c = base.coeff(&Vec::new());
                let v = c.pow(*k).map_err(|_| ParseError {
                    column: *col,
                    message: "zero raised to a negative power".into(),
                })?;
                Lin::single(Vec::new(), v)
            } else if *k < 0 {
                return Err(ParseError {
                    column: *col,
                    message: "negative power of a tensor".into(),
                });
            } else {
                (0..*k).fold(Lin::basis(Vec::new()), |acc, _| concat(&acc, &base))
            }
        }
    })
}

/// Parses the element syntax (noncommutative polynomials in `x1 … xθ`).
pub fn parse_element(src: &str, theta: usize) -> Result<TensorElement, ParseError> {
    eval_element(&parse_expr(src)?, theta)
}

/// Common multidegree of all terms, or `None` if the element is
/// inhomogeneous or zero.
pub fn homogeneous_degree(v: &TensorElement, theta: usize) -> Option<Vec<i64>> {
    let mut it = v.keys().map(|w| multidegree(w, theta));
    let first = it.next()?;
    it.all(|d| d == first).then_some(first)
}
