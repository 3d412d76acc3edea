//! Sparse exact linear algebra over cyclotomic fields.
//!
//! Vectors are sparse maps from an ordered key type to [`CycScalar`]. Echelon
//! structures pivot on the *largest* key of each vector, so the complement of
//! the pivot set (the normal-form support) consists of the smallest keys.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalars::CycScalar;

/// Sparse vector with no stored zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Lin<K: Ord> {
    terms: BTreeMap<K, CycScalar>,
}

impl<K: Ord> Default for Lin<K> {
    fn default() -> Self {
        Lin {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> Lin<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(key: K, coeff: CycScalar) -> Self {
        let mut v = Self::new();
        v.add_term(key, coeff);
        v
    }

    pub fn basis(key: K) -> Self {
        Self::single(key, CycScalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, key: &K) -> Option<&CycScalar> {
        self.terms.get(key)
    }

    pub fn coeff(&self, key: &K) -> CycScalar {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, key: K, coeff: CycScalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &coeff;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Lin<K>, c: &CycScalar) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn add_assign(&mut self, other: &Lin<K>) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &Lin<K>) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), -v);
        }
    }

    pub fn scaled(&self, c: &CycScalar) -> Lin<K> {
        if c.is_zero() {
            return Lin::new();
        }
        Lin {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn neg(&self) -> Lin<K> {
        Lin {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&K, &CycScalar)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl DoubleEndedIterator<Item = &K> {
        self.terms.keys()
    }

    pub fn leading(&self) -> Option<(&K, &CycScalar)> {
        self.terms.iter().next_back()
    }

    pub fn map_keys<J: Ord + Clone>(&self, mut f: impl FnMut(&K) -> J) -> Lin<J> {
        let mut out = Lin::new();
        for (k, v) in &self.terms {
            out.add_term(f(k), v.clone());
        }
        out
    }

    /// Linear extension of `f` from keys to vectors.
    pub fn apply<J: Ord + Clone>(&self, mut f: impl FnMut(&K) -> Lin<J>) -> Lin<J> {
        let mut out = Lin::new();
        for (k, v) in &self.terms {
            out.add_scaled(&f(k), v);
        }
        out
    }

    pub fn sub(&self, other: &Lin<K>) -> Lin<K> {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    pub fn add(&self, other: &Lin<K>) -> Lin<K> {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }
}

impl<K: Ord + Clone> FromIterator<(K, CycScalar)> for Lin<K> {
    fn from_iter<I: IntoIterator<Item = (K, CycScalar)>>(iter: I) -> Self {
        let mut v = Lin::new();
        for (k, c) in iter {
            v.add_term(k, c);
        }
        v
    }
}

impl<K: Ord> IntoIterator for Lin<K> {
    type Item = (K, CycScalar);
    type IntoIter = std::collections::btree_map::IntoIter<K, CycScalar>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.into_iter()
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for Lin<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// Bilinear product of two sparse vectors through a key-level product.
pub fn bilinear<A, B, C>(a: &Lin<A>, b: &Lin<B>, mut f: impl FnMut(&A, &B) -> Lin<C>) -> Lin<C>
where
    A: Ord + Clone,
    B: Ord + Clone,
    C: Ord + Clone,
{
    let mut out = Lin::new();
    for (ka, va) in a.iter() {
        for (kb, vb) in b.iter() {
            let prod = f(ka, kb);
            if !prod.is_zero() {
                out.add_scaled(&prod, &(va * vb));
            }
        }
    }
    out
}

/// A subspace in semi-echelon form: every row has a distinct pivot (its largest
/// key, normalized to 1), and no row contains a key above its pivot.
#[derive(Clone, Debug)]
pub struct Subspace<K: Ord> {
    rows: BTreeMap<K, Lin<K>>,
}

impl<K: Ord> Default for Subspace<K> {
    fn default() -> Self {
        Subspace {
            rows: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> Subspace<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, key: &K) -> bool {
        self.rows.contains_key(key)
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    pub fn basis(&self) -> impl Iterator<Item = &Lin<K>> {
        self.rows.values()
    }

    /// Normal form of `v` modulo the subspace: supported on non-pivot keys.
    pub fn reduce(&self, v: &Lin<K>) -> Lin<K> {
        let mut v = v.clone();
        let mut upper: Option<K> = None;
        loop {
            let next = {
                let range: Box<dyn DoubleEndedIterator<Item = (&K, &CycScalar)>> = match &upper {
                    Some(u) => Box::new(v.terms.range(..u.clone())),
                    None => Box::new(v.terms.iter()),
                };
                range
                    .rev()
                    .find(|(k, _)| self.rows.contains_key(*k))
                    .map(|(k, c)| (k.clone(), c.clone()))
            };
            match next {
                Some((k, c)) => {
                    let row = &self.rows[&k];
                    v.add_scaled(row, &-c);
                    upper = Some(k);
                }
                None => return v,
            }
        }
    }

    pub fn contains(&self, v: &Lin<K>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns true if the dimension grew.
    pub fn insert(&mut self, v: &Lin<K>) -> bool {
        let r = self.reduce(v);
        let Some((k, c)) = r.leading().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = c.inv().expect("leading coefficient is nonzero");
        self.rows.insert(k, r.scaled(&inv));
        true
    }
}

/// Echelon form of the images of a linear map, tracking preimages.
///
/// Columns are fed one at a time; a column whose image is dependent on the
/// earlier ones yields a kernel vector.
#[derive(Clone, Debug)]
pub struct TrackedEchelon<T: Ord, S: Ord> {
    rows: BTreeMap<T, (Lin<T>, Lin<S>)>,
}

impl<T: Ord, S: Ord> Default for TrackedEchelon<T, S> {
    fn default() -> Self {
        TrackedEchelon {
            rows: BTreeMap::new(),
        }
    }
}

impl<T: Ord + Clone, S: Ord + Clone> TrackedEchelon<T, S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce_tracked(&self, mut v: Lin<T>, mut combo: Lin<S>) -> (Lin<T>, Lin<S>) {
        let mut upper: Option<T> = None;
        loop {
            let next = {
                let range: Box<dyn DoubleEndedIterator<Item = (&T, &CycScalar)>> = match &upper {
                    Some(u) => Box::new(v.terms.range(..u.clone())),
                    None => Box::new(v.terms.iter()),
                };
                range
                    .rev()
                    .find(|(k, _)| self.rows.contains_key(*k))
                    .map(|(k, c)| (k.clone(), c.clone()))
            };
            match next {
                Some((k, c)) => {
                    let (rv, rc) = &self.rows[&k];
                    let neg = -c;
                    v.add_scaled(rv, &neg);
                    combo.add_scaled(rc, &neg);
                    upper = Some(k);
                }
                None => return (v, combo),
            }
        }
    }

    /// Feeds the column `image = A·source`. Returns a kernel vector when the
    /// image is already in the span of earlier images.
    pub fn push(&mut self, source: Lin<S>, image: Lin<T>) -> Option<Lin<S>> {
        let (r, combo) = self.reduce_tracked(image, source);
        match r.leading().map(|(k, c)| (k.clone(), c.clone())) {
            None => Some(combo),
            Some((k, c)) => {
                let inv = c.inv().expect("nonzero");
                self.rows.insert(k, (r.scaled(&inv), combo.scaled(&inv)));
                None
            }
        }
    }

    /// A preimage of `target` under the fed columns, if one exists.
    pub fn solve(&self, target: &Lin<T>) -> Option<Lin<S>> {
        let (r, combo) = self.reduce_tracked(target.clone(), Lin::new());
        r.is_zero().then(|| combo.neg())
    }
}

/// Kernel of a linear map given column by column (source key → image).
pub fn kernel<T, S>(columns: impl IntoIterator<Item = (S, Lin<T>)>) -> Vec<Lin<S>>
where
    T: Ord + Clone,
    S: Ord + Clone,
{
    let mut ech = TrackedEchelon::new();
    columns
        .into_iter()
        .filter_map(|(s, img)| ech.push(Lin::basis(s), img))
        .collect()
}

/// Rank of a family of vectors.
pub fn rank<K: Ord + Clone>(vectors: impl IntoIterator<Item = Lin<K>>) -> usize {
    let mut sub = Subspace::new();
    for v in vectors {
        sub.insert(&v);
    }
    sub.dim()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[(u32, i64)]) -> Lin<u32> {
        entries
            .iter()
            .map(|&(k, c)| (k, CycScalar::from_int(c)))
            .collect()
    }

    #[test]
    fn zero_terms_are_dropped() {
        let mut a = v(&[(1, 2), (2, 3)]);
        a.add_term(1, CycScalar::from_int(-2));
        assert_eq!(a, v(&[(2, 3)]));
    }

    #[test]
    fn subspace_normal_forms() {
        let mut s = Subspace::new();
        assert!(s.insert(&v(&[(0, 1), (2, 1)])));
        assert!(s.insert(&v(&[(1, 1), (2, 1)])));
        assert!(!s.insert(&v(&[(0, 1), (1, -1)])));
        assert_eq!(s.dim(), 2);
        // e2 ≡ -e1 ≡ ... ; normal forms live on non-pivot keys
        let nf = s.reduce(&v(&[(2, 1)]));
        assert!(nf.keys().all(|k| !s.is_pivot(k)));
        assert!(s.contains(&v(&[(0, 1), (1, -1)])));
    }

    #[test]
    fn kernel_of_rank_one_map() {
        // columns: e0 -> w, e1 -> 2w, e2 -> 0
        let w = v(&[(5, 1), (6, 1)]);
        let ker = kernel(vec![
            (0u32, w.clone()),
            (1, w.scaled(&CycScalar::from_int(2))),
            (2, Lin::new()),
        ]);
        assert_eq!(ker.len(), 2);
        assert_eq!(ker[0], v(&[(0, -2), (1, 1)]));
        assert_eq!(ker[1], v(&[(2, 1)]));
    }

    #[test]
    fn tracked_solve_finds_preimage() {
        let mut e = TrackedEchelon::new();
        e.push(Lin::basis(0u32), v(&[(10, 1), (11, 1)]));
        e.push(Lin::basis(1u32), v(&[(11, 1)]));
        let pre = e.solve(&v(&[(10, 3)])).unwrap();
        assert_eq!(pre, v(&[(0, 3), (1, -3)]));
        assert!(e.solve(&v(&[(12, 1)])).is_none());
    }
}
