//! Elements of cyclotomic fields Q(ζ_m) in the power basis modulo Φ_m.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::rc::Rc;

use num_integer::Integer;

use super::rational::Rational;
use super::ScalarError;

/// Coefficients of the cyclotomic polynomial Φ_m, lowest degree first.
fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    // x^m - 1 = prod_{d | m} Φ_d; divide out the proper divisors.
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let div = cached_field(d).cyclo.clone();
            num = exact_div_monic(&num, &div);
        }
    }
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    let mut quot = vec![0i64; nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (j, dj) in den.iter().enumerate() {
                rem[k + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

pub(crate) struct FieldData {
    phi: usize,
    /// Φ_m, monic, length phi + 1.
    cyclo: Vec<i64>,
}

thread_local! {
    static FIELDS: RefCell<HashMap<u32, Rc<FieldData>>> = RefCell::new(HashMap::new());
}

fn cached_field(m: u32) -> Rc<FieldData> {
    if let Some(f) = FIELDS.with(|c| c.borrow().get(&m).cloned()) {
        return f;
    }
    let cyclo = if m == 1 {
        vec![-1, 1]
    } else {
        cyclotomic_polynomial(m)
    };
    let data = Rc::new(FieldData {
        phi: cyclo.len() - 1,
        cyclo,
    });
    FIELDS.with(|c| c.borrow_mut().insert(m, data.clone()));
    data
}

/// Euler's totient of `m`.
pub fn euler_phi(m: u32) -> usize {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

fn reduce_mod_cyclo(mut poly: Vec<Rational>, field: &FieldData) -> Vec<Rational> {
    let phi = field.phi;
    if poly.len() > phi {
        for e in (phi..poly.len()).rev() {
            let c = std::mem::take(&mut poly[e]);
            if c.is_zero() {
                continue;
            }
            for k in 0..phi {
                let f = field.cyclo[k];
                if f != 0 {
                    let t = c.mul_int(f);
                    poly[e - phi + k] = &poly[e - phi + k] - &t;
                }
            }
        }
        poly.truncate(phi);
    }
    poly.resize(phi, Rational::ZERO);
    poly
}

/// An exact element of the cyclotomic field Q(ζ_m).
///
/// Stored as the residue modulo Φ_m in the basis 1, ζ, …, ζ^{φ(m)-1}.
/// Rational values are always carried with conductor 1, so a value with
/// conductor > 1 is never rational. Values of different conductors compare
/// equal when they agree after lifting to the compositum.
#[derive(Clone)]
pub struct CycScalar {
    conductor: u32,
    coeffs: Vec<Rational>,
}

impl CycScalar {
    pub fn zero() -> Self {
        Self::rational(Rational::ZERO)
    }

    pub fn one() -> Self {
        Self::rational(Rational::ONE)
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(Rational::from_int(n))
    }

    pub fn rational(r: Rational) -> Self {
        CycScalar {
            conductor: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::rational(Rational::new(num, den))
    }

    /// Builds an element from power-basis coefficients in conductor `m`.
    /// The coefficient vector may have any length; it is reduced modulo Φ_m.
    pub fn from_power_basis(m: u32, coeffs: Vec<Rational>) -> Self {
        assert!(m >= 1, "conductor must be positive");
        let field = cached_field(m);
        Self::normalize(m, reduce_mod_cyclo(coeffs, &field))
    }

    fn normalize(conductor: u32, coeffs: Vec<Rational>) -> Self {
        if conductor > 1 && coeffs[1..].iter().all(Rational::is_zero) {
            let c0 = coeffs.into_iter().next().unwrap_or_default();
            return Self::rational(c0);
        }
        CycScalar { conductor, coeffs }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_one()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        (self.conductor == 1).then(|| &self.coeffs[0])
    }

    /// Coefficients in conductor `m`, which must be a multiple of ours.
    fn lifted_coeffs(&self, m: u32) -> Vec<Rational> {
        if m == self.conductor {
            return self.coeffs.clone();
        }
        debug_assert_eq!(m % self.conductor, 0);
        let step = (m / self.conductor) as usize;
        let mut poly = vec![Rational::ZERO; (self.coeffs.len().max(1) - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[k * step] = c.clone();
        }
        reduce_mod_cyclo(poly, &cached_field(m))
    }

    fn common(a: &Self, b: &Self) -> (u32, Vec<Rational>, Vec<Rational>) {
        let m = a.conductor.lcm(&b.conductor);
        (m, a.lifted_coeffs(m), b.lifted_coeffs(m))
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let coeffs = self.coeffs.iter().map(|c| c * r).collect();
        CycScalar {
            conductor: self.conductor,
            coeffs,
        }
    }

    fn mul_impl(&self, rhs: &Self) -> Self {
        if let Some(r) = self.as_rational() {
            return rhs.scale_rational(r);
        }
        if let Some(r) = rhs.as_rational() {
            return self.scale_rational(r);
        }
        let (m, a, b) = Self::common(self, rhs);
        let mut prod = vec![Rational::ZERO; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] = &prod[i + j] + &(x * y);
                }
            }
        }
        Self::from_power_basis(m, prod)
    }

    fn add_impl(&self, rhs: &Self, negate: bool) -> Self {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -rhs } else { rhs.clone() };
        }
        let (m, a, b) = if self.conductor == rhs.conductor {
            (self.conductor, self.coeffs.clone(), rhs.coeffs.clone())
        } else {
            Self::common(self, rhs)
        };
        let coeffs = a
            .iter()
            .zip(b.iter())
            .map(|(x, y)| if negate { x - y } else { x + y })
            .collect();
        Self::normalize(m, coeffs)
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::rational(r.recip().expect("nonzero")));
        }
        let m = self.conductor;
        let phi = self.coeffs.len();
        // Solve (multiplication-by-self matrix) · v = e_0.
        let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(phi);
        let mut basis = vec![Rational::ZERO; phi];
        for j in 0..phi {
            basis.iter_mut().for_each(|c| *c = Rational::ZERO);
            basis[j] = Rational::ONE;
            let e = CycScalar {
                conductor: m,
                coeffs: basis.clone(),
            };
            cols.push(self.mul_impl(&e).lifted_coeffs(m));
        }
        // rows of augmented system
        let mut rows: Vec<Vec<Rational>> = (0..phi)
            .map(|i| {
                let mut row: Vec<Rational> = cols.iter().map(|c| c[i].clone()).collect();
                row.push(if i == 0 {
                    Rational::ONE
                } else {
                    Rational::ZERO
                });
                row
            })
            .collect();
        for col in 0..phi {
            let piv = (col..phi)
                .find(|&r| !rows[r][col].is_zero())
                .expect("multiplication matrix of a nonzero field element is invertible");
            rows.swap(col, piv);
            let inv = rows[col][col].recip().expect("nonzero pivot");
            for x in rows[col].iter_mut() {
                *x = &*x * &inv;
            }
            let pivot_row = rows[col].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != col && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (x, p) in row.iter_mut().zip(pivot_row.iter()) {
                        if !p.is_zero() {
                            *x = &*x - &(&f * p);
                        }
                    }
                }
            }
        }
        let v = rows.into_iter().map(|r| r[phi].clone()).collect();
        Ok(Self::normalize(m, v))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        Ok(self * &rhs.inv()?)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<Self, ScalarError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &sq;
            }
            n >>= 1;
            if n > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Smallest n ≥ 1 with selfⁿ = 1, or `None` when self is not a root of unity.
    pub fn multiplicative_order(&self) -> Result<Option<u64>, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::ZeroInput);
        }
        // Roots of unity in Q(ζ_m) have order dividing lcm(2, m).
        let bound = (self.conductor as u64).lcm(&2);
        if !self.pow(bound as i64)?.is_one() {
            return Ok(None);
        }
        let mut order = bound;
        for p in prime_factors(bound) {
            while order % p == 0 && self.pow((order / p) as i64)?.is_one() {
                order /= p;
            }
        }
        Ok(Some(order))
    }

    /// Complex embedding with ζ_m ↦ exp(2πi/m). Only used for diagnostics.
    pub fn to_complex(&self) -> (f64, f64) {
        let m = self.conductor as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let v = rational_to_f64(c);
            let angle = 2.0 * std::f64::consts::PI * k as f64 / m;
            re += v * angle.cos();
            im += v * angle.sin();
        }
        (re, im)
    }
}

fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    match r {
        Rational::Small(n, d) => *n as f64 / *d as f64,
        Rational::Big(b) => b.to_f64().unwrap_or(f64::NAN),
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// ζ_m^k as a field element (conductor 1 when the value is ±1).
pub fn root_of_unity(m: u32, k: i64) -> CycScalar {
    assert!(m >= 1, "order must be positive");
    let k = k.rem_euclid(m as i64) as usize;
    if k == 0 {
        return CycScalar::one();
    }
    if 2 * k == m as usize {
        return CycScalar::from_int(-1);
    }
    let mut poly = vec![Rational::ZERO; k + 1];
    poly[k] = Rational::ONE;
    CycScalar::from_power_basis(m, poly)
}

/// A root of unity ζ_order^exponent kept in symbolic form.
///
/// Equality is by value: ζ_4^2 equals ζ_2^1.
#[derive(Clone, Copy, Debug)]
pub struct RootOfUnity {
    order: u32,
    exponent: u32,
}

impl RootOfUnity {
    pub fn new(order: u32, exponent: i64) -> Self {
        assert!(order >= 1);
        RootOfUnity {
            order,
            exponent: exponent.rem_euclid(order as i64) as u32,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// Multiplicative order m / gcd(m, k).
    pub fn multiplicative_order(&self) -> u32 {
        self.order / self.order.gcd(&self.exponent)
    }

    pub fn value(&self) -> CycScalar {
        root_of_unity(self.order, self.exponent as i64)
    }

    pub fn pow(&self, e: i64) -> RootOfUnity {
        RootOfUnity::new(self.order, self.exponent as i64 * e)
    }

    pub fn one() -> RootOfUnity {
        RootOfUnity::new(1, 0)
    }

    pub fn mul(&self, other: &RootOfUnity) -> RootOfUnity {
        let m = self.order.lcm(&other.order);
        RootOfUnity::new(
            m,
            self.exponent as i64 * (m / self.order) as i64
                + other.exponent as i64 * (m / other.order) as i64,
        )
    }

    /// (order, exponent) with gcd 1.
    fn reduced(&self) -> (u32, u32) {
        let g = self.order.gcd(&self.exponent);
        (self.order / g, self.exponent / g)
    }

    /// Recovers symbolic form from a field element of finite order.
    pub fn from_scalar(a: &CycScalar) -> Option<RootOfUnity> {
        let n = a.multiplicative_order().ok()??;
        let n32 = n as u32;
        (0..n32)
            .find(|&k| &root_of_unity(n32, k as i64) == a)
            .map(|k| RootOfUnity::new(n32, k as i64))
    }
}

impl PartialEq for RootOfUnity {
    fn eq(&self, other: &Self) -> bool {
        self.reduced() == other.reduced()
    }
}

impl Eq for RootOfUnity {}

impl std::hash::Hash for RootOfUnity {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.reduced().hash(state);
    }
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        if self.conductor == 1 || other.conductor == 1 {
            return false;
        }
        let (_, a, b) = Self::common(self, other);
        a == b
    }
}

impl Eq for CycScalar {}

impl Default for CycScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for CycScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<Rational> for CycScalar {
    fn from(r: Rational) -> Self {
        Self::rational(r)
    }
}

impl<'a> Add<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: &CycScalar) -> CycScalar {
        self.add_impl(rhs, false)
    }
}

impl<'a> Sub<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: &CycScalar) -> CycScalar {
        self.add_impl(rhs, true)
    }
}

impl<'a> Mul<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: &CycScalar) -> CycScalar {
        self.mul_impl(rhs)
    }
}

impl<'a> Div<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    /// Panics on a zero divisor; use [`CycScalar::checked_div`] otherwise.
    fn div(self, rhs: &CycScalar) -> CycScalar {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: CycScalar) -> CycScalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders in the textual scalar syntax, e.g. `1 - 3/2*z(5)^2`.
impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conductor == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            if k == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "z({})^{}", self.conductor, k)?;
            } else {
                write!(f, "{mag}*z({})^{}", self.conductor, k)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_values() {
        let expected = [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4];
        for (m, &e) in (1..=12).zip(expected.iter()) {
            assert_eq!(euler_phi(m), e, "phi({m})");
            assert_eq!(cached_field(m).phi, e);
        }
    }

    #[test]
    fn cyclotomic_polynomials_small() {
        assert_eq!(cached_field(4).cyclo, vec![1, 0, 1]);
        assert_eq!(cached_field(6).cyclo, vec![1, -1, 1]);
        assert_eq!(cached_field(12).cyclo, vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn root_of_unity_basic_cases() {
        assert_eq!(root_of_unity(1, 0), CycScalar::one());
        assert_eq!(root_of_unity(2, 1), CycScalar::from_int(-1));
        let i = root_of_unity(4, 1);
        assert_eq!(&i * &i, root_of_unity(2, 1));
        assert_eq!(root_of_unity(4, 1).conductor(), 4);
    }

    #[test]
    fn sum_of_cube_roots_vanishes() {
        let z = root_of_unity(3, 1);
        let z2 = root_of_unity(3, 2);
        assert!((&(&z + &z2) + &CycScalar::one()).is_zero());
    }

    #[test]
    fn inverse_of_one_plus_zeta5() {
        let a = &CycScalar::one() + &root_of_unity(5, 1);
        let inv = a.inv().unwrap();
        assert_eq!(&inv * &a, CycScalar::one());
        assert_eq!(CycScalar::zero().inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn cross_conductor_equality() {
        // ζ_3 = ζ_6^2 and -ζ_3^2 = ζ_6
        assert_eq!(root_of_unity(3, 1), root_of_unity(6, 2));
        assert_eq!(-root_of_unity(3, 2), root_of_unity(6, 1));
        // ζ_4 · ζ_3 = ζ_12^7
        assert_eq!(
            &root_of_unity(4, 1) * &root_of_unity(3, 1),
            root_of_unity(12, 7)
        );
    }

    #[test]
    fn orders() {
        assert_eq!(CycScalar::one().multiplicative_order(), Ok(Some(1)));
        assert_eq!(CycScalar::from_int(-1).multiplicative_order(), Ok(Some(2)));
        assert_eq!(root_of_unity(6, 1).multiplicative_order(), Ok(Some(6)));
        assert_eq!(CycScalar::from_int(2).multiplicative_order(), Ok(None));
        let not_root = &CycScalar::one() + &root_of_unity(5, 1);
        assert_eq!(not_root.multiplicative_order(), Ok(None));
        assert_eq!(
            CycScalar::zero().multiplicative_order(),
            Err(ScalarError::ZeroInput)
        );
    }

    #[test]
    fn order_of_every_root_up_to_24() {
        for m in 1..=24u32 {
            for k in 0..m as i64 {
                let expected = m / m.gcd(&(k as u32));
                assert_eq!(
                    root_of_unity(m, k).multiplicative_order().unwrap(),
                    Some(expected as u64),
                    "zeta_{m}^{k}"
                );
                assert_eq!(RootOfUnity::new(m, k).multiplicative_order(), expected);
            }
        }
    }

    #[test]
    fn root_of_unity_symbolic_roundtrip() {
        let r = RootOfUnity::from_scalar(&root_of_unity(12, 9)).unwrap();
        assert_eq!(r.value(), root_of_unity(12, 9));
        assert_eq!(r.multiplicative_order(), 4);
    }

    #[test]
    fn display_forms() {
        assert_eq!(CycScalar::from_ratio(-3, 2).to_string(), "-3/2");
        assert_eq!(root_of_unity(4, 1).to_string(), "z(4)^1");
        let a = &CycScalar::one() - &(&CycScalar::from_ratio(3, 2) * &root_of_unity(5, 2));
        assert_eq!(a.to_string(), "1 - 3/2*z(5)^2");
    }
}
