//! Exact arithmetic in cyclotomic fields `Q(z)`, `z` a primitive m-th root of unity.
//!
//! Elements are stored as polynomials in `z` of degree below `phi(m)`, reduced
//! modulo the m-th cyclotomic polynomial, which makes the representation
//! canonical. Inverses come from the extended Euclidean algorithm over `Q`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};


use crate::poly::UniPoly;
use crate::rational::{int, Rational};

/// Context for `Q(z_m)`: the order and the cyclotomic modulus.
#[derive(Clone)]
pub struct CyclotomicField {
    order: u32,
    /// Monic `Phi_m`, low degree first.
    modulus: Arc<Vec<Rational>>,
}

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl Eq for CyclotomicField {}

impl fmt::Debug for CyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(z_{})", self.order)
    }
}

fn divisors(m: u32) -> Vec<u32> {
    (1..=m).filter(|d| m % d == 0).collect()
}

/// The m-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_polynomial(m: u32) -> Vec<Rational> {
    assert!(m >= 1, "cyclotomic order must be positive");
    let mut cache: BTreeMap<u32, UniPoly<Rational>> = BTreeMap::new();
    for d in divisors(m) {
        let mut num = UniPoly::monomial(Rational::one(), d as usize)
            .sub(&UniPoly::constant(Rational::one()));
        for e in divisors(d) {
            if e < d {
                let (q, r) = num.div_rem(&cache[&e]).expect("nonzero cyclotomic divisor");
                debug_assert!(r.is_zero());
                num = q;
            }
        }
        cache.insert(d, num);
    }
    cache.remove(&m).unwrap().into_coeffs()
}

pub fn euler_phi(m: u32) -> u32 {
    (1..=m).filter(|k| k.gcd(&m) == 1).count() as u32
}

impl CyclotomicField {
    pub fn new(order: u32) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        CyclotomicField { order, modulus: Arc::new(cyclotomic_polynomial(order)) }
    }

    pub fn rationals() -> Self {
        Self::new(1)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Degree of the field over `Q`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[Rational] {
        &self.modulus
    }

    pub fn zero(&self) -> Cyclotomic {
        Cyclotomic { field: self.clone(), coeffs: vec![Rational::zero(); self.degree()] }
    }

    pub fn one(&self) -> Cyclotomic {
        self.from_rational(Rational::one())
    }

    pub fn from_rational(&self, r: Rational) -> Cyclotomic {
        let mut c = self.zero();
        c.coeffs[0] = r;
        c
    }

    pub fn from_int(&self, n: i64) -> Cyclotomic {
        self.from_rational(int(n))
    }

    /// Reduces an arbitrary polynomial in `z` (low degree first).
    pub fn from_poly(&self, poly: Vec<Rational>) -> Cyclotomic {
        Cyclotomic { field: self.clone(), coeffs: self.reduce(poly) }
    }

    /// `z^k` for any integer `k` (negative powers wrap around modulo m).
    pub fn zeta_pow(&self, k: i64) -> Cyclotomic {
        let e = k.rem_euclid(self.order as i64) as usize;
        let mut poly = vec![Rational::zero(); e + 1];
        poly[e] = Rational::one();
        self.from_poly(poly)
    }

    /// Order of the full group of roots of unity in the field, `lcm(2, m)`.
    pub fn roots_of_unity_order(&self) -> u32 {
        self.order.lcm(&2)
    }

    /// Generator of the roots of unity of the field, a primitive
    /// `lcm(2, m)`-th root of unity. For odd `m` this is `-z^((m+1)/2)`.
    pub fn unity_generator(&self) -> Cyclotomic {
        if self.order % 2 == 0 {
            self.zeta_pow(1)
        } else {
            -&self.zeta_pow(((self.order + 1) / 2) as i64)
        }
    }

    /// Whether the field contains a primitive k-th root of unity.
    pub fn contains_roots_of_unity(&self, k: u32) -> bool {
        self.roots_of_unity_order() % k == 0
    }

    fn reduce(&self, mut poly: Vec<Rational>) -> Vec<Rational> {
        let d = self.degree();
        let phi = &self.modulus;
        while poly.len() > d {
            let top = poly.len() - 1;
            let c = poly.pop().unwrap();
            if !c.is_zero() {
                let shift = top - d;
                for k in 0..d {
                    poly[shift + k] -= &c * &phi[k];
                }
            }
        }
        poly.resize(d, Rational::zero());
        poly
    }
}

/// Element of `Q(z_m)`.
#[derive(Clone)]
pub struct Cyclotomic {
    field: CyclotomicField,
    coeffs: Vec<Rational>,
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl Eq for Cyclotomic {}

impl PartialOrd for Cyclotomic {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Arbitrary total order, used only to keep containers deterministic.
impl Ord for Cyclotomic {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.field
            .order
            .cmp(&other.field.order)
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl std::hash::Hash for Cyclotomic {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.order.hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {:?}", self, self.field)
    }
}

impl Cyclotomic {
    pub fn field(&self) -> &CyclotomicField {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    /// Coefficients in the power basis `1, z, ..., z^(phi(m)-1)`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// `Some(r)` when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Number of nonzero power-basis coefficients.
    pub fn support_len(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn inv(&self) -> Option<Cyclotomic> {
        if self.is_zero() {
            return None;
        }
        let a = UniPoly::new(self.coeffs.clone(), Rational::zero());
        let m = UniPoly::new(self.field.modulus.to_vec(), Rational::zero());
        let (g, s, _) = a.xgcd(&m);
        debug_assert_eq!(g.degree(), Some(0));
        Some(self.field.from_poly(s.into_coeffs()))
    }

    pub fn pow(&self, e: i64) -> Option<Cyclotomic> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = self.field.one();
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            n >>= 1;
        }
        Some(acc)
    }

    /// Writes the element as `r * g^j` with `r` rational and `g` the field's
    /// root-of-unity generator, if such a form exists. `j` is the least one.
    pub fn as_scaled_root_of_unity(&self) -> Option<(Rational, u32)> {
        if self.is_zero() {
            return None;
        }
        let big_m = self.field.roots_of_unity_order();
        let g_inv = self.field.unity_generator().inv().unwrap();
        let mut cur = self.clone();
        for j in 0..big_m {
            if let Some(r) = cur.as_rational() {
                return Some((r.clone(), j));
            }
            cur = &cur * &g_inv;
        }
        None
    }

    fn check(&self, other: &Self) {
        assert!(
            self.field == other.field,
            "cyclotomic field mismatch: Q(z_{}) vs Q(z_{})",
            self.field.order,
            other.field.order
        );
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        self.check(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        Cyclotomic { field: self.field.clone(), coeffs }
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        self.check(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        Cyclotomic { field: self.field.clone(), coeffs }
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        self.check(rhs);
        let d = self.coeffs.len();
        let mut prod = vec![Rational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        self.field.from_poly(prod)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl crate::field::Field for Cyclotomic {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn one_like(&self) -> Self {
        self.field.one()
    }
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
    fn inverse(&self) -> Option<Self> {
        self.inv()
    }
    fn from_int_like(&self, n: i64) -> Self {
        self.field.from_int(n)
    }
}

/// Renders in `z`: `3`, `-z^2`, `1/2 + 2*z^1`. Zero renders as `0`.
impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let part = if k == 0 {
                c.to_string()
            } else if c.is_one() {
                format!("z^{k}")
            } else if (-c).is_one() {
                format!("-z^{k}")
            } else {
                format!("{c}*z^{k}")
            };
            parts.push(part);
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Cyclotomic {
    /// Display form wrapped in parentheses when it has more than one summand.
    pub fn to_factor_string(&self) -> String {
        if self.support_len() > 1 {
            format!("({self})")
        } else {
            self.to_string()
        }
    }

    pub fn is_negative_rational(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_negative())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn cyclotomic_polynomials() {
        let to_i = |v: Vec<Rational>| v.iter().map(|c| c.to_integer().try_into().unwrap()).collect::<Vec<i64>>();
        assert_eq!(to_i(cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(to_i(cyclotomic_polynomial(2)), vec![1, 1]);
        assert_eq!(to_i(cyclotomic_polynomial(3)), vec![1, 1, 1]);
        assert_eq!(to_i(cyclotomic_polynomial(4)), vec![1, 0, 1]);
        assert_eq!(to_i(cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(to_i(cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(15).len() as u32 - 1, euler_phi(15));
    }

    #[test]
    fn zeta_cubed_is_one() {
        let f = CyclotomicField::new(3);
        let z = f.zeta_pow(1);
        assert!(z.pow(3).unwrap().is_one());
        assert!(!z.pow(2).unwrap().is_one());
        // 1 + z + z^2 = 0
        let s = &(&f.one() + &z) + &f.zeta_pow(2);
        assert!(s.is_zero());
    }

    #[test]
    fn inverse_of_zeta_is_zeta_squared() {
        let f = CyclotomicField::new(3);
        let z = f.zeta_pow(1);
        assert_eq!(z.inv().unwrap(), f.zeta_pow(2));
    }

    #[test]
    fn inverses_verify() {
        let f = CyclotomicField::new(5);
        let a = f.from_poly(vec![rat(1, 2), int(3), int(0), rat(-7, 3)]);
        let inv = a.inv().unwrap();
        assert!((&a * &inv).is_one());
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn generator_has_full_order() {
        for m in [1u32, 2, 3, 4, 5, 6, 9, 12] {
            let f = CyclotomicField::new(m);
            let g = f.unity_generator();
            let n = f.roots_of_unity_order();
            assert!(g.pow(n as i64).unwrap().is_one(), "m={m}");
            for d in 1..n {
                if n % d == 0 {
                    assert!(!g.pow(d as i64).unwrap().is_one(), "m={m} d={d}");
                }
            }
        }
    }

    #[test]
    fn scaled_root_of_unity_detection() {
        let f = CyclotomicField::new(3);
        let x = &f.from_int(-5) * &f.zeta_pow(2);
        let (r, j) = x.as_scaled_root_of_unity().unwrap();
        let back = &f.from_rational(r) * &f.unity_generator().pow(j as i64).unwrap();
        assert_eq!(back, x);
        let y = &f.one() + &f.from_int(2);
        assert_eq!(y.as_scaled_root_of_unity(), Some((int(3), 0)));
        let w = &f.one() + &(&f.from_int(2) * &f.zeta_pow(1));
        assert!(w.as_scaled_root_of_unity().is_none());
    }

    #[test]
    fn display() {
        let f = CyclotomicField::new(3);
        assert_eq!(f.zeta_pow(1).to_string(), "z^1");
        assert_eq!((&f.from_int(2) * &f.zeta_pow(1)).to_string(), "2*z^1");
        assert_eq!(f.zeta_pow(2).to_string(), "-1 + -z^1");
        assert_eq!(f.zero().to_string(), "0");
        assert_eq!(f.from_rational(rat(-1, 4)).to_string(), "-1/4");
    }
}
