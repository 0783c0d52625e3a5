//! Universal Novikov field with rational exponents over a cyclotomic field.
//!
//! A [`NovikovElement`] is a finite sum `sum a_i T^(l_i)` kept in canonical
//! form: nonzero coefficients, strictly increasing exponents. Infinite series
//! never appear; general inversion takes an explicit precision.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::cyclotomic::{Cyclotomic, CyclotomicField};
use crate::parse::{parse_expr, semantic_error, Expr, ParseError};
use crate::rational::{fraction_string, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NovikovError {
    #[error("coefficient field mismatch: Q(z_{left}) vs Q(z_{right})")]
    FieldMismatch { left: u32, right: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("needs field extension: {reason}; use cyclotomic order {suggested_order}")]
    NeedsFieldExtension { suggested_order: u32, reason: String },
    /// Roots are built as a rational times a root of unity; this one is not.
    #[error("no root of the form q*zeta: {0}")]
    NoScaledRoot(String),
}

/// `sigma_T`: least exponent, `+inf` for zero. Finite values sort below infinity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(Rational),
    Infinite,
}

impl Valuation {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Valuation::Finite(r) => Some(r),
            Valuation::Infinite => None,
        }
    }

    pub fn add(&self, other: &Valuation) -> Valuation {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(r) => write!(f, "{r}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

/// Which of `Lambda`, `Lambda_0`, `Lambda_+` an element belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Membership {
    pub in_lambda0: bool,
    pub in_lambda_plus: bool,
    pub is_unit_of_lambda0: bool,
    pub is_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub exponent: Rational,
    pub coeff: Cyclotomic,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NovikovElement {
    field: CyclotomicField,
    terms: Vec<Term>,
}

impl std::hash::Hash for CyclotomicField {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.order().hash(state);
    }
}

impl fmt::Debug for NovikovElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Novikov[{:?}]({})", self.field, self)
    }
}

impl NovikovElement {
    pub fn zero(field: &CyclotomicField) -> Self {
        NovikovElement { field: field.clone(), terms: Vec::new() }
    }

    pub fn one(field: &CyclotomicField) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: Cyclotomic) -> Self {
        Self::monomial(c, Rational::zero())
    }

    /// `T^exponent`
    pub fn t_pow(field: &CyclotomicField, exponent: Rational) -> Self {
        Self::monomial(field.one(), exponent)
    }

    pub fn monomial(coeff: Cyclotomic, exponent: Rational) -> Self {
        let field = coeff.field().clone();
        if coeff.is_zero() {
            return Self::zero(&field);
        }
        NovikovElement { field, terms: vec![Term { exponent, coeff }] }
    }

    /// Builds the canonical form from arbitrary `(coeff, exponent)` pairs.
    pub fn from_terms(field: &CyclotomicField, terms: impl IntoIterator<Item = (Cyclotomic, Rational)>) -> Self {
        let mut acc: BTreeMap<Rational, Cyclotomic> = BTreeMap::new();
        for (c, e) in terms {
            assert!(c.field() == field, "term coefficient from a different field");
            match acc.get_mut(&e) {
                Some(existing) => *existing = &*existing + &c,
                None => {
                    acc.insert(e, c);
                }
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exponent, coeff)| Term { exponent, coeff })
            .collect();
        NovikovElement { field: field.clone(), terms }
    }

    pub fn field(&self) -> &CyclotomicField {
        &self.field
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].exponent.is_zero() && self.terms[0].coeff.is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    /// The coefficient of `T^0`, when the element is a constant of the field.
    pub fn as_constant(&self) -> Option<Cyclotomic> {
        match self.terms.as_slice() {
            [] => Some(self.field.zero()),
            [t] if t.exponent.is_zero() => Some(t.coeff.clone()),
            _ => None,
        }
    }

    fn check_field(&self, other: &Self) -> Result<(), NovikovError> {
        if self.field != other.field {
            return Err(NovikovError::FieldMismatch { left: self.field.order(), right: other.field.order() });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, NovikovError> {
        self.check_field(other)?;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.exponent.cmp(&b.exponent),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = &self.terms[i].coeff + &other.terms[j].coeff;
                    if !c.is_zero() {
                        out.push(Term { exponent: self.terms[i].exponent.clone(), coeff: c });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(NovikovElement { field: self.field.clone(), terms: out })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, NovikovError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, NovikovError> {
        self.check_field(other)?;
        let mut acc: BTreeMap<Rational, Cyclotomic> = BTreeMap::new();
        for a in &self.terms {
            for b in &other.terms {
                let e = &a.exponent + &b.exponent;
                let c = &a.coeff * &b.coeff;
                match acc.get_mut(&e) {
                    Some(existing) => *existing = &*existing + &c,
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exponent, coeff)| Term { exponent, coeff })
            .collect();
        Ok(NovikovElement { field: self.field.clone(), terms })
    }

    fn neg_ref(&self) -> Self {
        NovikovElement {
            field: self.field.clone(),
            terms: self.terms.iter().map(|t| Term { exponent: t.exponent.clone(), coeff: -&t.coeff }).collect(),
        }
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        NovikovElement::from_terms(&self.field, self.terms.iter().map(|t| (&t.coeff * c, t.exponent.clone())))
    }

    /// Multiplies by `T^shift`.
    pub fn shift(&self, shift: &Rational) -> Self {
        NovikovElement {
            field: self.field.clone(),
            terms: self.terms.iter().map(|t| Term { exponent: &t.exponent + shift, coeff: t.coeff.clone() }).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn valuation(&self) -> Valuation {
        match self.terms.first() {
            Some(t) => Valuation::Finite(t.exponent.clone()),
            None => Valuation::Infinite,
        }
    }

    pub fn classify(&self) -> Membership {
        match self.valuation() {
            Valuation::Infinite => Membership { in_lambda0: true, in_lambda_plus: true, is_unit_of_lambda0: false, is_zero: true },
            Valuation::Finite(v) => Membership {
                in_lambda0: !v.is_negative(),
                in_lambda_plus: v.is_positive(),
                is_unit_of_lambda0: v.is_zero(),
                is_zero: false,
            },
        }
    }

    /// Drops every term with exponent `>= bound`.
    pub fn truncate(&self, bound: &Rational) -> Self {
        NovikovElement {
            field: self.field.clone(),
            terms: self.terms.iter().filter(|t| &t.exponent < bound).cloned().collect(),
        }
    }

    /// Returns `b` with `sigma_T(a*b - 1) >= precision`.
    ///
    /// Monomials invert exactly. Otherwise `a = c T^l (1 + h)` with
    /// `sigma_T(h) > 0` and `b = c^-1 T^-l sum_k (-h)^k`, where the geometric
    /// series is cut off once its terms reach `precision`.
    pub fn invert(&self, precision: &Rational) -> Result<Self, NovikovError> {
        let lead = self.terms.first().ok_or(NovikovError::DivisionByZero)?;
        let c_inv = lead.coeff.inv().expect("stored coefficients are nonzero");
        if self.terms.len() == 1 {
            return Ok(Self::monomial(c_inv, -&lead.exponent));
        }
        // h = a / (c T^l) - 1
        let h = NovikovElement {
            field: self.field.clone(),
            terms: self.terms[1..]
                .iter()
                .map(|t| Term { exponent: &t.exponent - &lead.exponent, coeff: &t.coeff * &c_inv })
                .collect(),
        };
        let minus_h = h.neg_ref();
        let mut sum = Self::one(&self.field);
        let mut power = Self::one(&self.field);
        loop {
            power = (&power * &minus_h).truncate(precision);
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        Ok(sum.truncate(precision).scale(&c_inv).shift(&-&lead.exponent))
    }

    /// All `k` distinct k-th roots of a monomial `c T^l`.
    ///
    /// The coefficient must be a rational times a root of unity. Roots are
    /// ordered by the exponent of the root of unity they differ by.
    pub fn kth_roots(&self, k: u32) -> Result<Vec<Self>, NovikovError> {
        if k == 0 {
            return Err(NovikovError::UnsupportedShape("root of order 0".into()));
        }
        if k == 1 && !self.is_zero() {
            return Ok(vec![self.clone()]);
        }
        let term = match self.terms.as_slice() {
            [t] => t,
            [] => return Err(NovikovError::UnsupportedShape("roots of zero".into())),
            _ => return Err(NovikovError::UnsupportedShape(format!("`{self}` is not a monomial"))),
        };
        let field = &self.field;
        let (r, j) = term.coeff.as_scaled_root_of_unity().ok_or_else(|| {
            NovikovError::UnsupportedShape(format!(
                "coefficient `{}` is not a rational multiple of a root of unity",
                term.coeff
            ))
        })?;
        let big_m = field.roots_of_unity_order() as u64;
        let k64 = k as u64;
        // |r| must be a k-th power in Q; the sign is folded into the root of unity.
        let mut j = j as u64;
        if r.is_negative() {
            j = (j + big_m / 2) % big_m;
        }
        let abs_r = r.abs();
        let root_abs = rational_kth_root(&abs_r, k).ok_or_else(|| {
            NovikovError::NoScaledRoot(format!("{abs_r} has no rational root of order {k}"))
        })?;
        // Need t with k*t = j (mod M) and all k-th roots of unity present.
        let t = (0..big_m).find(|t| (k64 * t) % big_m == j);
        match t {
            Some(t) if big_m % k64 == 0 => {
                let g = field.unity_generator();
                let step = big_m / k64;
                let exponent = &term.exponent / int(k as i64);
                Ok((0..k64)
                    .map(|s| {
                        let unit = g.pow((t + s * step) as i64).unwrap();
                        let coeff = &field.from_rational(root_abs.clone()) * &unit;
                        Self::monomial(coeff, exponent.clone())
                    })
                    .collect())
            }
            _ => {
                // Roots of g^j are zeta_{kM}^(j + M s); they live in mu_N for
                // N = lcm(M, k, kM / gcd(kM, j)).
                let km = k64 * big_m;
                let needed = big_m.lcm(&k64).lcm(&(km / km.gcd(&j)));
                let m = field.order() as u64;
                let mut suggested = m.lcm(&needed);
                if suggested % 4 == 2 && m % 2 == 1 {
                    suggested /= 2;
                }
                Err(NovikovError::NeedsFieldExtension {
                    suggested_order: suggested as u32,
                    reason: format!("roots of order {k} of `{self}` are not all in Q(z_{})", field.order()),
                })
            }
        }
    }

    /// Parses the text grammar (`2*z^1*T^(1/3) + 1`) into the given field.
    pub fn parse(input: &str, field: &CyclotomicField) -> Result<Self, ParseError> {
        let expr = parse_expr(input)?;
        eval_novikov(&expr, input, field)
    }
}

/// Exact k-th root of a non-negative rational, if it is rational.
fn rational_kth_root(r: &Rational, k: u32) -> Option<Rational> {
    let root = |n: &BigInt| -> Option<BigInt> {
        let x = n.nth_root(k);
        (num_traits::pow(x.clone(), k as usize) == *n).then_some(x)
    };
    Some(Rational::new(root(r.numer())?, root(r.denom())?))
}

fn eval_novikov(expr: &Expr, input: &str, field: &CyclotomicField) -> Result<NovikovElement, ParseError> {
    let rec = |e: &Expr| eval_novikov(e, input, field);
    Ok(match expr {
        Expr::Num(n) => NovikovElement::constant(field.from_rational(Rational::from_integer(n.clone()))),
        Expr::Var(v) if v == "z" => NovikovElement::constant(field.zeta_pow(1)),
        Expr::Var(v) if v == "T" => NovikovElement::t_pow(field, Rational::one()),
        Expr::Var(v) => return Err(semantic_error(input, format!("unknown symbol `{v}` (expected z or T)"))),
        Expr::Add(a, b) => &rec(a)? + &rec(b)?,
        Expr::Sub(a, b) => &rec(a)? - &rec(b)?,
        Expr::Mul(a, b) => &rec(a)? * &rec(b)?,
        Expr::Neg(a) => -&rec(a)?,
        Expr::Div(a, b) => {
            let den = rec(b)?;
            if !den.is_monomial() {
                return Err(semantic_error(input, "division only by nonzero monomials"));
            }
            let inv = den.invert(&Rational::zero()).expect("monomial");
            &rec(a)? * &inv
        }
        Expr::Pow(base, e) => {
            if matches!(base.as_ref(), Expr::Var(v) if v == "T") {
                return Ok(NovikovElement::t_pow(field, e.clone()));
            }
            if !e.is_integer() {
                return Err(semantic_error(input, "fractional powers are only allowed on T"));
            }
            let b = rec(base)?;
            let n = e.to_integer().to_i64().ok_or_else(|| semantic_error(input, "exponent too large"))?;
            if n >= 0 {
                b.pow(n as u32)
            } else if b.is_monomial() {
                b.invert(&Rational::zero()).expect("monomial").pow(n.unsigned_abs() as u32)
            } else {
                return Err(semantic_error(input, "negative powers only of monomials"));
            }
        }
    })
}

impl<'a> Add<&'a NovikovElement> for &'a NovikovElement {
    type Output = NovikovElement;
    fn add(self, rhs: &'a NovikovElement) -> NovikovElement {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Sub<&'a NovikovElement> for &'a NovikovElement {
    type Output = NovikovElement;
    fn sub(self, rhs: &'a NovikovElement) -> NovikovElement {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Mul<&'a NovikovElement> for &'a NovikovElement {
    type Output = NovikovElement;
    fn mul(self, rhs: &'a NovikovElement) -> NovikovElement {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &NovikovElement {
    type Output = NovikovElement;
    fn neg(self) -> NovikovElement {
        self.neg_ref()
    }
}

/// Text form: terms joined by ` + `, each `c*T^(p/q)`; the `T^(0/1)` factor is omitted.
impl fmt::Display for NovikovElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let c = t.coeff.to_factor_string();
                if t.exponent.is_zero() {
                    c
                } else {
                    format!("{c}*T^({})", fraction_string(&t.exponent))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
