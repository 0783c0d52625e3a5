//! Potential functions `Σ n_β·c·T^{λ(u)}·y^{∂β}` and their formal partials.

use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::cyclotomic::{Cyclotomic, CyclotomicField};
use crate::novikov::NovikovElement;
use crate::polytope::{AffineExponent, FiberPoint, MomentPolytope};
use crate::rational::{fraction_string, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PotentialError {
    #[error("expected dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{counts} disk counts given for {facets} facets")]
    CountMismatch { facets: usize, counts: usize },
    #[error("term `{term}` has count 0")]
    ZeroCount { term: String },
    #[error("term `{term}` has coefficient in Q(zeta_{got}), expected Q(zeta_{expected})")]
    FieldMismatch { term: String, expected: u32, got: u32 },
    #[error("invalid fiber: term `{term}` has exponent {exponent} <= 0")]
    InvalidFiber { term: String, exponent: String },
    #[error("coordinate y{index} is zero")]
    ZeroCoordinate { index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PotentialTerm {
    pub count: u64,
    pub coefficient: Cyclotomic,
    pub exponent: AffineExponent,
    pub monomial: Vec<i64>,
    pub label: Option<String>,
}

impl PotentialTerm {
    pub fn new(count: u64, coefficient: Cyclotomic, exponent: AffineExponent, monomial: Vec<i64>) -> Self {
        PotentialTerm { count, coefficient, exponent, monomial, label: None }
    }

    pub fn labelled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// `count * coefficient`
    pub fn weight(&self) -> Cyclotomic {
        let n = self.coefficient.field().from_int(self.count as i64);
        &n * &self.coefficient
    }

    fn name(&self) -> String {
        match &self.label {
            Some(l) => l.clone(),
            None => render_body(&self.exponent, &self.monomial),
        }
    }
}

/// A term of the potential after substituting a fiber point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluatedTerm {
    pub count: u64,
    pub coefficient: Cyclotomic,
    pub exponent: Rational,
    pub monomial: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PotentialFunction {
    n: usize,
    field: CyclotomicField,
    terms: Vec<PotentialTerm>,
}

impl PotentialFunction {
    /// Merges terms with equal monomial and exponent; zero weights vanish.
    pub fn new(n: usize, field: &CyclotomicField, terms: Vec<PotentialTerm>) -> Result<Self, PotentialError> {
        let mut merged: Vec<PotentialTerm> = Vec::new();
        for t in terms {
            if t.count == 0 {
                return Err(PotentialError::ZeroCount { term: t.name() });
            }
            if t.monomial.len() != n {
                return Err(PotentialError::DimensionMismatch { expected: n, got: t.monomial.len() });
            }
            if t.exponent.dim() != n {
                return Err(PotentialError::DimensionMismatch { expected: n, got: t.exponent.dim() });
            }
            if t.coefficient.field() != field {
                return Err(PotentialError::FieldMismatch {
                    term: t.name(),
                    expected: field.order(),
                    got: t.coefficient.order(),
                });
            }
            match merged.iter_mut().find(|m| m.monomial == t.monomial && m.exponent == t.exponent) {
                Some(m) if m.coefficient == t.coefficient => m.count += t.count,
                Some(m) => {
                    m.coefficient = &m.weight() + &t.weight();
                    m.count = 1;
                }
                None => merged.push(t),
            }
        }
        merged.retain(|m| !m.coefficient.is_zero());
        Ok(PotentialFunction { n, field: field.clone(), terms: merged })
    }

    /// One term per facet (count, normal, facet functional), then the extras.
    /// Empty `counts` means every facet counts once.
    pub fn build(
        polytope: &MomentPolytope,
        counts: &[u64],
        extra: Vec<PotentialTerm>,
        field: &CyclotomicField,
    ) -> Result<Self, PotentialError> {
        let facets = polytope.facets();
        if !counts.is_empty() && counts.len() != facets.len() {
            return Err(PotentialError::CountMismatch { facets: facets.len(), counts: counts.len() });
        }
        let mut terms = Vec::new();
        for (j, (facet, ell)) in facets.iter().zip(polytope.facet_functionals()).enumerate() {
            let count = counts.get(j).copied().unwrap_or(1);
            let label = facet.label.clone().unwrap_or_else(|| format!("D{}", j + 1));
            terms.push(PotentialTerm::new(count, field.one(), ell, facet.normal.clone()).labelled(label));
        }
        terms.extend(extra);
        Self::new(polytope.dim(), field, terms)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &CyclotomicField {
        &self.field
    }

    pub fn terms(&self) -> &[PotentialTerm] {
        &self.terms
    }

    /// Substitutes `u`; every exponent must be positive.
    pub fn evaluate_at(&self, u: &FiberPoint) -> Result<Vec<EvaluatedTerm>, PotentialError> {
        if u.dim() != self.n {
            return Err(PotentialError::DimensionMismatch { expected: self.n, got: u.dim() });
        }
        self.terms
            .iter()
            .map(|t| {
                let exponent = t.exponent.eval(u);
                if !exponent.is_positive() {
                    return Err(PotentialError::InvalidFiber { term: t.name(), exponent: fraction_string(&exponent) });
                }
                Ok(EvaluatedTerm {
                    count: t.count,
                    coefficient: t.coefficient.clone(),
                    exponent,
                    monomial: t.monomial.clone(),
                })
            })
            .collect()
    }

    /// The potential as a formal Laurent series, weights folded into coefficients.
    pub fn as_laurent(&self) -> FormalLaurent {
        let mut l = Laurent::zero(self.n, &self.field);
        for t in &self.terms {
            l.push(t.weight(), t.exponent.clone(), t.monomial.clone());
        }
        l
    }

    /// `∂/∂y_i` for each `i`.
    pub fn partials(&self) -> Vec<FormalLaurent> {
        let l = self.as_laurent();
        (0..self.n).map(|i| l.derivative(i)).collect()
    }
}

/// `T^(u1)*y1 + 2*T^(2-2*u2)*y2^-2`
impl fmt::Display for PotentialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_laurent())
    }
}

pub trait TExponent: Clone + PartialEq + Ord + fmt::Debug {
    fn is_trivial(&self) -> bool;
    fn render(&self) -> String;
}

impl TExponent for AffineExponent {
    fn is_trivial(&self) -> bool {
        self.is_zero()
    }

    fn render(&self) -> String {
        self.to_string()
    }
}

impl TExponent for Rational {
    fn is_trivial(&self) -> bool {
        self.is_zero()
    }

    fn render(&self) -> String {
        fraction_string(self)
    }
}

#[derive(Debug, Clone)]
pub struct LaurentTerm<E> {
    pub coeff: Cyclotomic,
    pub exponent: E,
    pub monomial: Vec<i64>,
}

/// Finite sum of `c·T^λ·y^l`, kept in insertion order with like terms merged.
#[derive(Debug, Clone)]
pub struct Laurent<E> {
    n: usize,
    field: CyclotomicField,
    terms: Vec<LaurentTerm<E>>,
}

/// Exponents still affine in the fiber coordinate.
pub type FormalLaurent = Laurent<AffineExponent>;
/// Exponents evaluated at a fiber point.
pub type TLaurent = Laurent<Rational>;

impl<E: TExponent> Laurent<E> {
    pub fn zero(n: usize, field: &CyclotomicField) -> Self {
        Laurent { n, field: field.clone(), terms: Vec::new() }
    }

    pub fn push(&mut self, coeff: Cyclotomic, exponent: E, monomial: Vec<i64>) {
        assert_eq!(monomial.len(), self.n);
        if let Some(pos) = self.terms.iter().position(|t| t.exponent == exponent && t.monomial == monomial) {
            let c = &self.terms[pos].coeff + &coeff;
            if c.is_zero() {
                self.terms.remove(pos);
            } else {
                self.terms[pos].coeff = c;
            }
        } else if !coeff.is_zero() {
            self.terms.push(LaurentTerm { coeff, exponent, monomial });
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &CyclotomicField {
        &self.field
    }

    pub fn terms(&self) -> &[LaurentTerm<E>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n, &self.field);
        for t in &self.terms {
            let li = t.monomial[i];
            if li == 0 {
                continue;
            }
            let mut m = t.monomial.clone();
            m[i] -= 1;
            out.push(&self.field.from_int(li) * &t.coeff, t.exponent.clone(), m);
        }
        out
    }

    fn canonical(&self) -> Vec<(&E, &Vec<i64>, &Cyclotomic)> {
        let mut v: Vec<_> = self.terms.iter().map(|t| (&t.exponent, &t.monomial, &t.coeff)).collect();
        v.sort();
        v
    }
}

impl<E: TExponent> PartialEq for Laurent<E> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.field == other.field && self.canonical() == other.canonical()
    }
}

impl<E: TExponent> Eq for Laurent<E> {}

impl FormalLaurent {
    pub fn evaluate(&self, u: &FiberPoint) -> TLaurent {
        let mut out = TLaurent::zero(self.n, &self.field);
        for t in &self.terms {
            out.push(t.coeff.clone(), t.exponent.eval(u), t.monomial.clone());
        }
        out
    }
}

impl TLaurent {
    /// Substitutes field values for `y`, giving a Novikov element.
    pub fn substitute(&self, y: &[Cyclotomic]) -> Result<NovikovElement, PotentialError> {
        if y.len() != self.n {
            return Err(PotentialError::DimensionMismatch { expected: self.n, got: y.len() });
        }
        if let Some(index) = y.iter().position(|c| c.is_zero()) {
            return Err(PotentialError::ZeroCoordinate { index: index + 1 });
        }
        let mut acc = Vec::new();
        for t in &self.terms {
            let mut c = t.coeff.clone();
            for (yi, &e) in y.iter().zip(&t.monomial) {
                c = &c * &yi.pow(e).expect("nonzero base");
            }
            acc.push((c, t.exponent.clone()));
        }
        Ok(NovikovElement::from_terms(&self.field, acc))
    }
}

pub(crate) fn render_monomial(monomial: &[i64]) -> String {
    let parts: Vec<String> = monomial
        .iter()
        .enumerate()
        .filter(|(_, e)| **e != 0)
        .map(|(i, e)| if *e == 1 { format!("y{}", i + 1) } else { format!("y{}^{}", i + 1, e) })
        .collect();
    parts.join("*")
}

fn render_body<E: TExponent>(exponent: &E, monomial: &[i64]) -> String {
    let mut parts = Vec::new();
    if !exponent.is_trivial() {
        parts.push(format!("T^({})", exponent.render()));
    }
    let m = render_monomial(monomial);
    if !m.is_empty() {
        parts.push(m);
    }
    parts.join("*")
}

/// Joins `(coefficient, body)` pairs with ` + ` / ` - `; empty sums render `0`.
pub(crate) fn render_sum<'a>(terms: impl IntoIterator<Item = (&'a Cyclotomic, String)>) -> String {
    let mut out = String::new();
    for (c, body) in terms {
        let negative = c.is_negative_rational();
        let magnitude = if negative { -c } else { c.clone() };
        let piece = match (magnitude.is_one(), body.is_empty()) {
            (true, true) => "1".to_string(),
            (true, false) => body,
            (false, true) => magnitude.to_factor_string(),
            (false, false) => format!("{}*{}", magnitude.to_factor_string(), body),
        };
        match (out.is_empty(), negative) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        out.push_str(&piece);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl<E: TExponent> fmt::Display for Laurent<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = render_sum(self.terms.iter().map(|t| (&t.coeff, render_body(&t.exponent, &t.monomial))));
        write!(f, "{s}")
    }
}
