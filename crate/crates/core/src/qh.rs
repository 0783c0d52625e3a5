//! Quantum cohomology presented as `Λ[z]/(f)` for monic `f`, with a
//! semisimplicity test, Lagrange idempotents and the final verdict.

use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::critical::SolveReport;
use crate::cyclotomic::CyclotomicField;
use crate::novikov::{NovikovElement, NovikovError, Valuation};
use crate::rational::{fraction_string, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QhError {
    #[error(transparent)]
    Novikov(#[from] NovikovError),
    #[error("presentation polynomial must be monic of degree >= 1")]
    NotMonic,
    #[error("coefficient {index} lies in a different coefficient field")]
    FieldMismatch { index: usize },
    #[error("precision {} cannot decide whether a leading coefficient vanishes; try {}", .precision.as_ref().map_or("(none)".to_string(), fraction_string), fraction_string(.suggested))]
    PrecisionInsufficient { precision: Option<Rational>, suggested: Rational },
    #[error("expected {expected} roots, got {got}")]
    WrongRootCount { expected: usize, got: usize },
    #[error("root {index} is not a root: f(root) = {residual}")]
    NotARoot { index: usize, residual: String },
    #[error("roots {0} and {1} coincide")]
    RepeatedRoot(usize, usize),
    #[error("idempotent {index} needs the inverse of `{value}`, which has no finite expansion")]
    NonMonomialDenominator { index: usize, value: String },
    #[error("presentation is not of the form z^d + c")]
    NotBinomial,
    #[error("computed idempotents failed exact verification")]
    IdempotentCheckFailed,
}

/// `Λ[z]/(f)` with `f` monic, coefficients low degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QHRing {
    field: CyclotomicField,
    f: Vec<NovikovElement>,
}

/// A remainder representative of degree below `deg f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QHElement {
    coeffs: Vec<NovikovElement>,
}

impl QHElement {
    pub fn coeffs(&self) -> &[NovikovElement] {
        &self.coeffs
    }
}

fn poly_mul(a: &[NovikovElement], b: &[NovikovElement], field: &CyclotomicField) -> Vec<NovikovElement> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![NovikovElement::zero(field); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

impl QHRing {
    pub fn new(f: Vec<NovikovElement>) -> Result<Self, QhError> {
        if f.len() < 2 || !f.last().unwrap().is_one() {
            return Err(QhError::NotMonic);
        }
        let field = f[0].field().clone();
        if let Some(index) = f.iter().position(|c| c.field() != &field) {
            return Err(QhError::FieldMismatch { index });
        }
        Ok(QHRing { field, f })
    }

    pub fn degree(&self) -> usize {
        self.f.len() - 1
    }

    pub fn field(&self) -> &CyclotomicField {
        &self.field
    }

    pub fn modulus(&self) -> &[NovikovElement] {
        &self.f
    }

    /// Reduces an arbitrary polynomial; division by a monic `f` is exact.
    pub fn reduce(&self, poly: &[NovikovElement]) -> QHElement {
        let d = self.degree();
        let mut p = poly.to_vec();
        while p.len() > d {
            let top = p.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = p.len() - d;
            for (k, c) in self.f[..d].iter().enumerate() {
                p[shift + k] = &p[shift + k] - &(&top * c);
            }
        }
        p.resize(d, NovikovElement::zero(&self.field));
        QHElement { coeffs: p }
    }

    pub fn element(&self, coeffs: Vec<NovikovElement>) -> QHElement {
        self.reduce(&coeffs)
    }

    pub fn zero(&self) -> QHElement {
        self.reduce(&[])
    }

    pub fn one(&self) -> QHElement {
        self.reduce(&[NovikovElement::one(&self.field)])
    }

    pub fn constant(&self, c: NovikovElement) -> QHElement {
        self.reduce(&[c])
    }

    /// The class `z^k`.
    pub fn z_pow(&self, k: usize) -> QHElement {
        let mut p = vec![NovikovElement::zero(&self.field); k + 1];
        p[k] = NovikovElement::one(&self.field);
        self.reduce(&p)
    }

    pub fn add(&self, a: &QHElement, b: &QHElement) -> QHElement {
        QHElement { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, a: &QHElement, b: &QHElement) -> QHElement {
        QHElement { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect() }
    }

    pub fn scale(&self, a: &QHElement, c: &NovikovElement) -> QHElement {
        QHElement { coeffs: a.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, a: &QHElement, b: &QHElement) -> QHElement {
        self.reduce(&poly_mul(&a.coeffs, &b.coeffs, &self.field))
    }

    pub fn eval_f(&self, x: &NovikovElement) -> NovikovElement {
        self.f.iter().rev().fold(NovikovElement::zero(&self.field), |acc, c| &(&acc * x) + c)
    }

    fn derivative(&self) -> Vec<NovikovElement> {
        self.f
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&self.field.from_int(k as i64)))
            .collect()
    }

    /// Whether `gcd(f, f')` is a unit, by Euclid over the Novikov field.
    ///
    /// Inverses of non-monomial leading coefficients are truncated at
    /// `precision` and the resulting uncertainty is tracked. When it hides
    /// whether a coefficient vanishes, the answer is refused.
    pub fn is_semisimple(&self, precision: Option<&Rational>) -> Result<bool, QhError> {
        let exact = |v: &[NovikovElement]| v.iter().map(|c| Approx::exact(c.clone())).collect::<Vec<_>>();
        let mut r0 = exact(&self.f);
        let mut r1 = exact(&self.derivative());
        let ctx = EuclidCtx { precision };
        ctx.trim(&mut r1)?;
        while !r1.is_empty() {
            let r = ctx.rem(&r0, &r1)?;
            r0 = r1;
            r1 = r;
        }
        Ok(r0.len() == 1)
    }

    /// Lagrange idempotents `Π_{j≠i}(z-ε_j) / Π_{j≠i}(ε_i-ε_j)`, verified exactly.
    pub fn idempotents(&self, roots: &[NovikovElement]) -> Result<Vec<QHElement>, QhError> {
        let d = self.degree();
        if roots.len() != d {
            return Err(QhError::WrongRootCount { expected: d, got: roots.len() });
        }
        for (index, r) in roots.iter().enumerate() {
            let residual = self.eval_f(r);
            if !residual.is_zero() {
                return Err(QhError::NotARoot { index, residual: residual.to_string() });
            }
        }
        for i in 0..d {
            for j in i + 1..d {
                if roots[i] == roots[j] {
                    return Err(QhError::RepeatedRoot(i, j));
                }
            }
        }
        let one = NovikovElement::one(&self.field);
        let mut out = Vec::new();
        for (i, ei) in roots.iter().enumerate() {
            let mut num = vec![one.clone()];
            let mut den = one.clone();
            for (j, ej) in roots.iter().enumerate() {
                if i != j {
                    num = poly_mul(&num, &[-ej, one.clone()], &self.field);
                    den = &den * &(ei - ej);
                }
            }
            if !den.is_monomial() {
                return Err(QhError::NonMonomialDenominator { index: i, value: den.to_string() });
            }
            let inv = den.invert(&Rational::zero())?;
            out.push(self.scale(&self.reduce(&num), &inv));
        }
        if !self.verify_idempotents(&out) {
            return Err(QhError::IdempotentCheckFailed);
        }
        Ok(out)
    }

    /// `e_i² = e_i`, `e_i e_j = 0` for `i ≠ j`, and `Σ e_i = 1`, exactly.
    pub fn verify_idempotents(&self, es: &[QHElement]) -> bool {
        let zero = self.zero();
        for (i, a) in es.iter().enumerate() {
            for (j, b) in es.iter().enumerate() {
                let p = self.mul(a, b);
                if (i == j && &p != a) || (i != j && p != zero) {
                    return false;
                }
            }
        }
        es.iter().fold(zero.clone(), |acc, e| self.add(&acc, e)) == self.one()
    }

    /// Roots of `z^d + c`, from the `d`-th roots of `-c`.
    pub fn binomial_roots(&self) -> Result<Vec<NovikovElement>, QhError> {
        let d = self.degree();
        if self.f[1..d].iter().any(|c| !c.is_zero()) {
            return Err(QhError::NotBinomial);
        }
        Ok((-&self.f[0]).kth_roots(d as u32)?)
    }
}

/// `z^3 - T`, terms from the top degree down.
impl fmt::Display for QHRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_poly(&self.f))
    }
}

impl fmt::Display for QHElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_poly(&self.coeffs))
    }
}

fn render_poly(coeffs: &[NovikovElement]) -> String {
    let mut parts = Vec::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let z = match k {
            0 => String::new(),
            1 => "z".to_string(),
            _ => format!("z^{k}"),
        };
        parts.push(match (z.is_empty(), c.is_one()) {
            (true, _) => format!("({c})"),
            (false, true) => z,
            (false, false) => format!("({c})*{z}"),
        });
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

/// A Novikov element known up to terms of valuation `>= floor`.
#[derive(Debug, Clone)]
struct Approx {
    value: NovikovElement,
    floor: Valuation,
}

impl Approx {
    fn exact(value: NovikovElement) -> Self {
        Approx { value, floor: Valuation::Infinite }
    }

    fn new(value: NovikovElement, floor: Valuation) -> Self {
        let value = match floor.finite() {
            Some(b) => value.truncate(b),
            None => value,
        };
        Approx { value, floor }
    }

    fn certainly_zero(&self) -> bool {
        self.value.is_zero() && self.floor == Valuation::Infinite
    }

    fn sub(&self, other: &Approx) -> Approx {
        Approx::new(&self.value - &other.value, self.floor.clone().min(other.floor.clone()))
    }

    fn mul(&self, other: &Approx) -> Approx {
        let floor = self
            .value
            .valuation()
            .add(&other.floor)
            .min(self.floor.add(&other.value.valuation()))
            .min(self.floor.add(&other.floor));
        Approx::new(&self.value * &other.value, floor)
    }
}

struct EuclidCtx<'a> {
    precision: Option<&'a Rational>,
}

impl EuclidCtx<'_> {
    fn insufficient(&self) -> QhError {
        let suggested = match self.precision {
            Some(n) if n.is_positive() => std::cmp::max(n * Rational::from_integer(2.into()), n + Rational::one()),
            _ => Rational::one(),
        };
        QhError::PrecisionInsufficient { precision: self.precision.cloned(), suggested }
    }

    /// Drops certainly-zero top coefficients; an undecidable top is an error.
    fn trim(&self, p: &mut Vec<Approx>) -> Result<(), QhError> {
        while let Some(top) = p.last() {
            if top.certainly_zero() {
                p.pop();
            } else if top.value.is_zero() {
                return Err(self.insufficient());
            } else {
                break;
            }
        }
        Ok(())
    }

    fn inverse(&self, a: &Approx) -> Result<Approx, QhError> {
        let lam = a.value.valuation().finite().cloned().expect("nonzero leading coefficient");
        let two_lam = &lam + &lam;
        let input_floor = match a.floor.finite() {
            Some(f) => Valuation::Finite(f - &two_lam),
            None => Valuation::Infinite,
        };
        if a.value.is_monomial() {
            return Ok(Approx::new(a.value.invert(&Rational::zero())?, input_floor));
        }
        let n = self.precision.ok_or_else(|| self.insufficient())?;
        let inv = a.value.invert(n)?;
        Ok(Approx::new(inv, Valuation::Finite(n - &lam).min(input_floor)))
    }

    fn rem(&self, a: &[Approx], b: &[Approx]) -> Result<Vec<Approx>, QhError> {
        let mut r = a.to_vec();
        self.trim(&mut r)?;
        let db = b.len() - 1;
        let lead_inv = self.inverse(b.last().unwrap())?;
        while r.len() > db {
            let q = r.last().unwrap().mul(&lead_inv);
            let shift = r.len() - 1 - db;
            for (k, bk) in b[..db].iter().enumerate() {
                r[shift + k] = r[shift + k].sub(&q.mul(bk));
            }
            // the top cancels by construction of q
            r.pop();
            self.trim(&mut r)?;
        }
        Ok(r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conclusion {
    None,
    Nondisplaceable,
    Superheavy,
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Conclusion::None => "none",
            Conclusion::Nondisplaceable => "nondisplaceable",
            Conclusion::Superheavy => "superheavy",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub has_critical_point: bool,
    pub qh_semisimple: bool,
    pub idempotents_verified: bool,
    pub conclusion: Conclusion,
    pub justification: String,
}

/// Applies the implication chain: a critical point gives nonvanishing Floer
/// cohomology, hence nondisplaceability; with split semisimple quantum
/// cohomology on top, one of the idempotents yields a quasi-state for which
/// the Lagrangian is superheavy.
pub fn verdict(report: &SolveReport, semisimple: bool, idempotents_verified: bool) -> Verdict {
    let has_critical_point = !report.points.is_empty();
    let (conclusion, justification) = match (has_critical_point, semisimple && idempotents_verified) {
        (false, _) => (
            Conclusion::None,
            "no critical point of the potential was found, so there is no Floer-nonvanishing certificate".to_string(),
        ),
        (true, false) => (
            Conclusion::Nondisplaceable,
            format!(
                "{} critical point(s): HF(L, b) is isomorphic to H(L), so L is non-displaceable; \
                 quantum cohomology is not certified semisimple, so superheaviness is not concluded",
                report.points.len()
            ),
        ),
        (true, true) => (
            Conclusion::Superheavy,
            format!(
                "{} critical point(s): HF(L, b) is isomorphic to H(L) and nonzero; quantum cohomology splits \
                 into fields with verified idempotents, so L is superheavy for the quasi-state of some idempotent",
                report.points.len()
            ),
        ),
    };
    Verdict { has_critical_point, qh_semisimple: semisimple, idempotents_verified, conclusion, justification }
}
