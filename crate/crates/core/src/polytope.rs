//! Moment polytopes, facet functionals and balanced fibers.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use thiserror::Error;

use crate::linalg::{solve, AffineSolution};
use crate::parse::{parse_expr, semantic_error, Expr, ParseError};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("facet {index}: normal vector is zero")]
    ZeroNormal { index: usize },
    #[error("facet {index}: normal vector {normal:?} is not primitive")]
    NonPrimitiveNormal { index: usize, normal: Vec<i64> },
    #[error("compact polytope in dimension {dim} needs at least {} facets, got {facets}", dim + 1)]
    TooFewFacets { dim: usize, facets: usize },
    #[error("declared interior point is not interior")]
    BadInteriorPoint,
    #[error("balanced point needs at least two exponents")]
    TooFewExponents,
}

/// `lambda(u) = constant + <gradient, u>`, an exponent affine in the fiber coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineExponent {
    pub constant: Rational,
    pub gradient: Vec<Rational>,
}

impl AffineExponent {
    pub fn new(constant: Rational, gradient: Vec<Rational>) -> Self {
        AffineExponent { constant, gradient }
    }

    pub fn constant(c: Rational, dim: usize) -> Self {
        AffineExponent { constant: c, gradient: vec![Rational::zero(); dim] }
    }

    pub fn zero(dim: usize) -> Self {
        Self::constant(Rational::zero(), dim)
    }

    /// The coordinate function `u_{i+1}`.
    pub fn coordinate(i: usize, dim: usize) -> Self {
        let mut g = vec![Rational::zero(); dim];
        g[i] = Rational::one();
        AffineExponent { constant: Rational::zero(), gradient: g }
    }

    pub fn dim(&self) -> usize {
        self.gradient.len()
    }

    pub fn eval(&self, u: &FiberPoint) -> Rational {
        assert_eq!(u.dim(), self.dim(), "fiber dimension mismatch");
        self.gradient.iter().zip(&u.0).fold(self.constant.clone(), |acc, (g, x)| acc + g * x)
    }

    pub fn add(&self, other: &Self) -> Self {
        AffineExponent {
            constant: &self.constant + &other.constant,
            gradient: self.gradient.iter().zip(&other.gradient).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        AffineExponent { constant: &self.constant * c, gradient: self.gradient.iter().map(|g| g * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.gradient.iter().all(Zero::is_zero)
    }

    /// Parses expressions such as `4 - u1 - 4*u2` or `1/2*u1 + 2`.
    pub fn parse(input: &str, dim: usize) -> Result<Self, ParseError> {
        let expr = parse_expr(input)?;
        eval_affine(&expr, input, dim)
    }
}

fn eval_affine(e: &Expr, input: &str, dim: usize) -> Result<AffineExponent, ParseError> {
    let rec = |x: &Expr| eval_affine(x, input, dim);
    let scalar = |a: &AffineExponent| a.gradient.iter().all(Zero::is_zero).then(|| a.constant.clone());
    Ok(match e {
        Expr::Num(n) => AffineExponent::constant(Rational::from_integer(n.clone()), dim),
        Expr::Var(v) => {
            let idx = v
                .strip_prefix('u')
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|&i| i >= 1 && i <= dim)
                .ok_or_else(|| semantic_error(input, format!("unknown variable `{v}` (expected u1..u{dim})")))?;
            AffineExponent::coordinate(idx - 1, dim)
        }
        Expr::Add(a, b) => rec(a)?.add(&rec(b)?),
        Expr::Sub(a, b) => rec(a)?.sub(&rec(b)?),
        Expr::Neg(a) => rec(a)?.scale(&-Rational::one()),
        Expr::Mul(a, b) => {
            let (a, b) = (rec(a)?, rec(b)?);
            match (scalar(&a), scalar(&b)) {
                (Some(s), _) => b.scale(&s),
                (_, Some(s)) => a.scale(&s),
                _ => return Err(semantic_error(input, "product of two non-constant terms is not affine")),
            }
        }
        Expr::Div(a, b) => {
            let s = scalar(&rec(b)?).ok_or_else(|| semantic_error(input, "division by a non-constant"))?;
            if s.is_zero() {
                return Err(semantic_error(input, "division by zero"));
            }
            rec(a)?.scale(&s.recip())
        }
        Expr::Pow(..) => return Err(semantic_error(input, "powers are not affine")),
    })
}

fn fmt_coeff_var(c: &Rational, var: &str, first: bool) -> String {
    let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
    let a = c.abs();
    if a.is_one() {
        format!("{sign}{var}")
    } else {
        format!("{sign}{a}*{var}")
    }
}

/// Affine notation in `u1..un`: `4-u1-4*u2`, `2-2*u2`, `u1`.
impl fmt::Display for AffineExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        if !self.constant.is_zero() {
            out.push_str(&self.constant.to_string());
        }
        for (i, g) in self.gradient.iter().enumerate() {
            if !g.is_zero() {
                out.push_str(&fmt_coeff_var(g, &format!("u{}", i + 1), out.is_empty()));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        write!(f, "{out}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiberPoint(pub Vec<Rational>);

impl FiberPoint {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Parses `2/3,2/3`.
    pub fn parse(s: &str) -> Option<Self> {
        s.split(',').map(crate::rational::parse_rational).collect::<Option<Vec<_>>>().map(FiberPoint)
    }
}

impl fmt::Display for FiberPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Constraint `<normal, u> - offset >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: Rational,
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentPolytope {
    dim: usize,
    facets: Vec<Facet>,
    excluded: Vec<FiberPoint>,
}

impl MomentPolytope {
    /// Validates primitive nonzero normals and dimensions.
    pub fn new(dim: usize, facets: Vec<Facet>) -> Result<Self, PolytopeError> {
        for (index, f) in facets.iter().enumerate() {
            if f.normal.len() != dim {
                return Err(PolytopeError::DimensionMismatch { expected: dim, got: f.normal.len() });
            }
            let g = f.normal.iter().fold(0i64, |acc, &x| acc.gcd(&x));
            if g == 0 {
                return Err(PolytopeError::ZeroNormal { index });
            }
            if g != 1 {
                return Err(PolytopeError::NonPrimitiveNormal { index, normal: f.normal.clone() });
            }
        }
        Ok(MomentPolytope { dim, facets, excluded: Vec::new() })
    }

    /// Extra check for polytopes asserted compact.
    pub fn assert_compact(&self) -> Result<(), PolytopeError> {
        if self.facets.len() < self.dim + 1 {
            return Err(PolytopeError::TooFewFacets { dim: self.dim, facets: self.facets.len() });
        }
        Ok(())
    }

    /// Marks points whose fibers are singular; they are never torus fibers.
    pub fn with_excluded(mut self, excluded: Vec<FiberPoint>) -> Result<Self, PolytopeError> {
        for p in &excluded {
            self.check_dim(p)?;
        }
        self.excluded = excluded;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn excluded(&self) -> &[FiberPoint] {
        &self.excluded
    }

    fn check_dim(&self, u: &FiberPoint) -> Result<(), PolytopeError> {
        if u.dim() != self.dim {
            return Err(PolytopeError::DimensionMismatch { expected: self.dim, got: u.dim() });
        }
        Ok(())
    }

    /// One functional per facet, `l_j(u) = <v_j, u> - c_j`, in facet order.
    pub fn facet_functionals(&self) -> Vec<AffineExponent> {
        self.facets
            .iter()
            .map(|f| AffineExponent {
                constant: -f.offset.clone(),
                gradient: f.normal.iter().map(|&x| Rational::from_integer(x.into())).collect(),
            })
            .collect()
    }

    pub fn is_interior(&self, u: &FiberPoint) -> Result<bool, PolytopeError> {
        self.check_dim(u)?;
        Ok(self.facet_functionals().iter().all(|l| l.eval(u).is_positive()))
    }

    /// Interior and not one of the excluded points.
    pub fn is_torus_fiber(&self, u: &FiberPoint) -> Result<bool, PolytopeError> {
        Ok(self.is_interior(u)? && !self.excluded.contains(u))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BalancedFiber {
    /// All exponents coincide at one point, with common value `level`.
    Unique { point: FiberPoint, level: Rational },
    /// `particular + span(directions)`.
    Family { particular: FiberPoint, directions: Vec<Vec<Rational>> },
    Empty,
}

/// Solves `lambda_1(u) = ... = lambda_k(u)` exactly.
pub fn balanced_point(exponents: &[AffineExponent]) -> Result<BalancedFiber, PolytopeError> {
    if exponents.len() < 2 {
        return Err(PolytopeError::TooFewExponents);
    }
    let dim = exponents[0].dim();
    if let Some(bad) = exponents.iter().find(|e| e.dim() != dim) {
        return Err(PolytopeError::DimensionMismatch { expected: dim, got: bad.dim() });
    }
    let first = &exponents[0];
    let mut a = Vec::new();
    let mut b = Vec::new();
    for e in &exponents[1..] {
        let diff = e.sub(first);
        a.push(diff.gradient);
        b.push(-diff.constant);
    }
    Ok(match solve(&a, &b, dim) {
        AffineSolution::Unique(x) => {
            let point = FiberPoint(x);
            let level = first.eval(&point);
            BalancedFiber::Unique { point, level }
        }
        AffineSolution::Family { particular, directions } => {
            BalancedFiber::Family { particular: FiberPoint(particular), directions }
        }
        AffineSolution::Inconsistent => BalancedFiber::Empty,
    })
}
