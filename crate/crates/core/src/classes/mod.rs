//! Integer-lattice model of relative homology classes.
//!
//! A [`ClassLattice`] is generated by labelled classes subject to integer
//! relations, presented in a chosen basis. Chern numbers, areas and boundaries
//! are linear functionals given by their values on basis classes; pairings
//! with divisors likewise. Everything downstream is derived by linearity.

mod gluing;
mod index;

pub use gluing::{ClassBook, ClassRef, GlueEvent, GlueSolution, GluingPiece, GluingRule, PieceValue};
pub use index::{at_check, euler_characteristic, fredholm_index, normal_chern, Puncture, PunctureSign};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, ToPrimitive};
use serde::Deserialize;
use thiserror::Error;

use crate::linalg::{rref, solve, to_matrix, AffineSolution};
use crate::parse::{parse_expr, semantic_error, Expr, ParseError};
use crate::polytope::AffineExponent;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("lattice `{lattice}`: unknown generator `{label}`")]
    UnknownGenerator { lattice: String, label: String },
    #[error("unknown lattice `{0}`")]
    UnknownLattice(String),
    #[error("lattice `{lattice}`: duplicate label `{label}`")]
    Duplicate { lattice: String, label: String },
    #[error("lattice `{lattice}`: relations do not determine `{label}` in the basis")]
    Underdetermined { lattice: String, label: String },
    #[error("lattice `{lattice}`: relations impose a dependency among basis classes")]
    DependentBasis { lattice: String },
    #[error("lattice `{lattice}`: `{label}` has no integral expression in the basis")]
    NonIntegral { lattice: String, label: String },
    #[error("lattice `{lattice}`: {functional} is not declared on `{class}`")]
    Undeclared { lattice: String, functional: Functional, class: String },
    #[error("lattice `{lattice}`: no pairing data for divisor `{divisor}`")]
    MissingPairing { lattice: String, divisor: String },
    #[error("lattice `{lattice}`: declared {functional} of `{label}` is {declared}, basis values give {derived}")]
    InconsistentDeclaration { lattice: String, functional: Functional, label: String, declared: String, derived: String },
    #[error("lattice `{lattice}`: closed class `{label}` has boundary {boundary:?}")]
    NotClosed { lattice: String, label: String, boundary: Vec<i64> },
    #[error("lattice `{lattice}`: expected vectors of length {expected}, got {got}")]
    DimensionMismatch { lattice: String, expected: usize, got: usize },
    #[error("gluing rule `{rule}`: {functional} is inconsistent, residual {residual}")]
    InconsistentGluing { rule: String, functional: Functional, residual: String },
    #[error("gluing rule `{rule}`: {functional} has {unknowns} unknown basis values")]
    UnderdeterminedGluing { rule: String, functional: Functional, unknowns: usize },
    #[error("gluing rule `{rule}`: {functional} value {value} is not divisible by {divisor}")]
    NotDivisible { rule: String, functional: Functional, value: String, divisor: i64 },
    #[error("cone generators are linearly dependent; membership needs integer programming")]
    DependentConeGenerators,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Functional {
    Chern,
    Maslov,
    Area,
    Boundary,
}

impl Functional {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "c1" | "chern" => Some(Functional::Chern),
            "maslov" | "mu" => Some(Functional::Maslov),
            "area" => Some(Functional::Area),
            "boundary" => Some(Functional::Boundary),
            _ => None,
        }
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Functional::Chern => "c1",
            Functional::Maslov => "maslov",
            Functional::Area => "area",
            Functional::Boundary => "boundary",
        })
    }
}

/// Value of a functional on a class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctionalValue {
    Integer(i64),
    Affine(AffineExponent),
    Vector(Vec<i64>),
}

impl FunctionalValue {
    pub(crate) fn zero_for(functional: Functional, dim: usize) -> Self {
        match functional {
            Functional::Chern | Functional::Maslov => FunctionalValue::Integer(0),
            Functional::Area => FunctionalValue::Affine(AffineExponent::zero(dim)),
            Functional::Boundary => FunctionalValue::Vector(vec![0; dim]),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (FunctionalValue::Integer(a), FunctionalValue::Integer(b)) => FunctionalValue::Integer(a + b),
            (FunctionalValue::Affine(a), FunctionalValue::Affine(b)) => FunctionalValue::Affine(a.add(b)),
            (FunctionalValue::Vector(a), FunctionalValue::Vector(b)) => {
                FunctionalValue::Vector(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => panic!("adding values of different functionals"),
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        match self {
            FunctionalValue::Integer(a) => FunctionalValue::Integer(a * k),
            FunctionalValue::Affine(a) => FunctionalValue::Affine(a.scale(&Rational::from_integer(k.into()))),
            FunctionalValue::Vector(a) => FunctionalValue::Vector(a.iter().map(|x| x * k).collect()),
        }
    }

    /// Exact division; `None` when an integral value is not divisible.
    pub fn div_exact(&self, k: i64) -> Option<Self> {
        assert!(k != 0);
        match self {
            FunctionalValue::Integer(a) => (a % k == 0).then(|| FunctionalValue::Integer(a / k)),
            FunctionalValue::Affine(a) => {
                Some(FunctionalValue::Affine(a.scale(&Rational::new(1.into(), k.into()))))
            }
            FunctionalValue::Vector(a) => {
                a.iter().all(|x| x % k == 0).then(|| FunctionalValue::Vector(a.iter().map(|x| x / k).collect()))
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FunctionalValue::Integer(a) => *a == 0,
            FunctionalValue::Affine(a) => a.is_zero(),
            FunctionalValue::Vector(a) => a.iter().all(|x| *x == 0),
        }
    }

    pub fn as_integer(&self) -> Option<i64> {
        match self {
            FunctionalValue::Integer(a) => Some(*a),
            _ => None,
        }
    }

    pub fn as_affine(&self) -> Option<&AffineExponent> {
        match self {
            FunctionalValue::Affine(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_vector(&self) -> Option<&[i64]> {
        match self {
            FunctionalValue::Vector(a) => Some(a),
            _ => None,
        }
    }
}

impl fmt::Display for FunctionalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionalValue::Integer(a) => write!(f, "{a}"),
            FunctionalValue::Affine(a) => write!(f, "{a}"),
            FunctionalValue::Vector(a) => {
                let parts: Vec<String> = a.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    }
}

/// Declarative description of a lattice, as read from configuration.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDef {
    pub name: String,
    pub generators: Vec<String>,
    pub basis: Vec<String>,
    /// Linear relations such as `"e4 = e2 - 4*e1"`.
    #[serde(default)]
    pub relations: Vec<String>,
    /// divisor label -> generator label -> intersection number
    #[serde(default)]
    pub pairings: BTreeMap<String, BTreeMap<String, i64>>,
    #[serde(default)]
    pub chern: BTreeMap<String, i64>,
    /// generator label -> affine area expression in `u1..un`
    #[serde(default)]
    pub area: BTreeMap<String, String>,
    #[serde(default)]
    pub boundary: BTreeMap<String, Vec<i64>>,
    /// Generators that are closed classes (boundary must vanish).
    #[serde(default)]
    pub closed: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassLattice {
    name: String,
    fiber_dim: usize,
    generators: Vec<String>,
    basis: Vec<String>,
    normal_forms: BTreeMap<String, Vec<i64>>,
    pairings: BTreeMap<String, Vec<i64>>,
    chern: Vec<Option<i64>>,
    area: Vec<Option<AffineExponent>>,
    boundary: Vec<Option<Vec<i64>>>,
    closed: Vec<String>,
}

/// Evaluates an integer combination of labels into label -> coefficient.
fn eval_combination(e: &Expr, input: &str) -> Result<(BTreeMap<String, i64>, i64), ParseError> {
    let rec = |x: &Expr| eval_combination(x, input);
    let int = |n: &num_bigint::BigInt| n.to_i64().ok_or_else(|| semantic_error(input, "coefficient too large"));
    let combine = |a: (BTreeMap<String, i64>, i64), b: (BTreeMap<String, i64>, i64), sign: i64| {
        let mut m = a.0;
        for (k, v) in b.0 {
            *m.entry(k).or_insert(0) += sign * v;
        }
        (m, a.1 + sign * b.1)
    };
    let scale = |a: (BTreeMap<String, i64>, i64), k: i64| {
        (a.0.into_iter().map(|(l, v)| (l, v * k)).collect(), a.1 * k)
    };
    Ok(match e {
        Expr::Num(n) => (BTreeMap::new(), int(n)?),
        Expr::Var(v) => (BTreeMap::from([(v.clone(), 1)]), 0),
        Expr::Add(a, b) => combine(rec(a)?, rec(b)?, 1),
        Expr::Sub(a, b) => combine(rec(a)?, rec(b)?, -1),
        Expr::Neg(a) => scale(rec(a)?, -1),
        Expr::Mul(a, b) => {
            let (a, b) = (rec(a)?, rec(b)?);
            if a.0.values().all(|v| *v == 0) {
                scale(b, a.1)
            } else if b.0.values().all(|v| *v == 0) {
                scale(a, b.1)
            } else {
                return Err(semantic_error(input, "product of two classes"));
            }
        }
        Expr::Div(..) | Expr::Pow(..) => return Err(semantic_error(input, "only integer combinations of classes")),
    })
}

/// Parses `"D1 + D3 - 4*D4"` into label coefficients.
pub fn parse_combination(input: &str) -> Result<Vec<(String, i64)>, ParseError> {
    let (m, constant) = eval_combination(&parse_expr(input)?, input)?;
    if constant != 0 {
        // `0` alone is accepted as the empty combination
        return Err(semantic_error(input, "bare integer in a class combination"));
    }
    Ok(m.into_iter().filter(|(_, v)| *v != 0).collect())
}

fn parse_class_expr(input: &str) -> Result<Vec<(String, i64)>, ParseError> {
    if input.trim() == "0" {
        return Ok(Vec::new());
    }
    parse_combination(input)
}

impl ClassLattice {
    pub fn new(def: &LatticeDef, fiber_dim: usize) -> Result<Self, ClassError> {
        let lname = def.name.clone();
        let mut seen = std::collections::BTreeSet::new();
        for g in &def.generators {
            if !seen.insert(g) {
                return Err(ClassError::Duplicate { lattice: lname, label: g.clone() });
            }
        }
        let gen_index = |label: &str| -> Result<usize, ClassError> {
            def.generators
                .iter()
                .position(|g| g == label)
                .ok_or_else(|| ClassError::UnknownGenerator { lattice: lname.clone(), label: label.to_string() })
        };
        let mut bseen = std::collections::BTreeSet::new();
        for b in &def.basis {
            gen_index(b)?;
            if !bseen.insert(b) {
                return Err(ClassError::Duplicate { lattice: lname.clone(), label: b.clone() });
            }
        }
        // relation rows over all generators
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for rel in &def.relations {
            let (lhs, rhs) = rel
                .split_once('=')
                .ok_or_else(|| semantic_error(rel, "relation must have the form `lhs = rhs`"))?;
            let mut row = vec![0i64; def.generators.len()];
            for (label, c) in parse_class_expr(lhs)? {
                row[gen_index(&label)?] += c;
            }
            for (label, c) in parse_class_expr(rhs)? {
                row[gen_index(&label)?] -= c;
            }
            rows.push(row);
        }
        let basis_idx: Vec<usize> = def.basis.iter().map(|b| gen_index(b)).collect::<Result<_, _>>()?;
        let non_basis: Vec<usize> = (0..def.generators.len()).filter(|i| !basis_idx.contains(i)).collect();
        // [A | C] with A on non-basis columns, C on basis columns
        let aug: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| non_basis.iter().chain(&basis_idx).map(|&i| r[i]).collect())
            .collect();
        let mut m = to_matrix(&aug);
        let pivots = rref(&mut m);
        let nn = non_basis.len();
        for (k, &g) in non_basis.iter().enumerate() {
            if !pivots.contains(&k) {
                return Err(ClassError::Underdetermined { lattice: lname, label: def.generators[g].clone() });
            }
        }
        if pivots.iter().any(|&p| p >= nn) {
            return Err(ClassError::DependentBasis { lattice: lname });
        }
        let mut normal_forms = BTreeMap::new();
        for (k, &b) in basis_idx.iter().enumerate() {
            let mut v = vec![0; basis_idx.len()];
            v[k] = 1;
            normal_forms.insert(def.generators[b].clone(), v);
        }
        for (k, &g) in non_basis.iter().enumerate() {
            // row k of the rref has a 1 in column k: g + sum C_kj b_j = 0
            let coords = m[k][nn..]
                .iter()
                .map(|x| {
                    let v = -x;
                    if v.is_integer() {
                        v.to_integer().to_i64()
                    } else {
                        None
                    }
                })
                .collect::<Option<Vec<i64>>>()
                .ok_or_else(|| ClassError::NonIntegral { lattice: lname.clone(), label: def.generators[g].clone() })?;
            normal_forms.insert(def.generators[g].clone(), coords);
        }

        let mut lattice = ClassLattice {
            name: def.name.clone(),
            fiber_dim,
            generators: def.generators.clone(),
            basis: def.basis.clone(),
            normal_forms,
            pairings: BTreeMap::new(),
            chern: vec![None; def.basis.len()],
            area: vec![None; def.basis.len()],
            boundary: vec![None; def.basis.len()],
            closed: def.closed.clone(),
        };

        // basis values first, the remaining declarations are checked afterwards
        let mut checks: Vec<(Functional, String, FunctionalValue)> = Vec::new();
        for (label, &v) in &def.chern {
            lattice.declare(Functional::Chern, label, FunctionalValue::Integer(v), &mut checks)?;
        }
        for (label, expr) in &def.area {
            let a = AffineExponent::parse(expr, fiber_dim)?;
            lattice.declare(Functional::Area, label, FunctionalValue::Affine(a), &mut checks)?;
        }
        for (label, v) in &def.boundary {
            if v.len() != fiber_dim {
                return Err(ClassError::DimensionMismatch { lattice: lname, expected: fiber_dim, got: v.len() });
            }
            lattice.declare(Functional::Boundary, label, FunctionalValue::Vector(v.clone()), &mut checks)?;
        }
        for (functional, label, declared) in checks {
            let class = lattice.generator(&label)?;
            let derived = class.value(functional)?;
            if derived != declared {
                return Err(ClassError::InconsistentDeclaration {
                    lattice: lname,
                    functional,
                    label,
                    declared: declared.to_string(),
                    derived: derived.to_string(),
                });
            }
        }

        for (divisor, values) in &def.pairings {
            let mut row = vec![None; lattice.basis.len()];
            let mut extra = Vec::new();
            for (label, &v) in values {
                gen_index(label)?;
                match lattice.basis.iter().position(|b| b == label) {
                    Some(k) => row[k] = Some(v),
                    None => extra.push((label.clone(), v)),
                }
            }
            let row: Vec<i64> = row
                .into_iter()
                .enumerate()
                .map(|(k, v)| {
                    v.ok_or_else(|| ClassError::MissingPairing {
                        lattice: lname.clone(),
                        divisor: format!("{divisor} (no value on basis class {})", lattice.basis[k]),
                    })
                })
                .collect::<Result<_, _>>()?;
            lattice.pairings.insert(divisor.clone(), row);
            for (label, declared) in extra {
                let derived = lattice.pair(&lattice.generator(&label)?, divisor)?;
                if derived != declared {
                    return Err(ClassError::InconsistentDeclaration {
                        lattice: lname,
                        functional: Functional::Chern,
                        label: format!("{label}.{divisor}"),
                        declared: declared.to_string(),
                        derived: derived.to_string(),
                    });
                }
            }
        }

        for label in &lattice.closed {
            let class = lattice.generator(label)?;
            if let Ok(FunctionalValue::Vector(b)) = class.value(Functional::Boundary) {
                if b.iter().any(|x| *x != 0) {
                    return Err(ClassError::NotClosed { lattice: lname, label: label.clone(), boundary: b });
                }
            }
        }
        Ok(lattice)
    }

    fn declare(
        &mut self,
        functional: Functional,
        label: &str,
        value: FunctionalValue,
        checks: &mut Vec<(Functional, String, FunctionalValue)>,
    ) -> Result<(), ClassError> {
        if !self.generators.iter().any(|g| g == label) {
            return Err(ClassError::UnknownGenerator { lattice: self.name.clone(), label: label.to_string() });
        }
        match self.basis.iter().position(|b| b == label) {
            Some(k) => self.set_basis_value(functional, k, value),
            None => checks.push((functional, label.to_string(), value)),
        }
        Ok(())
    }

    pub(crate) fn set_basis_value(&mut self, functional: Functional, k: usize, value: FunctionalValue) {
        match (functional, value) {
            (Functional::Chern, FunctionalValue::Integer(v)) => self.chern[k] = Some(v),
            (Functional::Area, FunctionalValue::Affine(v)) => self.area[k] = Some(v),
            (Functional::Boundary, FunctionalValue::Vector(v)) => self.boundary[k] = Some(v),
            (f, v) => panic!("value {v} does not fit functional {f}"),
        }
    }

    pub(crate) fn basis_value(&self, functional: Functional, k: usize) -> Option<FunctionalValue> {
        match functional {
            Functional::Chern => self.chern[k].map(FunctionalValue::Integer),
            Functional::Maslov => self.chern[k].map(|c| FunctionalValue::Integer(2 * c)),
            Functional::Area => self.area[k].clone().map(FunctionalValue::Affine),
            Functional::Boundary => self.boundary[k].clone().map(FunctionalValue::Vector),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn divisors(&self) -> impl Iterator<Item = &String> {
        self.pairings.keys()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Basis coordinates of an integer combination of generators.
    pub fn normalize(&self, expr: &[(String, i64)]) -> Result<RelClass<'_>, ClassError> {
        let mut coords = vec![0i64; self.basis.len()];
        for (label, c) in expr {
            let nf = self.normal_forms.get(label).ok_or_else(|| ClassError::UnknownGenerator {
                lattice: self.name.clone(),
                label: label.clone(),
            })?;
            for (x, y) in coords.iter_mut().zip(nf) {
                *x += c * y;
            }
        }
        Ok(RelClass { lattice: self, coords })
    }

    /// Parses and normalizes `"D1 + D3 - 4*D4"`.
    pub fn class(&self, expr: &str) -> Result<RelClass<'_>, ClassError> {
        self.normalize(&parse_class_expr(expr)?)
    }

    pub fn generator(&self, label: &str) -> Result<RelClass<'_>, ClassError> {
        self.normalize(&[(label.to_string(), 1)])
    }

    pub fn from_coords(&self, coords: Vec<i64>) -> RelClass<'_> {
        assert_eq!(coords.len(), self.basis.len());
        RelClass { lattice: self, coords }
    }

    /// Bilinear extension of the generator/divisor pairing table.
    pub fn pair(&self, a: &RelClass<'_>, divisor: &str) -> Result<i64, ClassError> {
        let row = self.pairings.get(divisor).ok_or_else(|| ClassError::MissingPairing {
            lattice: self.name.clone(),
            divisor: divisor.to_string(),
        })?;
        Ok(a.coords.iter().zip(row).map(|(x, y)| x * y).sum())
    }

    /// Whether `a` is a non-negative integer combination of `cone`.
    ///
    /// Solved exactly over `Q` and checked for integrality and sign; the
    /// generators must be linearly independent so that the combination is unique.
    pub fn positive_cone_member(&self, a: &RelClass<'_>, cone: &[RelClass<'_>]) -> Result<bool, ClassError> {
        if a.is_zero() {
            return Ok(true);
        }
        let k = cone.len();
        let rows: Vec<Vec<i64>> = (0..self.rank()).map(|i| cone.iter().map(|g| g.coords[i]).collect()).collect();
        let rhs: Vec<Rational> = a.coords.iter().map(|&x| Rational::from_integer(x.into())).collect();
        match solve(&to_matrix(&rows), &rhs, k) {
            AffineSolution::Unique(x) => Ok(x.iter().all(|v| v.is_integer() && !v.is_negative())),
            AffineSolution::Inconsistent => Ok(false),
            AffineSolution::Family { .. } => Err(ClassError::DependentConeGenerators),
        }
    }
}

/// A class in a lattice, in basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelClass<'a> {
    lattice: &'a ClassLattice,
    coords: Vec<i64>,
}

impl<'a> RelClass<'a> {
    pub fn lattice(&self) -> &'a ClassLattice {
        self.lattice
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| *c == 0)
    }

    pub fn add(&self, other: &RelClass<'a>) -> RelClass<'a> {
        assert!(std::ptr::eq(self.lattice, other.lattice) || self.lattice == other.lattice);
        RelClass { lattice: self.lattice, coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, k: i64) -> RelClass<'a> {
        RelClass { lattice: self.lattice, coords: self.coords.iter().map(|a| a * k).collect() }
    }

    pub fn value(&self, functional: Functional) -> Result<FunctionalValue, ClassError> {
        let mut acc = FunctionalValue::zero_for(functional, self.lattice.fiber_dim);
        for (k, &c) in self.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let v = self.lattice.basis_value(functional, k).ok_or_else(|| ClassError::Undeclared {
                lattice: self.lattice.name.clone(),
                functional,
                class: self.to_string(),
            })?;
            acc = acc.add(&v.scale(c));
        }
        Ok(acc)
    }

    pub fn chern(&self) -> Result<i64, ClassError> {
        Ok(self.value(Functional::Chern)?.as_integer().unwrap())
    }

    /// Maslov index, twice the relative Chern number.
    pub fn maslov(&self) -> Result<i64, ClassError> {
        Ok(2 * self.chern()?)
    }

    pub fn area(&self) -> Result<AffineExponent, ClassError> {
        Ok(self.value(Functional::Area)?.as_affine().unwrap().clone())
    }

    pub fn boundary(&self) -> Result<Vec<i64>, ClassError> {
        Ok(self.value(Functional::Boundary)?.as_vector().unwrap().to_vec())
    }

    pub fn pair(&self, divisor: &str) -> Result<i64, ClassError> {
        self.lattice.pair(self, divisor)
    }
}

/// Basis combination, `D1 + D3 - 4*D4`; zero prints as `0`.
impl fmt::Display for RelClass<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (c, b) in self.coords.iter().zip(&self.lattice.basis) {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 {
                if out.is_empty() { "-" } else { " - " }
            } else if out.is_empty() {
                ""
            } else {
                " + "
            };
            let a = c.abs();
            if a == 1 {
                out.push_str(&format!("{sign}{b}"));
            } else {
                out.push_str(&format!("{sign}{a}*{b}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        write!(f, "{out}")
    }
}
