//! JSON document configuration. Rationals are strings such as `"2/3"`.

use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::classes::{
    euler_characteristic, ClassBook, ClassError, ClassLattice, ClassRef, GluingRule, LatticeDef, Puncture,
};
use crate::cyclotomic::{Cyclotomic, CyclotomicField};
use crate::novikov::NovikovElement;
use crate::parse::ParseError;
use crate::polytope::{AffineExponent, Facet, FiberPoint, MomentPolytope, PolytopeError};
use crate::potential::{PotentialError, PotentialFunction, PotentialTerm};
use crate::qh::{QHRing, QhError};
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("{section}: {message}")]
    Invalid { section: String, message: String },
}

impl ConfigError {
    fn invalid(section: &str, message: impl ToString) -> Self {
        ConfigError::Invalid { section: section.to_string(), message: message.to_string() }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocumentConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub coefficient_field: FieldConfig,
    pub fiber_dimension: usize,
    pub polytope: PolytopeConfig,
    #[serde(default)]
    pub potential: PotentialConfig,
    #[serde(default)]
    pub class_lattices: Vec<LatticeDef>,
    #[serde(default)]
    pub gluing_rules: Vec<GluingRule>,
    #[serde(default)]
    pub index_checks: Vec<IndexCheckConfig>,
    #[serde(default)]
    pub qh_ring: Option<QhConfig>,
    #[serde(default)]
    pub fiber_point: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    pub cyclotomic_order: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FacetConfig {
    pub normal: Vec<i64>,
    pub offset: String,
    #[serde(default)]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeConfig {
    pub facets: Vec<FacetConfig>,
    #[serde(default)]
    pub compact: bool,
    #[serde(default)]
    pub interior_point: Option<String>,
    /// Fibers over these points are singular, e.g. a Lagrangian `RP^2`.
    #[serde(default)]
    pub excluded_points: Vec<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    #[serde(default)]
    pub toric_counts: Vec<u64>,
    #[serde(default)]
    pub extra_terms: Vec<ExtraTermConfig>,
}

fn default_coefficient() -> String {
    "1".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtraTermConfig {
    pub count: u64,
    #[serde(default = "default_coefficient")]
    pub coefficient: String,
    pub exponent: String,
    pub monomial: Vec<i64>,
    #[serde(default)]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PunctureConfig {
    /// `"+"` or `"-"`
    pub sign: String,
    pub cz: i64,
    pub family_dim: i64,
}

/// Index arithmetic for one punctured curve.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexCheckConfig {
    pub name: String,
    /// Complex dimension of the ambient manifold.
    pub dimension: i64,
    #[serde(default)]
    pub genus: i64,
    #[serde(default)]
    pub boundary_components: i64,
    #[serde(default)]
    pub punctures: Vec<PunctureConfig>,
    #[serde(default)]
    pub even_punctures: i64,
    /// Chern term; may instead be read off a class after gluing.
    #[serde(default)]
    pub c1: Option<i64>,
    #[serde(default)]
    pub class: Option<ClassRef>,
    #[serde(default)]
    pub z_du: i64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QhConfig {
    /// Coefficients of the monic presentation polynomial, constant term first.
    pub coefficients: Vec<String>,
    #[serde(default)]
    pub roots: Option<Vec<String>>,
    #[serde(default)]
    pub binomial: bool,
}

/// An index check with its Chern term still to be resolved against classes.
#[derive(Debug, Clone)]
pub struct IndexCheck {
    pub name: String,
    pub dimension: i64,
    pub genus: i64,
    pub boundary_components: i64,
    pub punctures: Vec<Puncture>,
    pub even_punctures: i64,
    pub c1: Option<i64>,
    pub class: Option<ClassRef>,
    pub z_du: i64,
}

impl IndexCheck {
    pub fn euler_characteristic(&self) -> i64 {
        euler_characteristic(self.genus, self.punctures.len() as i64, self.boundary_components)
    }
}

#[derive(Debug, Clone)]
pub struct QhSetup {
    pub ring: QHRing,
    pub roots: Option<Vec<NovikovElement>>,
    pub binomial: bool,
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct Document {
    pub name: String,
    pub field: CyclotomicField,
    pub dim: usize,
    pub polytope: MomentPolytope,
    pub compact: bool,
    pub potential: PotentialFunction,
    pub classes: Option<ClassBook>,
    pub index_checks: Vec<IndexCheck>,
    pub qh: Option<QhSetup>,
    pub fiber_point: Option<FiberPoint>,
}

fn rational(section: &str, s: &str) -> Result<Rational, ConfigError> {
    parse_rational(s).ok_or_else(|| ConfigError::invalid(section, format!("`{s}` is not a rational p/q")))
}

pub fn fiber_point(section: &str, s: &str, dim: usize) -> Result<FiberPoint, ConfigError> {
    let p = FiberPoint::parse(s)
        .ok_or_else(|| ConfigError::invalid(section, format!("`{s}` is not a comma-separated list of rationals")))?;
    if p.dim() != dim {
        return Err(ConfigError::invalid(section, format!("`{s}` has {} coordinates, expected {dim}", p.dim())));
    }
    Ok(p)
}

fn parse_err(section: &str, e: ParseError) -> ConfigError {
    ConfigError::invalid(section, e)
}

fn polytope_err(e: PolytopeError) -> ConfigError {
    ConfigError::invalid("polytope", e)
}

fn potential_err(e: PotentialError) -> ConfigError {
    ConfigError::invalid("potential", e)
}

fn class_err(e: ClassError) -> ConfigError {
    ConfigError::invalid("class_lattices", e)
}

fn qh_err(e: QhError) -> ConfigError {
    ConfigError::invalid("qh_ring", e)
}

impl DocumentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }

    /// Checks the schema-level constraints and builds every domain object.
    pub fn validate(&self) -> Result<Document, ConfigError> {
        if self.coefficient_field.cyclotomic_order == 0 {
            return Err(ConfigError::invalid("coefficient_field", "cyclotomic_order must be positive"));
        }
        let field = CyclotomicField::new(self.coefficient_field.cyclotomic_order);
        let dim = self.fiber_dimension;
        if dim == 0 {
            return Err(ConfigError::invalid("fiber_dimension", "must be positive"));
        }

        let facets = self
            .polytope
            .facets
            .iter()
            .map(|f| Ok(Facet { normal: f.normal.clone(), offset: rational("polytope", &f.offset)?, label: f.label.clone() }))
            .collect::<Result<Vec<_>, ConfigError>>()?;
        let excluded = self
            .polytope
            .excluded_points
            .iter()
            .map(|p| fiber_point("polytope.excluded_points", p, dim))
            .collect::<Result<Vec<_>, _>>()?;
        let polytope = MomentPolytope::new(dim, facets).and_then(|p| p.with_excluded(excluded)).map_err(polytope_err)?;
        if self.polytope.compact {
            polytope.assert_compact().map_err(polytope_err)?;
        }
        if let Some(p) = &self.polytope.interior_point {
            let p = fiber_point("polytope.interior_point", p, dim)?;
            if !polytope.is_interior(&p).map_err(polytope_err)? {
                return Err(polytope_err(PolytopeError::BadInteriorPoint));
            }
        }

        let mut extra = Vec::new();
        for t in &self.potential.extra_terms {
            let coefficient = parse_coefficient(&t.coefficient, &field)?;
            let exponent = AffineExponent::parse(&t.exponent, dim).map_err(|e| parse_err("potential.extra_terms", e))?;
            let mut term = PotentialTerm::new(t.count, coefficient, exponent, t.monomial.clone());
            term.label = t.label.clone();
            extra.push(term);
        }
        let potential = PotentialFunction::build(&polytope, &self.potential.toric_counts, extra, &field)
            .map_err(potential_err)?;

        let classes = if self.class_lattices.is_empty() && self.gluing_rules.is_empty() {
            None
        } else {
            let lattices = self
                .class_lattices
                .iter()
                .map(|d| ClassLattice::new(d, dim))
                .collect::<Result<Vec<_>, _>>()
                .map_err(class_err)?;
            Some(ClassBook::new(lattices, self.gluing_rules.clone()).map_err(class_err)?)
        };

        let mut index_checks = Vec::new();
        for c in &self.index_checks {
            let punctures = c
                .punctures
                .iter()
                .map(|p| match p.sign.as_str() {
                    "+" => Ok(Puncture::positive(p.cz, p.family_dim)),
                    "-" => Ok(Puncture::negative(p.cz, p.family_dim)),
                    other => Err(ConfigError::invalid("index_checks", format!("puncture sign `{other}` is not + or -"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            if c.c1.is_none() && c.class.is_none() {
                return Err(ConfigError::invalid("index_checks", format!("`{}` needs c1 or class", c.name)));
            }
            if let Some(r) = &c.class {
                let book = classes
                    .as_ref()
                    .ok_or_else(|| ConfigError::invalid("index_checks", "class reference without class_lattices"))?;
                book.lattice(&r.lattice).and_then(|l| l.class(&r.class)).map_err(class_err)?;
            }
            index_checks.push(IndexCheck {
                name: c.name.clone(),
                dimension: c.dimension,
                genus: c.genus,
                boundary_components: c.boundary_components,
                punctures,
                even_punctures: c.even_punctures,
                c1: c.c1,
                class: c.class.clone(),
                z_du: c.z_du,
            });
        }

        let qh = match &self.qh_ring {
            None => None,
            Some(q) => {
                let coeffs = q
                    .coefficients
                    .iter()
                    .map(|c| NovikovElement::parse(c, &field).map_err(|e| parse_err("qh_ring.coefficients", e)))
                    .collect::<Result<Vec<_>, _>>()?;
                let ring = QHRing::new(coeffs).map_err(qh_err)?;
                let roots = match &q.roots {
                    Some(rs) => Some(
                        rs.iter()
                            .map(|c| NovikovElement::parse(c, &field).map_err(|e| parse_err("qh_ring.roots", e)))
                            .collect::<Result<Vec<_>, _>>()?,
                    ),
                    None => None,
                };
                if roots.is_some() && q.binomial {
                    return Err(ConfigError::invalid("qh_ring", "give either roots or binomial, not both"));
                }
                Some(QhSetup { ring, roots, binomial: q.binomial })
            }
        };

        let fiber_point = self.fiber_point.as_deref().map(|p| fiber_point("fiber_point", p, dim)).transpose()?;
        Ok(Document {
            name: self.name.clone().unwrap_or_else(|| "document".into()),
            field,
            dim,
            polytope,
            compact: self.polytope.compact,
            potential,
            classes,
            index_checks,
            qh,
            fiber_point,
        })
    }
}

/// A field element written in the Novikov grammar without `T`.
fn parse_coefficient(s: &str, field: &CyclotomicField) -> Result<Cyclotomic, ConfigError> {
    let e = NovikovElement::parse(s, field).map_err(|e| parse_err("potential.extra_terms", e))?;
    if e.is_zero() {
        return Ok(field.zero());
    }
    e.as_constant()
        .ok_or_else(|| ConfigError::invalid("potential.extra_terms", format!("coefficient `{s}` involves T")))
}

pub fn load_document(path: &Path) -> Result<Document, ConfigError> {
    DocumentConfig::load(path)?.validate()
}

pub fn parse_document(text: &str) -> Result<Document, ConfigError> {
    DocumentConfig::from_json(text)?.validate()
}
