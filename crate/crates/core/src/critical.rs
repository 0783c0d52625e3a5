//! Exact critical points of a potential at a balanced fiber.
//!
//! After dividing out the common power of `T`, the critical equations are
//! Laurent polynomials over the coefficient field. They are solved by
//! repeatedly taking binomial equations, diagonalizing their exponent lattice
//! with a Smith normal form, and branching over the roots this produces.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::cyclotomic::{Cyclotomic, CyclotomicField};
use crate::novikov::{NovikovElement, NovikovError};
use crate::poly::UniPoly;
use crate::polytope::FiberPoint;
use crate::potential::{render_monomial, render_sum, PotentialError, PotentialFunction};
use crate::rational::fraction_string;
use crate::snf::{smith, unimodular_inverse};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriticalError {
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Novikov(#[from] NovikovError),
    #[error("fiber is not balanced: partial {index} has terms of valuations {}", valuations.join(", "))]
    NonBalanced { index: usize, valuations: Vec<String> },
    #[error("solver produced a point that fails verification: {0}")]
    Unsound(String),
}

/// Laurent polynomial in `y1..yn` with field coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloLaurent {
    n: usize,
    field: CyclotomicField,
    terms: BTreeMap<Vec<i64>, Cyclotomic>,
}

impl CycloLaurent {
    pub fn zero(n: usize, field: &CyclotomicField) -> Self {
        CycloLaurent { n, field: field.clone(), terms: BTreeMap::new() }
    }

    pub fn from_terms(n: usize, field: &CyclotomicField, terms: impl IntoIterator<Item = (Vec<i64>, Cyclotomic)>) -> Self {
        let mut out = Self::zero(n, field);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn add_term(&mut self, monomial: Vec<i64>, coeff: Cyclotomic) {
        assert_eq!(monomial.len(), self.n);
        let sum = match self.terms.get(&monomial) {
            Some(c) => c + &coeff,
            None => coeff,
        };
        if sum.is_zero() {
            self.terms.remove(&monomial);
        } else {
            self.terms.insert(monomial, sum);
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, Cyclotomic> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, y: &[Cyclotomic]) -> Option<Cyclotomic> {
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (yi, &e) in y.iter().zip(m) {
                t = &t * &yi.pow(e)?;
            }
            acc = &acc + &t;
        }
        Some(acc)
    }

    /// Replaces each monomial `a` by `c(a)·w^{a'}` in a new set of variables.
    fn transform(&self, new_n: usize, f: impl Fn(&[i64]) -> (Cyclotomic, Vec<i64>)) -> Self {
        let mut out = Self::zero(new_n, &self.field);
        for (m, c) in &self.terms {
            let (k, m2) = f(m);
            out.add_term(m2, c * &k);
        }
        out
    }
}

/// Highest monomial first, `1 - 4*y2^-3 - 4*y1^-1*y2^-5`.
impl fmt::Display for CycloLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_sum(self.terms.iter().rev().map(|(m, c)| (c, render_monomial(m)))))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalSystem {
    pub n: usize,
    pub field: CyclotomicField,
    pub equations: Vec<CycloLaurent>,
}

impl CriticalSystem {
    pub fn is_satisfied_by(&self, y: &[Cyclotomic]) -> bool {
        y.len() == self.n && self.equations.iter().all(|e| e.eval(y).is_some_and(|v| v.is_zero()))
    }
}

/// The critical equations at `u`, each divided by its common power of `T`.
pub fn leading_system(pf: &PotentialFunction, u: &FiberPoint) -> Result<CriticalSystem, CriticalError> {
    pf.evaluate_at(u)?;
    let mut equations = Vec::new();
    for (i, d) in pf.partials().iter().enumerate() {
        let ev = d.evaluate(u);
        let mut vals: Vec<_> = ev.terms().iter().map(|t| t.exponent.clone()).collect();
        vals.sort();
        vals.dedup();
        if vals.len() > 1 {
            return Err(CriticalError::NonBalanced { index: i + 1, valuations: vals.iter().map(fraction_string).collect() });
        }
        equations.push(CycloLaurent::from_terms(
            pf.dim(),
            pf.field(),
            ev.terms().iter().map(|t| (t.monomial.clone(), t.coeff.clone())),
        ));
    }
    Ok(CriticalSystem { n: pf.dim(), field: pf.field().clone(), equations })
}

/// Whether `y` is a critical point of the potential at `u`, exactly.
pub fn verify_point(pf: &PotentialFunction, u: &FiberPoint, y: &[Cyclotomic]) -> Result<bool, CriticalError> {
    if y.iter().any(|c| c.is_zero()) {
        return Ok(false);
    }
    for d in pf.partials() {
        if !d.evaluate(u).substitute(y)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One root choice `(y^monomial)^degree = ...`, resolved to `y^monomial = value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchChoice {
    pub monomial: Vec<i64>,
    pub degree: i64,
    pub value: Cyclotomic,
    pub root_index: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BranchLabel(pub Vec<BranchChoice>);

impl fmt::Display for BranchLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "(root)");
        }
        let parts: Vec<String> =
            self.0.iter().map(|c| format!("{} = {}", render_monomial(&c.monomial), c.value)).collect();
        write!(f, "{}", parts.join("; "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalPoint {
    pub y: Vec<Cyclotomic>,
    pub branch: BranchLabel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmptyReason {
    /// Substitution left a nonzero constant equation.
    ResidualConstant(Cyclotomic),
    /// A single nonzero monomial cannot vanish on units.
    MonomialEquation(String),
    /// A combination of binomials forces `1 = value`.
    InconsistentRelations { monomial: Vec<i64>, value: Cyclotomic },
    /// The univariate equations have no common factor.
    CoprimeEliminants,
}

impl fmt::Display for EmptyReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EmptyReason::ResidualConstant(c) => write!(f, "residual constant {c} != 0"),
            EmptyReason::MonomialEquation(e) => write!(f, "monomial equation {e} = 0"),
            EmptyReason::InconsistentRelations { monomial, value } => {
                write!(f, "relations force {} = 1 and = {value}", render_monomial(monomial))
            }
            EmptyReason::CoprimeEliminants => write!(f, "univariate equations have no common root"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmptyBranch {
    pub branch: BranchLabel,
    pub reason: EmptyReason,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnresolvedKind {
    /// A univariate equation in `w = y^variable` with at least three terms.
    Eliminant { variable: Vec<i64>, polynomial: String, degree: usize },
    /// Several variables remain and no equation is a binomial.
    Multivariate { variables: usize, equations: Vec<String> },
    /// Equations are exhausted with free variables left.
    PositiveDimensional { dimension: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unresolved {
    pub branch: BranchLabel,
    pub kind: UnresolvedKind,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Branch nodes visited, including leaves.
    pub nodes: usize,
    /// `(relation orders, children)` for every binomial substitution performed.
    pub substitutions: Vec<(Vec<i64>, usize)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveReport {
    pub points: Vec<CriticalPoint>,
    pub empty: Vec<EmptyBranch>,
    pub unresolved: Vec<Unresolved>,
    pub stats: SolveStats,
}

impl SolveReport {
    pub fn leaves(&self) -> usize {
        self.points.len() + self.empty.len() + self.unresolved.len()
    }
}

struct Branch {
    /// Current variable count.
    k: usize,
    equations: Vec<CycloLaurent>,
    /// `y_i = y_const[i] * w^{y_exp[i]}`
    y_const: Vec<Cyclotomic>,
    y_exp: Vec<Vec<i64>>,
    /// Each current variable as a Laurent monomial in the original `y`.
    var_in_y: Vec<Vec<i64>>,
    label: Vec<BranchChoice>,
}

fn combine(rows: &[Vec<i64>], weights: &[i64]) -> Vec<i64> {
    let width = rows.first().map_or(0, |r| r.len());
    let mut out = vec![0; width];
    for (r, &w) in rows.iter().zip(weights) {
        for (o, x) in out.iter_mut().zip(r) {
            *o += w * x;
        }
    }
    out
}

pub fn solve(system: &CriticalSystem) -> Result<SolveReport, CriticalError> {
    let n = system.n;
    let field = &system.field;
    let identity: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let root = Branch {
        k: n,
        equations: system.equations.clone(),
        y_const: vec![field.one(); n],
        y_exp: identity.clone(),
        var_in_y: identity,
        label: Vec::new(),
    };
    let mut report = SolveReport::default();
    solve_branch(system, root, &mut report)?;
    Ok(report)
}

fn solve_branch(system: &CriticalSystem, mut b: Branch, report: &mut SolveReport) -> Result<(), CriticalError> {
    report.stats.nodes += 1;
    let field = &system.field;
    b.equations.retain(|e| !e.is_empty());
    let label = || BranchLabel(b.label.clone());
    for e in &b.equations {
        if e.len() == 1 {
            let (m, c) = e.terms().iter().next().unwrap();
            let reason = if m.iter().all(|x| *x == 0) {
                EmptyReason::ResidualConstant(c.clone())
            } else {
                EmptyReason::MonomialEquation(e.to_string())
            };
            report.empty.push(EmptyBranch { branch: label(), reason });
            return Ok(());
        }
    }
    if b.equations.is_empty() {
        if b.k > 0 {
            report.unresolved.push(Unresolved { branch: label(), kind: UnresolvedKind::PositiveDimensional { dimension: b.k } });
            return Ok(());
        }
        let point = CriticalPoint { y: b.y_const.clone(), branch: label() };
        if !system.is_satisfied_by(&point.y) {
            let coords: Vec<String> = point.y.iter().map(|c| c.to_string()).collect();
            return Err(CriticalError::Unsound(coords.join(", ")));
        }
        report.points.push(point);
        return Ok(());
    }

    let binomials: Vec<&CycloLaurent> = b.equations.iter().filter(|e| e.len() == 2).collect();
    if !binomials.is_empty() {
        return binomial_step(system, b, report);
    }

    if b.k == 1 {
        // common factor of the univariate equations, with powers of w removed
        let polys: Vec<UniPoly<Cyclotomic>> = b.equations.iter().map(|e| to_unipoly(e, field)).collect();
        let mut g = polys[0].clone();
        for p in &polys[1..] {
            g = g.gcd(p);
        }
        let start = g.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0);
        let g = UniPoly::new(g.coeffs()[start..].to_vec(), field.zero());
        let degree = g.degree().unwrap_or(0);
        if degree == 0 {
            report.empty.push(EmptyBranch { branch: label(), reason: EmptyReason::CoprimeEliminants });
            return Ok(());
        }
        let eq = CycloLaurent::from_terms(1, field, g.coeffs().iter().enumerate().map(|(i, c)| (vec![i as i64], c.clone())));
        if eq.len() == 2 {
            b.equations = vec![eq];
            return solve_branch(system, b, report);
        }
        report.unresolved.push(Unresolved {
            branch: label(),
            kind: UnresolvedKind::Eliminant {
                variable: b.var_in_y[0].clone(),
                polynomial: eq.to_string().replace("y1", "w"),
                degree,
            },
        });
        return Ok(());
    }

    report.unresolved.push(Unresolved {
        branch: label(),
        kind: UnresolvedKind::Multivariate { variables: b.k, equations: b.equations.iter().map(|e| e.to_string()).collect() },
    });
    Ok(())
}

fn to_unipoly(e: &CycloLaurent, field: &CyclotomicField) -> UniPoly<Cyclotomic> {
    let low = e.terms().keys().map(|m| m[0]).min().unwrap_or(0);
    let high = e.terms().keys().map(|m| m[0]).max().unwrap_or(0);
    let mut coeffs = vec![field.zero(); (high - low + 1) as usize];
    for (m, c) in e.terms() {
        coeffs[(m[0] - low) as usize] = c.clone();
    }
    UniPoly::new(coeffs, field.zero())
}

fn binomial_step(system: &CriticalSystem, b: Branch, report: &mut SolveReport) -> Result<(), CriticalError> {
    let field = &system.field;
    let k = b.k;
    // y^{a-b} = -c_b / c_a for each binomial c_a y^a + c_b y^b
    let mut rows = Vec::new();
    let mut kappa = Vec::new();
    for e in b.equations.iter().filter(|e| e.len() == 2) {
        let mut it = e.terms().iter();
        let (mb, cb) = it.next().unwrap();
        let (ma, ca) = it.next().unwrap();
        rows.push(ma.iter().zip(mb).map(|(x, y)| x - y).collect::<Vec<i64>>());
        kappa.push(-&(cb * &ca.inv().expect("nonzero coefficient")));
    }
    let snf = smith(&rows);
    let s = snf.invariants.len();
    let v_inv = unimodular_inverse(&snf.v);
    let label = || BranchLabel(b.label.clone());

    // kappa'_l = prod_j kappa_j^{U_lj}
    let kappa_prime: Vec<Cyclotomic> = snf
        .u
        .iter()
        .map(|urow| {
            urow.iter().zip(&kappa).fold(field.one(), |acc, (&e, kj)| &acc * &kj.pow(e).expect("nonzero"))
        })
        .collect();
    for l in s..rows.len() {
        if !kappa_prime[l].is_one() {
            let monomial = combine(&rows, &snf.u[l]);
            let monomial = combine(&b.var_in_y, &monomial);
            report.empty.push(EmptyBranch {
                branch: label(),
                reason: EmptyReason::InconsistentRelations { monomial, value: kappa_prime[l].clone() },
            });
            return Ok(());
        }
    }

    // z_l as monomials in y
    let z_in_y: Vec<Vec<i64>> = v_inv.iter().map(|row| combine(&b.var_in_y, row)).collect();

    let mut choices: Vec<Vec<Cyclotomic>> = Vec::new();
    for l in 0..s {
        let d = snf.invariants[l];
        match NovikovElement::constant(kappa_prime[l].clone()).kth_roots(d as u32) {
            Ok(roots) => choices.push(roots.iter().map(|r| r.as_constant().expect("root of a constant")).collect()),
            Err(NovikovError::UnsupportedShape(_) | NovikovError::NoScaledRoot(_)) => {
                let w = CycloLaurent::from_terms(1, field, [(vec![d], field.one()), (vec![0], -&kappa_prime[l])]);
                report.unresolved.push(Unresolved {
                    branch: label(),
                    kind: UnresolvedKind::Eliminant {
                        variable: z_in_y[l].clone(),
                        polynomial: w.to_string().replace("y1", "w"),
                        degree: d as usize,
                    },
                });
                return Ok(());
            }
            Err(e) => return Err(e.into()),
        }
    }
    let children: usize = choices.iter().map(|c| c.len()).product();
    report.stats.substitutions.push((snf.invariants.clone(), children));
    let new_k = k - s;
    // a -> a V
    let a_times_v = |a: &[i64]| -> Vec<i64> { (0..k).map(|c| (0..k).map(|i| a[i] * snf.v[i][c]).sum()).collect() };

    let mut index = vec![0usize; s];
    loop {
        let roots: Vec<&Cyclotomic> = (0..s).map(|l| &choices[l][index[l]]).collect();
        let subst = |a: &[i64]| -> (Cyclotomic, Vec<i64>) {
            let av = a_times_v(a);
            let c = (0..s).fold(field.one(), |acc, l| &acc * &roots[l].pow(av[l]).expect("nonzero root"));
            (c, av[s..].to_vec())
        };
        let mut label = b.label.clone();
        for l in 0..s {
            label.push(BranchChoice {
                monomial: z_in_y[l].clone(),
                degree: snf.invariants[l],
                value: roots[l].clone(),
                root_index: index[l],
            });
        }
        let mut y_const = Vec::new();
        let mut y_exp = Vec::new();
        for (c, e) in b.y_const.iter().zip(&b.y_exp) {
            let (k2, e2) = subst(e);
            y_const.push(c * &k2);
            y_exp.push(e2);
        }
        let child = Branch {
            k: new_k,
            equations: b.equations.iter().map(|e| e.transform(new_k, &subst)).collect(),
            y_const,
            y_exp,
            var_in_y: z_in_y[s..].to_vec(),
            label,
        };
        solve_branch(system, child, report)?;

        // odometer over root indices, last relation fastest
        let mut pos = s;
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            index[pos] += 1;
            if index[pos] < choices[pos].len() {
                break;
            }
            index[pos] = 0;
        }
    }
}
