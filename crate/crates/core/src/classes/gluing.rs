//! Formal gluing of classes across a cut: functionals are additive.

use std::collections::BTreeMap;

use serde::Deserialize;

use super::{parse_class_expr, ClassError, ClassLattice, Functional, FunctionalValue};

fn one() -> i64 {
    1
}

/// A class expression in a named lattice.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct ClassRef {
    pub lattice: String,
    pub class: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GluingPiece {
    pub lattice: String,
    pub class: String,
    #[serde(default = "one")]
    pub multiplicity: i64,
}

/// `Σ mᵢ·pieceᵢ = m·result`, read as additivity of every functional.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GluingRule {
    pub name: String,
    pub pieces: Vec<GluingPiece>,
    pub result: GluingPiece,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceValue {
    pub lattice: String,
    /// Normalized basis expression.
    pub class: String,
    pub multiplicity: i64,
    pub value: FunctionalValue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlueSolution {
    pub rule: String,
    pub functional: Functional,
    pub pieces: Vec<PieceValue>,
    pub result: PieceValue,
    /// Basis value forced by the rule, as (lattice, basis label, value).
    pub derived: Option<(String, String, FunctionalValue)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GlueEvent {
    Derived(GlueSolution),
    Checked(GlueSolution),
    Unresolved { rule: String, functional: Functional, unknowns: usize },
}

/// A collection of lattices linked by gluing rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassBook {
    lattices: BTreeMap<String, ClassLattice>,
    rules: Vec<GluingRule>,
}

impl ClassBook {
    pub fn new(lattices: Vec<ClassLattice>, rules: Vec<GluingRule>) -> Result<Self, ClassError> {
        let mut map = BTreeMap::new();
        for l in lattices {
            let name = l.name().to_string();
            if map.insert(name.clone(), l).is_some() {
                return Err(ClassError::Duplicate { lattice: name.clone(), label: name });
            }
        }
        let book = ClassBook { lattices: map, rules };
        let mut names = std::collections::BTreeSet::new();
        for rule in &book.rules {
            if !names.insert(&rule.name) {
                return Err(ClassError::Duplicate { lattice: "gluing rules".into(), label: rule.name.clone() });
            }
            for piece in rule.pieces.iter().chain(std::iter::once(&rule.result)) {
                book.lattice(&piece.lattice)?.class(&piece.class)?;
            }
        }
        Ok(book)
    }

    pub fn lattice(&self, name: &str) -> Result<&ClassLattice, ClassError> {
        self.lattices.get(name).ok_or_else(|| ClassError::UnknownLattice(name.to_string()))
    }

    pub fn lattices(&self) -> impl Iterator<Item = &ClassLattice> {
        self.lattices.values()
    }

    pub fn rules(&self) -> &[GluingRule] {
        &self.rules
    }

    pub fn rule(&self, name: &str) -> Option<&GluingRule> {
        self.rules.iter().find(|r| r.name == name)
    }

    /// Applies additivity of `functional` across `rule`.
    ///
    /// With every basis value known this is a consistency check. A single
    /// unknown basis value is solved for; Maslov indices are glued through
    /// the Chern number so that parity is enforced.
    pub fn glue(&self, rule: &GluingRule, functional: Functional) -> Result<GlueSolution, ClassError> {
        let working = if functional == Functional::Maslov { Functional::Chern } else { functional };
        let dim = self.lattices.values().next().map_or(0, |l| l.fiber_dim());
        let mut known = FunctionalValue::zero_for(working, dim);
        let mut unknown: BTreeMap<(String, usize), i64> = BTreeMap::new();
        let sides = rule
            .pieces
            .iter()
            .map(|p| (p, p.multiplicity))
            .chain(std::iter::once((&rule.result, -rule.result.multiplicity)));
        for (piece, m) in sides {
            let lattice = self.lattice(&piece.lattice)?;
            let class = lattice.normalize(&parse_class_expr(&piece.class)?)?;
            for (k, &c) in class.coords().iter().enumerate() {
                if c == 0 {
                    continue;
                }
                match lattice.basis_value(working, k) {
                    Some(v) => known = known.add(&v.scale(c * m)),
                    None => *unknown.entry((piece.lattice.clone(), k)).or_insert(0) += c * m,
                }
            }
        }
        unknown.retain(|_, c| *c != 0);

        let mut book = self.clone();
        let derived = match unknown.len() {
            0 => {
                if !known.is_zero() {
                    return Err(ClassError::InconsistentGluing {
                        rule: rule.name.clone(),
                        functional,
                        residual: known.to_string(),
                    });
                }
                None
            }
            1 => {
                let ((lname, k), coef) = unknown.into_iter().next().unwrap();
                let value = known.scale(-1).div_exact(coef).ok_or_else(|| ClassError::NotDivisible {
                    rule: rule.name.clone(),
                    functional,
                    value: known.scale(-1).to_string(),
                    divisor: coef,
                })?;
                let lattice = book.lattices.get_mut(&lname).unwrap();
                lattice.set_basis_value(working, k, value);
                let label = lattice.basis()[k].clone();
                let reported = lattice.basis_value(functional, k).unwrap();
                Some((lname, label, reported))
            }
            n => {
                return Err(ClassError::UnderdeterminedGluing { rule: rule.name.clone(), functional, unknowns: n })
            }
        };

        let evaluate = |piece: &GluingPiece| -> Result<PieceValue, ClassError> {
            let lattice = book.lattice(&piece.lattice)?;
            let class = lattice.class(&piece.class)?;
            Ok(PieceValue {
                lattice: piece.lattice.clone(),
                class: class.to_string(),
                multiplicity: piece.multiplicity,
                value: class.value(functional)?,
            })
        };
        Ok(GlueSolution {
            rule: rule.name.clone(),
            functional,
            pieces: rule.pieces.iter().map(evaluate).collect::<Result<_, _>>()?,
            result: evaluate(&rule.result)?,
            derived,
        })
    }

    /// Records a derived basis value.
    pub fn apply(&mut self, solution: &GlueSolution) -> Result<(), ClassError> {
        if let Some((lname, label, value)) = &solution.derived {
            let lattice = self.lattices.get_mut(lname).ok_or_else(|| ClassError::UnknownLattice(lname.clone()))?;
            let k = lattice.basis().iter().position(|b| b == label).expect("derived label is a basis class");
            let (working, value) = match solution.functional {
                Functional::Maslov => (Functional::Chern, value.div_exact(2).expect("maslov value is even")),
                f => (f, value.clone()),
            };
            lattice.set_basis_value(working, k, value);
        }
        Ok(())
    }

    /// Runs every rule until no new value can be derived.
    ///
    /// Rules that stay underdetermined are reported as unresolved; an
    /// inconsistent rule aborts with its residual.
    pub fn propagate(&self, functional: Functional) -> Result<(ClassBook, Vec<GlueEvent>), ClassError> {
        let mut book = self.clone();
        let mut events = Vec::new();
        let mut done = vec![false; self.rules.len()];
        loop {
            let mut progress = false;
            for (i, rule) in self.rules.iter().enumerate() {
                if done[i] {
                    continue;
                }
                match book.glue(rule, functional) {
                    Ok(sol) => {
                        done[i] = true;
                        progress = true;
                        if sol.derived.is_some() {
                            book.apply(&sol)?;
                            events.push(GlueEvent::Derived(sol));
                        } else {
                            events.push(GlueEvent::Checked(sol));
                        }
                    }
                    Err(ClassError::UnderdeterminedGluing { .. }) | Err(ClassError::Undeclared { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
            if !progress {
                break;
            }
        }
        for (i, rule) in self.rules.iter().enumerate() {
            if !done[i] {
                match book.glue(rule, functional) {
                    Err(ClassError::UnderdeterminedGluing { unknowns, .. }) => {
                        events.push(GlueEvent::Unresolved { rule: rule.name.clone(), functional, unknowns })
                    }
                    Err(e) => return Err(e),
                    Ok(_) => unreachable!("rule became solvable after the fixpoint"),
                }
            }
        }
        Ok((book, events))
    }
}
