//! Concept relaxations and retractions, lifted to sentences and theories.

mod operators;

use std::collections::BTreeMap;
use std::fmt;

pub use operators::{
    dalal, dalal_body, prefix_exceptions, quantifier_swap, relax_elu, relax_exceptions, relax_tree,
    retract_exceptions, trivial_op, Direction, TreeVariant,
};

use crate::concept::Concept;
use crate::error::{Error, Result};
use crate::kb::{KnowledgeBase, RoleRef, Sentence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OperatorId {
    RhoTop,
    RhoDepth,
    RhoLeaves,
    RhoE,
    RhoExceptions,
    RhoDalal,
    RhoUnion,
    RhoQ,
    KappaBot,
    KappaExceptions,
    KappaDalal,
    KappaCap,
    KappaQ,
}

impl OperatorId {
    pub const ALL: [OperatorId; 13] = [
        OperatorId::RhoTop,
        OperatorId::RhoDepth,
        OperatorId::RhoLeaves,
        OperatorId::RhoE,
        OperatorId::RhoExceptions,
        OperatorId::RhoDalal,
        OperatorId::RhoUnion,
        OperatorId::RhoQ,
        OperatorId::KappaBot,
        OperatorId::KappaExceptions,
        OperatorId::KappaDalal,
        OperatorId::KappaCap,
        OperatorId::KappaQ,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OperatorId::RhoTop => "rho_top",
            OperatorId::RhoDepth => "rho_depth",
            OperatorId::RhoLeaves => "rho_leaves",
            OperatorId::RhoE => "rho_e",
            OperatorId::RhoExceptions => "rho_exceptions",
            OperatorId::RhoDalal => "rho_dalal",
            OperatorId::RhoUnion => "rho_union",
            OperatorId::RhoQ => "rho_q",
            OperatorId::KappaBot => "kappa_bot",
            OperatorId::KappaExceptions => "kappa_exceptions",
            OperatorId::KappaDalal => "kappa_dalal",
            OperatorId::KappaCap => "kappa_cap",
            OperatorId::KappaQ => "kappa_q",
        }
    }

    pub fn parse(s: &str) -> Option<OperatorId> {
        OperatorId::ALL.into_iter().find(|id| id.as_str() == s)
    }

    pub fn direction(self) -> Direction {
        if self.as_str().starts_with("rho_") {
            Direction::Relax
        } else {
            Direction::Retract
        }
    }

    pub fn uses_exceptions(self) -> bool {
        matches!(
            self,
            OperatorId::RhoExceptions | OperatorId::RhoUnion | OperatorId::KappaExceptions | OperatorId::KappaCap
        )
    }
}

impl fmt::Display for OperatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A concept operator with its parameters.
///
/// Exception-based operators read the degree `k` directly as the number of
/// exceptions; all other operators are iterated `k` times.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConceptOperator {
    id: OperatorId,
    exceptions: Vec<Concept>,
}

impl ConceptOperator {
    pub fn new(id: OperatorId, exceptions: Vec<Concept>) -> Result<Self> {
        if id.uses_exceptions() && exceptions.is_empty() {
            return Err(Error::Invalid(format!("operator {id} needs a nonempty exception list")));
        }
        Ok(ConceptOperator { id, exceptions })
    }

    pub fn simple(id: OperatorId) -> Self {
        ConceptOperator::new(id, Vec::new()).expect("operator without exceptions")
    }

    pub fn id(&self) -> OperatorId {
        self.id
    }

    pub fn direction(&self) -> Direction {
        self.id.direction()
    }

    pub fn exceptions(&self) -> &[Concept] {
        &self.exceptions
    }

    /// The degree-`k` operator; `eligibility` decides the side conditions
    /// of exception-based operators.
    pub fn apply(&self, c: &Concept, k: usize, eligibility: &KnowledgeBase) -> Result<Concept> {
        let e = &self.exceptions;
        match self.id {
            OperatorId::RhoExceptions => relax_exceptions(c, e, k, eligibility),
            OperatorId::KappaExceptions => retract_exceptions(c, e, k, eligibility),
            OperatorId::RhoUnion => prefix_exceptions(c, e, k, Direction::Relax, eligibility),
            OperatorId::KappaCap => prefix_exceptions(c, e, k, Direction::Retract, eligibility),
            _ => {
                let mut cur = c.clone();
                for _ in 0..k {
                    let next = self.step(&cur)?;
                    if next == cur {
                        break;
                    }
                    cur = next;
                }
                Ok(cur)
            }
        }
    }

    fn step(&self, c: &Concept) -> Result<Concept> {
        match self.id {
            OperatorId::RhoTop => Ok(trivial_op(c, Direction::Relax)),
            OperatorId::KappaBot => Ok(trivial_op(c, Direction::Retract)),
            OperatorId::RhoDepth => relax_tree(c, TreeVariant::Depth),
            OperatorId::RhoLeaves => relax_tree(c, TreeVariant::Leaves),
            OperatorId::RhoE => relax_elu(c),
            OperatorId::RhoDalal => dalal(c, Direction::Relax),
            OperatorId::KappaDalal => dalal(c, Direction::Retract),
            OperatorId::RhoQ => rho_q_step(c),
            OperatorId::KappaQ => kappa_q_step(c),
            _ => unreachable!("exception operators are not iterated"),
        }
    }
}

impl fmt::Display for ConceptOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id)?;
        if !self.exceptions.is_empty() {
            let es: Vec<String> = self.exceptions.iter().map(|c| c.to_string()).collect();
            write!(f, "[{}]", es.join(", "))?;
        }
        Ok(())
    }
}

/// Swap step applied to each disjunct; prefix concepts without a universal
/// quantifier take a Dalal step instead.
fn rho_q_step(c: &Concept) -> Result<Concept> {
    match crate::normal::to_prefix_form(c) {
        Ok(pf) if pf.prefix.iter().any(|(q, _)| *q == crate::normal::Quantifier::Forall) => {
            quantifier_swap(c, Direction::Relax)
        }
        Ok(_) => dalal(c, Direction::Relax),
        Err(e) => match c {
            Concept::Or(cs) => Ok(Concept::or(cs.iter().map(rho_q_step).collect::<Result<Vec<_>>>()?)),
            _ => Err(e),
        },
    }
}

fn kappa_q_step(c: &Concept) -> Result<Concept> {
    match quantifier_swap(c, Direction::Retract) {
        Ok(r) => Ok(r),
        Err(e) => match c {
            Concept::And(cs) => Ok(Concept::and(cs.iter().map(kappa_q_step).collect::<Result<Vec<_>>>()?)),
            _ => Err(e),
        },
    }
}

/// Where a formula relaxation acts on a GCI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormulaRelaxMode {
    /// `C ⊑ ρ(D)`, with a relaxation.
    RelaxRhs,
    /// `κ(C) ⊑ D`, with a retraction.
    RetractLhs,
}

impl FormulaRelaxMode {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "rhs" | "relax_rhs" => Some(FormulaRelaxMode::RelaxRhs),
            "lhs" | "retract_lhs" => Some(FormulaRelaxMode::RetractLhs),
            _ => None,
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            FormulaRelaxMode::RelaxRhs => Direction::Relax,
            FormulaRelaxMode::RetractLhs => Direction::Retract,
        }
    }
}

impl fmt::Display for FormulaRelaxMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormulaRelaxMode::RelaxRhs => "rhs",
            FormulaRelaxMode::RetractLhs => "lhs",
        })
    }
}

/// Relaxation degrees per sentence index.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreeMap(BTreeMap<usize, u32>);

impl DegreeMap {
    pub fn zeros(indices: impl IntoIterator<Item = usize>) -> Self {
        DegreeMap(indices.into_iter().map(|i| (i, 0)).collect())
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        DegreeMap(pairs.into_iter().collect())
    }

    pub fn get(&self, index: usize) -> u32 {
        self.0.get(&index).copied().unwrap_or(0)
    }

    pub fn set(&mut self, index: usize, k: u32) {
        self.0.insert(index, k);
    }

    pub fn total(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|(&i, &k)| (i, k))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.keys().copied()
    }

    pub fn values(&self) -> Vec<u32> {
        self.0.values().copied().collect()
    }
}

impl fmt::Display for DegreeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.0.values().map(|k| k.to_string()).collect();
        write!(f, "{{{}}}", vs.join(","))
    }
}

/// `k`-fold formula relaxation. Role assertions become `TopRole` facts for
/// any `k ≥ 1`. In `RetractLhs` mode concept assertions, which have no
/// left-hand side, are relaxed with `ρ_⊤`.
pub fn relax_formula(
    s: &Sentence,
    mode: FormulaRelaxMode,
    op: &ConceptOperator,
    k: usize,
    eligibility: &KnowledgeBase,
) -> Result<Sentence> {
    if op.direction() != mode.direction() {
        return Err(Error::Invalid(format!("operator {} does not match mode {mode}", op.id())));
    }
    if k == 0 {
        return Ok(s.clone());
    }
    Ok(match (s, mode) {
        (Sentence::Gci(c, d), FormulaRelaxMode::RelaxRhs) => Sentence::Gci(c.clone(), op.apply(d, k, eligibility)?),
        (Sentence::Gci(c, d), FormulaRelaxMode::RetractLhs) => Sentence::Gci(op.apply(c, k, eligibility)?, d.clone()),
        (Sentence::InstanceOf(a, c), FormulaRelaxMode::RelaxRhs) => {
            Sentence::InstanceOf(a.clone(), op.apply(c, k, eligibility)?)
        }
        (Sentence::InstanceOf(a, _), FormulaRelaxMode::RetractLhs) => Sentence::InstanceOf(a.clone(), Concept::Top),
        (Sentence::RoleFact(a, b, _), _) => Sentence::RoleFact(a.clone(), b.clone(), RoleRef::Universal),
    })
}

/// `ρ^K(T)`: every sentence relaxed by its degree; order kept, duplicates
/// merged, dialect raised when an operator leaves the input dialect.
pub fn relax_theory(
    kb: &KnowledgeBase,
    degrees: &DegreeMap,
    mode: FormulaRelaxMode,
    op: &ConceptOperator,
    eligibility: &KnowledgeBase,
) -> Result<KnowledgeBase> {
    if let Some(i) = degrees.indices().find(|&i| i >= kb.len()) {
        return Err(Error::Invalid(format!("degree map mentions sentence {i} of a {}-sentence KB", kb.len())));
    }
    let sentences = kb
        .iter()
        .enumerate()
        .map(|(i, s)| relax_formula(s, mode, op, degrees.get(i) as usize, eligibility))
        .collect::<Result<Vec<_>>>()?;
    kb.with_sentences(sentences)
}
