//! Concept descriptions over a fixed signature.
//!
//! `And` and `Or` are n-ary and kept flat, sorted and duplicate-free by the
//! smart constructors [`Concept::and`] and [`Concept::or`], so structural
//! equality already identifies concepts that differ only by the order or
//! nesting of their conjuncts/disjuncts.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// An identifier: concept name, role name or individual.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: impl AsRef<str>) -> Self {
        Name(Arc::from(s.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::borrow::Borrow<str> for Name {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

/// Description-logic family. The order is the inclusion order of the
/// constructor sets: EL ⊂ ELU ⊂ ALC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dialect {
    EL,
    ELU,
    ALC,
}

impl Dialect {
    pub fn allows_or(self) -> bool {
        self >= Dialect::ELU
    }

    pub fn allows_not_forall(self) -> bool {
        self == Dialect::ALC
    }

    pub fn parse(s: &str) -> Option<Dialect> {
        match s {
            "EL" => Some(Dialect::EL),
            "ELU" => Some(Dialect::ELU),
            "ALC" => Some(Dialect::ALC),
            _ => None,
        }
    }
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dialect::EL => "EL",
            Dialect::ELU => "ELU",
            Dialect::ALC => "ALC",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Concept {
    Top,
    Bot,
    Atom(Name),
    Not(Box<Concept>),
    And(Vec<Concept>),
    Or(Vec<Concept>),
    Exists(Name, Box<Concept>),
    Forall(Name, Box<Concept>),
}

impl Concept {
    pub fn atom(name: impl AsRef<str>) -> Concept {
        Concept::Atom(Name::new(name))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(c: Concept) -> Concept {
        Concept::Not(Box::new(c))
    }

    pub fn exists(role: impl AsRef<str>, c: Concept) -> Concept {
        Concept::Exists(Name::new(role), Box::new(c))
    }

    pub fn forall(role: impl AsRef<str>, c: Concept) -> Concept {
        Concept::Forall(Name::new(role), Box::new(c))
    }

    /// Flattening conjunction: drops ⊤, absorbs into ⊥, sorts and dedupes.
    pub fn and(parts: impl IntoIterator<Item = Concept>) -> Concept {
        let mut set = BTreeSet::new();
        for p in parts {
            match p {
                Concept::Top => {}
                Concept::Bot => return Concept::Bot,
                Concept::And(children) => set.extend(children),
                other => {
                    set.insert(other);
                }
            }
        }
        match set.len() {
            0 => Concept::Top,
            1 => set.into_iter().next().unwrap(),
            _ => Concept::And(set.into_iter().collect()),
        }
    }

    /// Flattening disjunction: drops ⊥, absorbs into ⊤, sorts and dedupes.
    pub fn or(parts: impl IntoIterator<Item = Concept>) -> Concept {
        let mut set = BTreeSet::new();
        for p in parts {
            match p {
                Concept::Bot => {}
                Concept::Top => return Concept::Top,
                Concept::Or(children) => set.extend(children),
                other => {
                    set.insert(other);
                }
            }
        }
        match set.len() {
            0 => Concept::Bot,
            1 => set.into_iter().next().unwrap(),
            _ => Concept::Or(set.into_iter().collect()),
        }
    }

    pub fn and2(a: Concept, b: Concept) -> Concept {
        Concept::and([a, b])
    }

    pub fn or2(a: Concept, b: Concept) -> Concept {
        Concept::or([a, b])
    }

    /// Syntactic size, counting n-ary connectives as n-1 binary ones.
    pub fn size(&self) -> usize {
        match self {
            Concept::Top | Concept::Bot | Concept::Atom(_) => 1,
            Concept::Not(c) | Concept::Exists(_, c) | Concept::Forall(_, c) => 1 + c.size(),
            Concept::And(cs) | Concept::Or(cs) => {
                cs.len() - 1 + cs.iter().map(Concept::size).sum::<usize>()
            }
        }
    }

    pub fn role_depth(&self) -> usize {
        match self {
            Concept::Top | Concept::Bot | Concept::Atom(_) => 0,
            Concept::Not(c) => c.role_depth(),
            Concept::Exists(_, c) | Concept::Forall(_, c) => 1 + c.role_depth(),
            Concept::And(cs) | Concept::Or(cs) => {
                cs.iter().map(Concept::role_depth).max().unwrap_or(0)
            }
        }
    }

    /// Smallest dialect whose constructors cover this concept.
    pub fn min_dialect(&self) -> Dialect {
        match self {
            Concept::Top | Concept::Bot | Concept::Atom(_) => Dialect::EL,
            Concept::Not(_) | Concept::Forall(..) => Dialect::ALC,
            Concept::Exists(_, c) => c.min_dialect(),
            Concept::And(cs) => cs.iter().map(Concept::min_dialect).max().unwrap_or(Dialect::EL),
            Concept::Or(cs) => cs
                .iter()
                .map(Concept::min_dialect)
                .max()
                .unwrap_or(Dialect::EL)
                .max(Dialect::ELU),
        }
    }

    /// First constructor not permitted by `dialect`, if any.
    pub fn dialect_violation(&self, dialect: Dialect) -> Option<&'static str> {
        match self {
            Concept::Top | Concept::Bot | Concept::Atom(_) => None,
            Concept::Not(c) => {
                if dialect.allows_not_forall() {
                    c.dialect_violation(dialect)
                } else {
                    Some("negation")
                }
            }
            Concept::Forall(_, c) => {
                if dialect.allows_not_forall() {
                    c.dialect_violation(dialect)
                } else {
                    Some("universal restriction")
                }
            }
            Concept::Exists(_, c) => c.dialect_violation(dialect),
            Concept::And(cs) => cs.iter().find_map(|c| c.dialect_violation(dialect)),
            Concept::Or(cs) => {
                if dialect.allows_or() {
                    cs.iter().find_map(|c| c.dialect_violation(dialect))
                } else {
                    Some("disjunction")
                }
            }
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Concept::Top | Concept::Bot | Concept::Atom(_) => true,
            Concept::Not(c) => c.is_quantifier_free(),
            Concept::And(cs) | Concept::Or(cs) => cs.iter().all(Concept::is_quantifier_free),
            Concept::Exists(..) | Concept::Forall(..) => false,
        }
    }

    pub fn contains_bot(&self) -> bool {
        match self {
            Concept::Bot => true,
            Concept::Top | Concept::Atom(_) => false,
            Concept::Not(c) | Concept::Exists(_, c) | Concept::Forall(_, c) => c.contains_bot(),
            Concept::And(cs) | Concept::Or(cs) => cs.iter().any(Concept::contains_bot),
        }
    }

    /// Collects concept and role names in first-occurrence order.
    pub fn collect_names(&self, concepts: &mut Vec<Name>, roles: &mut Vec<Name>) {
        match self {
            Concept::Top | Concept::Bot => {}
            Concept::Atom(a) => push_unique(concepts, a),
            Concept::Not(c) => c.collect_names(concepts, roles),
            Concept::Exists(r, c) | Concept::Forall(r, c) => {
                push_unique(roles, r);
                c.collect_names(concepts, roles);
            }
            Concept::And(cs) | Concept::Or(cs) => {
                for c in cs {
                    c.collect_names(concepts, roles);
                }
            }
        }
    }
}

pub(crate) fn push_unique(v: &mut Vec<Name>, n: &Name) {
    if !v.contains(n) {
        v.push(n.clone());
    }
}

impl fmt::Debug for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::render_concept(self))
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::render_concept(self))
    }
}
