//! Signatures, sentences and knowledge bases.

use std::fmt;

use indexmap::IndexSet;

use crate::concept::{push_unique, Concept, Dialect, Name};
use crate::error::{Error, Result};

/// Concept names, role names and individuals, each in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    pub concept_names: IndexSet<Name>,
    pub role_names: IndexSet<Name>,
    pub individuals: IndexSet<Name>,
}

impl Signature {
    pub fn new(
        concepts: impl IntoIterator<Item = Name>,
        roles: impl IntoIterator<Item = Name>,
        individuals: impl IntoIterator<Item = Name>,
    ) -> Result<Self> {
        let sig = Signature {
            concept_names: concepts.into_iter().collect(),
            role_names: roles.into_iter().collect(),
            individuals: individuals.into_iter().collect(),
        };
        sig.check_disjoint()?;
        Ok(sig)
    }

    fn check_disjoint(&self) -> Result<()> {
        let clash = self
            .concept_names
            .iter()
            .find(|n| self.role_names.contains(*n) || self.individuals.contains(*n))
            .or_else(|| self.role_names.iter().find(|n| self.individuals.contains(*n)));
        match clash {
            Some(n) => Err(Error::Invalid(format!("name `{n}` is used in two name categories"))),
            None => Ok(()),
        }
    }

    /// Signature with the names of `sentences` in first-occurrence order.
    pub fn infer<'a>(sentences: impl IntoIterator<Item = &'a Sentence>) -> Result<Self> {
        let (mut cs, mut rs, mut is) = (Vec::new(), Vec::new(), Vec::new());
        for s in sentences {
            s.collect_names(&mut cs, &mut rs, &mut is);
        }
        Signature::new(cs, rs, is)
    }

    /// Names of `self` followed by the names of `other` not already present.
    pub fn merge(&self, other: &Signature) -> Result<Signature> {
        let mut out = self.clone();
        out.concept_names.extend(other.concept_names.iter().cloned());
        out.role_names.extend(other.role_names.iter().cloned());
        out.individuals.extend(other.individuals.iter().cloned());
        out.check_disjoint()?;
        Ok(out)
    }

    pub fn covers(&self, s: &Sentence) -> bool {
        let (mut cs, mut rs, mut is) = (Vec::new(), Vec::new(), Vec::new());
        s.collect_names(&mut cs, &mut rs, &mut is);
        cs.iter().all(|n| self.concept_names.contains(n))
            && rs.iter().all(|n| self.role_names.contains(n))
            && is.iter().all(|n| self.individuals.contains(n))
    }

    pub fn is_empty(&self) -> bool {
        self.concept_names.is_empty() && self.role_names.is_empty() && self.individuals.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RoleRef {
    Named(Name),
    /// The role interpreted as Δ × Δ; produced only by formula relaxation.
    Universal,
}

impl fmt::Display for RoleRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RoleRef::Named(n) => write!(f, "{n}"),
            RoleRef::Universal => f.write_str("TopRole"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sentence {
    Gci(Concept, Concept),
    InstanceOf(Name, Concept),
    RoleFact(Name, Name, RoleRef),
}

impl Sentence {
    pub fn gci(lhs: Concept, rhs: Concept) -> Sentence {
        Sentence::Gci(lhs, rhs)
    }

    pub fn instance(ind: impl AsRef<str>, c: Concept) -> Sentence {
        Sentence::InstanceOf(Name::new(ind), c)
    }

    pub fn role_fact(a: impl AsRef<str>, b: impl AsRef<str>, r: impl AsRef<str>) -> Sentence {
        Sentence::RoleFact(Name::new(a), Name::new(b), RoleRef::Named(Name::new(r)))
    }

    pub fn concepts(&self) -> Vec<&Concept> {
        match self {
            Sentence::Gci(l, r) => vec![l, r],
            Sentence::InstanceOf(_, c) => vec![c],
            Sentence::RoleFact(..) => vec![],
        }
    }

    pub fn min_dialect(&self) -> Dialect {
        self.concepts()
            .into_iter()
            .map(Concept::min_dialect)
            .max()
            .unwrap_or(Dialect::EL)
    }

    pub fn dialect_violation(&self, dialect: Dialect) -> Option<&'static str> {
        self.concepts().into_iter().find_map(|c| c.dialect_violation(dialect))
    }

    pub fn collect_names(&self, cs: &mut Vec<Name>, rs: &mut Vec<Name>, is: &mut Vec<Name>) {
        match self {
            Sentence::Gci(l, r) => {
                l.collect_names(cs, rs);
                r.collect_names(cs, rs);
            }
            Sentence::InstanceOf(a, c) => {
                push_unique(is, a);
                c.collect_names(cs, rs);
            }
            Sentence::RoleFact(a, b, r) => {
                push_unique(is, a);
                push_unique(is, b);
                if let RoleRef::Named(r) = r {
                    push_unique(rs, r);
                }
            }
        }
    }
}

impl fmt::Debug for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::render_sentence(self))
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::render_sentence(self))
    }
}

/// A finite, ordered, duplicate-free set of sentences. Sentence positions
/// are stable and serve as indices for degree maps and partitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeBase {
    signature: Signature,
    dialect: Dialect,
    sentences: Vec<Sentence>,
}

impl KnowledgeBase {
    /// Validates names and dialect; later duplicates are dropped.
    pub fn new(
        signature: Signature,
        dialect: Dialect,
        sentences: impl IntoIterator<Item = Sentence>,
    ) -> Result<Self> {
        let mut uniq = IndexSet::new();
        for s in sentences {
            if let Some(ctor) = s.dialect_violation(dialect) {
                return Err(Error::DialectViolation {
                    dialect,
                    constructor: ctor,
                    position: Default::default(),
                });
            }
            if !signature.covers(&s) {
                return Err(Error::Invalid(format!("sentence `{s}` uses names outside the signature")));
            }
            uniq.insert(s);
        }
        Ok(KnowledgeBase {
            signature,
            dialect,
            sentences: uniq.into_iter().collect(),
        })
    }

    /// KB with inferred signature and the smallest dialect covering the sentences.
    pub fn from_sentences(sentences: impl IntoIterator<Item = Sentence>) -> Result<Self> {
        let sentences: Vec<Sentence> = sentences.into_iter().collect();
        let signature = Signature::infer(&sentences)?;
        let dialect = sentences.iter().map(Sentence::min_dialect).max().unwrap_or(Dialect::EL);
        KnowledgeBase::new(signature, dialect, sentences)
    }

    pub fn empty() -> Self {
        KnowledgeBase {
            signature: Signature::default(),
            dialect: Dialect::EL,
            sentences: Vec::new(),
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn dialect(&self) -> Dialect {
        self.dialect
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Sentence> {
        self.sentences.iter()
    }

    pub fn contains(&self, s: &Sentence) -> bool {
        self.sentences.contains(s)
    }

    /// Same signature, possibly different sentences; the dialect is raised
    /// to cover the new sentences when needed.
    pub fn with_sentences(&self, sentences: impl IntoIterator<Item = Sentence>) -> Result<Self> {
        let sentences: Vec<Sentence> = sentences.into_iter().collect();
        let signature = self.signature.merge(&Signature::infer(&sentences)?)?;
        let dialect = sentences
            .iter()
            .map(Sentence::min_dialect)
            .fold(self.dialect, Dialect::max);
        KnowledgeBase::new(signature, dialect, sentences)
    }

    /// Sentences at `indices`, in the given order, over the same signature.
    pub fn select(&self, indices: &[usize]) -> KnowledgeBase {
        KnowledgeBase {
            signature: self.signature.clone(),
            dialect: self.dialect,
            sentences: indices.iter().map(|&i| self.sentences[i].clone()).collect(),
        }
    }

    /// Set union: sentences of `self` first, then new sentences of `other`.
    pub fn union(&self, other: &KnowledgeBase) -> Result<KnowledgeBase> {
        let signature = self.signature.merge(&other.signature)?;
        let dialect = self.dialect.max(other.dialect);
        KnowledgeBase::new(
            signature,
            dialect,
            self.sentences.iter().chain(other.sentences.iter()).cloned(),
        )
    }

    pub fn union_all<'a>(kbs: impl IntoIterator<Item = &'a KnowledgeBase>) -> Result<KnowledgeBase> {
        kbs.into_iter()
            .try_fold(KnowledgeBase::empty(), |acc, kb| acc.union(kb))
    }

    /// Extends the signature without touching the sentences.
    pub fn with_signature(&self, signature: &Signature) -> Result<KnowledgeBase> {
        Ok(KnowledgeBase {
            signature: self.signature.merge(signature)?,
            dialect: self.dialect,
            sentences: self.sentences.clone(),
        })
    }

    /// Order-insensitive sentence-set equality.
    pub fn same_sentences(&self, other: &KnowledgeBase) -> bool {
        self.len() == other.len() && self.sentences.iter().all(|s| other.contains(s))
    }
}

impl fmt::Display for KnowledgeBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::render_kb(self))
    }
}
