//! Satisfiability, entailment, subsumption and coherence.
//!
//! Interpretation domains are nonempty. Under that convention a KB has no
//! model exactly when it entails every sentence (any model falsifies
//! `Top [= Bot`), so generalized consistency coincides with
//! satisfiability.

mod tableau;

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::concept::{Concept, Name};
use crate::error::Result;
use crate::kb::{KnowledgeBase, RoleRef, Sentence};
use crate::syntax::render_concept;

pub(crate) use tableau::Tableau;

/// Default number of tableau nodes a single query may create.
pub const DEFAULT_BUDGET: usize = 1_000_000;

static BUDGET: AtomicUsize = AtomicUsize::new(DEFAULT_BUDGET);

/// Sets the node budget used by the free functions of this module and by
/// every reasoner created afterwards with [`Reasoner::new`].
pub fn set_default_budget(nodes: usize) {
    BUDGET.store(nodes, Ordering::Relaxed);
}

pub fn default_budget() -> usize {
    BUDGET.load(Ordering::Relaxed)
}

/// Outcome of an entailment query; `witness` describes a counter-model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntailmentVerdict {
    pub holds: bool,
    pub witness: Option<String>,
}

/// Queries against one knowledge base.
#[derive(Debug, Clone)]
pub struct Reasoner<'a> {
    kb: &'a KnowledgeBase,
    budget: usize,
}

const QUERY_INDIVIDUAL: &str = "_x";

impl<'a> Reasoner<'a> {
    pub fn new(kb: &'a KnowledgeBase) -> Self {
        Reasoner { kb, budget: default_budget() }
    }

    pub fn with_budget(mut self, nodes: usize) -> Self {
        self.budget = nodes;
        self
    }

    fn tableau(&self, extra_sentences: &[Sentence], extra_concepts: &[Concept]) -> Tableau {
        Tableau::new(
            self.kb.sentences().iter().chain(extra_sentences),
            self.kb.signature().individuals.iter(),
            extra_concepts,
            self.budget,
        )
    }

    pub fn is_satisfiable(&self) -> Result<bool> {
        self.tableau(&[], &[]).satisfiable(None)
    }

    /// Whether some model of the KB gives `c` a nonempty extension.
    pub fn is_concept_satisfiable(&self, c: &Concept) -> Result<bool> {
        let mut t = self.tableau(&[], std::slice::from_ref(c));
        let id = t.id_of(c);
        t.satisfiable(Some(id))
    }

    /// `kb ⊨ c ⊑ d`.
    pub fn subsumes(&self, c: &Concept, d: &Concept) -> Result<bool> {
        Ok(!self.is_concept_satisfiable(&Concept::and2(c.clone(), Concept::not(d.clone())))?)
    }

    pub fn equivalent(&self, c: &Concept, d: &Concept) -> Result<bool> {
        Ok(self.subsumes(c, d)? && self.subsumes(d, c)?)
    }

    pub fn entails(&self, s: &Sentence) -> Result<bool> {
        Ok(self.entails_verdict(s, false)?.holds)
    }

    /// Entailment by refutation. A role assertion follows only from itself
    /// or from an unsatisfiable KB, since no ALC constructor forces a named
    /// role edge between individuals.
    pub fn entails_verdict(&self, s: &Sentence, witness: bool) -> Result<EntailmentVerdict> {
        let (holds, mut t) = match s {
            Sentence::Gci(c, d) => {
                let q = Concept::and2(c.clone(), Concept::not(d.clone()));
                let mut t = self.tableau(&[], std::slice::from_ref(&q));
                let id = t.id_of(&q);
                (!t.satisfiable(Some(id))?, t)
            }
            Sentence::InstanceOf(a, c) => {
                let neg = Sentence::InstanceOf(a.clone(), Concept::not(c.clone()));
                let mut t = self.tableau(std::slice::from_ref(&neg), &[]);
                (!t.satisfiable(None)?, t)
            }
            Sentence::RoleFact(_, _, RoleRef::Universal) => {
                return Ok(EntailmentVerdict { holds: true, witness: None })
            }
            Sentence::RoleFact(..) => {
                if self.kb.contains(s) {
                    return Ok(EntailmentVerdict { holds: true, witness: None });
                }
                let mut t = self.tableau(&[], &[]);
                (!t.satisfiable(None)?, t)
            }
        };
        let witness = if witness && !holds { describe(&mut t) } else { None };
        Ok(EntailmentVerdict { holds, witness })
    }

    /// Concept names of the signature with an empty extension in every
    /// model, in signature order.
    pub fn unsat_named_concepts(&self) -> Result<Vec<Name>> {
        let names: Vec<Name> = self.kb.signature().concept_names.iter().cloned().collect();
        let atoms: Vec<Concept> = names.iter().map(|n| Concept::Atom(n.clone())).collect();
        let mut t = self.tableau(&[], &atoms);
        if !t.satisfiable(None)? {
            return Ok(names);
        }
        let mut out = Vec::new();
        for (n, a) in names.iter().zip(&atoms) {
            let id = t.id_of(a);
            if !t.satisfiable(Some(id))? {
                out.push(n.clone());
            }
        }
        Ok(out)
    }

    pub fn is_coherent(&self) -> Result<bool> {
        Ok(self.unsat_named_concepts()?.is_empty())
    }

    /// Literal description of a model of the KB, when there is one.
    pub fn model_description(&self) -> Result<Option<String>> {
        let mut t = self.tableau(&[], &[]);
        if !t.satisfiable(None)? {
            return Ok(None);
        }
        Ok(describe(&mut t))
    }
}

fn describe(t: &mut Tableau) -> Option<String> {
    let roots = t.describe_model()?;
    let names = t.individual_names();
    let lines: Vec<String> = roots
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let who = names.get(i).map(Name::as_str).unwrap_or(QUERY_INDIVIDUAL);
            format!("{who} : {}", render_concept(c))
        })
        .collect();
    Some(lines.join("\n"))
}

pub fn is_satisfiable(kb: &KnowledgeBase) -> Result<bool> {
    Reasoner::new(kb).is_satisfiable()
}

/// `Cn(kb) ≠ Sen(Σ)`; equal to satisfiability under nonempty domains.
pub fn is_consistent_generalized(kb: &KnowledgeBase) -> Result<bool> {
    is_satisfiable(kb)
}

pub fn is_concept_satisfiable(kb: &KnowledgeBase, c: &Concept) -> Result<bool> {
    Reasoner::new(kb).is_concept_satisfiable(c)
}

pub fn entails(kb: &KnowledgeBase, s: &Sentence) -> Result<bool> {
    Reasoner::new(kb).entails(s)
}

/// `kb ⊨ c ⊑ d`.
pub fn subsumes(kb: &KnowledgeBase, c: &Concept, d: &Concept) -> Result<bool> {
    Reasoner::new(kb).subsumes(c, d)
}

pub fn equivalent(kb: &KnowledgeBase, c: &Concept, d: &Concept) -> Result<bool> {
    Reasoner::new(kb).equivalent(c, d)
}

pub fn is_coherent(kb: &KnowledgeBase) -> Result<bool> {
    Reasoner::new(kb).is_coherent()
}

pub fn unsat_named_concepts(kb: &KnowledgeBase) -> Result<Vec<Name>> {
    Reasoner::new(kb).unsat_named_concepts()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::syntax::{parse_concept, parse_kb, parse_sentence};

    fn kb(body: &str) -> KnowledgeBase {
        parse_kb(&format!("dialect ALC\n{body}")).unwrap()
    }

    fn c(s: &str) -> Concept {
        parse_concept(s).unwrap()
    }

    #[test]
    fn satisfiability_examples() {
        assert!(!is_satisfiable(&kb("A [= B.\na : A.\na : not B.")).unwrap());
        assert!(is_satisfiable(&kb("Tweety [= Bird.\nBird [= Flies.\nTweety & Flies [= Bot.")).unwrap());
        assert!(is_satisfiable(&KnowledgeBase::empty()).unwrap());
        assert!(!is_satisfiable(&kb("Top [= Bot.")).unwrap());
        assert!(is_satisfiable(&kb("A [= Bot.")).unwrap());
        assert!(!is_satisfiable(&kb("a : A.\nA [= Bot.")).unwrap());
    }

    #[test]
    fn subsumption_examples() {
        let k = kb("A [= B.\nB [= E.");
        assert!(subsumes(&k, &c("A"), &c("E")).unwrap());
        assert!(!subsumes(&k, &c("E"), &c("A")).unwrap());
        let empty = KnowledgeBase::empty();
        assert!(equivalent(&empty, &c("some m.(B | C)"), &c("some m.B | some m.C")).unwrap());
        assert!(!subsumes(&empty, &c("some r.A"), &c("only r.A")).unwrap());
        assert!(!subsumes(&empty, &c("only r.A"), &c("some r.A")).unwrap());
        assert!(subsumes(&empty, &c("some r.A & only r.B"), &c("some r.(A & B)")).unwrap());
        assert!(subsumes(&empty, &c("A & not A"), &c("Bot")).unwrap());
    }

    #[test]
    fn coherence_examples() {
        let k = kb("Tweety [= Bird.\nBird [= Flies.\nTweety & Flies [= Bot.");
        assert_eq!(unsat_named_concepts(&k).unwrap(), vec![Name::new("Tweety")]);
        let k = kb("Bob [= only hasChild.Rich.\nBob [= some hasChild.John.\nJohn [= not Rich.");
        assert_eq!(unsat_named_concepts(&k).unwrap(), vec![Name::new("Bob")]);
        assert!(is_coherent(&kb("A [= B.")).unwrap());
    }

    #[test]
    fn cyclic_tbox_terminates() {
        let k = kb("A [= some r.A.\nTop [= some s.(B | A).\na : A.");
        assert!(is_satisfiable(&k).unwrap());
        let k = kb("A [= some r.A.\nA [= only r.(not A).\na : A.");
        assert!(!is_satisfiable(&k).unwrap());
    }

    #[test]
    fn abox_reasoning() {
        let k = kb("(a, b) : r.\na : only r.B.\nb : not B.");
        assert!(!is_satisfiable(&k).unwrap());
        let k = kb("(a, b) : r.\na : only r.B.");
        assert!(entails(&k, &parse_sentence("b : B").unwrap()).unwrap());
        assert!(entails(&k, &parse_sentence("(a, b) : r").unwrap()).unwrap());
        assert!(!entails(&k, &parse_sentence("(b, a) : r").unwrap()).unwrap());
        assert!(entails(&k, &Sentence::RoleFact(Name::new("b"), Name::new("a"), RoleRef::Universal)).unwrap());
    }

    #[test]
    fn witness_is_reported_for_non_entailment() {
        let k = kb("A [= B.");
        let v = Reasoner::new(&k).entails_verdict(&parse_sentence("B [= A").unwrap(), true).unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert!(w.contains("B") && w.contains("not A"), "{w}");
        let v = Reasoner::new(&k).entails_verdict(&parse_sentence("A [= B").unwrap(), true).unwrap();
        assert!(v.holds && v.witness.is_none());
    }

    #[test]
    fn budget_is_enforced() {
        let k = kb("Top [= some r.(A | B) & some r.(C | D) & some s.(E | F).");
        let r = Reasoner::new(&k).with_budget(1);
        assert!(matches!(r.is_satisfiable(), Err(Error::ResourceExceeded(_))));
    }
}
