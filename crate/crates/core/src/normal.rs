//! Normal forms used by the reasoner and the relaxation operators.

use std::collections::{BTreeMap, BTreeSet};

use crate::concept::{Concept, Name};
use crate::error::{Error, Result};

/// Negation normal form: `Not` only directly above atoms.
pub fn to_nnf(c: &Concept) -> Concept {
    nnf(c, false)
}

fn nnf(c: &Concept, negated: bool) -> Concept {
    match (c, negated) {
        (Concept::Top, false) | (Concept::Bot, true) => Concept::Top,
        (Concept::Top, true) | (Concept::Bot, false) => Concept::Bot,
        (Concept::Atom(_), false) => c.clone(),
        (Concept::Atom(_), true) => Concept::not(c.clone()),
        (Concept::Not(inner), neg) => nnf(inner, !neg),
        (Concept::And(cs), false) => Concept::and(cs.iter().map(|c| nnf(c, false))),
        (Concept::And(cs), true) => Concept::or(cs.iter().map(|c| nnf(c, true))),
        (Concept::Or(cs), false) => Concept::or(cs.iter().map(|c| nnf(c, false))),
        (Concept::Or(cs), true) => Concept::and(cs.iter().map(|c| nnf(c, true))),
        (Concept::Exists(r, c), false) => Concept::Exists(r.clone(), Box::new(nnf(c, false))),
        (Concept::Exists(r, c), true) => Concept::Forall(r.clone(), Box::new(nnf(c, true))),
        (Concept::Forall(r, c), false) => Concept::Forall(r.clone(), Box::new(nnf(c, false))),
        (Concept::Forall(r, c), true) => Concept::Exists(r.clone(), Box::new(nnf(c, true))),
    }
}

// ---------------------------------------------------------------------------
// EL description trees

/// Node labelled with concept names, edges labelled with role names.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DescriptionTree {
    pub labels: BTreeSet<Name>,
    pub edges: Vec<(Name, DescriptionTree)>,
}

impl DescriptionTree {
    /// Length of the longest root-to-leaf path (0 for a single node).
    pub fn depth(&self) -> usize {
        self.edges.iter().map(|(_, t)| 1 + t.depth()).max().unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        1 + self.edges.iter().map(|(_, t)| t.node_count()).sum::<usize>()
    }

    pub fn is_leaf(&self) -> bool {
        self.edges.is_empty()
    }

    fn absorb(&mut self, c: &Concept) -> Result<()> {
        match c {
            Concept::Top => Ok(()),
            Concept::Atom(a) => {
                self.labels.insert(a.clone());
                Ok(())
            }
            Concept::And(cs) => cs.iter().try_for_each(|c| self.absorb(c)),
            Concept::Exists(r, filler) => {
                self.edges.push((r.clone(), to_description_tree(filler)?));
                Ok(())
            }
            Concept::Bot => Err(Error::UnsupportedShape("description trees cannot encode Bot".into())),
            other => Err(Error::UnsupportedShape(format!("`{other}` is not an EL concept"))),
        }
    }
}

pub fn to_description_tree(c: &Concept) -> Result<DescriptionTree> {
    let mut t = DescriptionTree::default();
    t.absorb(c)?;
    Ok(t)
}

pub fn from_description_tree(t: &DescriptionTree) -> Concept {
    Concept::and(
        t.labels
            .iter()
            .map(|l| Concept::Atom(l.clone()))
            .chain(t.edges.iter().map(|(r, s)| Concept::Exists(r.clone(), Box::new(from_description_tree(s))))),
    )
}

// ---------------------------------------------------------------------------
// Normal form with grouping of existential restrictions

/// An EL concept `⊓ atoms ⊓ ⊓_r ⊓_{E ∈ groups[r]} ∃r.E`, with no
/// subsumption between two fillers of the same group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub(crate) struct GroupedEl {
    pub atoms: BTreeSet<Name>,
    pub groups: BTreeMap<Name, Vec<GroupedEl>>,
}

impl GroupedEl {
    pub fn to_concept(&self) -> Concept {
        Concept::and(
            self.atoms
                .iter()
                .map(|a| Concept::Atom(a.clone()))
                .chain(self.groups.iter().map(|(r, fillers)| group_concept(r, fillers))),
        )
    }

    /// Structural EL subsumption `self ⊑ other` (homomorphism from
    /// `other`'s tree into `self`'s). Exact for ⊥-free EL concepts.
    pub fn subsumed_by(&self, other: &GroupedEl) -> bool {
        other.atoms.is_subset(&self.atoms)
            && other.groups.iter().all(|(r, wanted)| {
                let have = self.groups.get(r).map(Vec::as_slice).unwrap_or(&[]);
                wanted.iter().all(|w| have.iter().any(|h| h.subsumed_by(w)))
            })
    }

    /// Conjunction of two grouped concepts, re-normalised.
    pub fn meet(&self, other: &GroupedEl) -> GroupedEl {
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        let mut groups = self.groups.clone();
        for (r, fs) in &other.groups {
            groups.entry(r.clone()).or_default().extend(fs.iter().cloned());
        }
        for fs in groups.values_mut() {
            prune_fillers(fs);
        }
        GroupedEl { atoms, groups }
    }
}

pub(crate) fn group_concept(role: &Name, fillers: &[GroupedEl]) -> Concept {
    Concept::and(fillers.iter().map(|f| Concept::Exists(role.clone(), Box::new(f.to_concept()))))
}

/// Drops every filler subsumed-from-below by another one: `∃r.E` is
/// redundant next to `∃r.F` whenever `F ⊑ E`.
pub(crate) fn prune_fillers(fs: &mut Vec<GroupedEl>) {
    fs.sort();
    fs.dedup();
    let mut keep = vec![true; fs.len()];
    for i in 0..fs.len() {
        for j in 0..fs.len() {
            if i != j && keep[j] && fs[j].subsumed_by(&fs[i]) && (j < i || !fs[i].subsumed_by(&fs[j])) {
                keep[i] = false;
                break;
            }
        }
    }
    let mut it = keep.iter();
    fs.retain(|_| *it.next().unwrap());
}

/// Lifts disjunctions to the top: an ELU concept as a list of EL
/// disjuncts, none containing ⊥ (⊥-disjuncts are dropped).
fn el_disjuncts(c: &Concept) -> Result<Vec<Concept>> {
    Ok(match c {
        Concept::Top => vec![Concept::Top],
        Concept::Bot => vec![],
        Concept::Atom(_) => vec![c.clone()],
        Concept::Or(cs) => {
            let mut out = Vec::new();
            for c in cs {
                out.extend(el_disjuncts(c)?);
            }
            out
        }
        Concept::And(cs) => {
            let mut acc = vec![Concept::Top];
            for c in cs {
                let ds = el_disjuncts(c)?;
                let mut next = Vec::with_capacity(acc.len() * ds.len());
                for a in &acc {
                    for d in &ds {
                        next.push(Concept::and2(a.clone(), d.clone()));
                    }
                }
                acc = next;
                if acc.is_empty() {
                    break;
                }
            }
            acc
        }
        Concept::Exists(r, filler) => el_disjuncts(filler)?
            .into_iter()
            .map(|d| Concept::Exists(r.clone(), Box::new(d)))
            .collect(),
        other => return Err(Error::UnsupportedShape(format!("`{other}` is not an ELU concept"))),
    })
}

fn group_el(c: &Concept) -> GroupedEl {
    let mut g = GroupedEl::default();
    let add = |c: &Concept, g: &mut GroupedEl| match c {
        Concept::Atom(a) => {
            g.atoms.insert(a.clone());
        }
        Concept::Exists(r, filler) => g.groups.entry(r.clone()).or_default().push(group_el(filler)),
        _ => {}
    };
    match c {
        Concept::And(cs) => cs.iter().for_each(|c| add(c, &mut g)),
        other => add(other, &mut g),
    }
    for fs in g.groups.values_mut() {
        prune_fillers(fs);
    }
    g
}

/// ELU concept as grouped EL disjuncts; empty means the concept is ⊥.
pub(crate) fn grouped_disjuncts(c: &Concept) -> Result<Vec<GroupedEl>> {
    let mut ds: Vec<GroupedEl> = el_disjuncts(c)?.iter().map(group_el).collect();
    ds.sort();
    ds.dedup();
    Ok(ds)
}

/// `C₁ ⊔ ⋯ ⊔ C_k` with every `C_i` in normal form with grouping of
/// existential restrictions.
pub fn to_grouped_normal_form(c: &Concept) -> Result<Concept> {
    Ok(Concept::or(grouped_disjuncts(c)?.iter().map(GroupedEl::to_concept)))
}

// ---------------------------------------------------------------------------
// Quantifier prefix form

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    Exists,
    Forall,
}

/// `Q₁r₁ ⋯ Q_m r_m . body` with a quantifier-free body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixForm {
    pub prefix: Vec<(Quantifier, Name)>,
    pub body: Concept,
}

impl PrefixForm {
    pub fn wrap(&self) -> Concept {
        wrap_prefix(&self.prefix, self.body.clone())
    }
}

pub fn wrap_prefix(prefix: &[(Quantifier, Name)], body: Concept) -> Concept {
    prefix.iter().rev().fold(body, |acc, (q, r)| match q {
        Quantifier::Exists => Concept::Exists(r.clone(), Box::new(acc)),
        Quantifier::Forall => Concept::Forall(r.clone(), Box::new(acc)),
    })
}

pub fn to_prefix_form(c: &Concept) -> Result<PrefixForm> {
    let mut prefix = Vec::new();
    let mut cur = c;
    loop {
        match cur {
            Concept::Exists(r, inner) => {
                prefix.push((Quantifier::Exists, r.clone()));
                cur = inner;
            }
            Concept::Forall(r, inner) => {
                prefix.push((Quantifier::Forall, r.clone()));
                cur = inner;
            }
            body if body.is_quantifier_free() => {
                return Ok(PrefixForm { prefix, body: body.clone() });
            }
            _ => {
                return Err(Error::UnsupportedShape(format!(
                    "`{c}` is not a quantifier prefix over a quantifier-free body"
                )))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Propositional clause and term forms

/// A possibly negated concept name; `true` means positive.
pub type Literal = (Name, bool);

pub(crate) fn literal_concept((n, pos): &Literal) -> Concept {
    if *pos {
        Concept::Atom(n.clone())
    } else {
        Concept::not(Concept::Atom(n.clone()))
    }
}

/// Set of literal sets, simplified: no complementary pair inside a set and
/// no set containing another.
fn simplify(sets: impl IntoIterator<Item = BTreeSet<Literal>>) -> Vec<BTreeSet<Literal>> {
    let mut v: Vec<BTreeSet<Literal>> = sets
        .into_iter()
        .filter(|s| !s.iter().any(|(n, p)| s.contains(&(n.clone(), !p))))
        .collect();
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    v.dedup();
    let mut out: Vec<BTreeSet<Literal>> = Vec::new();
    for s in v {
        if !out.iter().any(|o| o.is_subset(&s)) {
            out.push(s);
        }
    }
    out.sort();
    out
}

fn product(a: &[BTreeSet<Literal>], b: &[BTreeSet<Literal>]) -> Vec<BTreeSet<Literal>> {
    simplify(a.iter().flat_map(|x| b.iter().map(move |y| x.union(y).cloned().collect())))
}

/// Terms of a DNF (`dual = false`) or clauses of a CNF (`dual = true`).
fn literal_sets(c: &Concept, dual: bool) -> Result<Vec<BTreeSet<Literal>>> {
    // For DNF: Or concatenates, And multiplies. CNF swaps the roles.
    Ok(match c {
        Concept::Top if !dual => vec![BTreeSet::new()],
        Concept::Top => vec![],
        Concept::Bot if !dual => vec![],
        Concept::Bot => vec![BTreeSet::new()],
        Concept::Atom(n) => vec![BTreeSet::from([(n.clone(), true)])],
        Concept::Not(inner) => match inner.as_ref() {
            Concept::Atom(n) => vec![BTreeSet::from([(n.clone(), false)])],
            _ => literal_sets(&to_nnf(c), dual)?,
        },
        Concept::Or(cs) | Concept::And(cs) => {
            let concatenates = matches!(c, Concept::Or(_)) != dual;
            if concatenates {
                let mut all = Vec::new();
                for c in cs {
                    all.extend(literal_sets(c, dual)?);
                }
                simplify(all)
            } else {
                let mut acc = vec![BTreeSet::new()];
                for c in cs {
                    acc = product(&acc, &literal_sets(c, dual)?);
                    if acc.is_empty() {
                        break;
                    }
                }
                acc
            }
        }
        Concept::Exists(..) | Concept::Forall(..) => {
            return Err(Error::UnsupportedShape(format!("`{c}` is not quantifier-free")))
        }
    })
}

pub(crate) fn dnf_terms(c: &Concept) -> Result<Vec<BTreeSet<Literal>>> {
    literal_sets(c, false)
}

pub(crate) fn cnf_clauses(c: &Concept) -> Result<Vec<BTreeSet<Literal>>> {
    literal_sets(c, true)
}

pub(crate) fn terms_to_concept(terms: &[BTreeSet<Literal>]) -> Concept {
    Concept::or(terms.iter().map(|t| Concept::and(t.iter().map(literal_concept))))
}

pub(crate) fn clauses_to_concept(clauses: &[BTreeSet<Literal>]) -> Concept {
    Concept::and(clauses.iter().map(|c| Concept::or(c.iter().map(literal_concept))))
}

/// Conjunction of clauses; tautological and subsumed clauses are removed.
pub fn body_to_cnf(c: &Concept) -> Result<Concept> {
    Ok(clauses_to_concept(&cnf_clauses(c)?))
}

/// Disjunction of terms; contradictory and subsumed terms are removed.
pub fn body_to_dnf(c: &Concept) -> Result<Concept> {
    Ok(terms_to_concept(&dnf_terms(c)?))
}
