//! Finite interpretations and model-theoretic checks of revision
//! postulates, faithful assignments and the representation property.
//!
//! Domains are nonempty and bounded, so every verdict about model sets is
//! evidence at the enumerated sizes only.

mod postulates;
mod rank;

use std::collections::BTreeSet;

use indexmap::IndexMap;

use crate::concept::{Concept, Name};
use crate::error::{Error, Result};
use crate::kb::{KnowledgeBase, RoleRef, Sentence, Signature};
use crate::par::Exec;

pub use postulates::{
    check_postulates, check_postulates_with, check_representation, PostulateLine, PostulateReport, PostulateVerdict, Representation, Scope,
};
pub use rank::{check_faithful_assignment, equivalent_variants, rank, FaReport, Rank, RankTable};

/// Largest `n·|N_C| + n²·|N_R|` accepted by the enumerator.
pub const ENUMERATION_BITS_CAP: u32 = 24;

/// Identifies an interpretation: domain size and index in enumeration order.
pub type InterpretationId = (usize, u64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteInterpretation {
    pub domain_size: usize,
    /// Extension of each concept name as a bit set over the domain.
    pub concept_ext: IndexMap<Name, u64>,
    /// For each role name, the successor set of every element.
    pub role_ext: IndexMap<Name, Vec<u64>>,
    pub ind_map: IndexMap<Name, usize>,
}

impl FiniteInterpretation {
    fn full(&self) -> u64 {
        if self.domain_size == 64 {
            u64::MAX
        } else {
            (1u64 << self.domain_size) - 1
        }
    }

    /// Extension of `c`; names outside the interpretation are empty.
    pub fn extension(&self, c: &Concept) -> u64 {
        let full = self.full();
        match c {
            Concept::Top => full,
            Concept::Bot => 0,
            Concept::Atom(a) => self.concept_ext.get(a).copied().unwrap_or(0),
            Concept::Not(d) => full & !self.extension(d),
            Concept::And(cs) => cs.iter().fold(full, |acc, d| acc & self.extension(d)),
            Concept::Or(cs) => cs.iter().fold(0, |acc, d| acc | self.extension(d)),
            Concept::Exists(r, d) => {
                let e = self.extension(d);
                self.elements(|succ| succ & e != 0, r)
            }
            Concept::Forall(r, d) => {
                let e = self.extension(d);
                self.elements(|succ| succ & !e == 0, r)
            }
        }
    }

    fn elements(&self, pred: impl Fn(u64) -> bool, r: &Name) -> u64 {
        let succs = self.role_ext.get(r);
        (0..self.domain_size)
            .filter(|&x| pred(succs.map_or(0, |s| s[x])))
            .fold(0, |acc, x| acc | (1 << x))
    }

    fn individual(&self, a: &Name) -> usize {
        self.ind_map.get(a).copied().unwrap_or(0)
    }
}

/// Number of free bits and number of individual placements.
fn shape(sig: &Signature, n: usize) -> Result<(u32, u64)> {
    if n == 0 || n > 64 {
        return Err(Error::Invalid(format!("domain size {n} is outside 1..=64")));
    }
    let bits = n * sig.concept_names.len() + n * n * sig.role_names.len();
    if bits > ENUMERATION_BITS_CAP as usize {
        return Err(Error::ResourceExceeded(format!(
            "{bits} interpretation bits at domain size {n} exceed the cap of {ENUMERATION_BITS_CAP}"
        )));
    }
    let placements = (n as u64)
        .checked_pow(sig.individuals.len() as u32)
        .filter(|p| p.checked_mul(1u64 << bits).is_some_and(|t| t <= 1 << 32))
        .ok_or_else(|| Error::ResourceExceeded(format!("too many individual placements at domain size {n}")))?;
    Ok((bits as u32, placements))
}

/// Number of interpretations of `sig` with domain size `n`.
pub fn interpretation_count(sig: &Signature, n: usize) -> Result<u64> {
    let (bits, placements) = shape(sig, n)?;
    Ok(placements << bits)
}

/// Interpretation number `index` of domain size `n`; concept bits vary
/// fastest, then role pairs, then individual placements.
pub fn decode(sig: &Signature, n: usize, index: u64) -> FiniteInterpretation {
    let mut rest = index;
    let mut take = |width: usize| {
        let v = rest & ((1u64 << width) - 1);
        rest >>= width;
        v
    };
    let concept_ext = sig.concept_names.iter().map(|c| (c.clone(), take(n))).collect();
    let role_ext = sig
        .role_names
        .iter()
        .map(|r| (r.clone(), (0..n).map(|_| take(n)).collect()))
        .collect();
    let ind_map = sig
        .individuals
        .iter()
        .map(|a| {
            let x = (rest % n as u64) as usize;
            rest /= n as u64;
            (a.clone(), x)
        })
        .collect();
    FiniteInterpretation {
        domain_size: n,
        concept_ext,
        role_ext,
        ind_map,
    }
}

/// Every interpretation of `sig` with domain size `n`, in index order.
pub fn enumerate_interpretations(sig: &Signature, n: usize) -> Result<impl Iterator<Item = FiniteInterpretation> + '_> {
    let count = interpretation_count(sig, n)?;
    Ok((0..count).map(move |i| decode(sig, n, i)))
}

pub fn satisfies(i: &FiniteInterpretation, s: &Sentence) -> bool {
    match s {
        Sentence::Gci(c, d) => i.extension(c) & !i.extension(d) == 0,
        Sentence::InstanceOf(a, c) => i.extension(c) & (1 << i.individual(a)) != 0,
        Sentence::RoleFact(_, _, RoleRef::Universal) => true,
        Sentence::RoleFact(a, b, RoleRef::Named(r)) => i
            .role_ext
            .get(r)
            .is_some_and(|succ| succ[i.individual(a)] & (1 << i.individual(b)) != 0),
    }
}

pub fn satisfies_kb(i: &FiniteInterpretation, kb: &KnowledgeBase) -> bool {
    kb.iter().all(|s| satisfies(i, s))
}

/// Models of `kb` among interpretations of `sig` with domain size `1..=n`.
pub fn model_set_in(sig: &Signature, kb: &KnowledgeBase, n: usize, exec: Exec) -> Result<BTreeSet<InterpretationId>> {
    let mut out = BTreeSet::new();
    for size in 1..=n {
        let count = interpretation_count(sig, size)?;
        let ids = exec.filter_map_range(0..count, |i| satisfies_kb(&decode(sig, size, i), kb).then_some(i));
        out.extend(ids.into_iter().map(|i| (size, i)));
    }
    Ok(out)
}

/// [`model_set_in`] over the signature of `kb`.
pub fn model_set(kb: &KnowledgeBase, n: usize) -> Result<BTreeSet<InterpretationId>> {
    model_set_in(kb.signature(), kb, n, Exec::default())
}

/// Signature of all KBs together.
pub fn joint_signature<'a>(kbs: impl IntoIterator<Item = &'a KnowledgeBase>) -> Result<Signature> {
    kbs.into_iter()
        .try_fold(Signature::default(), |acc, kb| acc.merge(kb.signature()))
}
