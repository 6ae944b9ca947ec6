//! Relaxation-based revision `T₁ ∘ T₂ = ρ^K(T′₁) ∪ T″₁ ∪ T₂`.
//!
//! The old belief is split into a conflicting part and an
//! inclusion-maximal retained part; the conflicting part is relaxed with
//! the smallest total degree that removes the conflict. Among several
//! minimal solutions the one modifying the smallest concepts wins, then
//! the canonical partition order, then the lexicographically smallest
//! degree vector.

mod report;

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::kb::{KnowledgeBase, Sentence};
use crate::par::Exec;
use crate::reasoner::Reasoner;
use crate::relax::{relax_formula, ConceptOperator, DegreeMap, FormulaRelaxMode, OperatorId};

/// What counts as a conflict between beliefs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Conflict {
    /// The KB has no model, i.e. `Cn(T) = Sen(Σ)`.
    Unsat,
    /// The KB has no model or some concept name is unsatisfiable.
    Incoherence,
}

impl Conflict {
    pub fn parse(s: &str) -> Option<Conflict> {
        match s {
            "unsat" => Some(Conflict::Unsat),
            "incoherence" => Some(Conflict::Incoherence),
            _ => None,
        }
    }

    pub fn is_conflicting(self, kb: &KnowledgeBase) -> Result<bool> {
        let r = Reasoner::new(kb);
        if !r.is_satisfiable()? {
            return Ok(true);
        }
        Ok(match self {
            Conflict::Unsat => false,
            Conflict::Incoherence => !r.is_coherent()?,
        })
    }
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Conflict::Unsat => "unsat",
            Conflict::Incoherence => "incoherence",
        })
    }
}

/// Sentence indices of `T₁`: `conflicting` is `T′₁`, `retained` is `T″₁`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    pub conflicting: Vec<usize>,
    pub retained: Vec<usize>,
}

impl Partition {
    fn from_retained(n: usize, retained: Vec<usize>) -> Self {
        let conflicting = (0..n).filter(|i| !retained.contains(i)).collect();
        Partition { conflicting, retained }
    }
}

#[derive(Debug, Clone)]
pub struct RevisionConfig {
    pub operator: ConceptOperator,
    pub mode: FormulaRelaxMode,
    pub conflict: Conflict,
    pub max_total_degree: u32,
    pub enumerate_all_minima: bool,
    /// KB deciding exception side conditions; `T₂` when absent.
    pub eligibility: Option<KnowledgeBase>,
    /// Largest `T₁` for which retained subsets are enumerated.
    pub max_partition_sentences: usize,
    pub exec: Exec,
}

impl RevisionConfig {
    pub fn new(operator: ConceptOperator, mode: FormulaRelaxMode, conflict: Conflict) -> Self {
        RevisionConfig {
            operator,
            mode,
            conflict,
            max_total_degree: 8,
            enumerate_all_minima: true,
            eligibility: None,
            max_partition_sentences: 16,
            exec: Exec::default(),
        }
    }

    /// `κ_⊥` on left-hand sides with generalized inconsistency as conflict.
    pub fn kappa_bot() -> Self {
        RevisionConfig::new(
            ConceptOperator::simple(OperatorId::KappaBot),
            FormulaRelaxMode::RetractLhs,
            Conflict::Unsat,
        )
    }

    /// `ρ_⊤` on right-hand sides with generalized inconsistency as conflict.
    pub fn rho_top() -> Self {
        RevisionConfig::new(
            ConceptOperator::simple(OperatorId::RhoTop),
            FormulaRelaxMode::RelaxRhs,
            Conflict::Unsat,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Resolved,
    Conflicting,
    /// The operator does not apply to some sentence at that degree.
    Inapplicable(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub partition: usize,
    pub degrees: DegreeMap,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RevisionResult {
    pub partition: Partition,
    /// Degrees over all indices of `T₁`; retained sentences have degree 0.
    pub degrees: DegreeMap,
    pub revised: KnowledgeBase,
    pub total_cost: u32,
    /// Other solutions of the same cost.
    pub alternatives: Vec<(Partition, DegreeMap)>,
    /// Candidates in evaluation order.
    pub trace: Vec<TraceEntry>,
    pub partitions: Vec<Partition>,
}

fn conflicting_with_signature(conflict: Conflict, base: &KnowledgeBase, sentences: Vec<Sentence>) -> Result<bool> {
    conflict.is_conflicting(&base.with_sentences(sentences)?)
}

/// All inclusion-maximal retained sets, by decreasing size and then by
/// ascending conflicting index set.
pub fn find_partitions(
    t1: &KnowledgeBase,
    t2: &KnowledgeBase,
    conflict: Conflict,
    max_sentences: usize,
    exec: Exec,
) -> Result<Vec<Partition>> {
    let n = t1.len();
    if n > max_sentences {
        return Err(Error::ResourceExceeded(format!(
            "partition search over {n} sentences exceeds the limit of {max_sentences}"
        )));
    }
    let base = t1.union(t2)?;
    let mut found: Vec<u64> = Vec::new();
    for size in (0..=n).rev() {
        let masks: Vec<u64> = (0u64..(1 << n))
            .filter(|m| m.count_ones() as usize == size)
            .filter(|m| !found.iter().any(|f| m & !f == 0))
            .collect();
        let verdicts = exec.map(&masks, |&m| {
            let sentences: Vec<Sentence> = (0..n)
                .filter(|i| m & (1 << i) != 0)
                .map(|i| t1.sentences()[i].clone())
                .chain(t2.iter().cloned())
                .collect();
            conflicting_with_signature(conflict, &base, sentences)
        });
        for (m, v) in masks.iter().zip(verdicts) {
            if !v? {
                found.push(*m);
            }
        }
    }
    let mut parts: Vec<Partition> = found
        .into_iter()
        .map(|m| Partition::from_retained(n, (0..n).filter(|i| m & (1 << i) != 0).collect()))
        .collect();
    parts.sort_by(|a, b| b.retained.len().cmp(&a.retained.len()).then_with(|| a.conflicting.cmp(&b.conflicting)));
    Ok(parts)
}

/// Compositions of `total` into `parts` nonnegative parts, in
/// lexicographic order.
pub(crate) fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn go(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=total {
            prefix.push(k);
            go(total - k, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(total, parts, &mut Vec::new(), &mut out);
    out
}

/// One group of candidates: relaxable sentences plus fixed sentences.
struct Group {
    relaxable: Vec<Sentence>,
    fixed: Vec<Sentence>,
}

struct Search<'a> {
    config: &'a RevisionConfig,
    base: KnowledgeBase,
    eligibility: KnowledgeBase,
    relaxed: HashMap<(Sentence, u32), std::result::Result<Sentence, String>>,
    verdicts: HashMap<Vec<Sentence>, bool>,
    trace: Vec<TraceEntry>,
    candidates: usize,
}

struct Found {
    cost: u32,
    passers: Vec<(usize, Vec<u32>)>,
}

impl<'a> Search<'a> {
    fn new(config: &'a RevisionConfig, base: KnowledgeBase, t2: &KnowledgeBase) -> Self {
        Search {
            config,
            base,
            eligibility: config.eligibility.clone().unwrap_or_else(|| t2.clone()),
            relaxed: HashMap::new(),
            verdicts: HashMap::new(),
            trace: Vec::new(),
            candidates: 0,
        }
    }

    fn relax(&mut self, s: &Sentence, k: u32) -> Result<std::result::Result<Sentence, String>> {
        if let Some(r) = self.relaxed.get(&(s.clone(), k)) {
            return Ok(r.clone());
        }
        let r = match relax_formula(s, self.config.mode, &self.config.operator, k as usize, &self.eligibility) {
            Ok(r) => Ok(r),
            Err(e @ (Error::NotEnoughExceptions { .. } | Error::UnsupportedShape(_) | Error::DialectViolation { .. })) => {
                Err(e.to_string())
            }
            Err(e) => return Err(e),
        };
        self.relaxed.insert((s.clone(), k), r.clone());
        Ok(r)
    }

    /// Iterative deepening from `start`; all passing candidates of the
    /// first successful level, in canonical order.
    fn run(&mut self, groups: &[Group], t2: &KnowledgeBase, start: u32, all: bool) -> Result<Found> {
        for s in start..=self.config.max_total_degree {
            let mut cands: Vec<(usize, Vec<u32>, std::result::Result<Vec<Sentence>, String>)> = Vec::new();
            for (gi, g) in groups.iter().enumerate() {
                for comp in compositions(s, g.relaxable.len()) {
                    let mut sentences = Vec::new();
                    let mut failure = None;
                    for (sent, &k) in g.relaxable.iter().zip(&comp) {
                        match self.relax(sent, k)? {
                            Ok(r) => sentences.push(r),
                            Err(e) => {
                                failure = Some(e);
                                break;
                            }
                        }
                    }
                    let body = match failure {
                        Some(e) => Err(e),
                        None => {
                            sentences.extend(g.fixed.iter().cloned());
                            sentences.extend(t2.iter().cloned());
                            sentences.sort();
                            sentences.dedup();
                            Ok(sentences)
                        }
                    };
                    cands.push((gi, comp, body));
                }
            }
            self.candidates += cands.len();

            let mut fresh: Vec<Vec<Sentence>> = cands
                .iter()
                .filter_map(|(_, _, b)| b.as_ref().ok())
                .filter(|b| !self.verdicts.contains_key(*b))
                .cloned()
                .collect();
            fresh.sort();
            fresh.dedup();
            let conflict = self.config.conflict;
            let base = &self.base;
            let results = self.config.exec.map(&fresh, |ss| conflicting_with_signature(conflict, base, ss.clone()));
            for (key, r) in fresh.into_iter().zip(results) {
                self.verdicts.insert(key, !r?);
            }

            let mut passers = Vec::new();
            for (gi, comp, body) in cands {
                let verdict = match &body {
                    Err(e) => Verdict::Inapplicable(e.clone()),
                    Ok(b) if self.verdicts[b] => Verdict::Resolved,
                    Ok(_) => Verdict::Conflicting,
                };
                let resolved = verdict == Verdict::Resolved;
                self.trace.push(TraceEntry {
                    partition: gi,
                    degrees: DegreeMap::from_pairs(comp.iter().copied().enumerate()),
                    verdict,
                });
                if resolved {
                    passers.push((gi, comp));
                    if !all {
                        return Ok(Found { cost: s, passers });
                    }
                }
            }
            if !passers.is_empty() {
                return Ok(Found { cost: s, passers });
            }
        }
        Err(Error::BudgetExceeded {
            max_total_degree: self.config.max_total_degree,
            candidates: self.candidates,
        })
    }
}

/// Minimal-total degree maps (over the indices of `conflicting`) that make
/// `ρ^K(conflicting) ∪ retained ∪ t2` conflict-free.
pub fn minimal_degree_search(
    conflicting: &KnowledgeBase,
    retained: &KnowledgeBase,
    t2: &KnowledgeBase,
    config: &RevisionConfig,
) -> Result<Vec<DegreeMap>> {
    let base = KnowledgeBase::union_all([conflicting, retained, t2])?;
    let mut search = Search::new(config, base, t2);
    let groups = [Group {
        relaxable: conflicting.sentences().to_vec(),
        fixed: retained.sentences().to_vec(),
    }];
    let found = search.run(&groups, t2, 0, config.enumerate_all_minima)?;
    Ok(found
        .passers
        .into_iter()
        .map(|(_, comp)| DegreeMap::from_pairs(comp.into_iter().enumerate()))
        .collect())
}

fn modified_size(s: &Sentence, mode: FormulaRelaxMode) -> usize {
    match (s, mode) {
        (Sentence::Gci(c, _), FormulaRelaxMode::RetractLhs) => c.size(),
        (Sentence::Gci(_, d), FormulaRelaxMode::RelaxRhs) => d.size(),
        (Sentence::InstanceOf(_, c), _) => c.size(),
        (Sentence::RoleFact(..), _) => 1,
    }
}

/// `T₁ ∘ T₂`.
pub fn revise(t1: &KnowledgeBase, t2: &KnowledgeBase, config: &RevisionConfig) -> Result<RevisionResult> {
    if config.conflict.is_conflicting(t2)? {
        return Err(Error::ConflictingInput);
    }
    let base = t1.union(t2)?;
    let n = t1.len();
    if !config.conflict.is_conflicting(&base)? {
        let partition = Partition::from_retained(n, (0..n).collect());
        return Ok(RevisionResult {
            partition: partition.clone(),
            degrees: DegreeMap::zeros(0..n),
            revised: base,
            total_cost: 0,
            alternatives: Vec::new(),
            trace: Vec::new(),
            partitions: vec![partition],
        });
    }

    let partitions = find_partitions(t1, t2, config.conflict, config.max_partition_sentences, config.exec)?;
    let groups: Vec<Group> = partitions
        .iter()
        .map(|p| Group {
            relaxable: p.conflicting.iter().map(|&i| t1.sentences()[i].clone()).collect(),
            fixed: p.retained.iter().map(|&i| t1.sentences()[i].clone()).collect(),
        })
        .collect();
    let mut search = Search::new(config, base.clone(), t2);
    let found = search.run(&groups, t2, 1, true)?;

    let full = |gi: usize, comp: &[u32]| {
        let p = &partitions[gi];
        let mut d = DegreeMap::zeros(0..n);
        for (&i, &k) in p.conflicting.iter().zip(comp) {
            d.set(i, k);
        }
        d
    };
    let mut ranked: Vec<(usize, usize, Vec<u32>)> = found
        .passers
        .iter()
        .map(|(gi, comp)| {
            let size = partitions[*gi]
                .conflicting
                .iter()
                .zip(comp)
                .filter(|(_, &k)| k > 0)
                .map(|(&i, _)| modified_size(&t1.sentences()[i], config.mode))
                .sum();
            (size, *gi, comp.clone())
        })
        .collect();
    ranked.sort();
    let (_, gi, comp) = ranked[0].clone();
    let degrees = full(gi, &comp);

    let mut sentences = Vec::with_capacity(n + t2.len());
    for (i, s) in t1.iter().enumerate() {
        let k = degrees.get(i);
        sentences.push(search.relax(s, k)?.map_err(Error::Invalid)?);
    }
    sentences.extend(t2.iter().cloned());
    let revised = base.with_sentences(sentences)?;

    let alternatives = ranked[1..]
        .iter()
        .map(|(_, gi, comp)| (partitions[*gi].clone(), full(*gi, comp)))
        .collect();
    let trace = search
        .trace
        .into_iter()
        .map(|t| TraceEntry {
            degrees: full(t.partition, &t.degrees.values()),
            ..t
        })
        .collect();
    Ok(RevisionResult {
        partition: partitions[gi].clone(),
        degrees,
        revised,
        total_cost: found.cost,
        alternatives,
        trace,
        partitions,
    })
}

/// Relevance with `X = T″₁ ∪ (T₁ ∩ (T₁ ∘ T₂))`: `X ∪ T₂` is conflict-free
/// and adding any removed sentence of `T₁` brings the conflict back.
pub fn check_relevance(
    t1: &KnowledgeBase,
    t2: &KnowledgeBase,
    result: &RevisionResult,
    conflict: Conflict,
) -> Result<bool> {
    let base = t1.union(t2)?.union(&result.revised)?;
    let x: Vec<Sentence> = t1
        .iter()
        .enumerate()
        .filter(|(i, s)| result.partition.retained.contains(i) || result.revised.contains(s))
        .map(|(_, s)| s.clone())
        .collect();
    let removed: Vec<&Sentence> = t1.iter().filter(|s| !result.revised.contains(s)).collect();
    if removed.is_empty() {
        return Ok(true);
    }
    let with_t2 = |extra: Option<&Sentence>| -> Vec<Sentence> {
        x.iter().cloned().chain(extra.cloned()).chain(t2.iter().cloned()).collect()
    };
    if conflicting_with_signature(conflict, &base, with_t2(None))? {
        return Ok(false);
    }
    for phi in removed {
        if !conflicting_with_signature(conflict, &base, with_t2(Some(phi)))? {
            return Ok(false);
        }
    }
    Ok(true)
}
