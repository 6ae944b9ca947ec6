//! Ranks `min_{K | I ⊨ ρ^K(T)} Σ k` and the pre-order they induce.

use std::collections::{BTreeMap, BTreeSet};

use super::postulates::PostulateVerdict;
use super::{decode, interpretation_count, model_set_in, satisfies, FiniteInterpretation, InterpretationId};
use crate::concept::Concept;
use crate::error::{Error, Result};
use crate::kb::{KnowledgeBase, Sentence, Signature};
use crate::par::Exec;
use crate::reasoner::Reasoner;
use crate::relax::{relax_formula, ConceptOperator, FormulaRelaxMode};

/// `Unreached` compares above every reached rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rank {
    Reached(u32),
    Unreached,
}

impl std::fmt::Display for Rank {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rank::Reached(k) => write!(f, "{k}"),
            Rank::Unreached => f.write_str("unreached"),
        }
    }
}

/// `ladder[i][k]` is `ρ^k(φ_i)`, or `None` where the operator does not apply.
fn ladder(
    kb: &KnowledgeBase,
    mode: FormulaRelaxMode,
    op: &ConceptOperator,
    eligibility: &KnowledgeBase,
    max_sum: u32,
) -> Result<Vec<Vec<Option<Sentence>>>> {
    kb.iter()
        .map(|s| {
            (0..=max_sum)
                .map(|k| match relax_formula(s, mode, op, k as usize, eligibility) {
                    Ok(r) => Ok(Some(r)),
                    Err(Error::NotEnoughExceptions { .. } | Error::UnsupportedShape(_)) => Ok(None),
                    Err(e) => Err(e),
                })
                .collect()
        })
        .collect()
}

/// Sentences are relaxed independently, so the minimal total is the sum
/// of the per-sentence minimal degrees.
fn rank_in(i: &FiniteInterpretation, ladder: &[Vec<Option<Sentence>>], max_sum: u32) -> Rank {
    let mut total = 0;
    for rungs in ladder {
        let Some(k) = rungs.iter().position(|r| r.as_ref().is_some_and(|s| satisfies(i, s))) else {
            return Rank::Unreached;
        };
        total += k as u32;
        if total > max_sum {
            return Rank::Unreached;
        }
    }
    Rank::Reached(total)
}

pub fn rank(
    i: &FiniteInterpretation,
    kb: &KnowledgeBase,
    mode: FormulaRelaxMode,
    op: &ConceptOperator,
    eligibility: &KnowledgeBase,
    max_sum: u32,
) -> Result<Rank> {
    Ok(rank_in(i, &ladder(kb, mode, op, eligibility, max_sum)?, max_sum))
}

/// Ranks of every interpretation of a signature at domain sizes `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    pub ranks: BTreeMap<InterpretationId, Rank>,
    pub max_sum: u32,
}

impl RankTable {
    #[allow(clippy::too_many_arguments)]
    pub fn build(
        kb: &KnowledgeBase,
        sig: &Signature,
        mode: FormulaRelaxMode,
        op: &ConceptOperator,
        eligibility: &KnowledgeBase,
        n: usize,
        max_sum: u32,
        exec: Exec,
    ) -> Result<RankTable> {
        let ladder = ladder(kb, mode, op, eligibility, max_sum)?;
        let mut ranks = BTreeMap::new();
        for size in 1..=n {
            let count = interpretation_count(sig, size)?;
            let rs = exec.filter_map_range(0..count, |idx| Some((idx, rank_in(&decode(sig, size, idx), &ladder, max_sum))));
            ranks.extend(rs.into_iter().map(|(idx, r)| ((size, idx), r)));
        }
        Ok(RankTable { ranks, max_sum })
    }

    pub fn get(&self, id: InterpretationId) -> Rank {
        self.ranks.get(&id).copied().unwrap_or(Rank::Unreached)
    }

    pub fn unreached(&self) -> usize {
        self.ranks.values().filter(|r| **r == Rank::Unreached).count()
    }

    /// Elements of `among` with the smallest rank.
    pub fn minimal(&self, among: &BTreeSet<InterpretationId>) -> BTreeSet<InterpretationId> {
        let Some(best) = among.iter().map(|&id| self.get(id)).min() else {
            return BTreeSet::new();
        };
        among.iter().copied().filter(|&id| self.get(id) == best).collect()
    }

    /// Whether both tables induce the same pre-order on the interpretations
    /// ranked by both; otherwise a pair ordered differently.
    fn same_order(&self, other: &RankTable) -> std::result::Result<(), (InterpretationId, InterpretationId)> {
        // equal pre-orders <=> the rank map self -> other is a strictly increasing function
        let mut image: BTreeMap<u32, (u32, InterpretationId)> = BTreeMap::new();
        for (&id, &r) in &self.ranks {
            let (Rank::Reached(a), Rank::Reached(b)) = (r, other.get(id)) else {
                continue;
            };
            match image.get(&a) {
                Some(&(b0, id0)) if b0 != b => return Err((id0, id)),
                _ => {
                    image.insert(a, (b, id));
                }
            }
        }
        let pairs: Vec<_> = image.values().collect();
        for w in pairs.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err((w[0].1, w[1].1));
            }
        }
        Ok(())
    }
}

/// Conditions of a faithful assignment for the rank-induced pre-order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaReport {
    pub models_tied: PostulateVerdict,
    pub models_first: PostulateVerdict,
    pub syntax_independent: PostulateVerdict,
    pub unreached: usize,
    pub variants: usize,
}

impl FaReport {
    pub fn holds(&self) -> bool {
        [&self.models_tied, &self.models_first, &self.syntax_independent]
            .iter()
            .all(|v| !matches!(v, PostulateVerdict::Fails(_)))
    }
}

impl std::fmt::Display for FaReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "FA 1: {}", self.models_tied)?;
        writeln!(f, "FA 2: {}", self.models_first)?;
        writeln!(f, "FA 3: {} (variants={})", self.syntax_independent, self.variants)?;
        writeln!(f, "unreached={}", self.unreached)
    }
}

/// Checks conditions 1 and 2 against the models of `kb` and condition 3
/// against each variant with the same finite model set.
#[allow(clippy::too_many_arguments)]
pub fn check_faithful_assignment(
    kb: &KnowledgeBase,
    variants: &[KnowledgeBase],
    sig: &Signature,
    mode: FormulaRelaxMode,
    op: &ConceptOperator,
    eligibility: &KnowledgeBase,
    n: usize,
    max_sum: u32,
    exec: Exec,
) -> Result<FaReport> {
    let table = RankTable::build(kb, sig, mode, op, eligibility, n, max_sum, exec)?;
    let models = model_set_in(sig, kb, n, exec)?;
    let mut tied = PostulateVerdict::Holds;
    let mut first = PostulateVerdict::Holds;
    for (&id, &r) in &table.ranks {
        let is_model = models.contains(&id);
        if is_model && r != Rank::Reached(0) && tied == PostulateVerdict::Holds {
            tied = PostulateVerdict::Fails(format!("model {id:?} has rank {r}"));
        }
        if !is_model && r == Rank::Reached(0) && first == PostulateVerdict::Holds {
            first = PostulateVerdict::Fails(format!("non-model {id:?} has rank 0"));
        }
    }

    let mut same = PostulateVerdict::Holds;
    let mut compared = 0;
    for v in variants {
        if model_set_in(sig, v, n, exec)? != models {
            continue;
        }
        compared += 1;
        let other = RankTable::build(v, sig, mode, op, eligibility, n, max_sum, exec)?;
        if let Err((i, j)) = table.same_order(&other) {
            same = PostulateVerdict::Fails(format!(
                "ranks {} vs {} under the KB become {} vs {} under an equivalent KB ({i:?}, {j:?})",
                table.get(i),
                table.get(j),
                other.get(i),
                other.get(j),
            ));
            break;
        }
        if other.unreached() > 0 || table.unreached() > 0 {
            same = PostulateVerdict::NotDecidable("unreached ranks are tied".into());
        }
    }
    Ok(FaReport {
        models_tied: tied,
        models_first: first,
        syntax_independent: same,
        unreached: table.unreached(),
        variants: compared,
    })
}

/// KBs equivalent to `kb`, each adding one sentence the reasoner proves
/// entailed: joined right-hand sides, strengthened left-hand sides,
/// weakened assertions and joined assertions.
pub fn equivalent_variants(kb: &KnowledgeBase) -> Result<Vec<KnowledgeBase>> {
    let atom = kb.signature().concept_names.first().map(|a| Concept::Atom(a.clone()));
    let mut candidates = Vec::new();
    for (i, s) in kb.iter().enumerate() {
        match s {
            Sentence::Gci(c, d) => {
                if let Some(a) = &atom {
                    candidates.push(Sentence::Gci(Concept::and2(c.clone(), a.clone()), d.clone()));
                }
                for t in &kb.sentences()[i + 1..] {
                    if let Sentence::Gci(c2, d2) = t {
                        if c2 == c {
                            candidates.push(Sentence::Gci(c.clone(), Concept::and2(d.clone(), d2.clone())));
                        }
                    }
                }
            }
            Sentence::InstanceOf(x, c) => {
                if let Some(a) = &atom {
                    candidates.push(Sentence::InstanceOf(x.clone(), Concept::or2(c.clone(), a.clone())));
                }
                for t in &kb.sentences()[i + 1..] {
                    if let Sentence::InstanceOf(y, c2) = t {
                        if y == x {
                            candidates.push(Sentence::InstanceOf(x.clone(), Concept::and2(c.clone(), c2.clone())));
                        }
                    }
                }
            }
            Sentence::RoleFact(..) => {}
        }
    }
    let reasoner = Reasoner::new(kb);
    let mut out = Vec::new();
    for s in candidates {
        if kb.contains(&s) || !reasoner.entails(&s)? {
            continue;
        }
        let mut sentences = kb.sentences().to_vec();
        sentences.push(s);
        out.push(kb.with_sentences(sentences)?);
    }
    Ok(out)
}
