//! (G1)–(G6), Relevance and the representation property on concrete inputs.

use std::collections::BTreeSet;
use std::fmt;

use super::rank::{equivalent_variants, Rank, RankTable};
use super::{joint_signature, model_set_in, InterpretationId};
use crate::concept::{Concept, Dialect};
use crate::error::{Error, Result};
use crate::gen::{self, GenConfig};
use crate::kb::{KnowledgeBase, Signature};
use crate::reasoner::Reasoner;
use crate::revise::{check_relevance, revise, Conflict, RevisionConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PostulateVerdict {
    Holds,
    Fails(String),
    NotDecidable(String),
}

impl PostulateVerdict {
    fn severity(&self) -> u8 {
        match self {
            PostulateVerdict::Holds => 0,
            PostulateVerdict::NotDecidable(_) => 1,
            PostulateVerdict::Fails(_) => 2,
        }
    }
}

impl fmt::Display for PostulateVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PostulateVerdict::Holds => f.write_str("HOLDS"),
            PostulateVerdict::Fails(why) => write!(f, "FAILS: {why}"),
            PostulateVerdict::NotDecidable(why) => write!(f, "NOT-DECIDABLE: {why}"),
        }
    }
}

/// Whether a verdict rests on reasoning or on bounded enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Exact,
    Domain(usize),
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Exact => f.write_str("exact"),
            Scope::Domain(n) => write!(f, "domain<={n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PostulateLine {
    pub name: &'static str,
    pub verdict: PostulateVerdict,
    pub scope: Scope,
    pub seed: u64,
    /// Instances merged into this line.
    pub instances: usize,
    /// Merged instances with a failing verdict.
    pub failures: usize,
}

impl fmt::Display for PostulateLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.verdict {
            PostulateVerdict::Holds => write!(f, "POSTULATE {}: HOLDS ({})", self.name, self.scope),
            PostulateVerdict::Fails(why) => {
                write!(f, "POSTULATE {}: FAILS seed={} ({}): {why}", self.name, self.seed, self.scope)
            }
            PostulateVerdict::NotDecidable(why) => {
                write!(f, "POSTULATE {}: NOT-DECIDABLE seed={} ({}): {why}", self.name, self.seed, self.scope)
            }
        }
    }
}

/// One line per postulate; merging keeps the worst verdict seen first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PostulateReport {
    pub lines: Vec<PostulateLine>,
}

impl PostulateReport {
    fn push(&mut self, name: &'static str, verdict: PostulateVerdict, scope: Scope, seed: u64) {
        self.lines.push(PostulateLine {
            name,
            scope,
            seed,
            instances: 1,
            failures: matches!(verdict, PostulateVerdict::Fails(_)) as usize,
            verdict,
        });
    }

    pub fn line(&self, name: &str) -> Option<&PostulateLine> {
        self.lines.iter().find(|l| l.name == name)
    }

    pub fn holds(&self, name: &str) -> bool {
        self.line(name).is_some_and(|l| l.verdict == PostulateVerdict::Holds)
    }

    pub fn fails(&self, name: &str) -> bool {
        self.line(name).is_some_and(|l| matches!(l.verdict, PostulateVerdict::Fails(_)))
    }

    pub fn merge(&mut self, other: &PostulateReport) {
        for l in &other.lines {
            match self.lines.iter_mut().find(|m| m.name == l.name) {
                Some(m) => {
                    m.instances += l.instances;
                    m.failures += l.failures;
                    if l.verdict.severity() > m.verdict.severity() {
                        m.verdict = l.verdict.clone();
                        m.seed = l.seed;
                    }
                    if let (Scope::Domain(a), Scope::Domain(b)) = (m.scope, l.scope) {
                        m.scope = Scope::Domain(a.min(b));
                    }
                }
                None => self.lines.push(l.clone()),
            }
        }
    }
}

impl fmt::Display for PostulateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

fn unsat(kb: &KnowledgeBase) -> Result<bool> {
    Ok(!Reasoner::new(kb).is_satisfiable()?)
}

fn equivalent_kbs(a: &KnowledgeBase, b: &KnowledgeBase) -> Result<bool> {
    if a.same_sentences(b) {
        return Ok(true);
    }
    let (ra, rb) = (Reasoner::new(a), Reasoner::new(b));
    for s in b.iter() {
        if !ra.entails(s)? {
            return Ok(false);
        }
    }
    for s in a.iter() {
        if !rb.entails(s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn subset_witness(a: &BTreeSet<InterpretationId>, b: &BTreeSet<InterpretationId>) -> PostulateVerdict {
    match a.difference(b).next() {
        None => PostulateVerdict::Holds,
        Some(id) => PostulateVerdict::Fails(format!("interpretation {id:?} breaks the inclusion")),
    }
}

/// Generator over the names of `sig` for sampling `T″`.
fn sampler(sig: &Signature, dialect: Dialect) -> GenConfig {
    GenConfig {
        dialect,
        concept_names: sig.concept_names.iter().cloned().collect(),
        roles: sig.role_names.iter().cloned().collect(),
        individuals: sig.individuals.iter().cloned().collect(),
        max_depth: 1,
        max_size: 4,
        constants: false,
    }
}

/// Checks every postulate for the revision function `op` on `(t, t2)`,
/// with `T″` and the equivalent variants drawn from `seed`.
pub fn check_postulates_with(
    t: &KnowledgeBase,
    t2: &KnowledgeBase,
    n: usize,
    seed: u64,
    op: &dyn Fn(&KnowledgeBase, &KnowledgeBase) -> Result<KnowledgeBase>,
) -> Result<PostulateReport> {
    let mut report = PostulateReport::default();
    let dom = Scope::Domain(n);
    let nd = |why: &str| PostulateVerdict::NotDecidable(why.to_string());
    let names = ["G1", "G2", "G3", "G4", "G5", "G6"];

    let result = match op(t, t2) {
        Ok(r) => r,
        Err(e @ (Error::ConflictingInput | Error::BudgetExceeded { .. } | Error::ResourceExceeded(_))) => {
            for name in names {
                report.push(name, nd(&e.to_string()), Scope::Exact, seed);
            }
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    let union = t.union(t2)?;
    let mut rng = gen::rng(seed);
    let dialect = union.dialect();
    let t3 = {
        let base = joint_signature([t, t2])?;
        let s = gen::sentence(&mut rng, &sampler(&base, dialect));
        KnowledgeBase::from_sentences([s])?
    };
    let sig = joint_signature([t, t2, &t3, &result])?;
    let exec = crate::par::Exec::default();
    let models = |kb: &KnowledgeBase| model_set_in(&sig, kb, n, exec);
    let result_models = models(&result)?;

    report.push("G1", subset_witness(&result_models, &models(t2)?), dom, seed);

    let g2 = if unsat(&union)? || result.same_sentences(&union) {
        PostulateVerdict::Holds
    } else {
        PostulateVerdict::Fails("consistent union was modified".into())
    };
    report.push("G2", g2, Scope::Exact, seed);

    let g3 = if unsat(t2)? || !unsat(&result)? {
        PostulateVerdict::Holds
    } else {
        PostulateVerdict::Fails("consistent new belief gave an inconsistent revision".into())
    };
    report.push("G3", g3, Scope::Exact, seed);

    let mut g4 = PostulateVerdict::Holds;
    let pick = |kb: &KnowledgeBase, rng: &mut gen::GenRng| -> Result<Option<KnowledgeBase>> {
        let vs = equivalent_variants(kb)?;
        Ok(if vs.is_empty() {
            None
        } else {
            Some(vs[rand::Rng::gen_range(rng, 0..vs.len())].clone())
        })
    };
    let v1 = pick(t, &mut rng)?;
    let v2 = pick(t2, &mut rng)?;
    let pairs = [(v1.clone(), None), (None, v2.clone()), (v1, v2)];
    for (a, b) in pairs {
        if a.is_none() && b.is_none() {
            continue;
        }
        let a = a.unwrap_or_else(|| t.clone());
        let b = b.unwrap_or_else(|| t2.clone());
        match op(&a, &b) {
            Ok(other) => {
                let other_models = model_set_in(&sig.merge(other.signature())?, &other, n, exec)?;
                if other_models != result_models {
                    g4 = PostulateVerdict::Fails(format!(
                        "equivalent inputs revise to {} and {} finite models",
                        result_models.len(),
                        other_models.len()
                    ));
                    break;
                }
            }
            Err(e @ (Error::BudgetExceeded { .. } | Error::ResourceExceeded(_))) => g4 = nd(&e.to_string()),
            Err(e) => return Err(e),
        }
    }
    report.push("G4", g4, dom, seed);

    let t23 = t2.union(&t3)?;
    let lhs: BTreeSet<_> = result_models.intersection(&models(&t3)?).copied().collect();
    let g5 = match op(t, &t23) {
        Ok(r) => subset_witness(&lhs, &models(&r)?),
        Err(Error::ConflictingInput) => subset_witness(&lhs, &BTreeSet::new()),
        Err(e @ (Error::BudgetExceeded { .. } | Error::ResourceExceeded(_))) => nd(&e.to_string()),
        Err(e) => return Err(e),
    };
    report.push("G5", g5, dom, seed);

    let g6 = if unsat(&union.union(&t3)?)? {
        PostulateVerdict::Holds
    } else {
        match op(t, &t23) {
            Ok(r) if equivalent_kbs(&r, &result.union(&t3)?)? => PostulateVerdict::Holds,
            Ok(_) => PostulateVerdict::Fails("revising by T′ ∪ T″ differs from adding T″".into()),
            Err(e) => nd(&e.to_string()),
        }
    };
    report.push("G6", g6, Scope::Exact, seed);
    Ok(report)
}

/// Postulates of [`revise`] under `config`, plus Relevance.
pub fn check_postulates(
    t: &KnowledgeBase,
    t2: &KnowledgeBase,
    config: &RevisionConfig,
    n: usize,
    seed: u64,
) -> Result<PostulateReport> {
    let mut report = check_postulates_with(t, t2, n, seed, &|a, b| revise(a, b, config).map(|r| r.revised))?;
    let relevance = match revise(t, t2, config) {
        Ok(r) => {
            if check_relevance(t, t2, &r, Conflict::Unsat)? {
                PostulateVerdict::Holds
            } else {
                PostulateVerdict::Fails("a removed sentence is not needed for the conflict".into())
            }
        }
        Err(e) => PostulateVerdict::NotDecidable(e.to_string()),
    };
    report.push("RELEVANCE", relevance, Scope::Exact, seed);
    Ok(report)
}

/// Comparison of `Mod(T ∘ T′)` with the rank-minimal models of `T′`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub holds: bool,
    pub result_models: usize,
    pub minimal_models: usize,
    /// Interpretations in exactly one of the two sets, with their rank.
    pub only_in_result: Vec<(InterpretationId, Rank)>,
    pub only_in_minimal: Vec<(InterpretationId, Rank)>,
    pub m_star_empty: bool,
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "REPRESENTATION: {} result_models={} minimal_models={} m_star_empty={}",
            if self.holds { "HOLDS" } else { "FAILS" },
            self.result_models,
            self.minimal_models,
            self.m_star_empty
        )?;
        for (id, r) in &self.only_in_result {
            writeln!(f, "  only-in-result size={} index={} rank={r}", id.0, id.1)?;
        }
        for (id, r) in &self.only_in_minimal {
            writeln!(f, "  only-in-minimal size={} index={} rank={r}", id.0, id.1)?;
        }
        Ok(())
    }
}

pub fn check_representation(
    t: &KnowledgeBase,
    t2: &KnowledgeBase,
    config: &RevisionConfig,
    n: usize,
    max_sum: u32,
) -> Result<Representation> {
    let result = revise(t, t2, config)?;
    let sig = joint_signature([t, t2, &result.revised])?;
    let exec = config.exec;
    let bottom = KnowledgeBase::from_sentences([crate::kb::Sentence::Gci(Concept::Top, Concept::Bot)])?;
    let m_star = model_set_in(&sig, &bottom, n, exec)?;
    let eligibility = config.eligibility.clone().unwrap_or_else(|| t2.clone());
    let table = RankTable::build(t, &sig, config.mode, &config.operator, &eligibility, n, max_sum, exec)?;
    let candidates: BTreeSet<_> = model_set_in(&sig, t2, n, exec)?.difference(&m_star).copied().collect();
    let minimal = table.minimal(&candidates);
    let revised = model_set_in(&sig, &result.revised, n, exec)?;
    let only_in_result: Vec<_> = revised.difference(&minimal).map(|&id| (id, table.get(id))).collect();
    let only_in_minimal: Vec<_> = minimal.difference(&revised).map(|&id| (id, table.get(id))).collect();
    Ok(Representation {
        holds: only_in_result.is_empty() && only_in_minimal.is_empty(),
        result_models: revised.len(),
        minimal_models: minimal.len(),
        only_in_result,
        only_in_minimal,
        m_star_empty: m_star.is_empty(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_kb;

    fn kb(body: &str) -> KnowledgeBase {
        parse_kb(&format!("dialect ALC\n{body}")).unwrap()
    }

    #[test]
    fn consistent_union_is_kept() {
        let r = check_postulates(&kb("A [= B."), &kb("B [= E."), &RevisionConfig::kappa_bot(), 2, 1).unwrap();
        for name in ["G1", "G2", "G3", "G6", "RELEVANCE"] {
            assert!(r.holds(name), "{r}");
        }
    }

    #[test]
    fn adversarial_operator_breaks_g3() {
        let t = kb("a : A.");
        let t2 = kb("a : not A.");
        let bad = |x: &KnowledgeBase, y: &KnowledgeBase| -> Result<KnowledgeBase> {
            let u = x.union(y)?;
            if Reasoner::new(&u).is_satisfiable()? {
                Ok(y.clone())
            } else {
                KnowledgeBase::from_sentences([crate::kb::Sentence::Gci(Concept::Top, Concept::Bot)])
            }
        };
        let r = check_postulates_with(&t, &t2, 1, 5, &bad).unwrap();
        assert!(r.fails("G3"), "{r}");
        assert!(r.to_string().contains("POSTULATE G3: FAILS seed=5"));
    }

    #[test]
    fn representation_for_a_single_assertion() {
        let rep = check_representation(&kb("a : A."), &kb("a : not A."), &RevisionConfig::rho_top(), 1, 4).unwrap();
        assert!(rep.holds, "{rep}");
        assert!(rep.m_star_empty);
        assert_eq!(rep.result_models, 1);
    }

    #[test]
    fn representation_for_a_consistent_union() {
        let rep = check_representation(&kb("A [= B."), &kb("B [= E."), &RevisionConfig::rho_top(), 2, 4).unwrap();
        assert!(rep.holds, "{rep}");
    }

    #[test]
    fn report_lines_merge() {
        let mut a = PostulateReport::default();
        a.push("G1", PostulateVerdict::Holds, Scope::Domain(2), 1);
        let mut b = PostulateReport::default();
        b.push("G1", PostulateVerdict::Fails("x".into()), Scope::Domain(2), 9);
        a.merge(&b);
        assert_eq!(a.lines[0].to_string(), "POSTULATE G1: FAILS seed=9 (domain<=2): x");
        assert_eq!(a.lines[0].instances, 2);
        assert_eq!(a.lines[0].failures, 1);
    }
}
