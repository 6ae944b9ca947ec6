use rand::Rng;

use relaxrev::gen::{self, GenConfig};
use relaxrev::oracle::{
    check_faithful_assignment, check_postulates, check_representation, equivalent_variants, joint_signature,
    PostulateReport, PostulateVerdict,
};
use relaxrev::par::Exec;
use relaxrev::reasoner::is_satisfiable;
use relaxrev::revise::RevisionConfig;
use relaxrev::{Concept, Dialect, KnowledgeBase, Sentence};

use crate::Outcome;

const DOMAIN: usize = 2;
const MAX_SUM: u32 = 4;

fn config(seed: u64) -> RevisionConfig {
    let mut c = if seed % 2 == 0 { RevisionConfig::kappa_bot() } else { RevisionConfig::rho_top() };
    c.exec = Exec::Sequential;
    c
}

/// A sentence contradicting `s`, when one is easy to state.
fn contradiction(s: &Sentence, individual: &relaxrev::Name) -> Option<Sentence> {
    match s {
        Sentence::InstanceOf(a, c) => Some(Sentence::InstanceOf(a.clone(), Concept::not(c.clone()))),
        Sentence::Gci(c, d) => Some(Sentence::InstanceOf(
            individual.clone(),
            Concept::and2(c.clone(), Concept::not(d.clone())),
        )),
        Sentence::RoleFact(a, _, relaxrev::RoleRef::Named(r)) => {
            Some(Sentence::InstanceOf(a.clone(), Concept::forall(r.as_str(), Concept::Bot)))
        }
        Sentence::RoleFact(..) => None,
    }
}

/// `(T, T′)` with `T′` satisfiable and often in conflict with `T`.
pub fn instance(seed: u64) -> (KnowledgeBase, KnowledgeBase) {
    let cfg = GenConfig {
        max_depth: 1,
        max_size: 5,
        constants: false,
        ..GenConfig::small(Dialect::ALC, 3, 1, 2)
    };
    let mut rng = gen::rng(seed);
    let t = gen::kb(&mut rng, &cfg, 1, 5).unwrap();
    loop {
        let mut sentences: Vec<Sentence> = (0..rng.gen_range(0..=1)).map(|_| gen::sentence(&mut rng, &cfg)).collect();
        if rng.gen_bool(0.7) {
            let s = &t.sentences()[rng.gen_range(0..t.len())];
            let a = &cfg.individuals[rng.gen_range(0..cfg.individuals.len())];
            sentences.extend(contradiction(s, a));
        }
        if sentences.is_empty() {
            sentences.push(gen::sentence(&mut rng, &cfg));
        }
        let t2 = KnowledgeBase::new(cfg.signature(), Dialect::ALC, sentences).unwrap();
        if is_satisfiable(&t2).unwrap() {
            return (t, t2);
        }
    }
}

fn conflicting(t: &KnowledgeBase, t2: &KnowledgeBase) -> bool {
    !is_satisfiable(&t.union(t2).unwrap()).unwrap()
}

pub fn postulate_suite() -> Outcome {
    let seeds: Vec<u64> = (0..500).collect();
    let reports = Exec::default().map(&seeds, |&seed| {
        let (t, t2) = instance(seed);
        let report = check_postulates(&t, &t2, &config(seed), DOMAIN, seed);
        (conflicting(&t, &t2), report)
    });
    let mut merged = PostulateReport::default();
    let mut conflicts = 0;
    for (c, r) in reports {
        conflicts += c as usize;
        match r {
            Ok(r) => merged.merge(&r),
            Err(e) => return Outcome::new(false, format!("checker error: {e}")),
        }
    }
    let pass = merged
        .lines
        .iter()
        .all(|l| !matches!(l.verdict, PostulateVerdict::Fails(_)));
    let lines: Vec<String> = merged.lines.iter().map(|l| format!("{l} instances={} failures={}", l.instances, l.failures)).collect();
    Outcome::new(
        pass,
        format!("instances=500 conflicting={conflicts}\n  {}", lines.join("\n  ")),
    )
}

pub fn representation() -> Outcome {
    let seeds: Vec<u64> = (1000..1100).collect();
    let results = Exec::default().map(&seeds, |&seed| {
        let (t, t2) = instance(seed);
        (seed, check_representation(&t, &t2, &config(seed), DOMAIN, MAX_SUM))
    });
    let mut findings = Vec::new();
    let mut holds = 0;
    for (seed, r) in results {
        match r {
            Ok(rep) if rep.holds && rep.m_star_empty => holds += 1,
            Ok(rep) => findings.push(format!(
                "FINDING seed={seed} result_models={} minimal_models={} only_in_result={} only_in_minimal={}",
                rep.result_models,
                rep.minimal_models,
                rep.only_in_result.len(),
                rep.only_in_minimal.len()
            )),
            Err(e) => findings.push(format!("FINDING seed={seed} error={e}")),
        }
    }
    let shown: Vec<String> = findings.iter().take(5).cloned().collect();
    Outcome::new(
        findings.is_empty(),
        format!(
            "instances=100 equal={holds} findings={}{}",
            findings.len(),
            if shown.is_empty() { String::new() } else { format!("\n  {}", shown.join("\n  ")) }
        ),
    )
}

pub fn faithful_assignment() -> Outcome {
    let seeds: Vec<u64> = (1000..1100).collect();
    let results = Exec::default().map(&seeds, |&seed| {
        let (t, t2) = instance(seed);
        let c = config(seed);
        let variants: Vec<KnowledgeBase> = equivalent_variants(&t).unwrap().into_iter().take(3).collect();
        let sig = joint_signature([&t, &t2]).unwrap();
        (
            seed,
            check_faithful_assignment(&t, &variants, &sig, c.mode, &c.operator, &t2, DOMAIN, MAX_SUM, Exec::Sequential),
        )
    });
    let mut failures = Vec::new();
    let (mut undecided, mut compared) = (0, 0);
    let mut first_fail = [0usize; 3];
    for (seed, r) in results {
        match r {
            Ok(fa) => {
                compared += fa.variants;
                for (i, v) in [&fa.models_tied, &fa.models_first, &fa.syntax_independent].iter().enumerate() {
                    match v {
                        PostulateVerdict::Fails(why) => {
                            first_fail[i] += 1;
                            failures.push(format!("FA {} FAILS seed={seed}: {why}", i + 1));
                        }
                        PostulateVerdict::NotDecidable(_) => undecided += 1,
                        PostulateVerdict::Holds => {}
                    }
                }
            }
            Err(e) => failures.push(format!("seed={seed} error={e}")),
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!(
            "instances=100 variants compared={compared} failures by condition={:?} not-decidable={undecided}{}",
            first_fail,
            failures.first().map(|f| format!("\n  {f}")).unwrap_or_default()
        ),
    )
}
