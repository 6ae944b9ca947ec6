use relaxrev::reasoner::{equivalent, is_coherent};
use relaxrev::relax::{relax_formula, ConceptOperator, FormulaRelaxMode, OperatorId};
use relaxrev::revise::{revise, Conflict, RevisionConfig};
use relaxrev::syntax::{parse_sentence, render_concept};
use relaxrev::KnowledgeBase;

use crate::{concept, kb, Outcome};

fn tweety_kbs() -> (KnowledgeBase, KnowledgeBase) {
    (
        kb("EL", "Tweety [= Bird.\nBird [= Flies."),
        kb("EL", "Tweety & Flies [= Bot."),
    )
}

pub fn tweety() -> Outcome {
    let (t1, t2) = tweety_kbs();
    let mut config = RevisionConfig::kappa_bot();
    config.conflict = Conflict::Incoherence;
    let r = match revise(&t1, &t2, &config) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, format!("revision failed: {e}")),
    };
    let mut maps: Vec<String> = std::iter::once(r.degrees.to_string())
        .chain(r.alternatives.iter().map(|(_, d)| d.to_string()))
        .collect();
    maps.sort();
    let want = kb("EL", "Bot [= Bird.\nBird [= Flies.\nTweety & Flies [= Bot.");
    let pass = r.total_cost == 1 && maps == ["{0,1}", "{1,0}"] && r.revised.same_sentences(&want);
    Outcome::new(
        pass,
        format!("cost={} degree maps={} chosen={}", r.total_cost, maps.join(" "), r.degrees),
    )
}

pub fn tweety_exceptions() -> Outcome {
    let (t1, t2) = tweety_kbs();
    let op = ConceptOperator::new(OperatorId::RhoExceptions, vec![concept("Tweety")]).unwrap();
    let relaxed = relax_formula(
        &parse_sentence("Bird [= Flies").unwrap(),
        FormulaRelaxMode::RelaxRhs,
        &op,
        1,
        &t2,
    );
    let want = parse_sentence("Bird [= Flies | Tweety").unwrap();
    let config = RevisionConfig::new(op, FormulaRelaxMode::RelaxRhs, Conflict::Incoherence);
    let r = match revise(&t1, &t2, &config) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, format!("revision failed: {e}")),
    };
    let coherent = is_coherent(&r.revised).unwrap();
    let pass = relaxed.as_ref() == Ok(&want) && r.revised.contains(&want) && coherent;
    Outcome::new(pass, format!("relaxed={} coherent={coherent} cost={}", relaxed.map(|s| s.to_string()).unwrap_or_default(), r.total_cost))
}

pub fn judge() -> Outcome {
    let c = concept("male & some MarriedTo.(female & judge)");
    let want = concept("some MarriedTo.(female & judge) | (male & (some MarriedTo.female | some MarriedTo.judge))");
    let op = ConceptOperator::simple(OperatorId::RhoE);
    let got = op.apply(&c, 1, &KnowledgeBase::empty()).unwrap();
    let equiv = equivalent(&KnowledgeBase::empty(), &got, &want).unwrap();
    let t1 = kb("ELU", "Bob [= male & some MarriedTo.(female & judge).");
    let t2 = kb("ELU", "judge & female [= Bot.");
    let config = RevisionConfig::new(op, FormulaRelaxMode::RelaxRhs, Conflict::Incoherence);
    let (coherent, cost) = match revise(&t1, &t2, &config) {
        Ok(r) => (is_coherent(&r.revised).unwrap(), r.total_cost),
        Err(e) => return Outcome::new(false, format!("revision failed: {e}")),
    };
    Outcome::new(
        equiv && coherent,
        format!("rho_e={} equivalent={equiv} coherent={coherent} cost={cost}", render_concept(&got)),
    )
}

pub fn rich() -> Outcome {
    let t1 = kb("ALC", "Bob [= only hasChild.Rich.\nBob [= some hasChild.Mary.\nMary [= Rich.");
    let t2 = kb("ALC", "Bob [= some hasChild.John.\nJohn [= not Rich.");
    let union = RevisionConfig::new(
        ConceptOperator::new(OperatorId::RhoUnion, vec![concept("John")]).unwrap(),
        FormulaRelaxMode::RelaxRhs,
        Conflict::Incoherence,
    );
    let swap = RevisionConfig::new(
        ConceptOperator::simple(OperatorId::RhoQ),
        FormulaRelaxMode::RelaxRhs,
        Conflict::Incoherence,
    );
    let mut details = Vec::new();
    let mut pass = true;
    for (config, want) in [
        (union, "Bob [= only hasChild.(Rich | John)"),
        (swap, "Bob [= some hasChild.Rich"),
    ] {
        let want = parse_sentence(want).unwrap();
        match revise(&t1, &t2, &config) {
            Ok(r) => {
                let ok = r.total_cost == 1 && r.revised.contains(&want);
                pass &= ok;
                details.push(format!("{}: cost={} found={}", config.operator, r.total_cost, r.revised.contains(&want)));
            }
            Err(e) => {
                pass = false;
                details.push(format!("{}: {e}", config.operator));
            }
        }
    }
    Outcome::new(pass, details.join("; "))
}
