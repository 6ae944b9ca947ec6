use relaxrev::gen::{self, GenConfig};
use relaxrev::oracle::model_set;
use relaxrev::par::Exec;
use relaxrev::reasoner::{entails, is_coherent, is_satisfiable};
use relaxrev::syntax::{parse_kb, parse_sentence};
use relaxrev::Dialect;

use crate::Outcome;

const TWEETY: &str = "dialect EL\nTweety [= Bird.\nBird [= Flies.\nTweety & Flies [= Bot.";
const RICH: &str = "dialect ALC\nBob [= only hasChild.Rich.\nBob [= some hasChild.Mary.\nMary [= Rich.\nBob [= some hasChild.John.\nJohn [= not Rich.";
const RICH_UNION: &str = "dialect ALC\nBob [= only hasChild.(Rich | John).\nBob [= some hasChild.Mary.\nMary [= Rich.\nBob [= some hasChild.John.\nJohn [= not Rich.";
const RICH_SWAP: &str = "dialect ALC\nBob [= some hasChild.Rich.\nBob [= some hasChild.Mary.\nMary [= Rich.\nBob [= some hasChild.John.\nJohn [= not Rich.";
const JUDGE: &str = "dialect ELU\nBob [= male & some MarriedTo.(female & judge).\njudge & female [= Bot.";
const JUDGE_REVISED: &str = "dialect ELU\nBob [= some MarriedTo.(female & judge) | (male & (some MarriedTo.female | some MarriedTo.judge)).\njudge & female [= Bot.";

/// `(kb, query, expected)`; a query is `sat`, `coherent` or a sentence.
const GOLDEN: &[(&str, &str, bool)] = &[
    (TWEETY, "sat", true),
    (TWEETY, "coherent", false),
    (TWEETY, "Tweety [= Bot", true),
    ("dialect EL\nBot [= Bird.\nBird [= Flies.\nTweety & Flies [= Bot.", "coherent", true),
    ("dialect EL\nTweety [= Bird.\nBot [= Flies.\nTweety & Flies [= Bot.", "coherent", true),
    ("dialect ELU\nTweety [= Bird.\nBird [= Flies | Tweety.\nTweety & Flies [= Bot.", "coherent", true),
    (RICH, "sat", true),
    (RICH, "coherent", false),
    (RICH_UNION, "coherent", true),
    (RICH_SWAP, "coherent", true),
    (JUDGE, "sat", true),
    (JUDGE, "coherent", false),
    (JUDGE_REVISED, "coherent", true),
    (JUDGE_REVISED, "Bob [= male", true),
    ("dialect ALC\nBob [= only hasChild.Rich.\nBob [= some hasChild.John.\nJohn [= not Rich.", "coherent", false),
    ("dialect ALC\nA [= B.\na : A.\na : not B.", "sat", false),
    ("dialect EL", "sat", true),
    ("dialect EL\nTop [= Bot.", "sat", false),
    ("dialect EL\nA [= Bot.", "sat", true),
    ("dialect EL\nA [= Bot.", "coherent", false),
    ("dialect EL\na : A.\nA [= Bot.", "sat", false),
    ("dialect EL\nA [= some r.A.\na : A.", "sat", true),
    ("dialect ALC\nA [= some r.A.\nA [= only r.(not A).\na : A.", "sat", false),
    ("dialect ALC\n(a, b) : r.\na : only r.B.\nb : not B.", "sat", false),
    ("dialect ALC\n(a, b) : r.\na : only r.B.", "b : B", true),
    ("dialect ALC\n(a, b) : r.\na : only r.B.", "(b, a) : r", false),
    ("dialect EL\nA [= B.\nB [= E.", "A [= E", true),
    ("dialect EL\nA [= B.\nB [= E.", "E [= A", false),
    ("dialect ALC", "some r.A & only r.B [= some r.(A & B)", true),
    ("dialect ALC", "some r.A [= only r.A", false),
    ("dialect ALC", "only r.A [= some r.A", false),
    ("dialect ALC", "A & not A [= Bot", true),
    ("dialect ALC", "Top [= A | not A", true),
    ("dialect ELU", "some m.(B | C) [= some m.B | some m.C", true),
    ("dialect ELU", "some m.B | some m.C [= some m.(B | C)", true),
    ("dialect ALC\na : A | B.\na : not A.", "a : B", true),
    ("dialect ALC\na : some r.A.\nTop [= only r.(not A).", "sat", false),
    ("dialect EL\nTop [= some r.Top.", "sat", true),
    ("dialect EL\nTop [= some r.A.\nA [= Bot.", "sat", false),
    ("dialect EL\nsome r.A [= Bot.\na : some r.A.", "sat", false),
    ("dialect EL\nsome r.A [= Bot.\n(a, b) : r.\nb : A.", "sat", false),
    ("dialect ALC\na : A.\nb : not A.", "sat", true),
    ("dialect ALC\na : A & not A.", "sat", false),
    ("dialect ALC\nA [= B | C.\nB [= Bot.\nC [= Bot.\na : A.", "sat", false),
    ("dialect ALC\nA [= B | C.\nB [= Bot.\na : A.", "a : C", true),
    ("dialect ALC\nonly r.Bot [= A.\na : not A.", "a : some r.Top", true),
    ("dialect ALC\nTop [= only r.A.\nTop [= some r.(not A).", "sat", false),
    ("dialect ALC\nTop [= only r.(some r.A).", "sat", true),
    ("dialect EL\nA [= some r.B.\nB [= some r.A.\nA & B [= Bot.", "coherent", true),
    ("dialect EL\nA [= some r.B.\nsome r.B [= Bot.", "coherent", false),
    ("dialect EL\nA & B [= C.\na : A.\na : B.", "a : C", true),
    ("dialect EL\nA & B [= C.\na : A.", "a : C", false),
    ("dialect ALC\n(a, b) : r.\n(b, c) : r.\na : only r.(only r.A).\nc : not A.", "sat", false),
    ("dialect ALC\na : only r.A & some r.(not A).", "sat", false),
];

fn golden() -> (usize, Vec<String>) {
    let mut bad = Vec::new();
    for (i, (text, query, want)) in GOLDEN.iter().enumerate() {
        let kb = parse_kb(text).expect("golden KB parses");
        let got = match *query {
            "sat" => is_satisfiable(&kb),
            "coherent" => is_coherent(&kb),
            s => entails(&kb, &parse_sentence(s).expect("golden query parses")),
        };
        match got {
            Ok(g) if g == *want => {}
            other => bad.push(format!("golden #{i} {query}: {other:?}")),
        }
    }
    (GOLDEN.len(), bad)
}

pub fn cross_validation() -> Outcome {
    let cfg = GenConfig {
        max_depth: 2,
        max_size: 6,
        ..GenConfig::small(Dialect::ALC, 3, 1, 2)
    };
    let seeds: Vec<u64> = (0..1000).collect();
    let verdicts = Exec::default().map(&seeds, |&seed| {
        let kb = gen::kb(&mut gen::rng(10_000 + seed), &cfg, 1, 5).unwrap();
        let sat = is_satisfiable(&kb).unwrap();
        let finite = !model_set(&kb, 2).unwrap().is_empty();
        (seed, sat, finite)
    });
    let disagreements: Vec<u64> = verdicts.iter().filter(|(_, sat, finite)| *finite && !sat).map(|v| v.0).collect();
    let sat_count = verdicts.iter().filter(|v| v.1).count();
    let larger = verdicts.iter().filter(|v| v.1 && !v.2).count();
    let (n_golden, bad) = golden();
    Outcome::new(
        disagreements.is_empty() && bad.is_empty(),
        format!(
            "random KBs=1000 satisfiable={sat_count} needing domain>2={larger} disagreements={} golden={}/{n_golden}{}",
            disagreements.len(),
            n_golden - bad.len(),
            bad.first().map(|b| format!(" e.g. {b}")).unwrap_or_default()
        ),
    )
}
