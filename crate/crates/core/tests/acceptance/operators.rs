use std::collections::BTreeMap;

use relaxrev::gen::{self, GenConfig};
use relaxrev::normal::to_prefix_form;
use relaxrev::oracle::{decode, FiniteInterpretation};
use relaxrev::par::Exec;
use relaxrev::reasoner::{equivalent, subsumes};
use relaxrev::relax::{dalal_body, ConceptOperator, Direction, OperatorId};
use relaxrev::{Concept, Dialect, Error, KnowledgeBase, Name, Signature};

use crate::{concept, kb, Outcome};

const EXHAUSTIVE: [OperatorId; 10] = [
    OperatorId::RhoTop,
    OperatorId::RhoDepth,
    OperatorId::RhoLeaves,
    OperatorId::RhoE,
    OperatorId::RhoDalal,
    OperatorId::RhoQ,
    OperatorId::KappaBot,
    OperatorId::KappaExceptions,
    OperatorId::KappaDalal,
    OperatorId::KappaCap,
];

#[derive(Default, Clone)]
struct Tally {
    applied: usize,
    skipped: usize,
    violations: usize,
    example: Option<String>,
}

impl Tally {
    fn violation(&mut self, what: String) {
        self.violations += 1;
        self.example.get_or_insert(what);
    }

    fn merge(&mut self, o: &Tally) {
        self.applied += o.applied;
        self.skipped += o.skipped;
        self.violations += o.violations;
        if self.example.is_none() {
            self.example = o.example.clone();
        }
    }
}

fn inapplicable(e: &Error) -> bool {
    matches!(e, Error::UnsupportedShape(_) | Error::NotEnoughExceptions { .. })
}

fn goal(id: OperatorId) -> Concept {
    match id.direction() {
        Direction::Relax => Concept::Top,
        Direction::Retract => Concept::Bot,
    }
}

/// The operator used for exhaustivity; exception lists cover `c`.
fn exhaustive_instance(id: OperatorId, c: &Concept) -> Option<ConceptOperator> {
    match id {
        OperatorId::KappaExceptions => ConceptOperator::new(id, vec![c.clone()]).ok(),
        OperatorId::KappaCap => {
            let body = to_prefix_form(c).ok()?.body;
            ConceptOperator::new(id, vec![body]).ok()
        }
        _ => Some(ConceptOperator::simple(id)),
    }
}

fn reaches_goal(op: &ConceptOperator, c: &Concept, bound: usize, elig: &KnowledgeBase) -> Result<Option<usize>, Error> {
    let empty = KnowledgeBase::empty();
    let target = goal(op.id());
    for k in 1..=bound {
        let r = match op.apply(c, k, elig) {
            Ok(r) => r,
            Err(e) if inapplicable(&e) => continue,
            Err(e) => return Err(e),
        };
        if r == target || equivalent(&empty, &r, &target)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

fn check_concept(id: OperatorId, c: &Concept, elig: &KnowledgeBase) -> Result<(Tally, Tally), Error> {
    let empty = KnowledgeBase::empty();
    let exceptions = if id.uses_exceptions() { vec![Concept::atom("E")] } else { vec![] };
    let op = ConceptOperator::new(id, exceptions).unwrap();
    let mut ext = Tally::default();
    let mut exh = Tally::default();
    let mut applicable = false;
    for k in 1..=2 {
        let r = match op.apply(c, k, elig) {
            Ok(r) => r,
            Err(e) if inapplicable(&e) => continue,
            Err(e) => return Err(e),
        };
        applicable = true;
        let ok = match id.direction() {
            Direction::Relax => subsumes(&empty, c, &r)?,
            Direction::Retract => subsumes(&empty, &r, c)?,
        };
        if !ok {
            ext.violation(format!("{id}^{k}({c}) = {r}"));
        }
    }
    if applicable {
        ext.applied += 1;
    } else {
        ext.skipped += 1;
    }
    if EXHAUSTIVE.contains(&id) {
        let bound = c.size() + c.role_depth() + 2;
        match exhaustive_instance(id, c) {
            Some(op) if op.apply(c, 1, elig).is_ok() => {
                exh.applied += 1;
                if reaches_goal(&op, c, bound, &empty)?.is_none() {
                    exh.violation(format!("{id} does not reach {} from {c} within {bound}", goal(id)));
                }
            }
            _ => exh.skipped += 1,
        }
    }
    Ok((ext, exh))
}

fn witness(id: OperatorId, c: &str) -> bool {
    let c = concept(c);
    let exceptions = if id.uses_exceptions() { vec![Concept::atom("E")] } else { vec![] };
    let op = ConceptOperator::new(id, exceptions).unwrap();
    let elig = kb("EL", "E [= Bot.");
    matches!(reaches_goal(&op, &c, 2 * c.size(), &elig), Ok(None))
}

pub fn properties() -> Outcome {
    let elig = kb("EL", "E [= Bot.");
    let mut ext: BTreeMap<OperatorId, Tally> = BTreeMap::new();
    let mut exh: BTreeMap<OperatorId, Tally> = BTreeMap::new();
    let mut total = 0;
    for (di, dialect) in [Dialect::EL, Dialect::ELU, Dialect::ALC].into_iter().enumerate() {
        let cfg = GenConfig::small(dialect, 3, 2, 0);
        let mut rng = gen::rng(500 + di as u64);
        let mut pool: Vec<Concept> = (0..1000).map(|_| gen::concept(&mut rng, &cfg)).collect();
        pool.extend((0..1000).map(|_| gen::prefix_concept(&mut rng, &cfg)));
        total += pool.len();
        for id in OperatorId::ALL {
            let results = Exec::default().map(&pool, |c| check_concept(id, c, &elig));
            for r in results {
                match r {
                    Ok((a, b)) => {
                        ext.entry(id).or_default().merge(&a);
                        exh.entry(id).or_default().merge(&b);
                    }
                    Err(e) => ext.entry(id).or_default().violation(format!("{id}: {e}")),
                }
            }
        }
    }
    let witnesses = [
        (OperatorId::RhoExceptions, witness(OperatorId::RhoExceptions, "A")),
        (OperatorId::RhoUnion, witness(OperatorId::RhoUnion, "only r.A")),
        (OperatorId::KappaQ, witness(OperatorId::KappaQ, "only r.A")),
    ];
    let mut pass = witnesses.iter().all(|(_, w)| *w);
    let mut parts = vec![format!("concepts={total}")];
    for id in OperatorId::ALL {
        let t = &ext[&id];
        let label = if id.direction() == Direction::Relax { "extensive" } else { "anti-extensive" };
        let mut line = format!("{id} {label} {}/{} skipped={}", t.applied - t.violations.min(t.applied), t.applied, t.skipped);
        pass &= t.violations == 0 && t.applied > 0;
        if let Some(x) = &t.example {
            line.push_str(&format!(" e.g. {x}"));
        }
        if let Some(h) = exh.get(&id).filter(|_| EXHAUSTIVE.contains(&id)) {
            pass &= h.violations == 0 && h.applied > 0;
            line.push_str(&format!(" exhaustive {}/{}", h.applied - h.violations, h.applied));
            if let Some(x) = &h.example {
                line.push_str(&format!(" e.g. {x}"));
            }
        }
        parts.push(line);
    }
    for (id, w) in witnesses {
        parts.push(format!("{id} non-exhaustive witness={w}"));
    }
    Outcome::new(pass, format!("\n  {}", parts.join("\n  ")))
}

fn atoms(k: usize) -> Vec<Concept> {
    ["A", "B", "C", "D"][..k].iter().map(|a| Concept::atom(a)).collect()
}

fn literal(atom: &Concept, positive: bool) -> Concept {
    if positive {
        atom.clone()
    } else {
        Concept::not(atom.clone())
    }
}

/// Satisfying assignments of `c` as a bit mask over the `2^k` assignments.
fn assignments(c: &Concept, rows: &[FiniteInterpretation]) -> u32 {
    rows.iter()
        .enumerate()
        .filter(|(_, i)| i.extension(c) & 1 == 1)
        .fold(0, |acc, (a, _)| acc | (1 << a))
}

fn hamming(set: u32, k: usize, dilate: bool) -> u32 {
    let mut out = 0;
    for a in 0..1u32 << k {
        let ball = std::iter::once(a).chain((0..k).map(|i| a ^ (1 << i)));
        let hit = if dilate {
            ball.into_iter().any(|b| set & (1 << b) != 0)
        } else {
            ball.into_iter().all(|b| set & (1 << b) != 0)
        };
        if hit {
            out |= 1 << a;
        }
    }
    out
}

fn check_body(body: &Concept, set: u32, rows: &[FiniteInterpretation], k: usize) -> Vec<String> {
    let mut bad = Vec::new();
    for (dir, dilate) in [(Direction::Relax, true), (Direction::Retract, false)] {
        match dalal_body(body, dir) {
            Ok(r) if assignments(&r, rows) == hamming(set, k, dilate) => {}
            Ok(_) => bad.push(format!("{dir:?} {body}")),
            Err(e) => bad.push(format!("{body}: {e}")),
        }
    }
    bad
}

pub fn dalal_oracle() -> Outcome {
    let mut checked = 0usize;
    let mut mismatches = Vec::new();
    for k in 1..=4usize {
        let vars = atoms(k);
        let names = vars.iter().map(|a| match a {
            Concept::Atom(n) => n.clone(),
            _ => unreachable!(),
        });
        let sig = Signature::new(names, Vec::<Name>::new(), Vec::<Name>::new()).unwrap();
        let table: Vec<FiniteInterpretation> = (0..1u64 << k).map(|a| decode(&sig, 1, a)).collect();
        let rows = 1u32 << k;
        let minterm = |a: u32| Concept::and(vars.iter().enumerate().map(|(i, v)| literal(v, a & (1 << i) != 0)));
        let maxterm = |a: u32| Concept::or(vars.iter().enumerate().map(|(i, v)| literal(v, a & (1 << i) == 0)));
        let functions: Vec<u32> = (0..1u64 << rows).map(|f| f as u32).collect();
        let found = Exec::default().map(&functions, |&set| {
            let dnf = Concept::or((0..rows).filter(|a| set & (1 << a) != 0).map(minterm));
            let cnf = Concept::and((0..rows).filter(|a| set & (1 << a) == 0).map(maxterm));
            let mut bad = check_body(&dnf, set, &table, k);
            bad.extend(check_body(&cnf, set, &table, k));
            bad
        });
        checked += 4 * functions.len();
        mismatches.extend(found.into_iter().flatten());

        let cfg = GenConfig {
            max_depth: 0,
            ..GenConfig::small(Dialect::ALC, k, 0, 0)
        };
        let mut rng = gen::rng(600 + k as u64);
        for _ in 0..500 {
            let body = gen::concept(&mut rng, &cfg);
            let set = assignments(&body, &table);
            mismatches.extend(check_body(&body, set, &table, k));
            checked += 2;
        }
    }
    let n = mismatches.len();
    Outcome::new(
        n == 0,
        format!(
            "bodies checked={checked} mismatches={n}{}",
            mismatches.first().map(|m| format!(" e.g. {m}")).unwrap_or_default()
        ),
    )
}
