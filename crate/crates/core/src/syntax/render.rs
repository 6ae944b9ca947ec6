use std::fmt::Write;

use crate::concept::Concept;
use crate::kb::{KnowledgeBase, RoleRef, Sentence, Signature};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Disj,
    Conj,
    Unary,
    Primary,
}

fn level(c: &Concept) -> Level {
    match c {
        Concept::Or(_) => Level::Disj,
        Concept::And(_) => Level::Conj,
        Concept::Not(_) | Concept::Exists(..) | Concept::Forall(..) => Level::Unary,
        Concept::Top | Concept::Bot | Concept::Atom(_) => Level::Primary,
    }
}

fn write_at(out: &mut String, c: &Concept, required: Level) {
    if level(c) < required {
        out.push('(');
        write_concept(out, c);
        out.push(')');
    } else {
        write_concept(out, c);
    }
}

fn write_concept(out: &mut String, c: &Concept) {
    match c {
        Concept::Top => out.push_str("Top"),
        Concept::Bot => out.push_str("Bot"),
        Concept::Atom(n) => out.push_str(n.as_str()),
        Concept::Not(c) => {
            out.push_str("not ");
            write_at(out, c, Level::Unary);
        }
        Concept::Exists(r, c) => {
            let _ = write!(out, "some {r}.");
            write_at(out, c, Level::Primary);
        }
        Concept::Forall(r, c) => {
            let _ = write!(out, "only {r}.");
            write_at(out, c, Level::Primary);
        }
        Concept::And(cs) => {
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    out.push_str(" & ");
                }
                write_at(out, c, Level::Unary);
            }
        }
        Concept::Or(cs) => {
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    out.push_str(" | ");
                }
                write_at(out, c, Level::Conj);
            }
        }
    }
}

pub fn render_concept(c: &Concept) -> String {
    let mut out = String::new();
    write_concept(&mut out, c);
    out
}

pub fn render_sentence(s: &Sentence) -> String {
    match s {
        Sentence::Gci(l, r) => format!("{} [= {}.", render_concept(l), render_concept(r)),
        Sentence::InstanceOf(a, c) => format!("{a} : {}.", render_concept(c)),
        Sentence::RoleFact(a, b, r) => match r {
            RoleRef::Named(r) => format!("({a}, {b}) : {r}."),
            RoleRef::Universal => format!("({a}, {b}) : TopRole."),
        },
    }
}

fn write_names<'a>(out: &mut String, key: &str, names: impl Iterator<Item = &'a crate::concept::Name>) {
    let names: Vec<&str> = names.map(|n| n.as_str()).collect();
    if names.is_empty() {
        let _ = writeln!(out, "  {key}:");
    } else {
        let _ = writeln!(out, "  {key}: {}", names.join(", "));
    }
}

/// Canonical text of a KB. The `signature` block is emitted only when the
/// signature differs from the one the parser would infer.
pub fn render_kb(kb: &KnowledgeBase) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dialect {}", kb.dialect());
    let inferred = Signature::infer(kb.sentences()).ok();
    if inferred.as_ref() != Some(kb.signature()) {
        let sig = kb.signature();
        out.push_str("signature\n");
        write_names(&mut out, "concepts", sig.concept_names.iter());
        write_names(&mut out, "roles", sig.role_names.iter());
        write_names(&mut out, "individuals", sig.individuals.iter());
        out.push_str("end\n");
    }
    for s in kb.sentences() {
        out.push_str(&render_sentence(s));
        out.push('\n');
    }
    out
}
