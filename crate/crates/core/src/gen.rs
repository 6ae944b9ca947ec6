//! Seeded random concepts, sentences and knowledge bases.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::concept::{Concept, Dialect, Name};
use crate::error::Result;
use crate::kb::{KnowledgeBase, RoleRef, Sentence, Signature};

pub type GenRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub dialect: Dialect,
    pub concept_names: Vec<Name>,
    pub roles: Vec<Name>,
    pub individuals: Vec<Name>,
    pub max_depth: usize,
    pub max_size: usize,
    /// Whether `Top` and `Bot` may appear as leaves.
    pub constants: bool,
}

impl GenConfig {
    /// Names `A, B, ...`, roles `r, s, ...` and individuals `a, b, ...`.
    pub fn small(dialect: Dialect, concepts: usize, roles: usize, individuals: usize) -> Self {
        let names = |pool: &[&str], n: usize| pool.iter().take(n).map(|s| Name::new(s)).collect();
        GenConfig {
            dialect,
            concept_names: names(&["A", "B", "C", "D", "E", "F"], concepts),
            roles: names(&["r", "s", "t"], roles),
            individuals: names(&["a", "b", "c", "d"], individuals),
            max_depth: 3,
            max_size: 10,
            constants: true,
        }
    }

    pub fn signature(&self) -> Signature {
        Signature::new(
            self.concept_names.iter().cloned(),
            self.roles.iter().cloned(),
            self.individuals.iter().cloned(),
        )
        .expect("generator names are disjoint")
    }
}

fn leaf(rng: &mut GenRng, cfg: &GenConfig) -> Concept {
    if cfg.constants && rng.gen_bool(0.1) {
        return if rng.gen_bool(0.5) { Concept::Top } else { Concept::Bot };
    }
    match cfg.concept_names.choose(rng) {
        Some(n) => Concept::Atom(n.clone()),
        None => Concept::Top,
    }
}

fn draw(rng: &mut GenRng, cfg: &GenConfig, depth: usize, fuel: usize) -> Concept {
    if fuel <= 1 || rng.gen_bool(0.35) {
        return leaf(rng, cfg);
    }
    let mut kinds = vec![0u8, 0, 1];
    if cfg.dialect.allows_or() {
        kinds.extend([2, 2]);
    }
    if cfg.dialect.allows_not_forall() {
        kinds.extend([3, 4]);
    }
    if cfg.roles.is_empty() || depth >= cfg.max_depth {
        kinds.retain(|&k| k != 1 && k != 4);
    }
    let sub = fuel - 1;
    match *kinds.choose(rng).expect("nonempty") {
        0 | 2 => {
            let left = rng.gen_range(1..=sub.max(2) - 1);
            let a = draw(rng, cfg, depth, left);
            let b = draw(rng, cfg, depth, sub.saturating_sub(left).max(1));
            if kinds.contains(&2) && rng.gen_bool(0.5) {
                Concept::or2(a, b)
            } else {
                Concept::and2(a, b)
            }
        }
        1 => Concept::exists(cfg.roles.choose(rng).unwrap().as_str(), draw(rng, cfg, depth + 1, sub)),
        4 => Concept::forall(cfg.roles.choose(rng).unwrap().as_str(), draw(rng, cfg, depth + 1, sub)),
        _ => Concept::not(draw(rng, cfg, depth, sub)),
    }
}

/// A concept of `cfg.dialect` within the size and role-depth bounds.
pub fn concept(rng: &mut GenRng, cfg: &GenConfig) -> Concept {
    loop {
        let fuel = rng.gen_range(1..=cfg.max_size);
        let c = draw(rng, cfg, 0, fuel);
        if c.size() <= cfg.max_size && c.role_depth() <= cfg.max_depth && c.dialect_violation(cfg.dialect).is_none() {
            return c;
        }
    }
}

/// A quantifier prefix over a quantifier-free body.
pub fn prefix_concept(rng: &mut GenRng, cfg: &GenConfig) -> Concept {
    let body_cfg = GenConfig {
        roles: Vec::new(),
        max_size: cfg.max_size.saturating_sub(cfg.max_depth).max(1),
        ..cfg.clone()
    };
    let mut c = concept(rng, &body_cfg);
    if cfg.roles.is_empty() {
        return c;
    }
    for _ in 0..rng.gen_range(0..=cfg.max_depth) {
        let r = cfg.roles.choose(rng).unwrap().as_str();
        c = if cfg.dialect.allows_not_forall() && rng.gen_bool(0.5) {
            Concept::forall(r, c)
        } else {
            Concept::exists(r, c)
        };
    }
    c
}

/// A GCI, a concept assertion or a role assertion.
pub fn sentence(rng: &mut GenRng, cfg: &GenConfig) -> Sentence {
    let roll: f64 = rng.gen();
    if !cfg.individuals.is_empty() && roll < 0.35 {
        let a = cfg.individuals.choose(rng).unwrap().clone();
        Sentence::InstanceOf(a, concept(rng, cfg))
    } else if !cfg.individuals.is_empty() && !cfg.roles.is_empty() && roll < 0.45 {
        let a = cfg.individuals.choose(rng).unwrap().clone();
        let b = cfg.individuals.choose(rng).unwrap().clone();
        Sentence::RoleFact(a, b, RoleRef::Named(cfg.roles.choose(rng).unwrap().clone()))
    } else {
        Sentence::Gci(concept(rng, cfg), concept(rng, cfg))
    }
}

/// Up to `max_sentences` sentences over the whole generator signature.
pub fn kb(rng: &mut GenRng, cfg: &GenConfig, min_sentences: usize, max_sentences: usize) -> Result<KnowledgeBase> {
    let n = rng.gen_range(min_sentences..=max_sentences);
    let sentences: Vec<Sentence> = (0..n).map(|_| sentence(rng, cfg)).collect();
    KnowledgeBase::new(cfg.signature(), cfg.dialect, sentences)
}
