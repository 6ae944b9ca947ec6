//! ALC tableau over a fixed, pre-interned set of NNF concepts.
//!
//! GCIs with an atomic conjunct on the left are absorbed and unfolded
//! lazily; all other GCIs are internalised into every node. ABox
//! individuals are saturated together as root nodes, anonymous successors
//! are explored depth first with subset blocking against their ancestors.

use std::collections::HashMap;

use crate::concept::{Concept, Name};
use crate::error::{Error, Result};
use crate::kb::{RoleRef, Sentence};
use crate::normal::to_nnf;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn new(bits: usize) -> Self {
        BitSet { words: vec![0; bits.div_ceil(64).max(1)] }
    }

    fn contains(&self, i: u32) -> bool {
        self.words[(i / 64) as usize] & (1 << (i % 64)) != 0
    }

    /// Returns true when the bit was not set before.
    fn insert(&mut self, i: u32) -> bool {
        let w = &mut self.words[(i / 64) as usize];
        let mask = 1 << (i % 64);
        let fresh = *w & mask == 0;
        *w |= mask;
        fresh
    }

    fn is_subset(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some(wi as u32 * 64 + b)
            })
        })
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Top,
    Bot,
    Lit(u32, bool),
    And(Vec<u32>),
    Or(Vec<u32>),
    Exists(u32, u32),
    Forall(u32, u32),
}

/// Interned concepts plus the absorbed/internalised TBox.
pub(crate) struct Tableau {
    kinds: Vec<Kind>,
    neg: Vec<u32>,
    ids: HashMap<Concept, u32>,
    atoms: HashMap<Name, u32>,
    atom_names: Vec<Name>,
    roles: HashMap<Name, u32>,
    /// `unfold[a]`: concepts added whenever atom `a` is in a label.
    unfold: Vec<Vec<u32>>,
    /// Internalised TBox, added to every node.
    global: Vec<u32>,
    individuals: Vec<Name>,
    initial: Vec<Vec<u32>>,
    facts: Vec<(usize, u32, usize)>,
    budget: usize,
    nodes: usize,
    cache: HashMap<BitSet, bool>,
    model: Option<Vec<BitSet>>,
}

struct Graph {
    labels: Vec<BitSet>,
    edges: Vec<(usize, u32, usize)>,
}

const NO_BLOCK: usize = usize::MAX;

impl Tableau {
    /// Sentences are the KB; `extra` concepts are interned so that they can
    /// be used in later queries.
    pub fn new<'a>(
        sentences: impl IntoIterator<Item = &'a Sentence>,
        individuals: impl IntoIterator<Item = &'a Name>,
        extra: &[Concept],
        budget: usize,
    ) -> Tableau {
        let mut t = Tableau {
            kinds: Vec::new(),
            neg: Vec::new(),
            ids: HashMap::new(),
            atoms: HashMap::new(),
            atom_names: Vec::new(),
            roles: HashMap::new(),
            unfold: Vec::new(),
            global: Vec::new(),
            individuals: Vec::new(),
            initial: Vec::new(),
            facts: Vec::new(),
            budget,
            nodes: 0,
            cache: HashMap::new(),
            model: None,
        };
        for a in individuals {
            t.individual(a);
        }
        let mut absorbed: Vec<(u32, Concept)> = Vec::new();
        for s in sentences {
            match s {
                Sentence::Gci(lhs, rhs) => match absorb(lhs, rhs) {
                    Some((a, d)) => {
                        let a = t.atom(&a);
                        absorbed.push((a, d));
                    }
                    None => {
                        let g = to_nnf(&Concept::or2(Concept::not(lhs.clone()), rhs.clone()));
                        if g != Concept::Top {
                            let id = t.intern(&g);
                            t.global.push(id);
                        }
                    }
                },
                Sentence::InstanceOf(a, c) => {
                    let i = t.individual(a);
                    let id = t.intern(&to_nnf(c));
                    t.initial[i].push(id);
                }
                Sentence::RoleFact(a, b, RoleRef::Named(r)) => {
                    let (i, j) = (t.individual(a), t.individual(b));
                    let r = t.role(r);
                    t.facts.push((i, r, j));
                }
                Sentence::RoleFact(a, b, RoleRef::Universal) => {
                    t.individual(a);
                    t.individual(b);
                }
            }
        }
        for (a, d) in absorbed {
            let id = t.intern(&to_nnf(&d));
            t.unfold[a as usize].push(id);
        }
        for c in extra {
            t.intern(&to_nnf(c));
        }
        t
    }

    fn individual(&mut self, a: &Name) -> usize {
        match self.individuals.iter().position(|n| n == a) {
            Some(i) => i,
            None => {
                self.individuals.push(a.clone());
                self.initial.push(Vec::new());
                self.individuals.len() - 1
            }
        }
    }

    fn atom(&mut self, a: &Name) -> u32 {
        if let Some(&i) = self.atoms.get(a) {
            return i;
        }
        let i = self.atom_names.len() as u32;
        self.atoms.insert(a.clone(), i);
        self.atom_names.push(a.clone());
        self.unfold.push(Vec::new());
        i
    }

    fn role(&mut self, r: &Name) -> u32 {
        let n = self.roles.len() as u32;
        *self.roles.entry(r.clone()).or_insert(n)
    }

    /// `c` must be in NNF as produced by [`to_nnf`].
    fn intern(&mut self, c: &Concept) -> u32 {
        if let Some(&id) = self.ids.get(c) {
            return id;
        }
        let id = self.kinds.len() as u32;
        self.kinds.push(Kind::Top);
        self.neg.push(u32::MAX);
        self.ids.insert(c.clone(), id);
        let kind = match c {
            Concept::Top => Kind::Top,
            Concept::Bot => Kind::Bot,
            Concept::Atom(a) => Kind::Lit(self.atom(a), true),
            Concept::Not(inner) => match inner.as_ref() {
                Concept::Atom(a) => Kind::Lit(self.atom(a), false),
                _ => unreachable!("concept not in negation normal form"),
            },
            Concept::And(cs) => Kind::And(cs.iter().map(|c| self.intern(c)).collect()),
            Concept::Or(cs) => Kind::Or(cs.iter().map(|c| self.intern(c)).collect()),
            Concept::Exists(r, f) => Kind::Exists(self.role(r), self.intern(f)),
            Concept::Forall(r, f) => Kind::Forall(self.role(r), self.intern(f)),
        };
        self.kinds[id as usize] = kind;
        let n = to_nnf(&Concept::not(c.clone()));
        let nid = self.intern(&n);
        self.neg[id as usize] = nid;
        self.neg[nid as usize] = id;
        id
    }

    pub fn id_of(&self, c: &Concept) -> u32 {
        self.ids[&to_nnf(c)]
    }

    fn empty(&self) -> BitSet {
        BitSet::new(self.kinds.len())
    }

    fn fresh_label(&self, seed: impl IntoIterator<Item = u32>) -> BitSet {
        let mut l = self.empty();
        for id in self.global.iter().copied().chain(seed) {
            l.insert(id);
        }
        l
    }

    fn budget_error(&self) -> Error {
        Error::ResourceExceeded(format!("tableau exceeded {} nodes", self.budget))
    }

    /// Satisfiability of the ABox, with `extra` (interned beforehand) as
    /// the label of one more, otherwise unconstrained individual.
    pub fn satisfiable(&mut self, extra: Option<u32>) -> Result<bool> {
        self.nodes = 0;
        self.model = None;
        let mut labels: Vec<BitSet> = self.initial.iter().map(|s| self.fresh_label(s.iter().copied())).collect();
        if let Some(x) = extra {
            labels.push(self.fresh_label([x]));
        }
        if labels.is_empty() {
            labels.push(self.fresh_label([]));
        }
        let mut g = Graph { labels, edges: self.facts.clone() };
        let work: Vec<(usize, u32)> = g
            .labels
            .iter()
            .enumerate()
            .flat_map(|(i, l)| l.iter().map(move |id| (i, id)))
            .collect();
        if !self.saturate(&mut g, work) {
            return Ok(false);
        }
        let mut ancestors = Vec::new();
        Ok(self.expand(g, &mut ancestors, true)?.0)
    }

    /// Applies ⊓, ∀, unfolding and clash detection to a fixpoint.
    fn saturate(&self, g: &mut Graph, mut work: Vec<(usize, u32)>) -> bool {
        while let Some((n, id)) = work.pop() {
            let add = |g: &mut Graph, m: usize, c: u32, work: &mut Vec<(usize, u32)>| {
                if g.labels[m].insert(c) {
                    work.push((m, c));
                }
            };
            match &self.kinds[id as usize] {
                Kind::Bot => return false,
                Kind::Lit(a, pos) => {
                    if g.labels[n].contains(self.neg[id as usize]) {
                        return false;
                    }
                    if *pos {
                        for &d in &self.unfold[*a as usize] {
                            add(g, n, d, &mut work);
                        }
                    }
                }
                Kind::And(cs) => {
                    for &c in cs {
                        add(g, n, c, &mut work);
                    }
                }
                Kind::Forall(r, f) => {
                    let targets: Vec<usize> = g
                        .edges
                        .iter()
                        .filter(|(s, rr, _)| *s == n && rr == r)
                        .map(|&(_, _, t)| t)
                        .collect();
                    for t in targets {
                        add(g, t, *f, &mut work);
                    }
                }
                Kind::Top | Kind::Or(_) | Kind::Exists(..) => {}
            }
        }
        true
    }

    /// Unit propagation over disjunctions; returns the first disjunction
    /// still needing a choice, or `Err(())` on a clash.
    fn propagate(&self, g: &mut Graph) -> std::result::Result<Option<(usize, Vec<u32>)>, ()> {
        loop {
            let mut forced = None;
            let mut choice = None;
            'scan: for (n, label) in g.labels.iter().enumerate() {
                for id in label.iter() {
                    if let Kind::Or(ds) = &self.kinds[id as usize] {
                        if ds.iter().any(|&d| label.contains(d)) {
                            continue;
                        }
                        let open: Vec<u32> =
                            ds.iter().copied().filter(|&d| !label.contains(self.neg[d as usize])).collect();
                        match open.len() {
                            0 => return Err(()),
                            1 => {
                                forced = Some((n, open[0]));
                                break 'scan;
                            }
                            _ => {
                                if choice.is_none() {
                                    choice = Some((n, open));
                                }
                            }
                        }
                    }
                }
            }
            match forced {
                Some((n, d)) => {
                    g.labels[n].insert(d);
                    if !self.saturate(g, vec![(n, d)]) {
                        return Err(());
                    }
                }
                None => return Ok(choice),
            }
        }
    }

    /// Returns satisfiability and the lowest ancestor index used for
    /// blocking anywhere below.
    fn expand(&mut self, mut g: Graph, ancestors: &mut Vec<BitSet>, top: bool) -> Result<(bool, usize)> {
        let choice = match self.propagate(&mut g) {
            Err(()) => return Ok((false, NO_BLOCK)),
            Ok(c) => c,
        };
        if let Some((n, open)) = choice {
            let mut lowest = NO_BLOCK;
            for (i, &d) in open.iter().enumerate() {
                let mut labels = g.labels.clone();
                labels[n].insert(d);
                let mut work = vec![(n, d)];
                for &prev in &open[..i] {
                    let np = self.neg[prev as usize];
                    if labels[n].insert(np) {
                        work.push((n, np));
                    }
                }
                let mut branch = Graph { labels, edges: g.edges.clone() };
                if !self.saturate(&mut branch, work) {
                    continue;
                }
                let (ok, b) = self.expand(branch, ancestors, top)?;
                if ok {
                    return Ok((true, b));
                }
                lowest = lowest.min(b);
            }
            return Ok((false, lowest));
        }

        // Propositionally complete: blocking, then existential successors.
        if g.labels.len() == 1 {
            if let Some(j) = ancestors.iter().position(|a| g.labels[0].is_subset(a)) {
                return Ok((true, j));
            }
        }
        let pushed = g.labels.len() == 1;
        if pushed {
            ancestors.push(g.labels[0].clone());
        }
        let mut lowest = NO_BLOCK;
        let mut result = true;
        'outer: for n in 0..g.labels.len() {
            let demands: Vec<(u32, u32)> = g.labels[n]
                .iter()
                .filter_map(|id| match self.kinds[id as usize] {
                    Kind::Exists(r, f) => Some((r, f)),
                    _ => None,
                })
                .collect();
            for (r, f) in demands {
                let foralls = g.labels[n].iter().filter_map(|id| match self.kinds[id as usize] {
                    Kind::Forall(rr, ff) if rr == r => Some(ff),
                    _ => None,
                });
                let init = self.fresh_label(std::iter::once(f).chain(foralls));
                let (ok, b) = if pushed {
                    self.node(init, ancestors)?
                } else {
                    self.node(init, &mut Vec::new())?
                };
                lowest = lowest.min(b);
                if !ok {
                    result = false;
                    break 'outer;
                }
            }
        }
        if pushed {
            ancestors.pop();
        }
        if result && top {
            self.model = Some(g.labels);
        }
        Ok((result, lowest))
    }

    /// An anonymous tree node with initial label `init`.
    fn node(&mut self, init: BitSet, ancestors: &mut Vec<BitSet>) -> Result<(bool, usize)> {
        if let Some(&v) = self.cache.get(&init) {
            return Ok((v, NO_BLOCK));
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(self.budget_error());
        }
        let depth = ancestors.len();
        let mut g = Graph { labels: vec![init.clone()], edges: Vec::new() };
        let work: Vec<(usize, u32)> = init.iter().map(|id| (0, id)).collect();
        let (ok, b) = if self.saturate(&mut g, work) {
            self.expand(g, ancestors, false)?
        } else {
            (false, NO_BLOCK)
        };
        if !ok || b >= depth {
            self.cache.insert(init, ok);
        }
        Ok((ok, b))
    }

    /// Literals of each root node of the last successful run, one
    /// line per root: individuals first, then the query node if any.
    pub fn describe_model(&self) -> Option<Vec<Concept>> {
        let labels = self.model.as_ref()?;
        Some(
            labels
                .iter()
                .map(|l| {
                    Concept::and(l.iter().filter_map(|id| match self.kinds[id as usize] {
                        Kind::Lit(a, true) => Some(Concept::Atom(self.atom_names[a as usize].clone())),
                        Kind::Lit(a, false) => {
                            Some(Concept::not(Concept::Atom(self.atom_names[a as usize].clone())))
                        }
                        _ => None,
                    }))
                })
                .collect(),
        )
    }

    pub fn individual_names(&self) -> &[Name] {
        &self.individuals
    }
}

/// Splits `lhs ⊑ rhs` into `A ⊑ D` for an atom `A` of the left-hand side.
fn absorb(lhs: &Concept, rhs: &Concept) -> Option<(Name, Concept)> {
    match lhs {
        Concept::Atom(a) => Some((a.clone(), rhs.clone())),
        Concept::And(cs) => {
            let pos = cs.iter().position(|c| matches!(c, Concept::Atom(_)))?;
            let Concept::Atom(a) = &cs[pos] else { unreachable!() };
            let rest = Concept::and(cs.iter().enumerate().filter(|(i, _)| *i != pos).map(|(_, c)| c.clone()));
            Some((a.clone(), Concept::or2(Concept::not(rest), rhs.clone())))
        }
        _ => None,
    }
}
