use std::collections::BTreeSet;

use crate::concept::Concept;
use crate::error::{Error, Result};
use crate::kb::KnowledgeBase;
use crate::normal::{
    clauses_to_concept, cnf_clauses, dnf_terms, grouped_disjuncts, prune_fillers, terms_to_concept,
    to_description_tree, from_description_tree, to_prefix_form, wrap_prefix, DescriptionTree, GroupedEl,
    Literal, PrefixForm, Quantifier,
};
use crate::reasoner::Reasoner;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Relax,
    Retract,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TreeVariant {
    Depth,
    Leaves,
}

/// `ρ_⊤` or `κ_⊥`.
pub fn trivial_op(_c: &Concept, direction: Direction) -> Concept {
    match direction {
        Direction::Relax => Concept::Top,
        Direction::Retract => Concept::Bot,
    }
}

/// `ρ_depth` prunes the deepest level of the description tree, `ρ_leaves`
/// every leaf below the root. A single-node tree relaxes to `Top`.
pub fn relax_tree(c: &Concept, variant: TreeVariant) -> Result<Concept> {
    let mut t = to_description_tree(c)?;
    if t.is_leaf() {
        return Ok(Concept::Top);
    }
    match variant {
        TreeVariant::Depth => {
            let d = t.depth();
            prune_level(&mut t, d - 1);
        }
        TreeVariant::Leaves => prune_leaves(&mut t),
    }
    Ok(from_description_tree(&t))
}

fn prune_level(t: &mut DescriptionTree, level: usize) {
    if level == 0 {
        t.edges.retain(|(_, s)| !s.is_leaf());
    } else {
        for (_, s) in &mut t.edges {
            prune_level(s, level - 1);
        }
    }
}

fn prune_leaves(t: &mut DescriptionTree) {
    t.edges.retain(|(_, s)| !s.is_leaf());
    for (_, s) in &mut t.edges {
        prune_leaves(s);
    }
}

/// `ρ_e` on an ELU concept, computed on its normal form with grouping of
/// existential restrictions. Disjuncts subsumed by a sibling are dropped.
/// A concept equivalent to `Bot` relaxes to `Top`.
pub fn relax_elu(c: &Concept) -> Result<Concept> {
    let ds = grouped_disjuncts(c)?;
    if ds.is_empty() {
        return Ok(Concept::Top);
    }
    let out = prune_disjuncts(ds.iter().flat_map(rho_e).collect());
    Ok(Concept::or(out.iter().map(GroupedEl::to_concept)))
}

/// Drops every disjunct subsumed by another one (keeps the first of
/// equivalent ones).
pub(crate) fn prune_disjuncts(mut ds: Vec<GroupedEl>) -> Vec<GroupedEl> {
    ds.sort();
    ds.dedup();
    let mut keep = vec![true; ds.len()];
    for i in 0..ds.len() {
        for j in 0..ds.len() {
            if i != j && keep[j] && ds[i].subsumed_by(&ds[j]) && (j < i || !ds[j].subsumed_by(&ds[i])) {
                keep[i] = false;
                break;
            }
        }
    }
    let mut it = keep.iter();
    ds.retain(|_| *it.next().unwrap());
    ds
}

/// Disjuncts of `ρ_e(d)` for an EL concept in grouped normal form.
fn rho_e(d: &GroupedEl) -> Vec<GroupedEl> {
    let parts = d.atoms.len() + d.groups.len();
    if parts == 0 {
        return vec![GroupedEl::default()];
    }
    let mut out = Vec::new();
    for a in &d.atoms {
        let mut rest = d.clone();
        rest.atoms.remove(a);
        out.push(rest);
    }
    for (r, fillers) in &d.groups {
        let mut rest = d.clone();
        rest.groups.remove(r);
        if fillers.len() == 1 && fillers[0] == GroupedEl::default() {
            out.push(rest);
            continue;
        }
        for g in rho_e_group(r, fillers) {
            out.push(g.meet(&rest));
        }
    }
    prune_disjuncts(out)
}

/// `ρ_e(D_r)` for `D_r = ⊓_{E ∈ fillers} ∃r.E`, over nonempty subsets S of
/// the fillers.
fn rho_e_group(r: &crate::concept::Name, fillers: &[GroupedEl]) -> Vec<GroupedEl> {
    let n = fillers.len();
    let mut out = Vec::new();
    for mask in 1u64..(1 << n) {
        let chosen = fillers.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0);
        let meet = chosen.fold(GroupedEl::default(), |acc, (_, f)| acc.meet(f));
        let kept: Vec<GroupedEl> =
            fillers.iter().enumerate().filter(|(i, _)| mask & (1 << i) == 0).map(|(_, f)| f.clone()).collect();
        for x in rho_e(&meet) {
            let mut fs = kept.clone();
            fs.push(x);
            prune_fillers(&mut fs);
            let mut g = GroupedEl::default();
            g.groups.insert(r.clone(), fs);
            out.push(g);
        }
    }
    out
}

fn eligible(
    c: &Concept,
    exceptions: &[Concept],
    kb: &KnowledgeBase,
    test: impl Fn(&Reasoner, &Concept, &Concept) -> Result<bool>,
) -> Result<Vec<Concept>> {
    let reasoner = Reasoner::new(kb);
    let mut out = Vec::new();
    for e in exceptions {
        if test(&reasoner, e, c)? {
            out.push(e.clone());
        }
    }
    Ok(out)
}

/// `ρ^k_ℰ(C) = C ⊔ E_{i₁} ⊔ ⋯ ⊔ E_{i_k}` with the first `k` exceptions
/// satisfying `E ⊓ C ⊑ ⊥` w.r.t. `kb`.
pub fn relax_exceptions(c: &Concept, exceptions: &[Concept], k: usize, kb: &KnowledgeBase) -> Result<Concept> {
    if k == 0 {
        return Ok(c.clone());
    }
    let ok = eligible(c, exceptions, kb, |r, e, c| {
        r.subsumes(&Concept::and2(e.clone(), c.clone()), &Concept::Bot)
    })?;
    if ok.len() < k {
        return Err(Error::NotEnoughExceptions { required: k, eligible: ok.len() });
    }
    Ok(Concept::or(std::iter::once(c.clone()).chain(ok.into_iter().take(k))))
}

/// `κⁿ_ℰ(C) = C ⊓ ¬E₁ ⊓ ⋯ ⊓ ¬E_n` with the first `n` exceptions
/// satisfying `E ⊑ C` w.r.t. `kb`.
pub fn retract_exceptions(c: &Concept, exceptions: &[Concept], n: usize, kb: &KnowledgeBase) -> Result<Concept> {
    if n == 0 {
        return Ok(c.clone());
    }
    let ok = eligible(c, exceptions, kb, |r, e, c| r.subsumes(e, c))?;
    if ok.len() < n {
        return Err(Error::NotEnoughExceptions { required: n, eligible: ok.len() });
    }
    Ok(Concept::and(std::iter::once(c.clone()).chain(ok.into_iter().take(n).map(Concept::not))))
}

/// `ρ^n_∪` / `κ^n_∩`: the exception operator applied to the body of a
/// prefix concept. For `κ_∩`, degrees beyond the eligible exceptions drop
/// innermost quantifiers once the body is `Bot`.
pub fn prefix_exceptions(
    c: &Concept,
    exceptions: &[Concept],
    n: usize,
    direction: Direction,
    kb: &KnowledgeBase,
) -> Result<Concept> {
    if n == 0 {
        return Ok(c.clone());
    }
    let pf = to_prefix_form(c)?;
    let body = match direction {
        Direction::Relax => relax_exceptions(&pf.body, exceptions, n, kb)?,
        Direction::Retract => match retract_exceptions(&pf.body, exceptions, n, kb) {
            Ok(b) => b,
            Err(Error::NotEnoughExceptions { required, eligible }) => {
                let b = retract_exceptions(&pf.body, exceptions, eligible, kb)?;
                let empty = KnowledgeBase::empty();
                if !Reasoner::new(&empty).subsumes(&b, &Concept::Bot)? {
                    return Err(Error::NotEnoughExceptions { required, eligible });
                }
                let keep = pf.prefix.len().saturating_sub(required - eligible);
                return Ok(wrap_prefix(&pf.prefix[..keep], Concept::Bot));
            }
            Err(e) => return Err(e),
        },
    };
    Ok(wrap_prefix(&pf.prefix, body))
}

fn dilate_term(t: &BTreeSet<Literal>) -> Vec<BTreeSet<Literal>> {
    if t.is_empty() {
        return vec![t.clone()];
    }
    t.iter()
        .map(|skip| t.iter().filter(|l| *l != skip).cloned().collect())
        .collect()
}

/// One step of the propositional operators on a quantifier-free body:
/// `ρ_p` drops one literal from a DNF term, `κ_p` one literal from a CNF
/// clause, in every possible way.
pub fn dalal_body(body: &Concept, direction: Direction) -> Result<Concept> {
    Ok(match direction {
        Direction::Relax => {
            let terms: Vec<_> = dnf_terms(body)?.iter().flat_map(dilate_term).collect();
            terms_to_concept(&simplify_sets(terms))
        }
        Direction::Retract => {
            let clauses: Vec<_> = cnf_clauses(body)?.iter().flat_map(dilate_term).collect();
            clauses_to_concept(&simplify_sets(clauses))
        }
    })
}

fn simplify_sets(mut v: Vec<BTreeSet<Literal>>) -> Vec<BTreeSet<Literal>> {
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    v.dedup();
    let mut out: Vec<BTreeSet<Literal>> = Vec::new();
    for s in v {
        if !out.iter().any(|o| o.is_subset(&s)) {
            out.push(s);
        }
    }
    out.sort();
    out
}

/// `ρ_Dalal` / `κ_Dalal`: [`dalal_body`] under the quantifier prefix. Once
/// the body is a fixpoint of the propositional step (`Top` for relaxation,
/// `Bot` for retraction) the step instead flips the body or drops the
/// innermost quantifier, so that iteration reaches `Top` / `Bot`.
pub fn dalal(c: &Concept, direction: Direction) -> Result<Concept> {
    let PrefixForm { prefix, body } = to_prefix_form(c)?;
    let (goal, opposite) = match direction {
        Direction::Relax => (Concept::Top, Concept::Bot),
        Direction::Retract => (Concept::Bot, Concept::Top),
    };
    let normal = match direction {
        Direction::Relax => terms_to_concept(&dnf_terms(&body)?),
        Direction::Retract => clauses_to_concept(&cnf_clauses(&body)?),
    };
    if normal == opposite {
        return Ok(wrap_prefix(&prefix, goal));
    }
    if normal == goal {
        let keep = prefix.len().saturating_sub(1);
        return Ok(wrap_prefix(&prefix[..keep], goal));
    }
    Ok(wrap_prefix(&prefix, dalal_body(&body, direction)?))
}

/// `ρ_q` (∀ to ∃, disjunction over positions) or `κ_q` (∃ to ∀,
/// conjunction over positions). Without a swappable quantifier the input is
/// returned unchanged.
pub fn quantifier_swap(c: &Concept, direction: Direction) -> Result<Concept> {
    let pf = to_prefix_form(c)?;
    let (from, to) = match direction {
        Direction::Relax => (Quantifier::Forall, Quantifier::Exists),
        Direction::Retract => (Quantifier::Exists, Quantifier::Forall),
    };
    let swapped: Vec<Concept> = (0..pf.prefix.len())
        .filter(|&j| pf.prefix[j].0 == from)
        .map(|j| {
            let mut p = pf.prefix.clone();
            p[j].0 = to;
            wrap_prefix(&p, pf.body.clone())
        })
        .collect();
    if swapped.is_empty() {
        return Ok(c.clone());
    }
    Ok(match direction {
        Direction::Relax => Concept::or(swapped),
        Direction::Retract => Concept::and(swapped),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reasoner::equivalent;
    use crate::syntax::{parse_concept, parse_kb};

    fn p(s: &str) -> Concept {
        parse_concept(s).unwrap()
    }

    fn kb(s: &str) -> KnowledgeBase {
        parse_kb(&format!("dialect ALC\n{s}")).unwrap()
    }

    #[test]
    fn trivial() {
        assert_eq!(trivial_op(&p("A & some r.B"), Direction::Relax), Concept::Top);
        assert_eq!(trivial_op(&p("Tweety"), Direction::Retract), Concept::Bot);
        assert_eq!(trivial_op(&Concept::Bot, Direction::Retract), Concept::Bot);
    }

    #[test]
    fn tree_operators() {
        let c = p("A & some r.(B & some s.E)");
        assert_eq!(relax_tree(&c, TreeVariant::Depth).unwrap(), p("A & some r.B"));
        assert_eq!(relax_tree(&c, TreeVariant::Leaves).unwrap(), p("A & some r.B"));
        let once = relax_tree(&p("A & some r.B"), TreeVariant::Leaves).unwrap();
        assert_eq!(once, p("A"));
        assert_eq!(relax_tree(&once, TreeVariant::Leaves).unwrap(), Concept::Top);
        assert_eq!(relax_tree(&p("A & B"), TreeVariant::Depth).unwrap(), Concept::Top);
        let c = p("some r.(some s.A) & some t.B");
        assert_eq!(relax_tree(&c, TreeVariant::Depth).unwrap(), p("some r.Top & some t.B"));
        assert_eq!(relax_tree(&c, TreeVariant::Leaves).unwrap(), p("some r.Top"));
        assert!(relax_tree(&p("A & Bot"), TreeVariant::Depth).is_err());
    }

    #[test]
    fn rho_e_examples() {
        let e = KnowledgeBase::empty();
        assert_eq!(relax_elu(&p("B & C")).unwrap(), p("B | C"));
        let r = relax_elu(&p("some m.(B & C)")).unwrap();
        assert!(equivalent(&e, &r, &p("some m.B | some m.C")).unwrap(), "{r}");
        let r = relax_elu(&p("A & some m.(B & C)")).unwrap();
        let want = p("some m.(B & C) | (A & (some m.B | some m.C))");
        assert!(equivalent(&e, &r, &want).unwrap(), "{r}");
        assert_eq!(relax_elu(&p("some r.Top")).unwrap(), Concept::Top);
        assert_eq!(relax_elu(&Concept::Top).unwrap(), Concept::Top);
        assert_eq!(relax_elu(&Concept::Bot).unwrap(), Concept::Top);
        assert_eq!(relax_elu(&p("A | B")).unwrap(), Concept::Top);
    }

    #[test]
    fn exception_operators() {
        let k = kb("Tweety & Flies [= Bot.");
        assert_eq!(relax_exceptions(&p("Flies"), &[p("Tweety")], 1, &k).unwrap(), p("Flies | Tweety"));
        assert_eq!(relax_exceptions(&p("Flies"), &[p("Tweety")], 0, &k).unwrap(), p("Flies"));
        let k = kb("John [= not Rich.");
        assert_eq!(relax_exceptions(&p("Rich"), &[p("John")], 1, &k).unwrap(), p("Rich | John"));

        let k = kb("Tweety [= Bird.");
        assert_eq!(retract_exceptions(&p("Bird"), &[p("Tweety")], 1, &k).unwrap(), p("Bird & not Tweety"));
        let err = retract_exceptions(&p("Bird"), &[p("Stone")], 1, &KnowledgeBase::empty()).unwrap_err();
        assert_eq!(err, Error::NotEnoughExceptions { required: 1, eligible: 0 });
    }

    #[test]
    fn prefix_exception_operators() {
        let k = kb("John [= not Rich.");
        let r = prefix_exceptions(&p("only hasChild.Rich"), &[p("John")], 1, Direction::Relax, &k).unwrap();
        assert_eq!(r, p("only hasChild.(Rich | John)"));
        let k = kb("Tweety [= Bird.");
        let r = prefix_exceptions(&p("some r.Bird"), &[p("Tweety")], 1, Direction::Retract, &k).unwrap();
        assert_eq!(r, p("some r.(Bird & not Tweety)"));
        let e = KnowledgeBase::empty();
        let c = p("only r.(only s.A)");
        let steps: Vec<Concept> = (1..=4)
            .map(|n| prefix_exceptions(&c, &[p("A")], n, Direction::Retract, &e).unwrap())
            .collect();
        assert_eq!(steps[1], p("only r.Bot"));
        assert_eq!(steps[2], Concept::Bot);
        assert_eq!(steps[3], Concept::Bot);
    }

    #[test]
    fn dalal_examples() {
        assert_eq!(dalal(&p("A | B"), Direction::Retract).unwrap(), p("A & B"));
        assert_eq!(dalal(&p("A & B"), Direction::Relax).unwrap(), p("A | B"));
        assert_eq!(dalal(&p("some r.A"), Direction::Relax).unwrap(), p("some r.Top"));
        assert_eq!(dalal(&p("some r.Top"), Direction::Relax).unwrap(), Concept::Top);
        assert_eq!(dalal(&p("only r.A"), Direction::Retract).unwrap(), p("only r.Bot"));
        assert_eq!(dalal(&p("only r.Bot"), Direction::Retract).unwrap(), Concept::Bot);
        assert_eq!(dalal(&p("A & not A"), Direction::Relax).unwrap(), Concept::Top);
        assert!(dalal(&p("A & some r.B"), Direction::Relax).is_err());
    }

    #[test]
    fn swaps() {
        assert_eq!(quantifier_swap(&p("only hasChild.Rich"), Direction::Relax).unwrap(), p("some hasChild.Rich"));
        assert_eq!(
            quantifier_swap(&p("some r.(some s.A)"), Direction::Retract).unwrap(),
            p("only r.(some s.A) & some r.(only s.A)")
        );
        assert_eq!(quantifier_swap(&p("some r.A"), Direction::Relax).unwrap(), p("some r.A"));
    }
}
