//! Bounded root-first proof search for G plus a theory's geometric rules.
//!
//! Invertible logical rules are applied eagerly and do not count towards the
//! depth budget; each L∀, R∃ or geometric step costs one unit.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::fresh::{all_vars, Fresh};
use crate::geometric::{replacement_related, GeometricRule, InitialScheme, Instance, Scheme, TheorySpec};
use crate::kernel::{check, expected_premises, leaf, Derivation, Occ, Rule};
use crate::syntax::{Formula, Sequent, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Budget {
    /// Non-invertible steps allowed along one branch.
    pub max_depth: usize,
    /// Fresh variables available as L∀/R∃ witnesses in the whole search.
    pub max_term_witnesses: usize,
    pub max_geo_instantiations_per_node: usize,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget { max_depth: 6, max_term_witnesses: 2, max_geo_instantiations_per_node: 64 }
    }
}

impl Budget {
    pub fn with_depth(max_depth: usize) -> Budget {
        Budget { max_depth, ..Budget::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("no derivation found within depth {0}")]
    NotFoundWithinBudget(usize),
    #[error("budget component `{0}` must be positive")]
    EmptyBudget(&'static str),
    #[error("goal `{0}` has a variable both free and bound")]
    ImpureGoal(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Derivability {
    Yes,
    Unknown,
}

/// Searches for a derivation of `goal` by iterative deepening.
pub fn prove(goal: &Sequent, theory: &TheorySpec, b: Budget) -> Result<Derivation, SearchError> {
    for (what, n) in [
        ("max_depth", b.max_depth),
        ("max_term_witnesses", b.max_term_witnesses),
        ("max_geo_instantiations_per_node", b.max_geo_instantiations_per_node),
    ] {
        if n == 0 {
            return Err(SearchError::EmptyBudget(what));
        }
    }
    if !goal.free_vars().is_disjoint(&goal.bound_vars()) {
        return Err(SearchError::ImpureGoal(goal.to_string()));
    }
    for depth in 0..=b.max_depth {
        let mut s = Searcher::new(goal, theory, b);
        if let Some(d) = s.prove(goal, depth, &mut Vec::new()) {
            debug_assert!(check(&d, theory).ok);
            return Ok(d);
        }
    }
    Err(SearchError::NotFoundWithinBudget(b.max_depth))
}

pub fn derivable(goal: &Sequent, theory: &TheorySpec, b: Budget) -> Derivability {
    match prove(goal, theory, b) {
        Ok(_) => Derivability::Yes,
        Err(_) => Derivability::Unknown,
    }
}

struct Searcher<'a> {
    theory: &'a TheorySpec,
    budget: Budget,
    pool: Vec<Term>,
    fresh: Fresh,
}

impl<'a> Searcher<'a> {
    fn new(goal: &Sequent, theory: &'a TheorySpec, budget: Budget) -> Searcher<'a> {
        let mut fresh = Fresh::avoiding(&all_vars(goal.formulas()));
        let pool = fresh.vars(budget.max_term_witnesses).into_iter().map(Term::var).collect();
        Searcher { theory, budget, pool, fresh }
    }

    fn prove(&mut self, s: &Sequent, depth: usize, branch: &mut Vec<(Vec<Formula>, Vec<Formula>)>) -> Option<Derivation> {
        if let Some(d) = leaf(s).or_else(|| self.axiom_leaf(s)) {
            return Some(d);
        }
        let key = s.canonical();
        if branch.contains(&key) {
            return None;
        }
        branch.push(key);
        let out = self.expand(s, depth, branch);
        branch.pop();
        out
    }

    fn expand(&mut self, s: &Sequent, depth: usize, branch: &mut Vec<(Vec<Formula>, Vec<Formula>)>) -> Option<Derivation> {
        if let Some((rule, occ)) = self.invertible(s) {
            return self.apply(s, rule, vec![occ], depth, branch);
        }
        if depth == 0 {
            return None;
        }
        for (rule, principal) in self.candidates(s) {
            if let Some(d) = self.apply(s, rule, principal, depth - 1, branch) {
                return Some(d);
            }
        }
        None
    }

    fn apply(
        &mut self,
        s: &Sequent,
        rule: Rule,
        principal: Vec<Occ>,
        depth: usize,
        branch: &mut Vec<(Vec<Formula>, Vec<Formula>)>,
    ) -> Option<Derivation> {
        let mut node = Derivation::new(s.clone(), rule, principal, vec![]);
        let premises = expected_premises(&node, self.theory).ok()?;
        for p in &premises {
            node.premises.push(self.prove(p, depth, branch)?);
        }
        Some(node)
    }

    fn axiom_leaf(&self, s: &Sequent) -> Option<Derivation> {
        if self.theory.has_initial(InitialScheme::Reflexivity) {
            if let Some(j) = s.suc.iter().position(|f| matches!(f.as_identity(), Some((a, b)) if a == b)) {
                return Some(Derivation::new(s.clone(), Rule::Axiom(InitialScheme::Reflexivity), vec![Occ::right(j)], vec![]));
            }
        }
        if self.theory.has_initial(InitialScheme::Replacement) {
            for (i, e) in s.ant.iter().enumerate() {
                let Some((a, b)) = e.as_identity() else { continue };
                for (k, src) in s.ant.iter().enumerate() {
                    if k == i {
                        continue;
                    }
                    if let Some(j) = s.suc.iter().position(|tgt| replacement_related(src, tgt, a, b)) {
                        let principal = vec![Occ::left(i), Occ::left(k), Occ::right(j)];
                        return Some(Derivation::new(s.clone(), Rule::Axiom(InitialScheme::Replacement), principal, vec![]));
                    }
                }
            }
        }
        None
    }

    /// The first formula, antecedent before succedent, with an invertible rule.
    fn invertible(&mut self, s: &Sequent) -> Option<(Rule, Occ)> {
        for (i, f) in s.ant.iter().enumerate() {
            let rule = match f {
                Formula::And(..) => Rule::LAnd,
                Formula::Or(..) => Rule::LOr,
                Formula::Imp(..) => Rule::LImp,
                Formula::Exists(..) => Rule::LExists(self.fresh.var()),
                _ => continue,
            };
            return Some((rule, Occ::left(i)));
        }
        for (j, f) in s.suc.iter().enumerate() {
            let rule = match f {
                Formula::And(..) => Rule::RAnd,
                Formula::Or(..) => Rule::ROr,
                Formula::Imp(..) => Rule::RImp,
                Formula::Forall(..) => Rule::RForall(self.fresh.var()),
                _ => continue,
            };
            return Some((rule, Occ::right(j)));
        }
        None
    }

    /// Non-invertible steps in trial order: L∀, R∃, then geometric rules.
    fn candidates(&mut self, s: &Sequent) -> Vec<(Rule, Vec<Occ>)> {
        let terms = s.ter();
        let mut witnesses: Vec<Term> = terms.iter().cloned().collect();
        if let Some(p) = self.pool.iter().find(|t| !terms.contains(t)) {
            witnesses.push(p.clone());
        }
        let mut out = Vec::new();
        for (i, f) in s.ant.iter().enumerate() {
            if let Formula::Forall(x, body) = f {
                for t in &witnesses {
                    match body.subst_vars(std::slice::from_ref(x), std::slice::from_ref(t)) {
                        Ok(a) if !s.ant.contains(&a) => out.push((Rule::LForall(t.clone()), vec![Occ::left(i)])),
                        _ => {}
                    }
                }
            }
        }
        for (j, f) in s.suc.iter().enumerate() {
            if let Formula::Exists(x, body) = f {
                for t in &witnesses {
                    match body.subst_vars(std::slice::from_ref(x), std::slice::from_ref(t)) {
                        Ok(a) if !s.suc.contains(&a) => out.push((Rule::RExists(t.clone()), vec![Occ::right(j)])),
                        _ => {}
                    }
                }
            }
        }
        for r in &self.theory.rules {
            let mut n = 0;
            for (inst, principal) in instances(r, s, &terms) {
                if n == self.budget.max_geo_instantiations_per_node {
                    break;
                }
                if !progresses(r, &inst, s) {
                    continue;
                }
                let mut inst = inst;
                inst.eigens = self.fresh.vars(r.eigen_count());
                out.push((Rule::Geo(r.id.clone(), inst), principal));
                n += 1;
            }
        }
        out
    }
}

/// Some premise block adds an atom not already in the antecedent.
fn progresses(r: &GeometricRule, inst: &Instance, s: &Sequent) -> bool {
    let mut probe = inst.clone();
    probe.eigens = (0..r.eigen_count()).map(|i| format!("_probe{i}")).collect();
    match r.premise_atoms(&probe) {
        Ok(blocks) => blocks.iter().any(|b| b.iter().any(|a| !s.ant.contains(a))),
        Err(_) => false,
    }
}

/// Matches of the principal atoms of `r` against antecedent atoms of `s`;
/// variables outside the principal atoms range over `terms`.
fn instances(r: &GeometricRule, s: &Sequent, terms: &BTreeSet<Term>) -> Vec<(Instance, Vec<Occ>)> {
    if r.scheme == Some(Scheme::Replacement) {
        return replacement_instances(r, s);
    }
    let mut found = Vec::new();
    match_atoms(&r.principal, 0, s, &mut BTreeMap::new(), &mut Vec::new(), &mut found);
    let mut out = Vec::new();
    for (map, occs) in found {
        let rest: Vec<&String> = r.universals.iter().filter(|x| !map.contains_key(*x)).collect();
        let mut maps = vec![map];
        for x in rest {
            maps = maps
                .into_iter()
                .flat_map(|m| {
                    terms.iter().map(move |t| {
                        let mut m = m.clone();
                        m.insert(x.clone(), t.clone());
                        m
                    })
                })
                .collect();
        }
        for m in maps {
            out.push((Instance { terms: m, eigens: Vec::new(), replace: None }, occs.clone()));
        }
    }
    out
}

fn match_atoms(
    pats: &[Formula],
    k: usize,
    s: &Sequent,
    map: &mut BTreeMap<String, Term>,
    occs: &mut Vec<Occ>,
    out: &mut Vec<(BTreeMap<String, Term>, Vec<Occ>)>,
) {
    let Some(pat) = pats.get(k) else {
        out.push((map.clone(), occs.clone()));
        return;
    };
    let Formula::Atom(p, xs) = pat else { return };
    for (i, f) in s.ant.iter().enumerate() {
        let Formula::Atom(q, ys) = f else { continue };
        if p != q || xs.len() != ys.len() {
            continue;
        }
        let saved = map.clone();
        let ok = xs.iter().zip(ys).all(|(x, y)| match x {
            Term::Var(v) => match map.get(v) {
                Some(t) => t == y,
                None => {
                    map.insert(v.clone(), y.clone());
                    true
                }
            },
            c => c == y,
        });
        if ok {
            occs.push(Occ::left(i));
            match_atoms(pats, k + 1, s, map, occs, out);
            occs.pop();
        }
        *map = saved;
    }
}

/// `s = t` and `P` from the antecedent, replacing a nonempty set of the
/// positions of `P` that hold `s`.
fn replacement_instances(r: &GeometricRule, s: &Sequent) -> Vec<(Instance, Vec<Occ>)> {
    let mut out = Vec::new();
    for (i, e) in s.ant.iter().enumerate() {
        let Some((a, b)) = e.as_identity() else { continue };
        if a == b {
            continue;
        }
        for (k, src) in s.ant.iter().enumerate() {
            let Formula::Atom(p, args) = src else { continue };
            let positions: Vec<usize> = (0..args.len()).filter(|&n| args[n] == *a).collect();
            for mask in 1u64..(1u64 << positions.len().min(16)) {
                let mut new_args = args.clone();
                for (bit, &n) in positions.iter().enumerate() {
                    if (mask >> bit) & 1 == 1 {
                        new_args[n] = b.clone();
                    }
                }
                let terms = BTreeMap::from([(r.universals[0].clone(), a.clone()), (r.universals[1].clone(), b.clone())]);
                let tgt = Formula::Atom(p.clone(), new_args);
                let inst = Instance { terms, eigens: Vec::new(), replace: Some((src.clone(), tgt)) };
                out.push((inst, vec![Occ::left(i), Occ::left(k)]));
            }
        }
    }
    out
}
