//! Geometric axioms, their compilation into left rules, the singularity
//! condition and the built-in theories.
//!
//! A geometric axiom `∀x̄(P₁ ∧ … ∧ Pₙ → ∃ȳ₁M₁ ∨ … ∨ ∃ȳₘMₘ)` becomes the rule
//!
//! ```text
//!  Q̄₁*, P̄, Γ ⇒ Δ   …   Q̄ₘ*, P̄, Γ ⇒ Δ
//!  ─────────────────────────────────
//!          P₁, …, Pₙ, Γ ⇒ Δ
//! ```
//!
//! where each `ȳᵢ` is replaced by eigenvariables. An axiom with `m = 0`
//! compiles to a one-premise rule whose premise adds `⊥`.

mod builtin;
mod file;

pub use builtin::{builtin_theory, relational_axioms, BUILTIN_NAMES};
pub use file::{compile_theory_file, CompiledTheory};

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::fresh::Fresh;
use crate::syntax::{Formula, Pred, Sequent, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeoError {
    #[error("malformed axiom `{name}`: {reason}")]
    MalformedAxiom { name: String, reason: String },
    #[error("unknown theory `{0}`")]
    UnknownTheory(String),
    #[error("rule `{rule}` instantiated without a term for `{var}`")]
    IncompleteInstantiation { rule: String, var: String },
    #[error("rule `{rule}`: {reason}")]
    BadInstance { rule: String, reason: String },
    #[error("theory file line {line}, column {col}: {msg}")]
    TheoryFile { line: usize, col: usize, msg: String },
}

/// `∀x̄(P₁ ∧ … ∧ Pₙ → ∃ȳ₁Q̄₁ ∨ … ∨ ∃ȳₘQ̄ₘ)`; an empty `disjuncts` list is `⊥`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricAxiom {
    pub name: String,
    pub universals: Vec<String>,
    pub antecedent: Vec<Formula>,
    pub disjuncts: Vec<(Vec<String>, Vec<Formula>)>,
}

/// One premise of a geometric rule: the atoms it adds and the scheme
/// variables that become eigenvariables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub eigens: Vec<String>,
    pub atoms: Vec<Formula>,
}

/// Rule-scheme markers for rules that no finite atom list describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// `s = t, P[s/x], Γ ⇒ Δ` from `P[t/x], s = t, P[s/x], Γ ⇒ Δ` for an
    /// arbitrary atom `P`. The universals are `[x, y]` standing for `s, t`,
    /// and the atom pair is supplied with each instance.
    Replacement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricRule {
    pub id: String,
    pub universals: Vec<String>,
    pub principal: Vec<Formula>,
    pub blocks: Vec<Block>,
    pub singular: bool,
    pub scheme: Option<Scheme>,
}

/// Initial-sequent schemes that replace identity rules in the negative
/// regression theory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InitialScheme {
    /// `Γ ⇒ Δ, s = s`
    Reflexivity,
    /// `s = t, P[s/x], Γ ⇒ Δ, P[t/x]` for atomic `P`
    Replacement,
}

impl InitialScheme {
    pub fn id(&self) -> &'static str {
        match self {
            InitialScheme::Reflexivity => "S1",
            InitialScheme::Replacement => "S2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheorySpec {
    pub name: String,
    pub rules: Vec<GeometricRule>,
    pub preds: BTreeSet<Pred>,
    pub initial: Vec<InitialScheme>,
}

impl TheorySpec {
    pub fn new(name: impl Into<String>) -> TheorySpec {
        TheorySpec { name: name.into(), rules: Vec::new(), preds: BTreeSet::new(), initial: Vec::new() }
    }

    pub fn rule(&self, id: &str) -> Option<&GeometricRule> {
        self.rules.iter().find(|r| r.id == id)
    }

    pub fn has_initial(&self, s: InitialScheme) -> bool {
        self.initial.contains(&s)
    }

    /// Every rule satisfies (⋆) and no extra initial sequents are present.
    pub fn is_singular(&self) -> bool {
        self.initial.is_empty() && self.rules.iter().all(|r| r.singular)
    }

    /// Adds a rule, rejecting a duplicate id.
    pub fn push_rule(&mut self, rule: GeometricRule) -> Result<(), GeoError> {
        if self.rule(&rule.id).is_some() {
            return Err(GeoError::MalformedAxiom { name: rule.id, reason: "duplicate rule id".into() });
        }
        self.preds.extend(rule.principal.iter().flat_map(|a| a.rel()));
        self.preds.extend(rule.blocks.iter().flat_map(|b| b.atoms.iter().flat_map(|a| a.rel())));
        self.rules.push(rule);
        Ok(())
    }
}

fn malformed(name: &str, reason: impl Into<String>) -> GeoError {
    GeoError::MalformedAxiom { name: name.to_string(), reason: reason.into() }
}

fn conjunct_atoms(name: &str, f: &Formula, out: &mut Vec<Formula>) -> Result<(), GeoError> {
    match f {
        Formula::And(a, b) => {
            conjunct_atoms(name, a, out)?;
            conjunct_atoms(name, b, out)
        }
        Formula::Top => Ok(()),
        Formula::Atom(..) => {
            out.push(f.clone());
            Ok(())
        }
        other => Err(malformed(name, format!("`{other}` is not a conjunction of atoms"))),
    }
}

fn disjuncts(name: &str, f: &Formula, out: &mut Vec<(Vec<String>, Vec<Formula>)>) -> Result<(), GeoError> {
    match f {
        Formula::Or(a, b) => {
            disjuncts(name, a, out)?;
            disjuncts(name, b, out)
        }
        Formula::Bot => Ok(()),
        _ => {
            let mut ys = Vec::new();
            let mut body = f;
            while let Formula::Exists(y, b) = body {
                ys.push(y.clone());
                body = b;
            }
            let mut atoms = Vec::new();
            conjunct_atoms(name, body, &mut atoms)?;
            out.push((ys, atoms));
            Ok(())
        }
    }
}

impl GeometricAxiom {
    /// Reads a closed formula of the shape `∀x̄(A → B)` or `∀x̄ B`, with `A` a
    /// conjunction of atoms and `B` a disjunction of existentially quantified
    /// conjunctions of atoms (`⊥` for the empty disjunction).
    pub fn from_formula(name: &str, f: &Formula) -> Result<GeometricAxiom, GeoError> {
        if !f.free_vars().is_empty() {
            let fv: Vec<String> = f.free_vars().into_iter().collect();
            return Err(malformed(name, format!("free variables {}", fv.join(", "))));
        }
        let mut universals = Vec::new();
        let mut body = f;
        while let Formula::Forall(x, b) = body {
            universals.push(x.clone());
            body = b;
        }
        let (ante, cons) = match body {
            Formula::Imp(a, b) => (Some(&**a), &**b),
            other => (None, other),
        };
        let mut antecedent = Vec::new();
        if let Some(a) = ante {
            conjunct_atoms(name, a, &mut antecedent)?;
        }
        let mut ds = Vec::new();
        disjuncts(name, cons, &mut ds)?;
        let ax = GeometricAxiom { name: name.to_string(), universals, antecedent, disjuncts: ds };
        ax.validate()?;
        Ok(ax)
    }

    fn validate(&self) -> Result<(), GeoError> {
        let mut seen = BTreeSet::new();
        for x in &self.universals {
            if !seen.insert(x.clone()) {
                return Err(malformed(&self.name, format!("variable `{x}` quantified twice")));
            }
        }
        for (ys, _) in &self.disjuncts {
            let mut local = BTreeSet::new();
            for y in ys {
                if seen.contains(y) || !local.insert(y.clone()) {
                    return Err(malformed(&self.name, format!("existential variable `{y}` reuses a quantified name")));
                }
            }
        }
        Ok(())
    }

    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for a in self.antecedent.iter().chain(self.disjuncts.iter().flat_map(|(_, q)| q.iter())) {
            out.extend(a.constants());
        }
        out
    }

    pub fn to_formula(&self) -> Formula {
        let cons = Formula::disj(
            &self
                .disjuncts
                .iter()
                .map(|(ys, q)| {
                    let body = Formula::conj(q).unwrap_or(Formula::Top);
                    ys.iter().rev().fold(body, |acc, y| Formula::exists(y.clone(), acc))
                })
                .collect::<Vec<_>>(),
        )
        .unwrap_or(Formula::Bot);
        let body = match Formula::conj(&self.antecedent) {
            Some(a) => Formula::imp(a, cons),
            None => cons,
        };
        self.universals.iter().rev().fold(body, |acc, x| Formula::forall(x.clone(), acc))
    }
}

/// Evaluates (⋆): clause (a) `|Rel(Q̄*, P̄)| ≤ 1` and clause (b)
/// `Rel(Q̄*) ⊆ Rel(P̄)`. Diagnostics report each failed clause separately.
pub fn singularity(principal: &[Formula], blocks: &[Block]) -> (bool, Vec<String>) {
    let p_rel: BTreeSet<Pred> = principal.iter().flat_map(|a| a.rel()).collect();
    let q_rel: BTreeSet<Pred> = blocks.iter().flat_map(|b| b.atoms.iter().flat_map(|a| a.rel())).collect();
    let all: BTreeSet<&Pred> = p_rel.iter().chain(q_rel.iter()).collect();
    let show = |ps: Vec<&Pred>| ps.iter().map(|p| format!("{}/{}", p.name, p.arity)).collect::<Vec<_>>().join(", ");
    let mut diags = Vec::new();
    if all.len() > 1 {
        diags.push(format!("(a) more than one non-logical predicate: {{{}}}", show(all.into_iter().collect())));
    }
    let missing: Vec<&Pred> = q_rel.difference(&p_rel).collect();
    if !missing.is_empty() {
        diags.push(format!("(b) premise predicates not among the principal atoms: {{{}}}", show(missing)));
    }
    (diags.is_empty(), diags)
}

pub fn compile_axiom(a: &GeometricAxiom) -> Result<GeometricRule, GeoError> {
    a.validate()?;
    let blocks: Vec<Block> = if a.disjuncts.is_empty() {
        vec![Block { eigens: Vec::new(), atoms: vec![Formula::Bot] }]
    } else {
        a.disjuncts.iter().map(|(ys, q)| Block { eigens: ys.clone(), atoms: q.clone() }).collect()
    };
    let (singular, _) = singularity(&a.antecedent, &blocks);
    if singular && !a.constants().is_empty() {
        return Err(malformed(&a.name, "constants may not occur in a singular geometric axiom"));
    }
    Ok(GeometricRule {
        id: a.name.clone(),
        universals: a.universals.clone(),
        principal: a.antecedent.clone(),
        blocks,
        singular,
        scheme: None,
    })
}

pub fn is_singular(r: &GeometricRule) -> (bool, Vec<String>) {
    match r.scheme {
        // The atom `P` contributes its predicate to both sides.
        Some(Scheme::Replacement) => (true, Vec::new()),
        None => singularity(&r.principal, &r.blocks),
    }
}

/// Data fixing one application of a geometric rule.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Instance {
    pub terms: BTreeMap<String, Term>,
    /// Eigenvariables of all blocks, concatenated in block order.
    pub eigens: Vec<String>,
    /// `(P[s/x], P[t/x])` for the replacement scheme.
    pub replace: Option<(Formula, Formula)>,
}

impl GeometricRule {
    pub fn eigen_count(&self) -> usize {
        self.blocks.iter().map(|b| b.eigens.len()).sum()
    }

    fn check_terms(&self, inst: &Instance) -> Result<(), GeoError> {
        for x in &self.universals {
            if !inst.terms.contains_key(x) {
                return Err(GeoError::IncompleteInstantiation { rule: self.id.clone(), var: x.clone() });
            }
        }
        if let Some(k) = inst.terms.keys().find(|k| !self.universals.contains(k)) {
            return Err(GeoError::BadInstance { rule: self.id.clone(), reason: format!("`{k}` is not a rule variable") });
        }
        Ok(())
    }

    fn bad(&self, reason: impl Into<String>) -> GeoError {
        GeoError::BadInstance { rule: self.id.clone(), reason: reason.into() }
    }

    /// The instantiated principal atoms.
    pub fn principal_atoms(&self, inst: &Instance) -> Result<Vec<Formula>, GeoError> {
        self.check_terms(inst)?;
        let map: BTreeMap<Term, Term> =
            inst.terms.iter().map(|(x, t)| (Term::Var(x.clone()), t.clone())).collect();
        let mut out: Vec<Formula> =
            self.principal.iter().map(|a| a.subst_map(&map).expect("atoms have no binders")).collect();
        if self.scheme == Some(Scheme::Replacement) {
            let (src, tgt) = inst.replace.as_ref().ok_or_else(|| self.bad("missing replacement atoms"))?;
            let (s, t) = (&inst.terms[&self.universals[0]], &inst.terms[&self.universals[1]]);
            if !replacement_related(src, tgt, s, t) {
                return Err(self.bad(format!("`{tgt}` is not obtained from `{src}` by replacing `{s}` with `{t}`")));
            }
            out.push(src.clone());
        } else if inst.replace.is_some() {
            return Err(self.bad("replacement atoms given for a plain rule"));
        }
        Ok(out)
    }

    /// The atoms added by each premise, with eigenvariables taken from
    /// `inst.eigens`.
    pub fn premise_atoms(&self, inst: &Instance) -> Result<Vec<Vec<Formula>>, GeoError> {
        self.check_terms(inst)?;
        if inst.eigens.len() != self.eigen_count() {
            return Err(self.bad(format!("expected {} eigenvariables, got {}", self.eigen_count(), inst.eigens.len())));
        }
        if self.scheme == Some(Scheme::Replacement) {
            let (_, tgt) = inst.replace.as_ref().ok_or_else(|| self.bad("missing replacement atoms"))?;
            return Ok(vec![vec![tgt.clone()]]);
        }
        let mut out = Vec::new();
        let mut next = 0;
        for b in &self.blocks {
            let mut map: BTreeMap<Term, Term> =
                inst.terms.iter().map(|(x, t)| (Term::Var(x.clone()), t.clone())).collect();
            for y in &b.eigens {
                map.insert(Term::Var(y.clone()), Term::Var(inst.eigens[next].clone()));
                next += 1;
            }
            out.push(b.atoms.iter().map(|a| a.subst_map(&map).expect("atoms have no binders")).collect());
        }
        Ok(out)
    }
}

/// `tgt` arises from `src` by replacing some occurrences of `s` with `t`.
pub fn replacement_related(src: &Formula, tgt: &Formula, s: &Term, t: &Term) -> bool {
    match (src, tgt) {
        (Formula::Atom(p, xs), Formula::Atom(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(a, b)| a == b || (a == s && b == t))
        }
        _ => false,
    }
}

/// Builds the premises of an application of `r` above `ctx`, whose
/// antecedent must already contain the instantiated principal atoms.
/// Eigenvariables are drawn from `fresh`, skipping names free in `ctx`.
pub fn instantiate_rule(
    r: &GeometricRule,
    terms: &BTreeMap<String, Term>,
    replace: Option<(Formula, Formula)>,
    ctx: &Sequent,
    fresh: &mut Fresh,
) -> Result<(Vec<Sequent>, Instance), GeoError> {
    let mut inst = Instance { terms: terms.clone(), eigens: Vec::new(), replace };
    let principal = r.principal_atoms(&inst)?;
    if let Some(a) = principal.iter().find(|a| !ctx.ant.contains(a)) {
        return Err(r.bad(format!("principal atom `{a}` missing from the conclusion")));
    }
    let used = ctx.free_vars();
    for _ in 0..r.eigen_count() {
        let mut v = fresh.var();
        while used.contains(&v) {
            v = fresh.var();
        }
        inst.eigens.push(v);
    }
    let premises = r
        .premise_atoms(&inst)?
        .into_iter()
        .map(|atoms| {
            let mut ant = atoms;
            ant.extend(ctx.ant.iter().cloned());
            Sequent::new(ant, ctx.suc.clone())
        })
        .collect();
    Ok((premises, inst))
}

#[cfg(test)]
mod tests;
