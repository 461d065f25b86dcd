//! Derivation trees for G3c plus geometric rules, the proof checker and the
//! height-preserving admissible transformations.

mod build;
mod check;
mod contract;
mod text;
mod transform;

pub use build::*;
pub use check::{check, CheckReport, Violation};
pub(crate) use check::expected_premises;
pub use contract::{contract, invert, Part};
pub use text::{parse_derivation, print_derivation, DerivationParseError};
pub use transform::{axiom_expansion, map_terms, rename_eigens, separate, subst_derivation, weaken, weaken_all};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::geometric::{GeoError, InitialScheme, Instance};
use crate::syntax::{Formula, Sequent, SubstError, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

/// A formula occurrence in a sequent, addressed by position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occ {
    pub side: Side,
    pub index: usize,
}

impl Occ {
    pub fn left(index: usize) -> Occ {
        Occ { side: Side::Left, index }
    }

    pub fn right(index: usize) -> Occ {
        Occ { side: Side::Right, index }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `P, Γ ⇒ Δ, P` with `P` atomic; principal `[left P, right P]`.
    Init,
    /// `Γ ⇒ Δ, ⊤`
    InitTop,
    /// `⊥, Γ ⇒ Δ`
    InitBot,
    LAnd,
    RAnd,
    LOr,
    ROr,
    LImp,
    RImp,
    LForall(Term),
    RForall(String),
    LExists(String),
    RExists(Term),
    /// A geometric rule of the ambient theory; principal occurrences are the
    /// antecedent atoms `P₁, …, Pₙ` in rule order.
    Geo(String, Instance),
    /// An extra initial sequent supplied by the theory.
    Axiom(InitialScheme),
}

impl Rule {
    pub fn is_leaf(&self) -> bool {
        matches!(self, Rule::Init | Rule::InitTop | Rule::InitBot | Rule::Axiom(_))
    }

    /// Eigenvariables introduced by this rule instance.
    pub fn eigens(&self) -> Vec<String> {
        match self {
            Rule::RForall(y) | Rule::LExists(y) => vec![y.clone()],
            Rule::Geo(_, inst) => inst.eigens.clone(),
            _ => Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub conclusion: Sequent,
    pub rule: Rule,
    pub principal: Vec<Occ>,
    pub premises: Vec<Derivation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("fewer than two occurrences of `{0}` to contract")]
    MissingOccurrence(String),
    #[error("cannot build derivation: {0}")]
    Build(String),
    #[error(transparent)]
    Subst(#[from] SubstError),
    #[error(transparent)]
    Geo(#[from] GeoError),
}

impl Derivation {
    pub fn new(conclusion: Sequent, rule: Rule, principal: Vec<Occ>, premises: Vec<Derivation>) -> Derivation {
        Derivation { conclusion, rule, principal, premises }
    }

    pub fn height(&self) -> usize {
        self.premises.iter().map(|p| p.height() + 1).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(|p| p.size()).sum::<usize>()
    }

    pub fn formula(&self, o: Occ) -> Option<&Formula> {
        match o.side {
            Side::Left => self.conclusion.ant.get(o.index),
            Side::Right => self.conclusion.suc.get(o.index),
        }
    }

    /// Pre-order traversal.
    pub fn nodes(&self) -> Vec<&Derivation> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(d) = stack.pop() {
            out.push(d);
            stack.extend(d.premises.iter().rev());
        }
        out
    }

    /// Eigenvariables of all rule instances, with repetitions.
    pub fn eigens(&self) -> Vec<String> {
        self.nodes().iter().flat_map(|d| d.rule.eigens()).collect()
    }

    /// Every variable name appearing anywhere in the tree.
    pub fn var_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for d in self.nodes() {
            for f in d.conclusion.formulas() {
                out.extend(f.free_vars());
                out.extend(f.bound_vars());
            }
            out.extend(d.rule.eigens());
            match &d.rule {
                Rule::LForall(Term::Var(v)) | Rule::RExists(Term::Var(v)) => {
                    out.insert(v.clone());
                }
                Rule::Geo(_, inst) => out.extend(inst.terms.values().filter_map(|t| t.as_var().map(String::from))),
                _ => {}
            }
        }
        out
    }

    /// Variables free in some sequent of the tree.
    pub fn free_vars_anywhere(&self) -> BTreeSet<String> {
        self.nodes().iter().flat_map(|d| d.conclusion.free_vars()).collect()
    }

    pub fn bound_vars_anywhere(&self) -> BTreeSet<String> {
        self.nodes().iter().flat_map(|d| d.conclusion.bound_vars()).collect()
    }

    /// Whether the term occurs free in some sequent of the tree.
    pub fn mentions(&self, t: &Term) -> bool {
        self.nodes().iter().any(|d| d.conclusion.formulas().any(|f| f.has_free_term(t)))
    }
}

pub(crate) fn side_mut(s: &mut Sequent, side: Side) -> &mut Vec<Formula> {
    match side {
        Side::Left => &mut s.ant,
        Side::Right => &mut s.suc,
    }
}

pub(crate) fn side_ref(s: &Sequent, side: Side) -> &Vec<Formula> {
    match side {
        Side::Left => &s.ant,
        Side::Right => &s.suc,
    }
}
