//! First-order syntax: terms, formulas, multiset sequents, languages and
//! substitution.
//!
//! The language has individual constants but no function symbols, so a term
//! is either a variable or a constant. Identity (`=`) is the only logical
//! predicate; it never counts towards [`Formula::rel`].

mod parse;
mod print;

pub use parse::{parse_formula, parse_sequent, parse_term, ParseError};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// A variable or an individual constant.
///
/// The derived ordering puts every variable before every constant and then
/// orders by name; every term set in the crate uses this order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Var(n) | Term::Const(n) => n,
        }
    }
}

/// A predicate symbol, identified by name and arity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pred {
    pub name: String,
    pub arity: usize,
}

impl Pred {
    pub fn new(name: impl Into<String>, arity: usize) -> Pred {
        Pred { name: name.into(), arity }
    }

    pub fn identity() -> Pred {
        Pred::new("=", 2)
    }

    /// `=` is the only logical predicate.
    pub fn is_identity(&self) -> bool {
        self.name == "=" && self.arity == 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Pred, Vec<Term>),
    Bot,
    Top,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("term is not free for substitution: variable `{0}` would be captured")]
    Capture(String),
    #[error("substitution lists differ in length ({0} variables, {1} terms)")]
    Arity(usize, usize),
    #[error("variable `{0}` listed twice in a simultaneous substitution")]
    DuplicateVariable(String),
}

impl Formula {
    pub fn atom(name: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(Pred::new(name, args.len()), args)
    }

    pub fn eq(s: Term, t: Term) -> Formula {
        Formula::Atom(Pred::identity(), vec![s, t])
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    /// `¬A` abbreviates `A → ⊥`.
    pub fn negation(a: Formula) -> Formula {
        Formula::imp(a, Formula::Bot)
    }

    pub fn forall(x: impl Into<String>, a: Formula) -> Formula {
        Formula::Forall(x.into(), Box::new(a))
    }

    pub fn exists(x: impl Into<String>, a: Formula) -> Formula {
        Formula::Exists(x.into(), Box::new(a))
    }

    /// Right-nested conjunction `A₁ ∧ (A₂ ∧ (… ∧ Aₙ))`; `None` on an empty list.
    pub fn conj(items: &[Formula]) -> Option<Formula> {
        Self::nest(items, Formula::and)
    }

    /// Right-nested disjunction; `None` on an empty list.
    pub fn disj(items: &[Formula]) -> Option<Formula> {
        Self::nest(items, Formula::or)
    }

    fn nest(items: &[Formula], op: fn(Formula, Formula) -> Formula) -> Option<Formula> {
        let (last, rest) = items.split_last()?;
        Some(rest.iter().rev().fold(last.clone(), |acc, f| op(f.clone(), acc)))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(..))
    }

    /// Identity atoms `s = t`.
    pub fn as_identity(&self) -> Option<(&Term, &Term)> {
        match self {
            Formula::Atom(p, args) if p.is_identity() => Some((&args[0], &args[1])),
            _ => None,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(_, args) => {
                for t in args {
                    if let Term::Var(v) = t {
                        if !bound.contains(v) {
                            out.insert(v.clone());
                        }
                    }
                }
            }
            Formula::Bot | Formula::Top => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                bound.push(x.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |_, args| {
            for t in args {
                if let Term::Const(c) = t {
                    out.insert(c.clone());
                }
            }
        });
        out
    }

    /// Variables bound by some quantifier in the formula.
    pub fn bound_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_bound(&mut out);
        out
    }

    fn collect_bound(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(..) | Formula::Bot | Formula::Top => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_bound(out);
                b.collect_bound(out);
            }
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                out.insert(x.clone());
                a.collect_bound(out);
            }
        }
    }

    /// `Ter(A) = FV(A) ∪ Con(A)`.
    pub fn ter(&self) -> BTreeSet<Term> {
        let mut out: BTreeSet<Term> = self.free_vars().into_iter().map(Term::Var).collect();
        out.extend(self.constants().into_iter().map(Term::Const));
        out
    }

    /// Non-logical predicates occurring in the formula.
    pub fn rel(&self) -> BTreeSet<Pred> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |p, _| {
            if !p.is_identity() {
                out.insert(p.clone());
            }
        });
        out
    }

    pub fn lang(&self) -> Language {
        Language { terms: self.ter(), preds: self.rel() }
    }

    fn visit_atoms(&self, f: &mut dyn FnMut(&Pred, &[Term])) {
        match self {
            Formula::Atom(p, args) => f(p, args),
            Formula::Bot | Formula::Top => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
            Formula::Forall(_, a) | Formula::Exists(_, a) => a.visit_atoms(f),
        }
    }

    /// Whether `t` has an occurrence in the formula that is not bound.
    pub fn has_free_term(&self, t: &Term) -> bool {
        match t {
            Term::Var(v) => self.free_vars().contains(v),
            Term::Const(c) => self.constants().contains(c),
        }
    }

    /// Number of connectives and quantifiers.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(..) | Formula::Bot | Formula::Top => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
            Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.size(),
        }
    }

    /// Simultaneous substitution `A[x̄ := t̄]` of free variable occurrences.
    pub fn subst_vars(&self, xs: &[String], ts: &[Term]) -> Result<Formula, SubstError> {
        if xs.len() != ts.len() {
            return Err(SubstError::Arity(xs.len(), ts.len()));
        }
        let mut map = BTreeMap::new();
        for (x, t) in xs.iter().zip(ts) {
            if map.insert(Term::Var(x.clone()), t.clone()).is_some() {
                return Err(SubstError::DuplicateVariable(x.clone()));
            }
        }
        self.subst_map(&map)
    }

    /// Replaces every occurrence of the term `u` by `t` (only free
    /// occurrences when `u` is a variable).
    pub fn subst_term(&self, u: &Term, t: &Term) -> Result<Formula, SubstError> {
        if u == t {
            return Ok(self.clone());
        }
        let map = BTreeMap::from([(u.clone(), t.clone())]);
        self.subst_map(&map)
    }

    /// Simultaneous term-for-term substitution. Keys may be variables or
    /// constants; variable keys only affect free occurrences.
    pub fn subst_map(&self, map: &BTreeMap<Term, Term>) -> Result<Formula, SubstError> {
        if map.is_empty() {
            return Ok(self.clone());
        }
        Ok(match self {
            Formula::Atom(p, args) => Formula::Atom(
                p.clone(),
                args.iter().map(|a| map.get(a).cloned().unwrap_or_else(|| a.clone())).collect(),
            ),
            Formula::Bot => Formula::Bot,
            Formula::Top => Formula::Top,
            Formula::And(a, b) => Formula::and(a.subst_map(map)?, b.subst_map(map)?),
            Formula::Or(a, b) => Formula::or(a.subst_map(map)?, b.subst_map(map)?),
            Formula::Imp(a, b) => Formula::imp(a.subst_map(map)?, b.subst_map(map)?),
            Formula::Forall(x, a) => Formula::forall(x.clone(), Self::subst_under(x, a, map)?),
            Formula::Exists(x, a) => Formula::exists(x.clone(), Self::subst_under(x, a, map)?),
        })
    }

    fn subst_under(x: &str, body: &Formula, map: &BTreeMap<Term, Term>) -> Result<Formula, SubstError> {
        let bound = Term::Var(x.to_string());
        let inner: BTreeMap<Term, Term> =
            map.iter().filter(|(k, _)| **k != bound).map(|(k, v)| (k.clone(), v.clone())).collect();
        for (k, v) in &inner {
            if *v == bound && body.has_free_term(k) {
                return Err(SubstError::Capture(x.to_string()));
            }
        }
        body.subst_map(&inner)
    }

    /// Equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        fn go(a: &Formula, b: &Formula, env: &mut Vec<(String, String)>) -> bool {
            match (a, b) {
                (Formula::Atom(p, xs), Formula::Atom(q, ys)) => {
                    p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_eq(x, y, env))
                }
                (Formula::Bot, Formula::Bot) | (Formula::Top, Formula::Top) => true,
                (Formula::And(a1, a2), Formula::And(b1, b2))
                | (Formula::Or(a1, a2), Formula::Or(b1, b2))
                | (Formula::Imp(a1, a2), Formula::Imp(b1, b2)) => go(a1, b1, env) && go(a2, b2, env),
                (Formula::Forall(x, a), Formula::Forall(y, b))
                | (Formula::Exists(x, a), Formula::Exists(y, b)) => {
                    env.push((x.clone(), y.clone()));
                    let r = go(a, b, env);
                    env.pop();
                    r
                }
                _ => false,
            }
        }
        fn term_eq(x: &Term, y: &Term, env: &[(String, String)]) -> bool {
            match (x, y) {
                (Term::Var(a), Term::Var(b)) => {
                    for (l, r) in env.iter().rev() {
                        if l == a || r == b {
                            return l == a && r == b;
                        }
                    }
                    a == b
                }
                _ => x == y,
            }
        }
        go(self, other, &mut Vec::new())
    }
}

/// A pair of finite formula multisets.
///
/// Occurrences are stored in order so rule applications can address them by
/// index, but equality is multiset equality.
#[derive(Clone, Debug, Default, Eq)]
pub struct Sequent {
    pub ant: Vec<Formula>,
    pub suc: Vec<Formula>,
}

impl PartialEq for Sequent {
    fn eq(&self, other: &Self) -> bool {
        multiset_eq(&self.ant, &other.ant) && multiset_eq(&self.suc, &other.suc)
    }
}

impl std::hash::Hash for Sequent {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.canonical().hash(h);
    }
}

pub fn multiset_eq(a: &[Formula], b: &[Formula]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut x: Vec<&Formula> = a.iter().collect();
    let mut y: Vec<&Formula> = b.iter().collect();
    x.sort();
    y.sort();
    x == y
}

impl Sequent {
    pub fn new(ant: Vec<Formula>, suc: Vec<Formula>) -> Sequent {
        Sequent { ant, suc }
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.ant.iter().chain(self.suc.iter())
    }

    /// Order-insensitive key, usable for hashing multisets.
    pub fn canonical(&self) -> (Vec<Formula>, Vec<Formula>) {
        let mut a = self.ant.clone();
        let mut s = self.suc.clone();
        a.sort();
        s.sort();
        (a, s)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        self.formulas().flat_map(|f| f.free_vars()).collect()
    }

    pub fn bound_vars(&self) -> BTreeSet<String> {
        self.formulas().flat_map(|f| f.bound_vars()).collect()
    }

    pub fn ter(&self) -> BTreeSet<Term> {
        ter_of(self.formulas())
    }

    pub fn rel(&self) -> BTreeSet<Pred> {
        self.formulas().flat_map(|f| f.rel()).collect()
    }

    pub fn lang(&self) -> Language {
        lang_of(self.formulas())
    }

    pub fn subst_term(&self, u: &Term, t: &Term) -> Result<Sequent, SubstError> {
        Ok(Sequent {
            ant: self.ant.iter().map(|f| f.subst_term(u, t)).collect::<Result<_, _>>()?,
            suc: self.suc.iter().map(|f| f.subst_term(u, t)).collect::<Result<_, _>>()?,
        })
    }

    pub fn subst_map(&self, map: &BTreeMap<Term, Term>) -> Result<Sequent, SubstError> {
        Ok(Sequent {
            ant: self.ant.iter().map(|f| f.subst_map(map)).collect::<Result<_, _>>()?,
            suc: self.suc.iter().map(|f| f.subst_map(map)).collect::<Result<_, _>>()?,
        })
    }
}

pub fn ter_of<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> BTreeSet<Term> {
    fs.into_iter().flat_map(|f| f.ter()).collect()
}

pub fn lang_of<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> Language {
    let mut out = Language::default();
    for f in fs {
        out.terms.extend(f.ter());
        out.preds.extend(f.rel());
    }
    out
}

/// `ℒ(A)`: terms plus non-logical predicates. Identity never belongs to it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Language {
    pub terms: BTreeSet<Term>,
    pub preds: BTreeSet<Pred>,
}

impl Language {
    pub fn is_subset(&self, other: &Language) -> bool {
        self.terms.is_subset(&other.terms) && self.preds.is_subset(&other.preds)
    }

    pub fn intersection(&self, other: &Language) -> Language {
        Language {
            terms: self.terms.intersection(&other.terms).cloned().collect(),
            preds: self.preds.intersection(&other.preds).cloned().collect(),
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        let preds: Vec<String> = self.preds.iter().map(|p| format!("{}/{}", p.name, p.arity)).collect();
        write!(f, "terms {{{}}} preds {{{}}}", terms.join(", "), preds.join(", "))
    }
}

#[cfg(test)]
mod tests;
