//! Root-last construction: each builder takes derivations of the premises
//! and returns a derivation of the conclusion, appending the new principal
//! formula at the end of its side.

use crate::fresh::Fresh;
use crate::geometric::{GeometricRule, Instance};
use crate::syntax::{Formula, Sequent, Term};

use super::{separate, side_mut, Derivation, KernelError, Occ, Rule, Side};

fn build_err(msg: String) -> KernelError {
    KernelError::Build(msg)
}

fn remove_one(s: &mut Sequent, side: Side, f: &Formula) -> Result<(), KernelError> {
    let v = side_mut(s, side);
    match v.iter().position(|g| g == f) {
        Some(i) => {
            v.remove(i);
            Ok(())
        }
        None => Err(build_err(format!("`{f}` not found on the {side:?} of the premise"))),
    }
}

fn push(s: &mut Sequent, side: Side, f: Formula) -> Occ {
    let v = side_mut(s, side);
    v.push(f);
    Occ { side, index: v.len() - 1 }
}

/// An initial sequent for `s`, if one applies: an atom on both sides
/// (first in antecedent order), then `⊥` left, then `⊤` right.
pub fn leaf(s: &Sequent) -> Option<Derivation> {
    for (i, a) in s.ant.iter().enumerate() {
        if a.is_atom() {
            if let Some(j) = s.suc.iter().position(|b| b == a) {
                return Some(Derivation::new(s.clone(), Rule::Init, vec![Occ::left(i), Occ::right(j)], vec![]));
            }
        }
    }
    if let Some(i) = s.ant.iter().position(|a| *a == Formula::Bot) {
        return Some(Derivation::new(s.clone(), Rule::InitBot, vec![Occ::left(i)], vec![]));
    }
    if let Some(j) = s.suc.iter().position(|a| *a == Formula::Top) {
        return Some(Derivation::new(s.clone(), Rule::InitTop, vec![Occ::right(j)], vec![]));
    }
    None
}

/// A leaf whose principal pair is exactly the atom `p`.
pub fn init_on(s: &Sequent, p: &Formula) -> Result<Derivation, KernelError> {
    let i = s.ant.iter().position(|a| a == p);
    let j = s.suc.iter().position(|a| a == p);
    match (i, j, p.is_atom()) {
        (Some(i), Some(j), true) => Ok(Derivation::new(s.clone(), Rule::Init, vec![Occ::left(i), Occ::right(j)], vec![])),
        _ => Err(build_err(format!("`{s}` is not an initial sequent on `{p}`"))),
    }
}

fn unary(
    d: Derivation,
    rule: Rule,
    remove: &[(Side, &Formula)],
    side: Side,
    principal: Formula,
) -> Result<Derivation, KernelError> {
    let mut c = d.conclusion.clone();
    for (s, f) in remove {
        remove_one(&mut c, *s, f)?;
    }
    let o = push(&mut c, side, principal);
    Ok(Derivation::new(c, rule, vec![o], vec![d]))
}

pub fn l_and(d: Derivation, a: &Formula, b: &Formula) -> Result<Derivation, KernelError> {
    unary(d, Rule::LAnd, &[(Side::Left, a), (Side::Left, b)], Side::Left, Formula::and(a.clone(), b.clone()))
}

pub fn r_or(d: Derivation, a: &Formula, b: &Formula) -> Result<Derivation, KernelError> {
    unary(d, Rule::ROr, &[(Side::Right, a), (Side::Right, b)], Side::Right, Formula::or(a.clone(), b.clone()))
}

pub fn r_imp(d: Derivation, a: &Formula, b: &Formula) -> Result<Derivation, KernelError> {
    unary(d, Rule::RImp, &[(Side::Left, a), (Side::Right, b)], Side::Right, Formula::imp(a.clone(), b.clone()))
}

fn inst(x: &str, body: &Formula, t: &Term) -> Result<Formula, KernelError> {
    Ok(body.subst_vars(&[x.to_string()], std::slice::from_ref(t))?)
}

/// L∀ keeps `∀x A` in the premise: `A[t/x], ∀x A, Γ ⇒ Δ` gives `∀x A, Γ ⇒ Δ`.
pub fn l_forall(d: Derivation, x: &str, body: &Formula, t: &Term) -> Result<Derivation, KernelError> {
    let q = Formula::forall(x, body.clone());
    let a = inst(x, body, t)?;
    let mut c = d.conclusion.clone();
    remove_one(&mut c, Side::Left, &a)?;
    let i = c.ant.iter().position(|f| *f == q).ok_or_else(|| build_err(format!("L∀ premise lacks `{q}`")))?;
    Ok(Derivation::new(c, Rule::LForall(t.clone()), vec![Occ::left(i)], vec![d]))
}

pub fn r_exists(d: Derivation, x: &str, body: &Formula, t: &Term) -> Result<Derivation, KernelError> {
    let q = Formula::exists(x, body.clone());
    let a = inst(x, body, t)?;
    let mut c = d.conclusion.clone();
    remove_one(&mut c, Side::Right, &a)?;
    let j = c.suc.iter().position(|f| *f == q).ok_or_else(|| build_err(format!("R∃ premise lacks `{q}`")))?;
    Ok(Derivation::new(c, Rule::RExists(t.clone()), vec![Occ::right(j)], vec![d]))
}

fn eigen_ok(c: &Sequent, y: &str) -> Result<(), KernelError> {
    if c.free_vars().contains(y) {
        Err(build_err(format!("eigenvariable `{y}` is free in `{c}`")))
    } else {
        Ok(())
    }
}

pub fn r_forall(d: Derivation, x: &str, body: &Formula, y: &str) -> Result<Derivation, KernelError> {
    let a = inst(x, body, &Term::var(y))?;
    let out = unary(d, Rule::RForall(y.to_string()), &[(Side::Right, &a)], Side::Right, Formula::forall(x, body.clone()))?;
    eigen_ok(&out.conclusion, y)?;
    Ok(out)
}

pub fn l_exists(d: Derivation, x: &str, body: &Formula, y: &str) -> Result<Derivation, KernelError> {
    let a = inst(x, body, &Term::var(y))?;
    let out = unary(d, Rule::LExists(y.to_string()), &[(Side::Left, &a)], Side::Left, Formula::exists(x, body.clone()))?;
    eigen_ok(&out.conclusion, y)?;
    Ok(out)
}

fn binary(
    d1: Derivation,
    d2: Derivation,
    rule: Rule,
    rm1: (Side, &Formula),
    rm2: (Side, &Formula),
    (side, principal): (Side, Formula),
    fresh: &mut Fresh,
) -> Result<Derivation, KernelError> {
    let (d1, d2) = separate(d1, d2, fresh);
    let mut c1 = d1.conclusion.clone();
    remove_one(&mut c1, rm1.0, rm1.1)?;
    let mut c2 = d2.conclusion.clone();
    remove_one(&mut c2, rm2.0, rm2.1)?;
    if c1 != c2 {
        return Err(build_err(format!("premise contexts differ: `{c1}` and `{c2}`")));
    }
    let o = push(&mut c1, side, principal);
    Ok(Derivation::new(c1, rule, vec![o], vec![d1, d2]))
}

pub fn r_and(d1: Derivation, d2: Derivation, a: &Formula, b: &Formula, fresh: &mut Fresh) -> Result<Derivation, KernelError> {
    let p = Formula::and(a.clone(), b.clone());
    binary(d1, d2, Rule::RAnd, (Side::Right, a), (Side::Right, b), (Side::Right, p), fresh)
}

pub fn l_or(d1: Derivation, d2: Derivation, a: &Formula, b: &Formula, fresh: &mut Fresh) -> Result<Derivation, KernelError> {
    let p = Formula::or(a.clone(), b.clone());
    binary(d1, d2, Rule::LOr, (Side::Left, a), (Side::Left, b), (Side::Left, p), fresh)
}

/// `d1: Γ ⇒ Δ, A` and `d2: B, Γ ⇒ Δ` give `A → B, Γ ⇒ Δ`.
pub fn l_imp(d1: Derivation, d2: Derivation, a: &Formula, b: &Formula, fresh: &mut Fresh) -> Result<Derivation, KernelError> {
    let p = Formula::imp(a.clone(), b.clone());
    binary(d1, d2, Rule::LImp, (Side::Right, a), (Side::Left, b), (Side::Left, p), fresh)
}

/// Applies a geometric rule below one derivation per premise block. The
/// eigenvariables in `inst` must already occur in the premises as intended.
pub fn geo(
    premises: Vec<Derivation>,
    rule: &GeometricRule,
    inst: Instance,
    fresh: &mut Fresh,
) -> Result<Derivation, KernelError> {
    let blocks = rule.premise_atoms(&inst)?;
    if blocks.len() != premises.len() {
        return Err(build_err(format!("rule `{}` has {} premises, got {}", rule.id, blocks.len(), premises.len())));
    }
    // Keep the eigenvariables of the instance fixed while separating the
    // subderivations from each other.
    let mut done: Vec<Derivation> = Vec::new();
    for p in premises {
        let mut p = p;
        for q in &done {
            let (_, p2) = separate(q.clone(), p, fresh);
            p = p2;
        }
        done.push(p);
    }
    let mut concl: Option<Sequent> = None;
    for (d, q) in done.iter().zip(&blocks) {
        let mut c = d.conclusion.clone();
        for a in q {
            remove_one(&mut c, Side::Left, a)?;
        }
        match &concl {
            None => concl = Some(c),
            Some(c0) if *c0 == c => {}
            Some(c0) => return Err(build_err(format!("premise contexts differ: `{c0}` and `{c}`"))),
        }
    }
    let concl = concl.ok_or_else(|| build_err("geometric rule without premises".into()))?;
    for y in &inst.eigens {
        eigen_ok(&concl, y)?;
    }
    let mut principal: Vec<Occ> = Vec::new();
    for a in rule.principal_atoms(&inst)? {
        let unused = concl.ant.iter().enumerate().position(|(i, f)| *f == a && !principal.contains(&Occ::left(i)));
        let any = concl.ant.iter().position(|f| *f == a);
        match unused.or(any) {
            Some(i) => principal.push(Occ::left(i)),
            None => return Err(build_err(format!("principal atom `{a}` missing from `{concl}`"))),
        }
    }
    Ok(Derivation::new(concl, Rule::Geo(rule.id.clone(), inst), principal, done))
}
