//! Height-preserving inversion and contraction.

use std::collections::BTreeSet;

use crate::fresh::Fresh;
use crate::syntax::{Formula, Sequent, Term};

use super::{build, rename_eigens, side_mut, side_ref, subst_derivation, Derivation, KernelError, Occ, Rule, Side};

/// Which premise of a two-premise rule an inversion follows, or the
/// variable for a quantifier inversion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Part {
    Only,
    First,
    Second,
    Var(String),
}

fn components(a: &Formula, side: Side, part: &Part) -> Result<(Vec<Formula>, Vec<Formula>), KernelError> {
    let c = |x: &Formula| x.clone();
    Ok(match (a, side, part) {
        (Formula::And(x, y), Side::Left, Part::Only) => (vec![c(x), c(y)], vec![]),
        (Formula::Or(x, y), Side::Right, Part::Only) => (vec![], vec![c(x), c(y)]),
        (Formula::Imp(x, y), Side::Right, Part::Only) => (vec![c(x)], vec![c(y)]),
        (Formula::Or(x, _), Side::Left, Part::First) => (vec![c(x)], vec![]),
        (Formula::Or(_, y), Side::Left, Part::Second) => (vec![c(y)], vec![]),
        (Formula::And(x, _), Side::Right, Part::First) => (vec![], vec![c(x)]),
        (Formula::And(_, y), Side::Right, Part::Second) => (vec![], vec![c(y)]),
        (Formula::Imp(x, _), Side::Left, Part::First) => (vec![], vec![c(x)]),
        (Formula::Imp(_, y), Side::Left, Part::Second) => (vec![c(y)], vec![]),
        (Formula::Forall(x, b), Side::Right, Part::Var(v)) => (vec![], vec![b.subst_vars(std::slice::from_ref(x), &[Term::var(v.clone())])?]),
        (Formula::Exists(x, b), Side::Left, Part::Var(v)) => (vec![b.subst_vars(std::slice::from_ref(x), &[Term::var(v.clone())])?], vec![]),
        _ => return Err(KernelError::Build(format!("no inversion of `{a}` on the {side:?} with {part:?}"))),
    })
}

fn decomposes(rule: &Rule, a: &Formula, side: Side) -> bool {
    matches!(
        (rule, a, side),
        (Rule::LAnd, Formula::And(..), Side::Left)
            | (Rule::RAnd, Formula::And(..), Side::Right)
            | (Rule::LOr, Formula::Or(..), Side::Left)
            | (Rule::ROr, Formula::Or(..), Side::Right)
            | (Rule::LImp, Formula::Imp(..), Side::Left)
            | (Rule::RImp, Formula::Imp(..), Side::Right)
            | (Rule::RForall(_), Formula::Forall(..), Side::Right)
            | (Rule::LExists(_), Formula::Exists(..), Side::Left)
    )
}

/// Removes the occurrence at `k` and shifts principal indices past it.
/// Principal occurrences at `k` itself are redirected to `to`.
fn drop_occ(d: &Derivation, side: Side, k: usize, to: Option<usize>) -> (Sequent, Vec<Occ>) {
    let mut c = d.conclusion.clone();
    side_mut(&mut c, side).remove(k);
    let principal = d
        .principal
        .iter()
        .map(|o| {
            if o.side != side {
                return *o;
            }
            let i = if o.index == k { to.expect("principal occurrence removed") } else { o.index };
            Occ { side, index: if i > k { i - 1 } else { i } }
        })
        .collect();
    (c, principal)
}

fn copies(s: &Sequent, a: &Formula, side: Side) -> Vec<usize> {
    side_ref(s, side).iter().enumerate().filter(|(_, f)| *f == a).map(|(i, _)| i).collect()
}

fn non_principal(d: &Derivation, side: Side, idx: &[usize]) -> Vec<usize> {
    idx.iter().copied().filter(|i| !d.principal.contains(&Occ { side, index: *i })).collect()
}

/// Height-preserving inversion: from a derivation of a sequent containing
/// `a` on `side`, a derivation of the sequent with one `a` replaced by the
/// components selected by `part`.
pub fn invert(d: &Derivation, a: &Formula, side: Side, part: Part, fresh: &mut Fresh) -> Result<Derivation, KernelError> {
    components(a, side, &part)?;
    if copies(&d.conclusion, a, side).is_empty() {
        return Err(KernelError::MissingOccurrence(a.to_string()));
    }
    let d = match &part {
        Part::Var(v) => rename_eigens(d, &BTreeSet::from([v.clone()]), fresh),
        _ => d.clone(),
    };
    inv(&d, a, side, &part, fresh)
}

fn inv(d: &Derivation, a: &Formula, side: Side, part: &Part, fresh: &mut Fresh) -> Result<Derivation, KernelError> {
    let idx = copies(&d.conclusion, a, side);
    let free = non_principal(d, side, &idx);
    if free.is_empty() && decomposes(&d.rule, a, side) {
        let prem = match (&d.rule, part) {
            (Rule::LOr | Rule::RAnd | Rule::LImp, Part::Second) => &d.premises[1],
            _ => &d.premises[0],
        };
        return match (&d.rule, part) {
            (Rule::RForall(y) | Rule::LExists(y), Part::Var(v)) if y != v => {
                subst_derivation(prem, &Term::var(y.clone()), &Term::var(v.clone()), fresh)
            }
            _ => Ok(prem.clone()),
        };
    }
    let k = *free.last().ok_or_else(|| KernelError::Build(format!("`{a}` is only principal here")))?;
    let (mut c, principal) = drop_occ(d, side, k, None);
    let (l, r) = components(a, side, part)?;
    c.ant.extend(l);
    c.suc.extend(r);
    let premises = d.premises.iter().map(|p| inv(p, a, side, part, fresh)).collect::<Result<_, _>>()?;
    Ok(Derivation::new(c, d.rule.clone(), principal, premises))
}

/// Height-non-increasing contraction of two copies of `a` on `side`.
pub fn contract(d: &Derivation, a: &Formula, side: Side, fresh: &mut Fresh) -> Result<Derivation, KernelError> {
    if copies(&d.conclusion, a, side).len() < 2 {
        return Err(KernelError::MissingOccurrence(a.to_string()));
    }
    ctr(d, a, side, fresh)
}

fn ctr(d: &Derivation, a: &Formula, side: Side, fresh: &mut Fresh) -> Result<Derivation, KernelError> {
    let idx = copies(&d.conclusion, a, side);
    let free = non_principal(d, side, &idx);
    let keeps_principal = matches!(d.rule, Rule::LForall(_) | Rule::RExists(_) | Rule::Geo(..));
    if d.rule.is_leaf() {
        let k = *free.last().ok_or_else(|| KernelError::Build(format!("cannot contract principal `{a}` of a leaf")))?;
        let (c, principal) = drop_occ(d, side, k, None);
        return Ok(Derivation::new(c, d.rule.clone(), principal, vec![]));
    }
    if free.len() >= 2 || keeps_principal {
        // Both copies reach every premise.
        let (k, to) = match free.last() {
            Some(k) => (*k, None),
            None => (idx[1], Some(idx[0])),
        };
        let (c, principal) = drop_occ(d, side, k, to);
        let premises = d.premises.iter().map(|p| ctr(p, a, side, fresh)).collect::<Result<_, _>>()?;
        return Ok(Derivation::new(c, d.rule.clone(), principal, premises));
    }
    // One copy is principal for a rule that decomposes it.
    let p = &d.premises;
    match (&d.rule, a) {
        (Rule::LAnd, Formula::And(x, y)) => {
            let e = inv(&p[0], a, side, &Part::Only, fresh)?;
            let e = ctr(&ctr(&e, x, Side::Left, fresh)?, y, Side::Left, fresh)?;
            build::l_and(e, x, y)
        }
        (Rule::ROr, Formula::Or(x, y)) => {
            let e = inv(&p[0], a, side, &Part::Only, fresh)?;
            let e = ctr(&ctr(&e, x, Side::Right, fresh)?, y, Side::Right, fresh)?;
            build::r_or(e, x, y)
        }
        (Rule::RImp, Formula::Imp(x, y)) => {
            let e = inv(&p[0], a, side, &Part::Only, fresh)?;
            let e = ctr(&ctr(&e, x, Side::Left, fresh)?, y, Side::Right, fresh)?;
            build::r_imp(e, x, y)
        }
        (Rule::LOr, Formula::Or(x, y)) => {
            let e1 = ctr(&inv(&p[0], a, side, &Part::First, fresh)?, x, Side::Left, fresh)?;
            let e2 = ctr(&inv(&p[1], a, side, &Part::Second, fresh)?, y, Side::Left, fresh)?;
            build::l_or(e1, e2, x, y, fresh)
        }
        (Rule::RAnd, Formula::And(x, y)) => {
            let e1 = ctr(&inv(&p[0], a, side, &Part::First, fresh)?, x, Side::Right, fresh)?;
            let e2 = ctr(&inv(&p[1], a, side, &Part::Second, fresh)?, y, Side::Right, fresh)?;
            build::r_and(e1, e2, x, y, fresh)
        }
        (Rule::LImp, Formula::Imp(x, y)) => {
            let e1 = ctr(&inv(&p[0], a, side, &Part::First, fresh)?, x, Side::Right, fresh)?;
            let e2 = ctr(&inv(&p[1], a, side, &Part::Second, fresh)?, y, Side::Left, fresh)?;
            build::l_imp(e1, e2, x, y, fresh)
        }
        (Rule::RForall(v), Formula::Forall(x, body)) | (Rule::LExists(v), Formula::Exists(x, body)) => {
            let part = Part::Var(v.clone());
            let e = inv(&rename_eigens(&p[0], &BTreeSet::from([v.clone()]), fresh), a, side, &part, fresh)?;
            let inst = body.subst_vars(std::slice::from_ref(x), &[Term::var(v.clone())])?;
            let e = ctr(&e, &inst, side, fresh)?;
            if side == Side::Right {
                build::r_forall(e, x, body, v)
            } else {
                build::l_exists(e, x, body, v)
            }
        }
        _ => Err(KernelError::Build(format!("unexpected principal `{a}` for {:?}", d.rule))),
    }
}
