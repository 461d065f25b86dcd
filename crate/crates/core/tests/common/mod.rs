//! Shared test support: seeded corpora and an independent interpolant
//! calculation for derivations without geometric rules.

#![allow(dead_code)]

use std::collections::BTreeSet;

use singular_interp::gen::{GenConfig, Generator};
use singular_interp::geometric::TheorySpec;
use singular_interp::interpolate::{Half, Partition};
use singular_interp::kernel::{Derivation, Rule, Side};
use singular_interp::syntax::{Formula, Term};

pub fn corpus(theory: &TheorySpec, seed: u64, n: usize) -> Vec<Derivation> {
    let mut g = Generator::new(seed, theory, GenConfig::for_theory(theory));
    (0..n).map(|_| g.derivation()).collect()
}

/// Interpolant by the propositional and quantifier clauses only, tracking
/// sides occurrence by occurrence. Returns `None` on geometric or theory
/// leaves.
pub fn oracle(d: &Derivation, p: &Partition) -> Option<Formula> {
    let c = &d.conclusion;
    let side_of = |o: &singular_interp::kernel::Occ| match o.side {
        Side::Left => p.ant[o.index],
        Side::Right => p.suc[o.index],
    };
    match &d.rule {
        Rule::Init => {
            let a = c.ant[d.principal[0].index].clone();
            Some(match (side_of(&d.principal[0]), side_of(&d.principal[1])) {
                (Half::One, Half::One) => Formula::Bot,
                (Half::Two, Half::Two) => Formula::Top,
                (Half::One, Half::Two) => a,
                (Half::Two, Half::One) => Formula::imp(a, Formula::Bot),
            })
        }
        Rule::InitBot | Rule::InitTop => Some(match side_of(&d.principal[0]) {
            Half::One => Formula::Bot,
            Half::Two => Formula::Top,
        }),
        Rule::Geo(..) | Rule::Axiom(_) => None,
        rule => {
            let o = d.principal[0];
            let h = side_of(&o);
            let principal = match o.side {
                Side::Left => &c.ant[o.index],
                Side::Right => &c.suc[o.index],
            };
            let mut parts = Vec::new();
            for (k, prem) in d.premises.iter().enumerate() {
                let (left, right, keep) = added(rule, principal, k)?;
                let ant = inherit(&c.ant, &p.ant, (o.side == Side::Left && !keep).then_some(o.index), &left, h, &prem.conclusion.ant);
                let suc = inherit(&c.suc, &p.suc, (o.side == Side::Right && !keep).then_some(o.index), &right, h, &prem.conclusion.suc);
                parts.push(oracle(prem, &Partition::new(ant, suc))?);
            }
            let joined = match parts.len() {
                1 => parts.pop()?,
                _ => {
                    let b = parts.pop()?;
                    let a = parts.pop()?;
                    if h == Half::One {
                        Formula::or(a, b)
                    } else {
                        Formula::and(a, b)
                    }
                }
            };
            if matches!(rule, Rule::LForall(_) | Rule::RExists(_)) {
                Some(generalise(joined, d, p, h))
            } else {
                Some(joined)
            }
        }
    }
}

/// Side formulas a logical rule adds to premise `k`, and whether the
/// principal formula stays.
fn added(rule: &Rule, a: &Formula, k: usize) -> Option<(Vec<Formula>, Vec<Formula>, bool)> {
    let inst = |x: &String, b: &Formula, t: Term| b.subst_vars(std::slice::from_ref(x), &[t]).ok();
    Some(match (rule, a, k) {
        (Rule::LAnd, Formula::And(x, y), _) => (vec![(**x).clone(), (**y).clone()], vec![], false),
        (Rule::ROr, Formula::Or(x, y), _) => (vec![], vec![(**x).clone(), (**y).clone()], false),
        (Rule::RImp, Formula::Imp(x, y), _) => (vec![(**x).clone()], vec![(**y).clone()], false),
        (Rule::RAnd, Formula::And(x, y), k) => (vec![], vec![if k == 0 { (**x).clone() } else { (**y).clone() }], false),
        (Rule::LOr, Formula::Or(x, y), k) => (vec![if k == 0 { (**x).clone() } else { (**y).clone() }], vec![], false),
        (Rule::LImp, Formula::Imp(x, _), 0) => (vec![], vec![(**x).clone()], false),
        (Rule::LImp, Formula::Imp(_, y), _) => (vec![(**y).clone()], vec![], false),
        (Rule::LForall(t), Formula::Forall(x, b), _) => (vec![inst(x, b, t.clone())?], vec![], true),
        (Rule::RExists(t), Formula::Exists(x, b), _) => (vec![], vec![inst(x, b, t.clone())?], true),
        (Rule::RForall(y), Formula::Forall(x, b), _) => (vec![], vec![inst(x, b, Term::var(y.clone()))?], false),
        (Rule::LExists(y), Formula::Exists(x, b), _) => (vec![inst(x, b, Term::var(y.clone()))?], vec![], false),
        _ => return None,
    })
}

/// Sides for the premise formulas `prem`: each takes the side of the first
/// unused equal formula among the conclusion's (minus `dropped`) followed
/// by the added ones.
fn inherit(
    concl: &[Formula],
    halves: &[Half],
    dropped: Option<usize>,
    added: &[Formula],
    h: Half,
    prem: &[Formula],
) -> Vec<Half> {
    let mut avail: Vec<(&Formula, Half, bool)> = concl
        .iter()
        .zip(halves)
        .enumerate()
        .filter(|(i, _)| Some(*i) != dropped)
        .map(|(_, (f, h))| (f, *h, true))
        .collect();
    avail.extend(added.iter().map(|f| (f, h, true)));
    prem.iter()
        .map(|f| {
            let slot = avail.iter_mut().find(|(g, _, free)| *free && *g == f).expect("premise formula accounted for");
            slot.2 = false;
            slot.1
        })
        .collect()
}

/// Binds the terms of `c` that are not common to both sides of the
/// conclusion of `d`, universally for side 1 and existentially for side 2.
fn generalise(c: Formula, d: &Derivation, p: &Partition, h: Half) -> Formula {
    let split = p.split(&d.conclusion);
    let common: BTreeSet<Term> = split.terms1().intersection(&split.terms2()).cloned().collect();
    let bad: Vec<Term> = c.ter().into_iter().filter(|t| !common.contains(t)).collect();
    let mut names: BTreeSet<String> = d.var_names();
    names.extend(c.free_vars());
    names.extend(c.bound_vars());
    let mut zs = Vec::new();
    let mut n = 0;
    for _ in &bad {
        while names.contains(&format!("o{n}")) {
            n += 1;
        }
        zs.push(format!("o{n}"));
        n += 1;
    }
    let mut body = c;
    for (t, z) in bad.iter().zip(&zs) {
        body = body.subst_term(t, &Term::var(z.clone())).expect("fresh name");
    }
    for z in zs.iter().rev() {
        body = if h == Half::One { Formula::forall(z.clone(), body) } else { Formula::exists(z.clone(), body) };
    }
    body
}
