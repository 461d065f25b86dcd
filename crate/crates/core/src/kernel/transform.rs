use std::collections::{BTreeMap, BTreeSet};

use crate::fresh::Fresh;
use crate::syntax::{Formula, Sequent, SubstError, Term};

use super::{build, side_mut, Derivation, KernelError, Rule, Side};

/// Applies a simultaneous term substitution to every sequent and every piece
/// of rule data in the tree.
pub fn map_terms(d: &Derivation, map: &BTreeMap<Term, Term>) -> Result<Derivation, SubstError> {
    let term = |t: &Term| map.get(t).cloned().unwrap_or_else(|| t.clone());
    let var = |y: &String| match map.get(&Term::Var(y.clone())) {
        Some(Term::Var(z)) => Ok(z.clone()),
        Some(Term::Const(_)) => Err(SubstError::Capture(y.clone())),
        None => Ok(y.clone()),
    };
    let rule = match &d.rule {
        Rule::LForall(t) => Rule::LForall(term(t)),
        Rule::RExists(t) => Rule::RExists(term(t)),
        Rule::RForall(y) => Rule::RForall(var(y)?),
        Rule::LExists(y) => Rule::LExists(var(y)?),
        Rule::Geo(id, inst) => {
            let mut inst = inst.clone();
            for t in inst.terms.values_mut() {
                *t = term(t);
            }
            inst.eigens = inst.eigens.iter().map(var).collect::<Result<_, _>>()?;
            if let Some((s, t)) = &inst.replace {
                inst.replace = Some((s.subst_map(map)?, t.subst_map(map)?));
            }
            Rule::Geo(id.clone(), inst)
        }
        r => r.clone(),
    };
    Ok(Derivation {
        conclusion: d.conclusion.subst_map(map)?,
        rule,
        principal: d.principal.clone(),
        premises: d.premises.iter().map(|p| map_terms(p, map)).collect::<Result<_, _>>()?,
    })
}

fn fresh_name(fresh: &mut Fresh, used: &BTreeSet<String>) -> String {
    loop {
        let v = fresh.var();
        if !used.contains(&v) {
            return v;
        }
    }
}

/// Renames every eigenvariable that lies in `avoid` to a fresh name,
/// substituting in the subtree the eigenvariable governs.
pub fn rename_eigens(d: &Derivation, avoid: &BTreeSet<String>, fresh: &mut Fresh) -> Derivation {
    if !d.eigens().iter().any(|y| avoid.contains(y)) {
        return d.clone();
    }
    let mut used = d.var_names();
    used.extend(avoid.iter().cloned());
    go(d, avoid, &mut used, fresh)
}

fn go(d: &Derivation, avoid: &BTreeSet<String>, used: &mut BTreeSet<String>, fresh: &mut Fresh) -> Derivation {
    let clashing: Vec<String> = d.rule.eigens().into_iter().filter(|y| avoid.contains(y)).collect();
    let mut node = d.clone();
    if !clashing.is_empty() {
        let mut map = BTreeMap::new();
        for y in clashing {
            let z = fresh_name(fresh, used);
            used.insert(z.clone());
            map.insert(Term::Var(y), Term::Var(z));
        }
        // The eigenvariables are not free in this node's conclusion, so only
        // the rule data and the premises change.
        let renamed = map_terms(&node, &map).expect("fresh variables cannot be captured");
        node.rule = renamed.rule;
        node.premises = renamed.premises;
    }
    node.premises = node.premises.iter().map(|p| go(p, avoid, used, fresh)).collect();
    node
}

/// Renames the eigenvariables of `d2` that occur anywhere in `d1`, so the
/// two can sit side by side in one pure-variable derivation.
pub fn separate(d1: Derivation, d2: Derivation, fresh: &mut Fresh) -> (Derivation, Derivation) {
    let names = d1.var_names();
    let d2 = rename_eigens(&d2, &names, fresh);
    (d1, d2)
}

/// Height-preserving weakening: adds `a` to `side` of every sequent.
pub fn weaken(d: &Derivation, a: &Formula, side: Side, fresh: &mut Fresh) -> Derivation {
    let mut avoid = a.free_vars();
    avoid.extend(a.bound_vars());
    let mut out = rename_eigens(d, &avoid, fresh);
    fn add(d: &mut Derivation, a: &Formula, side: Side) {
        side_mut(&mut d.conclusion, side).push(a.clone());
        for p in &mut d.premises {
            add(p, a, side);
        }
    }
    add(&mut out, a, side);
    out
}

/// Weakens with several formulas on one side, in order.
pub fn weaken_all(d: &Derivation, fs: &[Formula], side: Side, fresh: &mut Fresh) -> Derivation {
    fs.iter().fold(d.clone(), |acc, f| weaken(&acc, f, side, fresh))
}

/// Replaces the term `u` by `t` throughout a derivation, preserving height.
/// `u` first becomes a fresh variable `z`, then `z` becomes `t`, after
/// eigenvariables equal to `u` or `t` have been renamed away.
pub fn subst_derivation(d: &Derivation, u: &Term, t: &Term, fresh: &mut Fresh) -> Result<Derivation, KernelError> {
    if u == t || !d.mentions(u) {
        return Ok(d.clone());
    }
    if let Term::Var(v) = t {
        if d.bound_vars_anywhere().contains(v) {
            return Err(SubstError::Capture(v.clone()).into());
        }
    }
    let avoid: BTreeSet<String> = [u, t].iter().filter_map(|x| x.as_var().map(String::from)).collect();
    let d1 = rename_eigens(d, &avoid, fresh);
    let mut used = d1.var_names();
    used.extend(avoid);
    let z = Term::Var(fresh_name(fresh, &used));
    let d2 = map_terms(&d1, &BTreeMap::from([(u.clone(), z.clone())]))?;
    Ok(map_terms(&d2, &BTreeMap::from([(z, t.clone())]))?)
}

/// A derivation of `A, Γ ⇒ Δ, A` with atomic leaves, by recursion on `A`.
pub fn axiom_expansion(a: &Formula, g: &[Formula], d: &[Formula], fresh: &mut Fresh) -> Derivation {
    let mut used = crate::fresh::all_vars(g.iter().chain(d).chain(std::iter::once(a)));
    expand(a, g.to_vec(), d.to_vec(), &mut used, fresh).expect("expansion steps are well-formed")
}

fn cons(f: &Formula, rest: &[Formula]) -> Vec<Formula> {
    let mut v = vec![f.clone()];
    v.extend(rest.iter().cloned());
    v
}

fn snoc(rest: &[Formula], f: &Formula) -> Vec<Formula> {
    let mut v = rest.to_vec();
    v.push(f.clone());
    v
}

fn expand(
    a: &Formula,
    g: Vec<Formula>,
    d: Vec<Formula>,
    used: &mut BTreeSet<String>,
    fresh: &mut Fresh,
) -> Result<Derivation, KernelError> {
    let seq = Sequent::new(cons(a, &g), snoc(&d, a));
    match a {
        Formula::Atom(..) => build::init_on(&seq, a),
        Formula::Bot | Formula::Top => Ok(build::leaf(&seq).expect("bot or top leaf")),
        Formula::And(x, y) => {
            let p1 = build::l_and(expand(x, cons(y, &g), d.clone(), used, fresh)?, x, y)?;
            let p2 = build::l_and(expand(y, cons(x, &g), d, used, fresh)?, x, y)?;
            build::r_and(p1, p2, x, y, fresh)
        }
        Formula::Or(x, y) => {
            let q1 = expand(x, g.clone(), snoc(&d, y), used, fresh)?;
            let q2 = expand(y, g, snoc(&d, x), used, fresh)?;
            build::r_or(build::l_or(q1, q2, x, y, fresh)?, x, y)
        }
        Formula::Imp(x, y) => {
            let l1 = expand(x, g.clone(), snoc(&d, y), used, fresh)?;
            let l2 = expand(y, cons(x, &g), d, used, fresh)?;
            build::r_imp(build::l_imp(l1, l2, x, y, fresh)?, x, y)
        }
        Formula::Forall(v, body) => {
            let z = fresh_name(fresh, used);
            used.insert(z.clone());
            let inst = body.subst_vars(std::slice::from_ref(v), &[Term::var(z.clone())])?;
            let e = expand(&inst, cons(a, &g), d, used, fresh)?;
            build::r_forall(build::l_forall(e, v, body, &Term::var(z.clone()))?, v, body, &z)
        }
        Formula::Exists(v, body) => {
            let z = fresh_name(fresh, used);
            used.insert(z.clone());
            let inst = body.subst_vars(std::slice::from_ref(v), &[Term::var(z.clone())])?;
            let e = expand(&inst, g, snoc(&d, a), used, fresh)?;
            build::l_exists(build::r_exists(e, v, body, &Term::var(z.clone()))?, v, body, &z)
        }
    }
}
