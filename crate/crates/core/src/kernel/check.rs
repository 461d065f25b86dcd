use std::collections::BTreeMap;
use std::fmt;

use crate::geometric::{replacement_related, InitialScheme, TheorySpec};
use crate::syntax::{Formula, Sequent, Term};

use super::{Derivation, Occ, Rule, Side};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Premise indices from the root to the offending node.
    pub path: Vec<usize>,
    pub reason: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        write!(f, "at [{}]: {}", path.join("."), self.reason)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn from_violations(violations: Vec<Violation>) -> CheckReport {
        CheckReport { ok: violations.is_empty(), violations }
    }
}

/// Checks every node's rule shape against `theory`, the eigenvariable
/// condition, and the pure-variable condition over the whole tree.
pub fn check(d: &Derivation, theory: &TheorySpec) -> CheckReport {
    let mut out = Vec::new();
    let mut path = Vec::new();
    check_node(d, theory, &mut path, &mut out);

    let mut owners: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, y) in d.eigens().into_iter().enumerate() {
        owners.entry(y).or_default().push(i);
    }
    for (y, uses) in owners {
        if uses.len() > 1 {
            out.push(Violation {
                path: Vec::new(),
                reason: format!("pure-variable: eigenvariable `{y}` used by {} rule instances", uses.len()),
            });
        }
    }
    let free = d.free_vars_anywhere();
    let clash: Vec<String> = d.bound_vars_anywhere().intersection(&free).cloned().collect();
    if !clash.is_empty() {
        out.push(Violation {
            path: Vec::new(),
            reason: format!("pure-variable: variables both bound and free: {}", clash.join(", ")),
        });
    }
    CheckReport::from_violations(out)
}

fn check_node(d: &Derivation, theory: &TheorySpec, path: &mut Vec<usize>, out: &mut Vec<Violation>) {
    match expected_premises(d, theory) {
        Err(reason) => out.push(Violation { path: path.clone(), reason }),
        Ok(expected) => {
            if expected.len() != d.premises.len() {
                out.push(Violation {
                    path: path.clone(),
                    reason: format!("expected {} premises, found {}", expected.len(), d.premises.len()),
                });
            } else {
                for (i, (want, got)) in expected.iter().zip(&d.premises).enumerate() {
                    if *want != got.conclusion {
                        out.push(Violation {
                            path: path.clone(),
                            reason: format!("premise {i} should be `{want}`, found `{}`", got.conclusion),
                        });
                    }
                }
            }
        }
    }
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        check_node(p, theory, path, out);
        path.pop();
    }
}

fn principal<'a>(d: &'a Derivation, want: &[Side]) -> Result<Vec<&'a Formula>, String> {
    if d.principal.len() != want.len() {
        return Err(format!("expected {} principal occurrences, found {}", want.len(), d.principal.len()));
    }
    d.principal
        .iter()
        .zip(want)
        .map(|(o, side)| {
            if o.side != *side {
                return Err(format!("principal occurrence {o:?} is on the wrong side"));
            }
            d.formula(*o).ok_or_else(|| format!("principal occurrence {o:?} out of range"))
        })
        .collect()
}

fn without(c: &Sequent, o: Occ) -> Sequent {
    let mut s = c.clone();
    super::side_mut(&mut s, o.side).remove(o.index);
    s
}

fn plus(mut s: Sequent, left: &[&Formula], right: &[&Formula]) -> Sequent {
    s.ant.extend(left.iter().map(|f| (*f).clone()));
    s.suc.extend(right.iter().map(|f| (*f).clone()));
    s
}

fn shape(what: &str, f: &Formula) -> String {
    format!("principal formula `{f}` is not {what}")
}

fn eigen_fresh(y: &str, c: &Sequent) -> Result<(), String> {
    if c.free_vars().contains(y) {
        Err(format!("eigenvariable: `{y}` occurs free in the conclusion"))
    } else {
        Ok(())
    }
}

fn instance(x: &str, body: &Formula, t: &Term) -> Result<Formula, String> {
    body.subst_vars(&[x.to_string()], std::slice::from_ref(t)).map_err(|e| e.to_string())
}

pub(crate) fn expected_premises(d: &Derivation, theory: &TheorySpec) -> Result<Vec<Sequent>, String> {
    use Side::{Left as L, Right as R};
    let c = &d.conclusion;
    let p0 = || d.principal[0];
    match &d.rule {
        Rule::Init => {
            let f = principal(d, &[L, R])?;
            if !f[0].is_atom() {
                return Err(format!("initial sequent on non-atomic `{}`", f[0]));
            }
            if f[0] != f[1] {
                return Err(format!("initial sequent pairs `{}` with `{}`", f[0], f[1]));
            }
            Ok(vec![])
        }
        Rule::InitTop => match principal(d, &[R])?[0] {
            Formula::Top => Ok(vec![]),
            f => Err(shape("top", f)),
        },
        Rule::InitBot => match principal(d, &[L])?[0] {
            Formula::Bot => Ok(vec![]),
            f => Err(shape("bot", f)),
        },
        Rule::Axiom(scheme) => {
            if !theory.has_initial(*scheme) {
                return Err(format!("theory `{}` has no initial sequent {}", theory.name, scheme.id()));
            }
            match scheme {
                InitialScheme::Reflexivity => match principal(d, &[R])?[0].as_identity() {
                    Some((s, t)) if s == t => Ok(vec![]),
                    _ => Err("S1 needs `s = s` on the right".into()),
                },
                InitialScheme::Replacement => {
                    let f = principal(d, &[L, L, R])?;
                    if d.principal[0] == d.principal[1] {
                        return Err("S2 needs two distinct antecedent occurrences".into());
                    }
                    match f[0].as_identity() {
                        Some((s, t)) if replacement_related(f[1], f[2], s, t) => Ok(vec![]),
                        _ => Err(format!("S2 does not relate `{}` and `{}` through `{}`", f[1], f[2], f[0])),
                    }
                }
            }
        }
        Rule::LAnd => match principal(d, &[L])?[0] {
            Formula::And(a, b) => Ok(vec![plus(without(c, p0()), &[a, b], &[])]),
            f => Err(shape("a conjunction", f)),
        },
        Rule::RAnd => match principal(d, &[R])?[0] {
            Formula::And(a, b) => Ok(vec![plus(without(c, p0()), &[], &[a]), plus(without(c, p0()), &[], &[b])]),
            f => Err(shape("a conjunction", f)),
        },
        Rule::LOr => match principal(d, &[L])?[0] {
            Formula::Or(a, b) => Ok(vec![plus(without(c, p0()), &[a], &[]), plus(without(c, p0()), &[b], &[])]),
            f => Err(shape("a disjunction", f)),
        },
        Rule::ROr => match principal(d, &[R])?[0] {
            Formula::Or(a, b) => Ok(vec![plus(without(c, p0()), &[], &[a, b])]),
            f => Err(shape("a disjunction", f)),
        },
        Rule::LImp => match principal(d, &[L])?[0] {
            Formula::Imp(a, b) => Ok(vec![plus(without(c, p0()), &[], &[a]), plus(without(c, p0()), &[b], &[])]),
            f => Err(shape("an implication", f)),
        },
        Rule::RImp => match principal(d, &[R])?[0] {
            Formula::Imp(a, b) => Ok(vec![plus(without(c, p0()), &[a], &[b])]),
            f => Err(shape("an implication", f)),
        },
        Rule::LForall(t) => match principal(d, &[L])?[0] {
            Formula::Forall(x, a) => Ok(vec![plus(c.clone(), &[&instance(x, a, t)?], &[])]),
            f => Err(shape("universal", f)),
        },
        Rule::RExists(t) => match principal(d, &[R])?[0] {
            Formula::Exists(x, a) => Ok(vec![plus(c.clone(), &[], &[&instance(x, a, t)?])]),
            f => Err(shape("existential", f)),
        },
        Rule::RForall(y) => match principal(d, &[R])?[0] {
            Formula::Forall(x, a) => {
                eigen_fresh(y, c)?;
                Ok(vec![plus(without(c, p0()), &[], &[&instance(x, a, &Term::var(y.clone()))?])])
            }
            f => Err(shape("universal", f)),
        },
        Rule::LExists(y) => match principal(d, &[L])?[0] {
            Formula::Exists(x, a) => {
                eigen_fresh(y, c)?;
                Ok(vec![plus(without(c, p0()), &[&instance(x, a, &Term::var(y.clone()))?], &[])])
            }
            f => Err(shape("existential", f)),
        },
        Rule::Geo(id, inst) => {
            let rule = theory.rule(id).ok_or_else(|| format!("theory `{}` has no rule `{id}`", theory.name))?;
            let atoms = rule.principal_atoms(inst).map_err(|e| e.to_string())?;
            let f = principal(d, &vec![L; atoms.len()])?;
            for (want, got) in atoms.iter().zip(&f) {
                if want != *got {
                    return Err(format!("rule `{id}` expects principal `{want}`, found `{got}`"));
                }
            }
            let mut seen = Vec::new();
            for y in &inst.eigens {
                if seen.contains(&y) {
                    return Err(format!("eigenvariable `{y}` repeated in one instance"));
                }
                seen.push(y);
                eigen_fresh(y, c)?;
            }
            let blocks = rule.premise_atoms(inst).map_err(|e| e.to_string())?;
            Ok(blocks.iter().map(|q| plus(c.clone(), &q.iter().collect::<Vec<_>>(), &[])).collect())
        }
    }
}
