//! The recursive extraction over a derivation tree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::fresh::Fresh;
use crate::geometric::{GeometricRule, Instance, TheorySpec};
use crate::kernel::{
    geo, init_on, l_and, l_exists, l_forall, l_imp, l_or, leaf, r_and, r_exists, r_forall, r_imp, r_or,
    subst_derivation, weaken, weaken_all, Derivation, Occ, Rule, Side,
};
use crate::syntax::{Formula, Sequent, Term};

use super::batch::{l_and_batch, l_or_batch, r_and_batch, r_or_batch};
use super::{Half, InterpConfig, InterpError, Mixed, Partition, Split};

/// Which construction a geometric-rule node is handled by, by the sides of
/// its principal atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeoCase {
    /// All principal atoms on side 1.
    AllFirst,
    /// All principal atoms on side 2.
    AllSecond,
    /// Split principals, no predicate among those on side 2.
    MixedNoRelSecond,
    /// Split principals, no predicate among those on side 1.
    MixedNoRelFirst,
    /// Split principals with predicates on both sides.
    Mixed,
    /// No principal atoms.
    NoPrincipal,
}

impl GeoCase {
    pub fn classify(pi1: &[Formula], pi2: &[Formula]) -> GeoCase {
        let no_rel = |fs: &[Formula]| fs.iter().all(|f| f.rel().is_empty());
        match (pi1.is_empty(), pi2.is_empty()) {
            (true, true) => GeoCase::NoPrincipal,
            (false, true) => GeoCase::AllFirst,
            (true, false) => GeoCase::AllSecond,
            _ if no_rel(pi2) => GeoCase::MixedNoRelSecond,
            _ if no_rel(pi1) => GeoCase::MixedNoRelFirst,
            _ => GeoCase::Mixed,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            GeoCase::AllFirst => "1",
            GeoCase::AllSecond => "2",
            GeoCase::MixedNoRelSecond => "3.1",
            GeoCase::MixedNoRelFirst => "3.2",
            GeoCase::Mixed => "3.3",
            GeoCase::NoPrincipal => "4",
        }
    }
}

impl fmt::Display for GeoCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "case {}", self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Form {
    Forall,
    Exists,
}

pub(crate) struct Piece {
    pub c: Formula,
    pub w1: Derivation,
    pub w2: Derivation,
}

pub(crate) struct Engine<'a> {
    theory: &'a TheorySpec,
    config: InterpConfig,
    fresh: Fresh,
    pub trace: Vec<(String, GeoCase)>,
}

fn invariant(msg: impl Into<String>) -> InterpError {
    InterpError::InvariantViolation(msg.into())
}

fn half(p: &Partition, o: Occ) -> Half {
    match o.side {
        Side::Left => p.ant[o.index],
        Side::Right => p.suc[o.index],
    }
}

/// Matches each premise occurrence with an equal entry of `pool`.
fn assign(prem: &[Formula], mut pool: Vec<(Formula, Half)>) -> Result<Vec<Half>, InterpError> {
    let mut out = Vec::with_capacity(prem.len());
    for f in prem {
        let i = pool.iter().position(|(g, _)| g == f).ok_or_else(|| invariant(format!("premise formula `{f}` unaccounted for")))?;
        out.push(pool.remove(i).1);
    }
    if let Some((f, _)) = pool.first() {
        return Err(invariant(format!("conclusion formula `{f}` missing from premise")));
    }
    Ok(out)
}

struct PremiseShape<'s> {
    drop: Option<Occ>,
    moved: &'s [Occ],
    moved_to: Half,
    added_ant: Vec<Formula>,
    added_suc: Vec<Formula>,
    added_half: Half,
}

fn premise_partition(concl: &Sequent, p: &Partition, prem: &Sequent, shape: PremiseShape) -> Result<Partition, InterpError> {
    let pool = |fs: &[Formula], hs: &[Half], side: Side, added: &[Formula]| -> Vec<(Formula, Half)> {
        let mut out: Vec<(Formula, Half)> = Vec::new();
        for (i, (f, h)) in fs.iter().zip(hs).enumerate() {
            let o = Occ { side, index: i };
            if shape.drop == Some(o) {
                continue;
            }
            let h = if shape.moved.contains(&o) { shape.moved_to } else { *h };
            out.push((f.clone(), h));
        }
        out.extend(added.iter().map(|f| (f.clone(), shape.added_half)));
        out
    };
    Ok(Partition {
        ant: assign(&prem.ant, pool(&concl.ant, &p.ant, Side::Left, &shape.added_ant))?,
        suc: assign(&prem.suc, pool(&concl.suc, &p.suc, Side::Right, &shape.added_suc))?,
    })
}

/// Components added to premise `k` of a logical rule, and whether the
/// principal formula stays in the premise.
fn components(rule: &Rule, a: &Formula, k: usize) -> Result<(Vec<Formula>, Vec<Formula>, bool), InterpError> {
    let c = |x: &Formula| x.clone();
    let inst = |x: &str, body: &Formula, t: &Term| -> Result<Formula, InterpError> {
        body.subst_vars(&[x.to_string()], std::slice::from_ref(t)).map_err(|e| invariant(e.to_string()))
    };
    Ok(match (rule, a, k) {
        (Rule::LAnd, Formula::And(x, y), 0) => (vec![c(x), c(y)], vec![], false),
        (Rule::ROr, Formula::Or(x, y), 0) => (vec![], vec![c(x), c(y)], false),
        (Rule::RImp, Formula::Imp(x, y), 0) => (vec![c(x)], vec![c(y)], false),
        (Rule::RAnd, Formula::And(x, _), 0) => (vec![], vec![c(x)], false),
        (Rule::RAnd, Formula::And(_, y), 1) => (vec![], vec![c(y)], false),
        (Rule::LOr, Formula::Or(x, _), 0) => (vec![c(x)], vec![], false),
        (Rule::LOr, Formula::Or(_, y), 1) => (vec![c(y)], vec![], false),
        (Rule::LImp, Formula::Imp(x, _), 0) => (vec![], vec![c(x)], false),
        (Rule::LImp, Formula::Imp(_, y), 1) => (vec![c(y)], vec![], false),
        (Rule::LForall(t), Formula::Forall(x, body), 0) => (vec![inst(x, body, t)?], vec![], true),
        (Rule::RExists(t), Formula::Exists(x, body), 0) => (vec![], vec![inst(x, body, t)?], true),
        (Rule::RForall(y), Formula::Forall(x, body), 0) => (vec![], vec![inst(x, body, &Term::var(y.clone()))?], false),
        (Rule::LExists(y), Formula::Exists(x, body), 0) => (vec![inst(x, body, &Term::var(y.clone()))?], vec![], false),
        _ => return Err(invariant(format!("rule {rule:?} does not fit principal `{a}`"))),
    })
}

/// `Xs` with the entry at `k` left out.
fn others(xs: &[Formula], k: usize) -> Vec<Formula> {
    xs.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, x)| x.clone()).collect()
}

/// Removes one copy of each of `fs` from `from`.
fn minus(from: &[Formula], fs: &[Formula]) -> Vec<Formula> {
    let mut out = from.to_vec();
    for f in fs {
        if let Some(i) = out.iter().position(|g| g == f) {
            out.remove(i);
        }
    }
    out
}

fn quantifier(form: Form, z: &str, body: Formula) -> Formula {
    match form {
        Form::Forall => Formula::forall(z, body),
        Form::Exists => Formula::exists(z, body),
    }
}

impl<'a> Engine<'a> {
    pub fn new(theory: &'a TheorySpec, config: InterpConfig, fresh: Fresh) -> Engine<'a> {
        Engine { theory, config, fresh, trace: Vec::new() }
    }

    pub fn run(&mut self, d: &Derivation, p: &Partition) -> Result<Piece, InterpError> {
        let split = p.split(&d.conclusion);
        let piece = match &d.rule {
            Rule::Init => self.init(d, p, &split)?,
            Rule::InitBot | Rule::InitTop => self.constant_leaf(d, p, &split)?,
            Rule::Axiom(s) => return Err(InterpError::NonSingularTheory(format!("initial sequent {}", s.id()))),
            Rule::Geo(id, inst) => self.geometric(d, p, &split, id, inst)?,
            _ => self.logical(d, p, &split)?,
        };
        if piece.w1.conclusion != split.first(&piece.c) || piece.w2.conclusion != split.second(&piece.c) {
            return Err(invariant(format!(
                "witnesses `{}` and `{}` do not fit interpolant `{}`",
                piece.w1.conclusion, piece.w2.conclusion, piece.c
            )));
        }
        Ok(piece)
    }

    fn leaf_of(s: Sequent) -> Result<Derivation, InterpError> {
        leaf(&s).ok_or_else(|| invariant(format!("`{s}` is not initial")))
    }

    fn init(&mut self, d: &Derivation, p: &Partition, split: &Split) -> Result<Piece, InterpError> {
        let (l, r) = match d.principal.as_slice() {
            [l, r] => (*l, *r),
            _ => return Err(invariant("initial sequent without a principal pair")),
        };
        let a = d.conclusion.ant[l.index].clone();
        let (c, w1, w2) = match (half(p, l), half(p, r)) {
            (Half::One, Half::One) => {
                let c = Formula::Bot;
                (c.clone(), init_on(&split.first(&c), &a)?, Self::leaf_of(split.second(&c))?)
            }
            (Half::Two, Half::Two) => {
                let c = Formula::Top;
                (c.clone(), Self::leaf_of(split.first(&c))?, init_on(&split.second(&c), &a)?)
            }
            (Half::One, Half::Two) => (a.clone(), init_on(&split.first(&a), &a)?, init_on(&split.second(&a), &a)?),
            (Half::Two, Half::One) => {
                let c = Formula::imp(a.clone(), Formula::Bot);
                let mut up = split.first(&Formula::Bot);
                up.ant.push(a.clone());
                let w1 = r_imp(init_on(&up, &a)?, &a, &Formula::Bot)?;
                let p1 = init_on(&Sequent::new(split.g2.clone(), [split.d2.clone(), vec![a.clone()]].concat()), &a)?;
                let p2 = Self::leaf_of(split.second(&Formula::Bot))?;
                let w2 = l_imp(p1, p2, &a, &Formula::Bot, &mut self.fresh)?;
                (c, w1, w2)
            }
        };
        Ok(Piece { c, w1, w2 })
    }

    fn constant_leaf(&mut self, d: &Derivation, p: &Partition, split: &Split) -> Result<Piece, InterpError> {
        let o = *d.principal.first().ok_or_else(|| invariant("leaf without principal"))?;
        let c = match half(p, o) {
            Half::One => Formula::Bot,
            Half::Two => Formula::Top,
        };
        Ok(Piece { w1: Self::leaf_of(split.first(&c))?, w2: Self::leaf_of(split.second(&c))?, c })
    }

    fn reapply(&mut self, rule: &Rule, a: &Formula, mut ps: Vec<Derivation>) -> Result<Derivation, InterpError> {
        let one = |ps: &mut Vec<Derivation>| ps.remove(0);
        let fresh = &mut self.fresh;
        Ok(match (rule, a) {
            (Rule::LAnd, Formula::And(x, y)) => l_and(one(&mut ps), x, y)?,
            (Rule::ROr, Formula::Or(x, y)) => r_or(one(&mut ps), x, y)?,
            (Rule::RImp, Formula::Imp(x, y)) => r_imp(one(&mut ps), x, y)?,
            (Rule::RAnd, Formula::And(x, y)) => {
                let p0 = one(&mut ps);
                r_and(p0, one(&mut ps), x, y, fresh)?
            }
            (Rule::LOr, Formula::Or(x, y)) => {
                let p0 = one(&mut ps);
                l_or(p0, one(&mut ps), x, y, fresh)?
            }
            (Rule::LImp, Formula::Imp(x, y)) => {
                let p0 = one(&mut ps);
                l_imp(p0, one(&mut ps), x, y, fresh)?
            }
            (Rule::LForall(t), Formula::Forall(x, body)) => l_forall(one(&mut ps), x, body, t)?,
            (Rule::RExists(t), Formula::Exists(x, body)) => r_exists(one(&mut ps), x, body, t)?,
            (Rule::RForall(y), Formula::Forall(x, body)) => r_forall(one(&mut ps), x, body, y)?,
            (Rule::LExists(y), Formula::Exists(x, body)) => l_exists(one(&mut ps), x, body, y)?,
            _ => return Err(invariant(format!("rule {rule:?} does not fit principal `{a}`"))),
        })
    }

    fn logical(&mut self, d: &Derivation, p: &Partition, split: &Split) -> Result<Piece, InterpError> {
        let o = *d.principal.first().ok_or_else(|| invariant("logical rule without principal"))?;
        let a = d.formula(o).ok_or_else(|| invariant("principal occurrence out of range"))?.clone();
        let h = half(p, o);
        let mut subs = Vec::new();
        for (k, prem) in d.premises.iter().enumerate() {
            let (ant, suc, keep) = components(&d.rule, &a, k)?;
            let shape = PremiseShape {
                drop: if keep { None } else { Some(o) },
                moved: &[],
                moved_to: h,
                added_ant: ant,
                added_suc: suc,
                added_half: h,
            };
            let pk = premise_partition(&d.conclusion, p, &prem.conclusion, shape)?;
            subs.push(self.run(prem, &pk)?);
        }
        let piece = if subs.len() == 1 {
            let s = subs.pop().expect("one premise");
            match h {
                Half::One => Piece { w1: self.reapply(&d.rule, &a, vec![s.w1])?, w2: s.w2, c: s.c },
                Half::Two => Piece { w2: self.reapply(&d.rule, &a, vec![s.w2])?, w1: s.w1, c: s.c },
            }
        } else {
            let s2 = subs.pop().expect("two premises");
            let s1 = subs.pop().expect("two premises");
            let (c1, c2) = (s1.c.clone(), s2.c.clone());
            match h {
                Half::One => {
                    let q1 = weaken(&s1.w1, &c2, Side::Right, &mut self.fresh);
                    let q2 = weaken(&s2.w1, &c1, Side::Right, &mut self.fresh);
                    let w = self.reapply(&d.rule, &a, vec![q1, q2])?;
                    Piece {
                        w1: r_or(w, &c1, &c2)?,
                        w2: l_or(s1.w2, s2.w2, &c1, &c2, &mut self.fresh)?,
                        c: Formula::or(c1, c2),
                    }
                }
                Half::Two => {
                    let q1 = weaken(&s1.w2, &c2, Side::Left, &mut self.fresh);
                    let q2 = weaken(&s2.w2, &c1, Side::Left, &mut self.fresh);
                    let w = self.reapply(&d.rule, &a, vec![q1, q2])?;
                    Piece {
                        w1: r_and(s1.w1, s2.w1, &c1, &c2, &mut self.fresh)?,
                        w2: l_and(w, &c1, &c2)?,
                        c: Formula::and(c1, c2),
                    }
                }
            }
        };
        let form = if h == Half::One { Form::Forall } else { Form::Exists };
        self.quantify(piece, form, split)
    }

    fn geometric(&mut self, d: &Derivation, p: &Partition, split: &Split, id: &str, inst: &Instance) -> Result<Piece, InterpError> {
        let rule: &GeometricRule =
            self.theory.rule(id).ok_or_else(|| invariant(format!("rule `{id}` is not in the theory")))?;
        let mut occs: Vec<Occ> = Vec::new();
        for o in &d.principal {
            if !occs.contains(o) {
                occs.push(*o);
            }
        }
        let atoms_on = |h: Half| -> Vec<Formula> {
            occs.iter().filter(|o| half(p, **o) == h).map(|o| d.conclusion.ant[o.index].clone()).collect()
        };
        let (pi1, pi2) = (atoms_on(Half::One), atoms_on(Half::Two));
        let case = GeoCase::classify(&pi1, &pi2);
        self.trace.push((id.to_string(), case));
        let form = match case {
            GeoCase::AllFirst | GeoCase::MixedNoRelSecond | GeoCase::NoPrincipal => Form::Forall,
            GeoCase::AllSecond | GeoCase::MixedNoRelFirst => Form::Exists,
            GeoCase::Mixed => match self.config.mixed {
                Mixed::Implicative => Form::Forall,
                Mixed::Conjunctive => Form::Exists,
            },
        };
        let qside = if form == Form::Forall { Half::One } else { Half::Two };
        let blocks = rule.premise_atoms(inst).map_err(|e| invariant(e.to_string()))?;
        if blocks.len() != d.premises.len() {
            return Err(invariant(format!("rule `{id}` expects {} premises", blocks.len())));
        }
        let mut subs = Vec::new();
        for (prem, q) in d.premises.iter().zip(&blocks) {
            let shape = PremiseShape {
                drop: None,
                moved: &occs,
                moved_to: qside,
                added_ant: q.clone(),
                added_suc: Vec::new(),
                added_half: qside,
            };
            let pk = premise_partition(&d.conclusion, p, &prem.conclusion, shape)?;
            subs.push(self.run(prem, &pk)?);
        }
        let cs: Vec<Formula> = subs.iter().map(|s| s.c.clone()).collect();
        let piece = match form {
            Form::Forall => self.implicative(rule, inst, subs, &cs, &pi2, split)?,
            Form::Exists => self.conjunctive(rule, inst, subs, &cs, &pi1, split)?,
        };
        self.quantify(piece, form, split)
    }

    /// `Π₂ → C₁ ∨ … ∨ Cₘ`, or just the disjunction when `Π₂` is empty.
    fn implicative(
        &mut self,
        rule: &GeometricRule,
        inst: &Instance,
        subs: Vec<Piece>,
        cs: &[Formula],
        pi2: &[Formula],
        split: &Split,
    ) -> Result<Piece, InterpError> {
        let disj = Formula::disj(cs).ok_or_else(|| invariant("geometric rule without premises"))?;
        let mut ups = Vec::new();
        let mut downs = Vec::new();
        for (k, s) in subs.into_iter().enumerate() {
            ups.push(weaken_all(&s.w1, &others(cs, k), Side::Right, &mut self.fresh));
            downs.push(s.w2);
        }
        let w1 = r_or_batch(geo(ups, rule, inst.clone(), &mut self.fresh)?, cs)?;
        let w2 = l_or_batch(downs, cs, &mut self.fresh)?;
        let Some(conj) = Formula::conj(pi2) else {
            return Ok(Piece { c: disj, w1, w2 });
        };
        let w1 = r_imp(l_and_batch(w1, pi2)?, &conj, &disj)?;
        let rest = minus(&split.g2, pi2);
        let leaves = pi2
            .iter()
            .map(|a| init_on(&Sequent::new([rest.clone(), pi2.to_vec()].concat(), [split.d2.clone(), vec![a.clone()]].concat()), a))
            .collect::<Result<Vec<_>, _>>()?;
        let p1 = r_and_batch(leaves, pi2, &mut self.fresh)?;
        let p2 = weaken_all(&w2, pi2, Side::Left, &mut self.fresh);
        let w2 = l_imp(p1, p2, &conj, &disj, &mut self.fresh)?;
        Ok(Piece { c: Formula::imp(conj, disj), w1, w2 })
    }

    /// `Π₁ ∧ C₁ ∧ … ∧ Cₘ`
    fn conjunctive(
        &mut self,
        rule: &GeometricRule,
        inst: &Instance,
        subs: Vec<Piece>,
        cs: &[Formula],
        pi1: &[Formula],
        split: &Split,
    ) -> Result<Piece, InterpError> {
        let items: Vec<Formula> = pi1.iter().chain(cs).cloned().collect();
        let c = Formula::conj(&items).ok_or_else(|| invariant("geometric rule without premises"))?;
        let mut ups: Vec<Derivation> = pi1
            .iter()
            .map(|a| init_on(&split.first(a), a))
            .collect::<Result<Vec<_>, _>>()?;
        let mut downs = Vec::new();
        for (k, s) in subs.into_iter().enumerate() {
            ups.push(weaken_all(&s.w1, pi1, Side::Left, &mut self.fresh));
            downs.push(weaken_all(&s.w2, &others(cs, k), Side::Left, &mut self.fresh));
        }
        let w1 = r_and_batch(ups, &items, &mut self.fresh)?;
        let w2 = l_and_batch(geo(downs, rule, inst.clone(), &mut self.fresh)?, &items)?;
        Ok(Piece { c, w1, w2 })
    }

    /// Binds the terms of the interpolant that are not shared by both
    /// sides, universally or existentially.
    fn quantify(&mut self, piece: Piece, form: Form, split: &Split) -> Result<Piece, InterpError> {
        let t1 = split.terms1();
        let t2 = split.terms2();
        let ts: Vec<Term> = piece.c.ter().into_iter().filter(|t| !(t1.contains(t) && t2.contains(t))).collect();
        if ts.is_empty() {
            return Ok(piece);
        }
        let home: &BTreeSet<Term> = if form == Form::Forall { &t1 } else { &t2 };
        if let Some(t) = ts.iter().find(|t| home.contains(t)) {
            return Err(invariant(format!("offending term `{t}` occurs on the side it is bound for")));
        }
        let l = ts.len();
        let zs = self.fresh.vars(l);
        let ys: Vec<Term> = self.fresh.vars(l).into_iter().map(Term::Var).collect();
        let map: BTreeMap<Term, Term> = ts.iter().cloned().zip(zs.iter().map(|z| Term::var(z.clone()))).collect();
        let b = piece.c.subst_map(&map).map_err(|e| invariant(e.to_string()))?;
        // q[i] binds z_i, …, z_{l-1}; q[0] is the new interpolant.
        let mut q = vec![b];
        for z in zs.iter().rev() {
            let inner = q.last().expect("non-empty").clone();
            q.push(quantifier(form, z, inner));
        }
        q.reverse();
        // `full(j, w)` instantiates the first j bound variables of q[j];
        // `body(i, w)` leaves z_{i-1} free for the step that binds it.
        let full = |j: usize, with: &[Term]| -> Result<Formula, InterpError> {
            q[j].subst_vars(&zs[..j], &with[..j]).map_err(|e| invariant(e.to_string()))
        };
        let body = |i: usize, with: &[Term]| -> Result<Formula, InterpError> {
            q[i].subst_vars(&zs[..i - 1], &with[..i - 1]).map_err(|e| invariant(e.to_string()))
        };
        let c = q[0].clone();
        let eigen = |w: &Derivation, fresh: &mut Fresh| -> Result<Derivation, InterpError> {
            let mut w = w.clone();
            for (t, y) in ts.iter().zip(&ys) {
                w = subst_derivation(&w, t, y, fresh)?;
            }
            Ok(w)
        };
        let instances: Vec<Formula> = (0..l).map(|j| full(j, &ts)).collect::<Result<_, _>>()?;
        let (w1, w2) = match form {
            Form::Forall => {
                let mut w1 = eigen(&piece.w1, &mut self.fresh)?;
                let mut w2 = weaken_all(&piece.w2, &instances, Side::Left, &mut self.fresh);
                for i in (1..=l).rev() {
                    let y = ys[i - 1].as_var().expect("fresh variable");
                    w1 = r_forall(w1, &zs[i - 1], &body(i, &ys)?, y)?;
                    w2 = l_forall(w2, &zs[i - 1], &body(i, &ts)?, &ts[i - 1])?;
                }
                (w1, w2)
            }
            Form::Exists => {
                let mut w1 = weaken_all(&piece.w1, &instances, Side::Right, &mut self.fresh);
                let mut w2 = eigen(&piece.w2, &mut self.fresh)?;
                for i in (1..=l).rev() {
                    let y = ys[i - 1].as_var().expect("fresh variable");
                    w1 = r_exists(w1, &zs[i - 1], &body(i, &ts)?, &ts[i - 1])?;
                    w2 = l_exists(w2, &zs[i - 1], &body(i, &ys)?, y)?;
                }
                (w1, w2)
            }
        };
        Ok(Piece { c, w1, w2 })
    }
}
