//! Seeded generation of random derivations, built root-last from leaves so
//! every tree is well-formed by construction.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fresh::{all_vars, Fresh};
use crate::geometric::{GeometricRule, Instance, Scheme, TheorySpec};
use crate::kernel::{
    geo, init_on, l_and, l_exists, l_forall, l_imp, l_or, r_and, r_exists, r_forall, r_imp, r_or, weaken, Derivation, Side,
};
use crate::syntax::{Formula, Pred, Sequent, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub max_height: usize,
    /// Binary predicates used in generated atoms.
    pub preds: Vec<Pred>,
    pub constants: Vec<String>,
    /// Free variables; eigenvariables of geometric rules come on top.
    pub vars: Vec<String>,
    /// Names used only for bound variables.
    pub bound: Vec<String>,
    /// Derivations whose root sequent grows beyond this are not extended
    /// by two-premise rules.
    pub max_sequent: usize,
}

impl GenConfig {
    /// Three binary predicates (the theory's own first), three constants
    /// and four free variables.
    pub fn for_theory(t: &TheorySpec) -> GenConfig {
        let mut preds: Vec<Pred> = t.preds.iter().filter(|p| p.arity == 2).cloned().collect();
        for extra in ["P", "Q", "R"] {
            if preds.len() >= 3 {
                break;
            }
            let p = Pred::new(extra, 2);
            if !preds.contains(&p) {
                preds.push(p);
            }
        }
        GenConfig {
            max_height: 6,
            preds,
            constants: ["a", "b", "c"].map(String::from).to_vec(),
            vars: ["s", "t", "u", "v"].map(String::from).to_vec(),
            bound: ["x", "y", "z", "w"].map(String::from).to_vec(),
            max_sequent: 10,
        }
    }
}

pub struct Generator<'a> {
    rng: ChaCha8Rng,
    cfg: GenConfig,
    theory: &'a TheorySpec,
    fresh: Fresh,
}

#[derive(Clone, Copy)]
enum Step {
    LAnd,
    ROr,
    RImp,
    LForall,
    RExists,
    RForall,
    LExists,
    RAnd,
    LOr,
    LImp,
    Geo,
}

const STEPS: [Step; 11] = [
    Step::LAnd,
    Step::ROr,
    Step::RImp,
    Step::LForall,
    Step::RExists,
    Step::RForall,
    Step::LExists,
    Step::RAnd,
    Step::LOr,
    Step::LImp,
    Step::Geo,
];

impl<'a> Generator<'a> {
    pub fn new(seed: u64, theory: &'a TheorySpec, cfg: GenConfig) -> Generator<'a> {
        let mut fresh = Fresh::new();
        fresh.reserve(cfg.vars.iter().chain(&cfg.bound));
        Generator { rng: ChaCha8Rng::seed_from_u64(seed), cfg, theory, fresh }
    }

    /// A derivation of height at most `max_height`.
    pub fn derivation(&mut self) -> Derivation {
        let h = self.rng.gen_range(1..=self.cfg.max_height.max(1));
        self.build(h)
    }

    /// A random formula of nesting depth at most `depth`.
    pub fn formula(&mut self, depth: usize) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.4) {
            return match self.rng.gen_range(0..12) {
                0 => Formula::Bot,
                1 => Formula::Top,
                _ => self.atom(),
            };
        }
        let a = self.formula(depth - 1);
        match self.rng.gen_range(0..6) {
            0 => Formula::and(a, self.formula(depth - 1)),
            1 => Formula::or(a, self.formula(depth - 1)),
            2 => Formula::imp(a, self.formula(depth - 1)),
            3 => Formula::negation(a),
            k => {
                let t = self.term_of(&a);
                self.abstract_over(&a, &t)
                    .map(|(x, body)| if k == 4 { Formula::forall(x, body) } else { Formula::exists(x, body) })
                    .unwrap_or(a)
            }
        }
    }

    fn term(&mut self) -> Term {
        let n = self.cfg.vars.len() + self.cfg.constants.len();
        let i = self.rng.gen_range(0..n);
        match self.cfg.vars.get(i) {
            Some(v) => Term::var(v.clone()),
            None => Term::constant(self.cfg.constants[i - self.cfg.vars.len()].clone()),
        }
    }

    fn atom(&mut self) -> Formula {
        let p = self.cfg.preds.choose(&mut self.rng).expect("at least one predicate").clone();
        let args = (0..p.arity).map(|_| self.term()).collect();
        Formula::Atom(p, args)
    }

    /// A term of `f` if it has any, otherwise a random one.
    fn term_of(&mut self, f: &Formula) -> Term {
        let ts: Vec<Term> = f.ter().into_iter().collect();
        ts.choose(&mut self.rng).cloned().unwrap_or_else(|| self.term())
    }

    /// `(x, B)` with `B[t/x] = f`, for a bound name `x` new to `f`.
    fn abstract_over(&mut self, f: &Formula, t: &Term) -> Option<(String, Formula)> {
        let used = all_vars([f]);
        let free: Vec<&String> = self.cfg.bound.iter().filter(|x| !used.contains(*x)).collect();
        let x = (*free.choose(&mut self.rng)?).clone();
        let body = f.subst_term(t, &Term::var(x.clone())).ok()?;
        Some((x, body))
    }

    fn leaf(&mut self) -> Derivation {
        let mut ant: Vec<Formula> = (0..self.rng.gen_range(0..3)).map(|_| self.formula(1)).collect();
        let mut suc: Vec<Formula> = (0..self.rng.gen_range(0..3)).map(|_| self.formula(1)).collect();
        let p = match self.rng.gen_range(0..10) {
            0 => {
                ant.push(Formula::Bot);
                None
            }
            1 => {
                suc.push(Formula::Top);
                None
            }
            _ => {
                let p = self.atom();
                ant.push(p.clone());
                suc.push(p.clone());
                Some(p)
            }
        };
        ant.shuffle(&mut self.rng);
        suc.shuffle(&mut self.rng);
        let s = Sequent::new(ant, suc);
        match p {
            Some(p) => init_on(&s, &p).expect("atom on both sides"),
            None => crate::kernel::leaf(&s).expect("bot left or top right"),
        }
    }

    fn build(&mut self, h: usize) -> Derivation {
        if h == 0 || self.rng.gen_bool(0.1) {
            return self.leaf();
        }
        for _ in 0..8 {
            let step = *STEPS.choose(&mut self.rng).expect("non-empty");
            if let Some(d) = self.step(step, h) {
                return d;
            }
        }
        self.leaf()
    }

    /// `d` with `f` on `side`, weakening it in unless already present.
    fn ensure(&mut self, d: Derivation, f: &Formula, side: Side) -> Derivation {
        let present = match side {
            Side::Left => d.conclusion.ant.contains(f),
            Side::Right => d.conclusion.suc.contains(f),
        };
        if present {
            d
        } else {
            weaken(&d, f, side, &mut self.fresh)
        }
    }

    /// An existing formula of `side`, or a new one with probability 1/3.
    fn pick(&mut self, d: &Derivation, side: Side, shape: impl Fn(&Formula) -> bool) -> Formula {
        let fs: Vec<&Formula> = match side {
            Side::Left => d.conclusion.ant.iter(),
            Side::Right => d.conclusion.suc.iter(),
        }
        .filter(|f| shape(f))
        .collect();
        if fs.is_empty() || self.rng.gen_bool(0.33) {
            self.formula(1)
        } else {
            (*fs.choose(&mut self.rng).expect("non-empty")).clone()
        }
    }

    fn step(&mut self, step: Step, h: usize) -> Option<Derivation> {
        let any = |_: &Formula| true;
        match step {
            Step::LAnd | Step::ROr | Step::RImp => {
                let d = self.build(h - 1);
                let (sa, sb) = match step {
                    Step::LAnd => (Side::Left, Side::Left),
                    Step::ROr => (Side::Right, Side::Right),
                    _ => (Side::Left, Side::Right),
                };
                let a = self.pick(&d, sa, any);
                let d = self.ensure(d, &a, sa);
                let b = self.pick(&d, sb, |f| sa != sb || f != &a);
                let d = if sa == sb && a == b { weaken(&d, &b, sb, &mut self.fresh) } else { self.ensure(d, &b, sb) };
                match step {
                    Step::LAnd => l_and(d, &a, &b).ok(),
                    Step::ROr => r_or(d, &a, &b).ok(),
                    _ => r_imp(d, &a, &b).ok(),
                }
            }
            Step::LForall | Step::RExists => {
                let side = if matches!(step, Step::LForall) { Side::Left } else { Side::Right };
                let d = self.build(h - 1);
                let f = self.pick(&d, side, any);
                let d = self.ensure(d, &f, side);
                let t = self.term_of(&f);
                let (x, body) = self.abstract_over(&f, &t)?;
                let q = if side == Side::Left { Formula::forall(&x, body.clone()) } else { Formula::exists(&x, body.clone()) };
                let d = self.ensure(d, &q, side);
                if side == Side::Left {
                    l_forall(d, &x, &body, &t).ok()
                } else {
                    r_exists(d, &x, &body, &t).ok()
                }
            }
            Step::RForall | Step::LExists => {
                let side = if matches!(step, Step::RForall) { Side::Right } else { Side::Left };
                let d = self.build(h - 1);
                let fs = match side {
                    Side::Left => &d.conclusion.ant,
                    Side::Right => &d.conclusion.suc,
                };
                let eigens = d.eigens();
                let mut options = Vec::new();
                for (i, f) in fs.iter().enumerate() {
                    let mut rest = d.conclusion.clone();
                    match side {
                        Side::Left => rest.ant.remove(i),
                        Side::Right => rest.suc.remove(i),
                    };
                    let others = rest.free_vars();
                    for y in f.free_vars() {
                        if !others.contains(&y) && !eigens.contains(&y) {
                            options.push((f.clone(), y));
                        }
                    }
                }
                let (f, y) = options.choose(&mut self.rng)?.clone();
                let (x, body) = self.abstract_over(&f, &Term::var(y.clone()))?;
                if side == Side::Right {
                    r_forall(d, &x, &body, &y).ok()
                } else {
                    l_exists(d, &x, &body, &y).ok()
                }
            }
            Step::RAnd | Step::LOr | Step::LImp => {
                let (s1, s2) = match step {
                    Step::RAnd => (Side::Right, Side::Right),
                    Step::LOr => (Side::Left, Side::Left),
                    _ => (Side::Right, Side::Left),
                };
                let d1 = self.build(h - 1);
                let d2 = self.build(h - 1);
                let a = self.pick(&d1, s1, any);
                let d1 = self.ensure(d1, &a, s1);
                let b = self.pick(&d2, s2, any);
                let d2 = self.ensure(d2, &b, s2);
                let c1 = without(&d1.conclusion, &a, s1);
                let c2 = without(&d2.conclusion, &b, s2);
                if c1.ant.len() + c1.suc.len() + c2.ant.len() + c2.suc.len() > self.cfg.max_sequent {
                    return None;
                }
                let d1 = self.weaken_by(d1, &c2);
                let d2 = self.weaken_by(d2, &c1);
                match step {
                    Step::RAnd => r_and(d1, d2, &a, &b, &mut self.fresh).ok(),
                    Step::LOr => l_or(d1, d2, &a, &b, &mut self.fresh).ok(),
                    _ => l_imp(d1, d2, &a, &b, &mut self.fresh).ok(),
                }
            }
            Step::Geo => {
                let r = self.theory.rules.choose(&mut self.rng)?.clone();
                self.geo_step(&r, h)
            }
        }
    }

    fn weaken_by(&mut self, d: Derivation, c: &Sequent) -> Derivation {
        let mut d = d;
        for f in &c.ant {
            d = weaken(&d, f, Side::Left, &mut self.fresh);
        }
        for f in &c.suc {
            d = weaken(&d, f, Side::Right, &mut self.fresh);
        }
        d
    }

    fn instance(&mut self, r: &GeometricRule) -> Option<Instance> {
        let mut terms = std::collections::BTreeMap::new();
        for x in &r.universals {
            terms.insert(x.clone(), self.term());
        }
        let replace = if r.scheme == Some(Scheme::Replacement) {
            let s = terms[&r.universals[0]].clone();
            let t = terms[&r.universals[1]].clone();
            let p = self.cfg.preds.choose(&mut self.rng)?.clone();
            let mut src: Vec<Term> = (0..p.arity).map(|_| self.term()).collect();
            let k = self.rng.gen_range(0..p.arity);
            src[k] = s.clone();
            let tgt = src.iter().map(|a| if *a == s && self.rng.gen_bool(0.7) { t.clone() } else { a.clone() }).collect();
            Some((Formula::Atom(p.clone(), src), Formula::Atom(p, tgt)))
        } else {
            None
        };
        let eigens = self.fresh.vars(r.eigen_count());
        Some(Instance { terms, eigens, replace })
    }

    fn geo_step(&mut self, r: &GeometricRule, h: usize) -> Option<Derivation> {
        let inst = self.instance(r)?;
        let principal = r.principal_atoms(&inst).ok()?;
        let blocks = r.premise_atoms(&inst).ok()?;
        let mut ds = Vec::new();
        let mut ctxs = Vec::new();
        for block in &blocks {
            let mut d = self.build(h - 1);
            let mut need: Vec<Formula> = principal.clone();
            need.extend(block.iter().cloned());
            let mut have = d.conclusion.ant.clone();
            for a in need {
                match have.iter().position(|f| *f == a) {
                    Some(i) => {
                        have.remove(i);
                    }
                    None => d = weaken(&d, &a, Side::Left, &mut self.fresh),
                }
            }
            let mut c = d.conclusion.clone();
            for a in block {
                let i = c.ant.iter().position(|f| f == a)?;
                c.ant.remove(i);
            }
            ds.push(d);
            ctxs.push(c);
        }
        let size: usize = ctxs.iter().map(|c| c.ant.len() + c.suc.len()).sum();
        if blocks.len() > 1 && size > self.cfg.max_sequent {
            return None;
        }
        let mut aligned = Vec::new();
        for (k, d) in ds.into_iter().enumerate() {
            let mut d = d;
            for (j, c) in ctxs.iter().enumerate() {
                if j != k {
                    let mut extra = c.clone();
                    for a in &principal {
                        if let Some(i) = extra.ant.iter().position(|f| f == a) {
                            extra.ant.remove(i);
                        }
                    }
                    d = self.weaken_by(d, &extra);
                }
            }
            aligned.push(d);
        }
        geo(aligned, r, inst, &mut self.fresh).ok()
    }
}

fn without(s: &Sequent, f: &Formula, side: Side) -> Sequent {
    let mut c = s.clone();
    let v = match side {
        Side::Left => &mut c.ant,
        Side::Right => &mut c.suc,
    };
    if let Some(i) = v.iter().position(|g| g == f) {
        v.remove(i);
    }
    c
}
