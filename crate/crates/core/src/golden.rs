//! Hand-built derivations for the characteristic interpolant shapes of the
//! identity and strict-partial-order rules, with the expected interpolants.

use std::collections::BTreeMap;

use crate::fresh::Fresh;
use crate::geometric::{builtin_theory, Instance, TheorySpec};
use crate::interpolate::{interpolate, verify, GeoCase, Partition};
use crate::kernel::{geo, init_on, l_imp, leaf, Derivation};
use crate::syntax::{parse_formula, parse_sequent, Formula, Term};

pub struct Golden {
    pub name: &'static str,
    pub theory: TheorySpec,
    pub derivation: Derivation,
    pub partition: Partition,
    /// Compared up to renaming of bound variables.
    pub expected: Formula,
    /// The case taken at the root, when the root is a geometric rule.
    pub root_case: Option<GeoCase>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenOutcome {
    pub name: &'static str,
    pub interpolant: Option<Formula>,
    pub expected: Formula,
    pub shape_ok: bool,
    pub verified: bool,
    pub detail: String,
}

impl GoldenOutcome {
    pub fn passed(&self) -> bool {
        self.shape_ok && self.verified
    }
}

fn f(s: &str) -> Formula {
    parse_formula(s).expect("golden formula parses")
}

fn v(s: &str) -> Term {
    Term::var(s)
}

fn inst(pairs: &[(&str, &str)], replace: Option<(&str, &str)>) -> Instance {
    Instance {
        terms: pairs.iter().map(|(x, t)| (x.to_string(), v(t))).collect::<BTreeMap<_, _>>(),
        eigens: Vec::new(),
        replace: replace.map(|(s, t)| (f(s), f(t))),
    }
}

fn part(s: &str) -> Partition {
    Partition::parse(s).expect("golden partition parses")
}

/// One application of `rule` above a single initial premise.
fn one_step(theory: &TheorySpec, rule: &str, premise: &str, i: Instance) -> Derivation {
    let mut fresh = Fresh::new();
    let top = leaf(&parse_sequent(premise).expect("golden sequent parses")).expect("golden premise is initial");
    geo(vec![top], theory.rule(rule).expect("rule exists"), i, &mut fresh).expect("golden step is well-formed")
}

fn ref_box() -> Golden {
    // Ref on s above `s = s, s = s -> Q => Q`, closed by L→.
    let t = builtin_theory("G_eq").expect("built-in");
    let mut fresh = Fresh::new();
    let a = f("s = s");
    let q = f("Q");
    let p1 = init_on(&parse_sequent("s = s => Q, s = s").expect("parses"), &a).expect("initial");
    let p2 = init_on(&parse_sequent("Q, s = s => Q").expect("parses"), &q).expect("initial");
    let up = l_imp(p1, p2, &a, &q, &mut fresh).expect("L->");
    let d = geo(vec![up], t.rule("Ref").expect("Ref"), inst(&[("x", "s")], None), &mut fresh).expect("Ref");
    Golden {
        name: "ref",
        theory: t,
        derivation: d,
        partition: part("L:2;R:1"),
        expected: f("forall z. z = z & (Q -> bot)"),
        root_case: Some(GeoCase::NoPrincipal),
    }
}

fn repl(name: &'static str, concl_extra: &str, partition: &str, expected: &str, case: GeoCase) -> Golden {
    let t = builtin_theory("G_eq").expect("built-in");
    let premise = format!("P(t), s = t, P(s), R => R{concl_extra}");
    let d = one_step(&t, "Repl", &premise, inst(&[("x", "s"), ("y", "t")], Some(("P(s)", "P(t)"))));
    Golden { name, theory: t, derivation: d, partition: part(partition), expected: f(expected), root_case: Some(case) }
}

fn repl_plain(name: &'static str, partition: &str, expected: &str, case: GeoCase) -> Golden {
    let t = builtin_theory("G_eq").expect("built-in");
    let d = one_step(&t, "Repl", "P(t), s = t, P(s) => P(t)", inst(&[("x", "s"), ("y", "t")], Some(("P(s)", "P(t)"))));
    Golden { name, theory: t, derivation: d, partition: part(partition), expected: f(expected), root_case: Some(case) }
}

fn irref(name: &'static str, partition: &str, expected: &str, case: GeoCase) -> Golden {
    let t = builtin_theory("SPO").expect("built-in");
    let d = one_step(&t, "Irref", "bot, s < s => ", inst(&[("x", "s")], None));
    Golden { name, theory: t, derivation: d, partition: part(partition), expected: f(expected), root_case: Some(case) }
}

fn trans(name: &'static str, partition: &str, expected: &str) -> Golden {
    let t = builtin_theory("SPO").expect("built-in");
    let d = one_step(&t, "Trans", "s < u, s < t, t < u => s < u", inst(&[("x", "s"), ("y", "t"), ("z", "u")], None));
    Golden { name, theory: t, derivation: d, partition: part(partition), expected: f(expected), root_case: Some(GeoCase::Mixed) }
}

fn symmetry() -> Golden {
    let t = builtin_theory("G_eq").expect("built-in");
    let mut fresh = Fresh::new();
    let top = init_on(&parse_sequent("t = s, s = t, s = s => t = s").expect("parses"), &f("t = s")).expect("initial");
    let d = geo(vec![top], t.rule("Repl").expect("Repl"), inst(&[("x", "s"), ("y", "t")], Some(("s = s", "t = s"))), &mut fresh)
        .expect("Repl");
    let d = geo(vec![d], t.rule("Ref").expect("Ref"), inst(&[("x", "s")], None), &mut fresh).expect("Ref");
    Golden {
        name: "symmetry",
        theory: t,
        derivation: d,
        partition: part("L:1;R:2"),
        expected: f("t = s"),
        root_case: Some(GeoCase::NoPrincipal),
    }
}

fn footnote() -> Golden {
    let d = leaf(&parse_sequent("P(x), Q(y) => P(x), R(y)").expect("parses")).expect("initial");
    Golden {
        name: "footnote",
        theory: builtin_theory("G").expect("built-in"),
        derivation: d,
        partition: part("L:1,1;R:1,2"),
        expected: Formula::Bot,
        root_case: None,
    }
}

/// The golden suite, in a fixed order.
pub fn goldens() -> Vec<Golden> {
    vec![
        ref_box(),
        repl_plain("repl-1", "L:1,1;R:2", "P(t)", GeoCase::AllFirst),
        repl_plain("repl-2", "L:2,2;R:1", "P(t) -> bot", GeoCase::AllSecond),
        repl("repl-3-shared", ", Q(t)", "L:2,1,1;R:1,1", "s = t -> bot", GeoCase::MixedNoRelSecond),
        repl("repl-3-bound", "", "L:2,1,1;R:1", "forall z. s = z -> bot", GeoCase::MixedNoRelSecond),
        repl("repl-4-shared", ", Q(t)", "L:1,2,1;R:1,2", "s = t & bot", GeoCase::MixedNoRelFirst),
        repl("repl-4-bound", "", "L:1,2,1;R:1", "exists z. s = z & bot", GeoCase::MixedNoRelFirst),
        irref("irref-1", "L:1", "bot", GeoCase::AllFirst),
        irref("irref-2", "L:2", "top", GeoCase::AllSecond),
        trans("trans-3", "L:1,2;R:2", "forall z. t < z -> s < z"),
        trans("trans-4", "L:2,1;R:2", "forall z. z < t -> z < u"),
        symmetry(),
        footnote(),
    ]
}

pub fn run_golden(g: &Golden) -> GoldenOutcome {
    let mut out = GoldenOutcome {
        name: g.name,
        interpolant: None,
        expected: g.expected.clone(),
        shape_ok: false,
        verified: false,
        detail: String::new(),
    };
    match interpolate(&g.derivation, &g.partition, &g.theory) {
        Ok(r) => {
            let case_ok = match g.root_case {
                Some(c) => r.geo_cases.first().map(|(_, k)| *k) == Some(c),
                None => true,
            };
            out.shape_ok = r.interpolant.alpha_eq(&g.expected) && case_ok;
            let report = verify(&r, &g.derivation.conclusion, &g.partition, &g.theory);
            out.verified = report.ok;
            out.detail = report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ");
            if !case_ok {
                out.detail.push_str(&format!("root handled by {:?}", r.geo_cases.first()));
            }
            out.interpolant = Some(r.interpolant);
        }
        Err(e) => out.detail = e.to_string(),
    }
    out
}
