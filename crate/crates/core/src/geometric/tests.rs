use std::collections::BTreeMap;

use super::*;
use crate::syntax::{parse_formula, parse_sequent};

fn rule_of(name: &str, src: &str) -> GeometricRule {
    compile_axiom(&GeometricAxiom::from_formula(name, &parse_formula(src).unwrap()).unwrap()).unwrap()
}

fn atoms(xs: &[&str]) -> Vec<Formula> {
    xs.iter().map(|s| parse_formula(s).unwrap()).collect()
}

#[test]
fn transitivity_compiles_to_trans() {
    let r = rule_of("Trans", "forall x. forall y. forall z. x < y & y < z -> x < z");
    assert_eq!(r.principal, atoms(&["x < y", "y < z"]));
    assert_eq!(r.blocks, vec![Block { eigens: vec![], atoms: atoms(&["x < z"]) }]);
    assert!(r.singular);
}

#[test]
fn irreflexivity_becomes_one_premise_bottom_rule() {
    let r = rule_of("Irref", "forall x. x < x -> bot");
    assert_eq!(r.principal, atoms(&["x < x"]));
    assert_eq!(r.blocks, vec![Block { eigens: vec![], atoms: vec![Formula::Bot] }]);
}

#[test]
fn density_has_one_eigenvariable() {
    let r = rule_of("dense", "forall x. forall y. R(x, y) -> exists z. R(x, z) & R(z, y)");
    assert_eq!(r.blocks.len(), 1);
    assert_eq!(r.blocks[0].eigens, vec!["z".to_string()]);
    assert_eq!(r.blocks[0].atoms, atoms(&["R(x, z)", "R(z, y)"]));
}

#[test]
fn anti_symmetry_is_singular() {
    let r = rule_of("anti", "forall x. forall y. R(x, y) & R(y, x) -> x = y");
    assert_eq!(is_singular(&r), (true, vec![]));
}

#[test]
fn two_predicates_violate_star() {
    let r = rule_of("mixed", "forall x. forall y. R(x, y) -> S(x, y)");
    let (ok, diags) = is_singular(&r);
    assert!(!ok);
    assert_eq!(diags.len(), 2);
    assert!(diags[0].starts_with("(a)") && diags[0].contains("R/2") && diags[0].contains("S/2"));
    assert!(diags[1].starts_with("(b)") && diags[1].contains("S/2"));
}

#[test]
fn consequent_only_predicate_violates_clause_b() {
    let r = rule_of("serial", "forall x. exists y. R(x, y)");
    let (ok, diags) = is_singular(&r);
    assert!(!ok);
    assert_eq!(diags.len(), 1);
    assert!(diags[0].starts_with("(b)"));
}

#[test]
fn malformed_axioms_rejected() {
    for src in ["forall x. P(x) -> (Q(x) -> R(x))", "forall x. P(x) | Q(x) -> R(x)", "P(x)", "forall x. exists x. P(x)"] {
        let f = parse_formula(src).unwrap();
        assert!(matches!(GeometricAxiom::from_formula("bad", &f), Err(GeoError::MalformedAxiom { .. })), "{src}");
    }
    let f = parse_formula("forall x. R(x, #a) -> bot").unwrap();
    let ax = GeometricAxiom::from_formula("con", &f).unwrap();
    assert!(matches!(compile_axiom(&ax), Err(GeoError::MalformedAxiom { .. })));
}

#[test]
fn builtins() {
    assert!(builtin_theory("G").unwrap().rules.is_empty());
    let eq = builtin_theory("G_eq").unwrap();
    let ids: Vec<&str> = eq.rules.iter().map(|r| r.id.as_str()).collect();
    assert_eq!(ids, ["Ref", "Repl"]);
    let spo = builtin_theory("SPO").unwrap();
    let ids: Vec<&str> = spo.rules.iter().map(|r| r.id.as_str()).collect();
    assert_eq!(ids, ["Ref", "Repl", "Irref", "Trans"]);
    assert!(spo.rules.iter().all(|r| is_singular(r).0));
    assert!(spo.is_singular());
    assert!(!builtin_theory("G_S12").unwrap().is_singular());
    assert_eq!(builtin_theory("nope"), Err(GeoError::UnknownTheory("nope".into())));
}

#[test]
fn relational_table_is_singular() {
    let axioms = relational_axioms();
    assert_eq!(axioms.len(), 17);
    for ax in &axioms {
        let r = compile_axiom(ax).unwrap();
        assert!(is_singular(&r).0, "{}", ax.name);
        assert!(r.blocks.iter().all(|b| !b.atoms.is_empty()));
        let t = builtin_theory(&format!("rel:{}", ax.name)).unwrap();
        assert_eq!(t.rules.len(), 1);
    }
}

#[test]
fn rendering_round_trips() {
    for ax in relational_axioms() {
        let back = GeometricAxiom::from_formula(&ax.name, &ax.to_formula()).unwrap();
        assert_eq!(back, ax);
    }
}

fn inst(pairs: &[(&str, &str)]) -> BTreeMap<String, Term> {
    pairs.iter().map(|(x, t)| (x.to_string(), crate::syntax::parse_term(t).unwrap())).collect()
}

#[test]
fn instantiate_trans() {
    let spo = builtin_theory("SPO").unwrap();
    let ctx = parse_sequent("s < t, t < u, P(s) => Q").unwrap();
    let (prem, i) = instantiate_rule(
        spo.rule("Trans").unwrap(),
        &inst(&[("x", "s"), ("y", "t"), ("z", "u")]),
        None,
        &ctx,
        &mut Fresh::new(),
    )
    .unwrap();
    assert_eq!(prem, vec![parse_sequent("s < u, s < t, t < u, P(s) => Q").unwrap()]);
    assert!(i.eigens.is_empty());
}

#[test]
fn instantiate_ref_and_incomplete() {
    let eq = builtin_theory("G_eq").unwrap();
    let ctx = parse_sequent("P(s) => Q").unwrap();
    let (prem, _) =
        instantiate_rule(eq.rule("Ref").unwrap(), &inst(&[("x", "s")]), None, &ctx, &mut Fresh::new()).unwrap();
    assert_eq!(prem, vec![parse_sequent("s = s, P(s) => Q").unwrap()]);
    let e = instantiate_rule(eq.rule("Ref").unwrap(), &BTreeMap::new(), None, &ctx, &mut Fresh::new());
    assert_eq!(e, Err(GeoError::IncompleteInstantiation { rule: "Ref".into(), var: "x".into() }));
}

#[test]
fn instantiate_repl_checks_the_atom_pair() {
    let eq = builtin_theory("G_eq").unwrap();
    let r = eq.rule("Repl").unwrap();
    let ctx = parse_sequent("s = t, P(s, s) =>").unwrap();
    let pair = |a: &str, b: &str| Some((parse_formula(a).unwrap(), parse_formula(b).unwrap()));
    let (prem, _) =
        instantiate_rule(r, &inst(&[("x", "s"), ("y", "t")]), pair("P(s, s)", "P(s, t)"), &ctx, &mut Fresh::new())
            .unwrap();
    assert_eq!(prem, vec![parse_sequent("P(s, t), s = t, P(s, s) =>").unwrap()]);
    let bad = instantiate_rule(r, &inst(&[("x", "s"), ("y", "t")]), pair("P(s, s)", "P(t, u)"), &ctx, &mut Fresh::new());
    assert!(matches!(bad, Err(GeoError::BadInstance { .. })));
}

#[test]
fn dense_eigen_is_fresh() {
    let t = builtin_theory("rel:dense").unwrap();
    let ctx = parse_sequent("R(a, _v0) => R(_v1, a)").unwrap();
    let (prem, i) =
        instantiate_rule(&t.rules[0], &inst(&[("x", "a"), ("y", "_v0")]), None, &ctx, &mut Fresh::new()).unwrap();
    assert_eq!(i.eigens.len(), 1);
    assert!(!ctx.free_vars().contains(&i.eigens[0]));
    let z = Term::var(i.eigens[0].clone());
    let want_ant = [Formula::atom("R", vec![Term::var("a"), z.clone()]),
        Formula::atom("R", vec![z, Term::var("_v0")])];
    assert!(want_ant.iter().all(|a| prem[0].ant.contains(a)));
}

#[test]
fn theory_file() {
    let src = "// orders\ntheory ord\nextends G_eq\npred R/2\naxiom trans: forall x. forall y. forall z. R(x, y) & R(y, z) -> R(x, z)\n";
    let c = compile_theory_file(src).unwrap();
    assert_eq!(c.theory.name, "ord");
    assert_eq!(c.theory.rules.len(), 3);
    assert!(c.reports.iter().all(|r| r.singular));
}

#[test]
fn theory_file_errors_have_positions() {
    let e = compile_theory_file("theory t\npred R/2\naxiom a: forall x. R(x, x) &\n").unwrap_err();
    assert_eq!(e, GeoError::TheoryFile { line: 3, col: 29, msg: "expected a formula, found end of input".into() });
    let e = compile_theory_file("theory t\naxiom a: forall x. S(x) -> bot\n").unwrap_err();
    assert!(matches!(e, GeoError::TheoryFile { line: 2, col: 9, .. }), "{e}");
    let e = compile_theory_file("pred R/2\n").unwrap_err();
    assert!(matches!(e, GeoError::TheoryFile { line: 1, col: 1, .. }));
    let e = compile_theory_file("theory t\npred R/2\naxiom a: forall x. R(x, x) -> (R(x, x) -> R(x, x))\n").unwrap_err();
    assert!(matches!(e, GeoError::TheoryFile { line: 3, .. }));
}

#[test]
fn non_singular_theory_file_reports() {
    let c = compile_theory_file("theory two\npred R/2\npred S/2\naxiom inc: forall x. forall y. R(x, y) -> S(x, y)\n")
        .unwrap();
    assert!(!c.reports[0].singular);
    assert!(!c.theory.is_singular());
}
