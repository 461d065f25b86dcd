use crate::syntax::{parse_formula, Formula, Term};

use super::{compile_axiom, Block, GeoError, GeometricAxiom, GeometricRule, InitialScheme, Scheme, TheorySpec};

pub const BUILTIN_NAMES: [&str; 4] = ["G", "G_eq", "SPO", "G_S12"];

/// Singular geometric axioms for a binary relation `R`.
const RELATIONAL: [(&str, &str); 17] = [
    ("irreflexive", "forall x. R(x, x) -> bot"),
    ("transitive", "forall x. forall y. forall z. R(x, y) & R(y, z) -> R(x, z)"),
    ("intransitive", "forall x. forall y. forall z. R(x, y) & R(y, z) & R(x, z) -> bot"),
    ("co-transitive", "forall x. forall y. forall z. R(x, y) -> R(x, z) | R(z, y)"),
    ("symmetric", "forall x. forall y. R(x, y) -> R(y, x)"),
    ("asymmetric", "forall x. forall y. R(x, y) & R(y, x) -> bot"),
    ("anti-symmetric", "forall x. forall y. R(x, y) & R(y, x) -> x = y"),
    ("euclidean", "forall x. forall y. forall z. R(x, z) & R(y, z) -> R(x, y)"),
    ("left-unique", "forall x. forall y. forall z. R(x, z) & R(y, z) -> x = y"),
    ("right-unique", "forall x. forall y. forall z. R(z, x) & R(z, y) -> x = y"),
    ("connected", "forall x. forall y. forall z. R(x, y) & R(x, z) -> R(y, z) | R(z, y)"),
    ("nilpotent", "forall x. forall y. forall z. R(x, z) & R(z, y) -> bot"),
    ("left-ideal", "forall x. forall y. forall z. R(x, y) -> R(x, z)"),
    ("right-ideal", "forall x. forall y. forall z. R(x, y) -> R(z, y)"),
    ("rectangular", "forall x. forall y. forall z. forall v. R(x, z) & R(v, y) -> R(x, y)"),
    ("dense", "forall x. forall y. R(x, y) -> exists z. R(x, z) & R(z, y)"),
    ("confluent", "forall x. forall y. forall z. R(x, y) & R(x, z) -> exists u. R(y, u) & R(z, u)"),
];

/// The relational table as parsed axioms, in table order.
pub fn relational_axioms() -> Vec<GeometricAxiom> {
    RELATIONAL
        .iter()
        .map(|(name, src)| {
            let f = parse_formula(src).expect("built-in axiom parses");
            GeometricAxiom::from_formula(name, &f).expect("built-in axiom is geometric")
        })
        .collect()
}

fn axiom_rule(name: &str, src: &str) -> GeometricRule {
    let f = parse_formula(src).expect("built-in axiom parses");
    compile_axiom(&GeometricAxiom::from_formula(name, &f).expect("built-in axiom is geometric"))
        .expect("built-in axiom compiles")
}

pub fn ref_rule() -> GeometricRule {
    GeometricRule {
        id: "Ref".into(),
        universals: vec!["x".into()],
        principal: Vec::new(),
        blocks: vec![Block { eigens: Vec::new(), atoms: vec![Formula::eq(Term::var("x"), Term::var("x"))] }],
        singular: true,
        scheme: None,
    }
}

pub fn repl_rule() -> GeometricRule {
    GeometricRule {
        id: "Repl".into(),
        universals: vec!["x".into(), "y".into()],
        principal: vec![Formula::eq(Term::var("x"), Term::var("y"))],
        blocks: vec![Block { eigens: Vec::new(), atoms: Vec::new() }],
        singular: true,
        scheme: Some(Scheme::Replacement),
    }
}

fn with_rules(name: &str, rules: Vec<GeometricRule>) -> TheorySpec {
    let mut t = TheorySpec::new(name);
    for r in rules {
        t.push_rule(r).expect("built-in rule ids are unique");
    }
    t
}

/// `G`, `G_eq`, `SPO`, `G_S12` (plain G plus the identity initial sequents
/// S1/S2), or `rel:<name>` for a row of the relational table.
pub fn builtin_theory(name: &str) -> Result<TheorySpec, GeoError> {
    match name {
        "G" => Ok(TheorySpec::new("G")),
        "G_eq" => Ok(with_rules("G_eq", vec![ref_rule(), repl_rule()])),
        "SPO" => Ok(with_rules(
            "SPO",
            vec![
                ref_rule(),
                repl_rule(),
                axiom_rule("Irref", "forall x. x < x -> bot"),
                axiom_rule("Trans", "forall x. forall y. forall z. x < y & y < z -> x < z"),
            ],
        )),
        "G_S12" => {
            let mut t = TheorySpec::new("G_S12");
            t.initial = vec![InitialScheme::Reflexivity, InitialScheme::Replacement];
            Ok(t)
        }
        _ => {
            let row = name.strip_prefix("rel:").and_then(|n| RELATIONAL.iter().find(|(r, _)| *r == n));
            match row {
                Some((r, src)) => Ok(with_rules(name, vec![axiom_rule(r, src)])),
                None => Err(GeoError::UnknownTheory(name.to_string())),
            }
        }
    }
}
