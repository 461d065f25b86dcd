use super::*;
use crate::geometric::builtin_theory;
use crate::golden::{goldens, run_golden};
use crate::kernel::{leaf, print_derivation};
use crate::syntax::{parse_formula, parse_sequent};

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn base(seq: &str, p: &str) -> InterpolationResult {
    let d = leaf(&parse_sequent(seq).unwrap()).unwrap();
    let p = Partition::parse(p).unwrap();
    let t = builtin_theory("G").unwrap();
    let r = interpolate(&d, &p, &t).unwrap();
    let v = verify(&r, &d.conclusion, &p, &t);
    assert!(v.ok, "{:?}", v.violations);
    r
}

#[test]
fn partition_syntax() {
    let p = Partition::parse("L:1,2;R:2").unwrap();
    assert_eq!(p.ant, vec![Half::One, Half::Two]);
    assert_eq!(p.suc, vec![Half::Two]);
    assert_eq!(p.to_string(), "L:1,2;R:2");
    assert_eq!(Partition::parse("R:1").unwrap().ant, vec![]);
    for bad in ["L:3", "X:1", "L:1;L:2", "L1"] {
        assert!(matches!(Partition::parse(bad), Err(InterpError::MalformedPartition(_))), "{bad}");
    }
}

#[test]
fn partition_enumeration() {
    let s = parse_sequent("P, Q => R").unwrap();
    let all = Partition::enumerate(&s, 64);
    assert_eq!(all.len(), 8);
    assert_eq!(all[0].to_string(), "L:1,1;R:1");
    assert_eq!(all[1].to_string(), "L:2,1;R:1");
    assert_eq!(all[7].to_string(), "L:2,2;R:2");
    assert_eq!(Partition::enumerate(&s, 3).len(), 3);
}

#[test]
fn initial_sequent_table() {
    assert_eq!(base("P => P", "L:1;R:1").interpolant, Formula::Bot);
    assert_eq!(base("P => P", "L:2;R:2").interpolant, Formula::Top);
    assert_eq!(base("P => P", "L:1;R:2").interpolant, f("P"));
    assert_eq!(base("P => P", "L:2;R:1").interpolant, f("P -> bot"));
    assert_eq!(base("bot => Q", "L:1;R:2").interpolant, Formula::Bot);
    assert_eq!(base("bot => Q", "L:2;R:1").interpolant, Formula::Top);
    assert_eq!(base("Q => top", "L:2;R:1").interpolant, Formula::Bot);
    assert_eq!(base("Q => top", "L:1;R:2").interpolant, Formula::Top);
}

#[test]
fn golden_suite() {
    for g in goldens() {
        let o = run_golden(&g);
        assert!(
            o.passed(),
            "{}: got {:?}, expected {}; {}\n{}",
            o.name,
            o.interpolant.map(|c| c.to_string()),
            o.expected,
            o.detail,
            print_derivation(&g.derivation)
        );
    }
}

#[test]
fn conjunctive_variant_of_mixed_case() {
    let g = goldens().into_iter().find(|g| g.name == "trans-3").unwrap();
    let cfg = InterpConfig { mixed: Mixed::Conjunctive };
    let r = interpolate_with(&g.derivation, &g.partition, &g.theory, &cfg).unwrap();
    assert_eq!(r.interpolant, f("s < t & top"));
    assert!(verify(&r, &g.derivation.conclusion, &g.partition, &g.theory).ok);
}

#[test]
fn logical_rules_and_quantifiers() {
    let t = builtin_theory("G").unwrap();
    let mut fresh = crate::fresh::Fresh::new();
    let d = crate::kernel::axiom_expansion(&f("forall x. (P(x) -> exists y. R(x, y))"), &[f("Q")], &[], &mut fresh);
    for p in Partition::enumerate(&d.conclusion, 64) {
        let r = interpolate(&d, &p, &t).unwrap();
        let v = verify(&r, &d.conclusion, &p, &t);
        assert!(v.ok, "{p}: {} {:?}", r.interpolant, v.violations);
    }
}

#[test]
fn tampering_is_detected() {
    let g = goldens().into_iter().find(|g| g.name == "trans-4").unwrap();
    let mut r = interpolate(&g.derivation, &g.partition, &g.theory).unwrap();
    let good = verify(&r, &g.derivation.conclusion, &g.partition, &g.theory);
    assert!(good.ok);
    r.interpolant = f("forall z. z < t -> z < s");
    let bad = verify(&r, &g.derivation.conclusion, &g.partition, &g.theory);
    assert!(!bad.ok);
    assert!(bad.violations.iter().any(|v| v.reason.starts_with("witness I")));
    assert!(bad.violations.iter().any(|v| v.reason.starts_with("language")));

    let mut r = interpolate(&g.derivation, &g.partition, &g.theory).unwrap();
    std::mem::swap(&mut r.witness1, &mut r.witness2);
    assert!(!verify(&r, &g.derivation.conclusion, &g.partition, &g.theory).ok);
}

#[test]
fn offending_terms_outside_common_vocabulary() {
    let s1 = [f("P(s, t)")];
    let s2 = [f("Q(t, u)")];
    assert_eq!(offending_terms(&f("R(s, t, u)"), &s1, &s2), vec![Term::var("s"), Term::var("u")]);
    assert!(offending_terms(&f("forall z. R(z, t)"), &s1, &s2).is_empty());
}

#[test]
fn rejects_bad_inputs() {
    let d = leaf(&parse_sequent("P => P").unwrap()).unwrap();
    let s12 = builtin_theory("G_S12").unwrap();
    assert!(matches!(interpolate(&d, &Partition::parse("L:1;R:1").unwrap(), &s12), Err(InterpError::NonSingularTheory(_))));
    let g = builtin_theory("G").unwrap();
    assert!(matches!(interpolate(&d, &Partition::parse("L:1,1;R:1").unwrap(), &g), Err(InterpError::MalformedPartition(_))));
    let eq = goldens().into_iter().find(|g| g.name == "symmetry").unwrap();
    assert!(matches!(interpolate(&eq.derivation, &eq.partition, &g), Err(InterpError::InvalidDerivation(_))));
}
