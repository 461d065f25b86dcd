mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use singular_interp::fresh::Fresh;
use singular_interp::gen::{GenConfig, Generator};
use singular_interp::geometric::{builtin_theory, TheorySpec};
use singular_interp::interpolate::{interpolate, interpolate_with, verify, Half, InterpConfig, Mixed, Partition};
use singular_interp::kernel::{check, parse_derivation, print_derivation, weaken, Derivation, Side};
use singular_interp::syntax::{parse_formula, parse_sequent};

fn theory(i: usize) -> TheorySpec {
    builtin_theory(["G", "G_eq", "SPO"][i]).unwrap()
}

fn sample(t: &TheorySpec, seed: u64) -> Derivation {
    Generator::new(seed, t, GenConfig::for_theory(t)).derivation()
}

fn partition_from(d: &Derivation, bits: u64) -> Partition {
    let n = d.conclusion.ant.len();
    let half = |i: usize| if (bits >> (i % 64)) & 1 == 1 { Half::Two } else { Half::One };
    Partition::new((0..n).map(half).collect(), (0..d.conclusion.suc.len()).map(|j| half(n + j)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn extraction_verifies(seed in any::<u64>(), bits in any::<u64>(), ti in 0usize..3, conjunctive in any::<bool>()) {
        let t = theory(ti);
        let d = sample(&t, seed);
        let p = partition_from(&d, bits);
        let cfg = InterpConfig { mixed: if conjunctive { Mixed::Conjunctive } else { Mixed::Implicative } };
        let r = interpolate_with(&d, &p, &t, &cfg).unwrap();
        let v = verify(&r, &d.conclusion, &p, &t);
        prop_assert!(v.ok, "{:?}", v.violations);
        prop_assert!(r.report.in_side1 && r.report.in_side2);
    }

    #[test]
    fn oracle_agrees_without_geometric_rules(seed in any::<u64>(), bits in any::<u64>()) {
        let t = theory(0);
        let d = sample(&t, seed);
        let p = partition_from(&d, bits);
        let ours = interpolate(&d, &p, &t).unwrap().interpolant;
        let theirs = common::oracle(&d, &p).unwrap();
        prop_assert!(ours.alpha_eq(&theirs), "{} vs {}", ours, theirs);
    }

    #[test]
    fn weakening_preserves_height(seed in any::<u64>(), ti in 0usize..3, left in any::<bool>()) {
        let t = theory(ti);
        let mut g = Generator::new(seed, &t, GenConfig::for_theory(&t));
        let d = g.derivation();
        let a = g.formula(2);
        let mut fresh = Fresh::avoiding(&d.var_names());
        let w = weaken(&d, &a, if left { Side::Left } else { Side::Right }, &mut fresh);
        prop_assert_eq!(w.height(), d.height());
        prop_assert!(check(&w, &t).ok);
    }

    #[test]
    fn derivation_text_round_trips(seed in any::<u64>(), ti in 0usize..3) {
        let t = theory(ti);
        let d = sample(&t, seed);
        let txt = print_derivation(&d);
        let back = parse_derivation(&txt).unwrap();
        prop_assert_eq!(print_derivation(&back), txt);
        prop_assert_eq!(back, d);
    }

    #[test]
    fn formula_text_round_trips(seed in any::<u64>()) {
        let t = theory(2);
        let mut g = Generator::new(seed, &t, GenConfig::for_theory(&t));
        let f = g.formula(4);
        let back = parse_formula(&f.to_string()).unwrap();
        prop_assert_eq!(back, f);
    }
}

#[test]
fn corpora_reach_every_geometric_case() {
    let mut seen = BTreeSet::new();
    for name in ["G_eq", "SPO"] {
        let t = builtin_theory(name).unwrap();
        for d in common::corpus(&t, 11, 150) {
            for p in Partition::enumerate(&d.conclusion, 16) {
                let r = interpolate(&d, &p, &t).unwrap();
                seen.extend(r.geo_cases.iter().map(|(_, c)| c.label()));
            }
        }
    }
    for label in ["1", "2", "3.1", "3.2", "3.3", "4"] {
        assert!(seen.contains(label), "case {label} never reached; saw {seen:?}");
    }
}

#[test]
fn relational_theories_extract() {
    for name in singular_interp::geometric::relational_axioms().iter().map(|a| a.name.clone()) {
        let t = builtin_theory(&format!("rel:{name}")).unwrap();
        for d in common::corpus(&t, 5, 20) {
            for p in Partition::enumerate(&d.conclusion, 8) {
                let r = interpolate(&d, &p, &t).unwrap();
                assert!(verify(&r, &d.conclusion, &p, &t).ok, "{name} {p}");
            }
        }
    }
}

#[test]
fn sequent_partition_positional() {
    let s = parse_sequent("P, P => P").unwrap();
    let p = Partition::parse("L:1,2;R:2").unwrap();
    let split = p.split(&s);
    assert_eq!((split.g1.len(), split.g2.len(), split.d1.len(), split.d2.len()), (1, 1, 0, 1));
}
