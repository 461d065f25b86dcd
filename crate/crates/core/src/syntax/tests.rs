use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn v(s: &str) -> Term {
    Term::var(s)
}

fn c(s: &str) -> Term {
    Term::constant(s)
}

fn vars(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

#[test]
fn free_vars_examples() {
    assert_eq!(f("P(x, #a)").free_vars(), vars(&["x"]));
    assert_eq!(f("forall x. P(x, y)").free_vars(), vars(&["y"]));
    assert_eq!(f("x = y & exists y. Q(y)").free_vars(), vars(&["x", "y"]));
}

#[test]
fn ter_examples() {
    assert_eq!(f("P(x, #a)").ter(), BTreeSet::from([v("x"), c("a")]));
    assert_eq!(f("forall x. P(x, #a)").ter(), BTreeSet::from([c("a")]));
    assert_eq!(f("s = t").ter(), BTreeSet::from([v("s"), v("t")]));
}

#[test]
fn rel_excludes_identity() {
    assert!(f("s = t").rel().is_empty());
    assert_eq!(f("P(x) -> bot").rel(), BTreeSet::from([Pred::new("P", 1)]));
    assert_eq!(f("x < y & x = y").rel(), BTreeSet::from([Pred::new("<", 2)]));
}

#[test]
fn language_examples() {
    let l = f("s = t").lang();
    assert_eq!(l.terms, BTreeSet::from([v("s"), v("t")]));
    assert!(l.preds.is_empty());
    assert_eq!(Formula::Top.lang(), Language::default());
    let seq = parse_sequent("P(#a), Q(x) =>").unwrap();
    let l = seq.lang();
    assert_eq!(l.terms, BTreeSet::from([v("x"), c("a")]));
    assert_eq!(l.preds, BTreeSet::from([Pred::new("P", 1), Pred::new("Q", 1)]));
}

#[test]
fn predicates_are_name_and_arity() {
    let a = f("P(x) & P(x, y)");
    assert_eq!(a.rel().len(), 2);
}

#[test]
fn simultaneous_substitution() {
    let a = f("x < y");
    let r = a.subst_vars(&["x".into(), "y".into()], &[v("y"), v("x")]).unwrap();
    assert_eq!(r, f("y < x"));
    let a = f("forall x. P(x, y)");
    assert_eq!(a.subst_vars(&["x".into()], &[c("a")]).unwrap(), a);
    let a = f("exists y. x < y");
    assert_eq!(a.subst_vars(&["x".into()], &[v("y")]), Err(SubstError::Capture("y".into())));
    assert_eq!(a.subst_vars(&["x".into()], &[]), Err(SubstError::Arity(1, 0)));
}

#[test]
fn term_for_term_substitution() {
    let a = f("P(#a) & #a = #b");
    assert_eq!(a.subst_term(&c("a"), &v("x")).unwrap(), f("P(x) & x = #b"));
    assert_eq!(f("s < s").subst_term(&v("s"), &v("z")).unwrap(), f("z < z"));
    assert_eq!(
        f("forall x. P(x, #a)").subst_term(&c("a"), &v("x")),
        Err(SubstError::Capture("x".into()))
    );
}

#[test]
fn multiset_semantics() {
    let aab = Sequent::new(vec![f("A"), f("A"), f("B")], vec![]);
    let ab = Sequent::new(vec![f("A"), f("B")], vec![]);
    let ba = Sequent::new(vec![f("B"), f("A")], vec![]);
    assert_ne!(aab, ab);
    assert_eq!(ab, ba);
}

#[test]
fn printing_is_canonical() {
    let cases = [
        ("P(x,y)", "P(x, y)"),
        ("A -> B -> C", "A -> B -> C"),
        ("(A -> B) -> C", "(A -> B) -> C"),
        ("A & B | C", "A & B | C"),
        ("A & (B | C)", "A & (B | C)"),
        ("!A & B", "!A & B"),
        ("!(A & B)", "!(A & B)"),
        ("A -> bot", "!A"),
        ("forall x. P(x) -> Q(x)", "forall x. P(x) -> Q(x)"),
        ("(forall x. P(x)) -> Q(x)", "(forall x. P(x)) -> Q(x)"),
        ("A & forall x. P(x)", "A & (forall x. P(x))"),
        ("#a = x", "#a = x"),
        ("(A & B) & C", "(A & B) & C"),
    ];
    for (src, want) in cases {
        assert_eq!(f(src).to_string(), want, "printing {src}");
        assert_eq!(f(want), f(src));
    }
    let s = parse_sequent("A, B => C").unwrap();
    assert_eq!(s.to_string(), "A, B => C");
    assert_eq!(parse_sequent("=>").unwrap().to_string(), "=>");
    assert_eq!(parse_sequent("A =>").unwrap().to_string(), "A =>");
    assert_eq!(parse_sequent("=> top | bot").unwrap().to_string(), "=> top | bot");
}

#[test]
fn parse_errors_carry_positions() {
    let e = parse_formula("P(x) & ").unwrap_err();
    assert_eq!(e.pos, 7);
    let e = parse_formula("P(x) $ Q").unwrap_err();
    assert_eq!(e.pos, 5);
    assert!(parse_formula("forall bot. P").is_err());
    assert!(parse_sequent("A, B").is_err());
}

#[test]
fn alpha_equivalence() {
    assert!(f("forall x. P(x)").alpha_eq(&f("forall y. P(y)")));
    assert!(!f("forall x. P(x, y)").alpha_eq(&f("forall y. P(y, y)")));
    assert!(f("exists x. forall y. x < y").alpha_eq(&f("exists u. forall w. u < w")));
    assert!(!f("exists x. forall y. x < y").alpha_eq(&f("exists u. forall w. w < u")));
}

// Independent free-variable oracle: enumerate variable occurrences with the
// list of binders above them.
fn fv_oracle(a: &Formula) -> BTreeSet<String> {
    fn occurrences(a: &Formula, scope: &[String], out: &mut Vec<(String, Vec<String>)>) {
        match a {
            Formula::Atom(_, args) => {
                for t in args {
                    if let Term::Var(x) = t {
                        out.push((x.clone(), scope.to_vec()));
                    }
                }
            }
            Formula::Bot | Formula::Top => {}
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                occurrences(l, scope, out);
                occurrences(r, scope, out);
            }
            Formula::Forall(x, b) | Formula::Exists(x, b) => {
                let mut s = scope.to_vec();
                s.push(x.clone());
                occurrences(b, &s, out);
            }
        }
    }
    let mut occ = Vec::new();
    occurrences(a, &[], &mut occ);
    occ.into_iter().filter(|(x, scope)| !scope.contains(x)).map(|(x, _)| x).collect()
}

fn arb_term() -> impl Strategy<Value = Term> {
    prop_oneof![
        prop::sample::select(vec!["x", "y", "z", "w"]).prop_map(Term::var),
        prop::sample::select(vec!["a", "b"]).prop_map(Term::constant),
    ]
}

pub(crate) fn arb_formula() -> impl Strategy<Value = Formula> {
    let atom = prop_oneof![
        (arb_term(), arb_term()).prop_map(|(s, t)| Formula::eq(s, t)),
        (arb_term(), arb_term()).prop_map(|(s, t)| Formula::atom("<", vec![s, t])),
        (prop::sample::select(vec!["P", "Q"]), arb_term(), arb_term()).prop_map(|(p, s, t)| Formula::atom(p, vec![s, t])),
        Just(Formula::Bot),
        Just(Formula::Top),
    ];
    atom.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (prop::sample::select(vec!["x", "y", "z"]), inner.clone()).prop_map(|(x, a)| Formula::forall(x, a)),
            (prop::sample::select(vec!["x", "y", "z"]), inner).prop_map(|(x, a)| Formula::exists(x, a)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn free_vars_match_oracle(a in arb_formula()) {
        prop_assert_eq!(a.free_vars(), fv_oracle(&a));
    }

    #[test]
    fn ter_is_free_vars_and_constants(a in arb_formula()) {
        let mut expect: BTreeSet<Term> = a.free_vars().into_iter().map(Term::Var).collect();
        expect.extend(a.constants().into_iter().map(Term::Const));
        prop_assert_eq!(a.ter(), expect);
    }

    #[test]
    fn print_parse_round_trip(a in arb_formula()) {
        let text = a.to_string();
        let back = parse_formula(&text).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn identity_substitution(a in arb_formula(), u in arb_term()) {
        prop_assert_eq!(a.subst_term(&u, &u).unwrap(), a);
    }

    #[test]
    fn substitution_keeps_predicates(a in arb_formula(), u in arb_term(), t in arb_term()) {
        if let Ok(b) = a.subst_term(&u, &t) {
            prop_assert_eq!(b.rel(), a.rel());
        }
    }

    #[test]
    fn fresh_renaming_is_invertible(a in arb_formula()) {
        let xs: Vec<String> = a.free_vars().into_iter().collect();
        let zs: Vec<Term> = (0..xs.len()).map(|i| Term::var(format!("_f{i}"))).collect();
        let renamed = a.subst_vars(&xs, &zs).unwrap();
        let zs_names: Vec<String> = zs.iter().map(|z| z.name().to_string()).collect();
        let back_terms: Vec<Term> = xs.iter().cloned().map(Term::Var).collect();
        // Renaming back can only fail by capture, which fresh names rule out
        // except where a bound variable of `a` coincides with an original name.
        if let Ok(back) = renamed.subst_vars(&zs_names, &back_terms) {
            prop_assert_eq!(back, a);
        }
    }
}
