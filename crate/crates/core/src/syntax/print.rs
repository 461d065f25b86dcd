use std::fmt;

use super::{Formula, Sequent, Term};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => write!(f, "#{c}"),
        }
    }
}

// Binding strength: `->` 1, `|` 2, `&` 3, `!` and atoms 4.
// Binary connectives associate to the right. Quantifiers are parenthesised
// whenever they are an operand.
fn write_formula(out: &mut fmt::Formatter<'_>, a: &Formula, prec: u8) -> fmt::Result {
    let paren = |out: &mut fmt::Formatter<'_>, level: u8, body: &dyn Fn(&mut fmt::Formatter<'_>) -> fmt::Result| {
        if prec > level {
            write!(out, "(")?;
            body(out)?;
            write!(out, ")")
        } else {
            body(out)
        }
    };
    match a {
        Formula::Atom(p, args) => match (p.name.as_str(), args.as_slice()) {
            ("=", [s, t]) | ("<", [s, t]) => write!(out, "{s} {} {t}", p.name),
            (_, []) => write!(out, "{}", p.name),
            _ => {
                let args: Vec<String> = args.iter().map(|t| t.to_string()).collect();
                write!(out, "{}({})", p.name, args.join(", "))
            }
        },
        Formula::Bot => write!(out, "bot"),
        Formula::Top => write!(out, "top"),
        Formula::Imp(x, y) if **y == Formula::Bot => {
            write!(out, "!")?;
            write_formula(out, x, 4)
        }
        Formula::Imp(x, y) => paren(out, 1, &|out| {
            write_formula(out, x, 2)?;
            write!(out, " -> ")?;
            write_formula(out, y, 1)
        }),
        Formula::Or(x, y) => paren(out, 2, &|out| {
            write_formula(out, x, 3)?;
            write!(out, " | ")?;
            write_formula(out, y, 2)
        }),
        Formula::And(x, y) => paren(out, 3, &|out| {
            write_formula(out, x, 4)?;
            write!(out, " & ")?;
            write_formula(out, y, 3)
        }),
        Formula::Forall(v, body) | Formula::Exists(v, body) => paren(out, 0, &|out| {
            let q = if matches!(a, Formula::Forall(..)) { "forall" } else { "exists" };
            write!(out, "{q} {v}. ")?;
            write_formula(out, body, 0)
        }),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, 0)
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[Formula]) -> fmt::Result {
    for (i, a) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.ant)?;
        if !self.ant.is_empty() {
            write!(f, " ")?;
        }
        write!(f, "=>")?;
        if !self.suc.is_empty() {
            write!(f, " ")?;
        }
        write_list(f, &self.suc)
    }
}
