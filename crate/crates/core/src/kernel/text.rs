//! Line-oriented derivation format. Each node is one line,
//!
//! ```text
//! <indent><tag> [<data>] |- <sequent>
//! ```
//!
//! indented by two spaces per level, with premises listed below their
//! conclusion in order. `data` is a `; `-separated list of `key=value`
//! items: `p` (principal occurrences such as `l0,r1`), `w` (witness term),
//! `e` (eigenvariable), `inst` (rule instantiation `x:=s,y:=t`), `eig`
//! (geometric eigenvariables), `src`/`tgt` (replacement atoms).

use std::collections::BTreeMap;

use thiserror::Error;

use crate::geometric::{InitialScheme, Instance};
use crate::syntax::{parse_formula, parse_sequent, parse_term, Term};

use super::{Derivation, Occ, Rule, Side};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("derivation line {line}: {msg}")]
pub struct DerivationParseError {
    pub line: usize,
    pub msg: String,
}

fn tag(r: &Rule) -> String {
    match r {
        Rule::Init => "init".into(),
        Rule::InitTop => "init-top".into(),
        Rule::InitBot => "init-bot".into(),
        Rule::LAnd => "L&".into(),
        Rule::RAnd => "R&".into(),
        Rule::LOr => "L|".into(),
        Rule::ROr => "R|".into(),
        Rule::LImp => "L->".into(),
        Rule::RImp => "R->".into(),
        Rule::LForall(_) => "Lforall".into(),
        Rule::RForall(_) => "Rforall".into(),
        Rule::LExists(_) => "Lexists".into(),
        Rule::RExists(_) => "Rexists".into(),
        Rule::Geo(id, _) => format!("geo:{id}"),
        Rule::Axiom(s) => format!("ax:{}", s.id()),
    }
}

fn data(d: &Derivation) -> Vec<String> {
    let mut items = Vec::new();
    if !d.principal.is_empty() {
        let ps: Vec<String> = d
            .principal
            .iter()
            .map(|o| format!("{}{}", if o.side == Side::Left { "l" } else { "r" }, o.index))
            .collect();
        items.push(format!("p={}", ps.join(",")));
    }
    match &d.rule {
        Rule::LForall(t) | Rule::RExists(t) => items.push(format!("w={t}")),
        Rule::RForall(y) | Rule::LExists(y) => items.push(format!("e={y}")),
        Rule::Geo(_, inst) => {
            if !inst.terms.is_empty() {
                let ts: Vec<String> = inst.terms.iter().map(|(x, t)| format!("{x}:={t}")).collect();
                items.push(format!("inst={}", ts.join(",")));
            }
            if !inst.eigens.is_empty() {
                items.push(format!("eig={}", inst.eigens.join(",")));
            }
            if let Some((src, tgt)) = &inst.replace {
                items.push(format!("src={src}"));
                items.push(format!("tgt={tgt}"));
            }
        }
        _ => {}
    }
    items
}

pub fn print_derivation(d: &Derivation) -> String {
    fn go(d: &Derivation, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&tag(&d.rule));
        let items = data(d);
        if !items.is_empty() {
            out.push_str(" [");
            out.push_str(&items.join("; "));
            out.push(']');
        }
        out.push_str(" |- ");
        out.push_str(&d.conclusion.to_string());
        out.push('\n');
        for p in &d.premises {
            go(p, depth + 1, out);
        }
    }
    let mut out = String::new();
    go(d, 0, &mut out);
    out
}

struct Line {
    no: usize,
    depth: usize,
    node: Derivation,
}

fn parse_occ(s: &str) -> Option<Occ> {
    let (side, idx) = match s.split_at_checked(1)? {
        ("l", i) => (Side::Left, i),
        ("r", i) => (Side::Right, i),
        _ => return None,
    };
    Some(Occ { side, index: idx.parse().ok()? })
}

fn parse_line(no: usize, raw: &str) -> Result<Line, DerivationParseError> {
    let fail = |msg: String| DerivationParseError { line: no, msg };
    let body = raw.trim_start_matches(' ');
    let spaces = raw.len() - body.len();
    if !spaces.is_multiple_of(2) {
        return Err(fail("indentation must be a multiple of two spaces".into()));
    }
    let (head, seq) = body.split_once(" |- ").ok_or_else(|| fail("missing ` |- `".into()))?;
    let conclusion = parse_sequent(seq).map_err(|e| fail(e.to_string()))?;
    let (tag, data) = match head.split_once(" [") {
        Some((t, rest)) => (t, rest.strip_suffix(']').ok_or_else(|| fail("unterminated `[`".into()))?),
        None => (head, ""),
    };
    let mut items: BTreeMap<&str, &str> = BTreeMap::new();
    for item in data.split("; ").filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| fail(format!("data item `{item}` lacks `=`")))?;
        if items.insert(k, v).is_some() {
            return Err(fail(format!("data key `{k}` repeated")));
        }
    }
    let mut take = |k: &str| items.remove(k);
    let principal = match take("p") {
        Some(p) => p
            .split(',')
            .map(|o| parse_occ(o).ok_or_else(|| fail(format!("bad occurrence `{o}`"))))
            .collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };
    let term = |v: Option<&str>, k: &str| -> Result<Term, DerivationParseError> {
        let v = v.ok_or_else(|| fail(format!("`{tag}` needs `{k}=`")))?;
        parse_term(v).map_err(|e| fail(e.to_string()))
    };
    let var = |v: Option<&str>| -> Result<String, DerivationParseError> {
        match term(v, "e")? {
            Term::Var(y) => Ok(y),
            Term::Const(c) => Err(fail(format!("eigenvariable `#{c}` is a constant"))),
        }
    };
    let formula = |v: &str| parse_formula(v).map_err(|e| fail(e.to_string()));
    let rule = match tag {
        "init" => Rule::Init,
        "init-top" => Rule::InitTop,
        "init-bot" => Rule::InitBot,
        "L&" => Rule::LAnd,
        "R&" => Rule::RAnd,
        "L|" => Rule::LOr,
        "R|" => Rule::ROr,
        "L->" => Rule::LImp,
        "R->" => Rule::RImp,
        "Lforall" => Rule::LForall(term(take("w"), "w")?),
        "Rexists" => Rule::RExists(term(take("w"), "w")?),
        "Rforall" => Rule::RForall(var(take("e"))?),
        "Lexists" => Rule::LExists(var(take("e"))?),
        "ax:S1" => Rule::Axiom(InitialScheme::Reflexivity),
        "ax:S2" => Rule::Axiom(InitialScheme::Replacement),
        t if t.starts_with("geo:") && t.len() > 4 => {
            let mut inst = Instance::default();
            if let Some(ts) = take("inst") {
                for pair in ts.split(',') {
                    let (x, t) = pair.split_once(":=").ok_or_else(|| fail(format!("bad instantiation `{pair}`")))?;
                    let t = parse_term(t).map_err(|e| fail(e.to_string()))?;
                    inst.terms.insert(x.to_string(), t);
                }
            }
            if let Some(es) = take("eig") {
                inst.eigens = es.split(',').map(String::from).collect();
            }
            inst.replace = match (take("src"), take("tgt")) {
                (Some(s), Some(t)) => Some((formula(s)?, formula(t)?)),
                (None, None) => None,
                _ => return Err(fail("`src` and `tgt` must appear together".into())),
            };
            Rule::Geo(t[4..].to_string(), inst)
        }
        other => return Err(fail(format!("unknown rule tag `{other}`"))),
    };
    if let Some(k) = items.keys().next() {
        return Err(fail(format!("unexpected data key `{k}` for `{tag}`")));
    }
    Ok(Line { no, depth: spaces / 2, node: Derivation::new(conclusion, rule, principal, Vec::new()) })
}

pub fn parse_derivation(src: &str) -> Result<Derivation, DerivationParseError> {
    let mut lines = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        if !raw.trim().is_empty() {
            lines.push(parse_line(i + 1, raw)?);
        }
    }
    if lines.is_empty() {
        return Err(DerivationParseError { line: 1, msg: "empty derivation".into() });
    }
    // Fold the flat list into a tree with an explicit stack of open nodes.
    let mut stack: Vec<(usize, Derivation)> = Vec::new();
    let mut root = None;
    for l in lines {
        let want = stack.last().map(|(d, _)| d + 1).unwrap_or(0);
        if l.depth > want || (root.is_some() && stack.is_empty()) {
            return Err(DerivationParseError { line: l.no, msg: "unexpected indentation".into() });
        }
        while stack.len() > l.depth {
            let (_, done) = stack.pop().expect("non-empty");
            match stack.last_mut() {
                Some((_, parent)) => parent.premises.push(done),
                None => root = Some(done),
            }
        }
        if root.is_some() {
            return Err(DerivationParseError { line: l.no, msg: "more than one root".into() });
        }
        stack.push((l.depth, l.node));
    }
    while let Some((_, done)) = stack.pop() {
        match stack.last_mut() {
            Some((_, parent)) => parent.premises.push(done),
            None => root = Some(done),
        }
    }
    Ok(root.expect("at least one line"))
}
