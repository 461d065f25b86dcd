//! Theory files:
//!
//! ```text
//! // comment
//! theory orders
//! extends G_eq
//! pred R/2
//! axiom trans: forall x. forall y. forall z. R(x, y) & R(y, z) -> R(x, z)
//! ```

use crate::syntax::{parse_formula, Pred};

use super::{builtin_theory, compile_axiom, is_singular, GeoError, GeometricAxiom, TheorySpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleReport {
    pub id: String,
    pub singular: bool,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledTheory {
    pub theory: TheorySpec,
    pub reports: Vec<RuleReport>,
    pub warnings: Vec<String>,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> GeoError {
    GeoError::TheoryFile { line, col, msg: msg.into() }
}

fn column(text: &str, byte: usize) -> usize {
    text[..byte.min(text.len())].chars().count() + 1
}

// Byte offset of a subslice within its parent line.
fn offset(line: &str, sub: &str) -> usize {
    sub.as_ptr() as usize - line.as_ptr() as usize
}

fn parse_pred(decl: &str) -> Option<Pred> {
    let (name, arity) = decl.split_once('/')?;
    let arity: usize = arity.trim().parse().ok()?;
    let name = name.trim();
    let ok = name == "<" || (name.starts_with(|c: char| c.is_ascii_uppercase()) && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'));
    ok.then(|| Pred::new(name, arity))
}

pub fn compile_theory_file(src: &str) -> Result<CompiledTheory, GeoError> {
    let mut theory: Option<TheorySpec> = None;
    let mut declared = std::collections::BTreeSet::new();
    let mut reports = Vec::new();
    let mut warnings = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.split("//").next().unwrap_or("");
        let indent = text.len() - text.trim_start().len();
        let body = text.trim();
        if body.is_empty() {
            continue;
        }
        let (kw, rest) = body.split_once(char::is_whitespace).unwrap_or((body, &body[body.len()..]));
        let rest = rest.trim();
        let rest_col = column(raw, offset(raw, rest));
        match kw {
            "theory" => {
                if theory.is_some() {
                    return Err(err(line, indent + 1, "duplicate `theory` line"));
                }
                if rest.is_empty() {
                    return Err(err(line, rest_col, "expected a theory name"));
                }
                theory = Some(TheorySpec::new(rest));
                continue;
            }
            _ if theory.is_none() => return Err(err(line, indent + 1, "the file must start with `theory <name>`")),
            _ => {}
        }
        let t = theory.as_mut().expect("checked above");
        match kw {
            "extends" => {
                let base = builtin_theory(rest).map_err(|e| err(line, rest_col, e.to_string()))?;
                t.initial.extend(base.initial);
                for r in base.rules {
                    reports.push(RuleReport { id: r.id.clone(), singular: true, diagnostics: Vec::new() });
                    t.push_rule(r).map_err(|e| err(line, rest_col, e.to_string()))?;
                }
            }
            "pred" => {
                let p = parse_pred(rest).ok_or_else(|| err(line, rest_col, "expected `<Name>/<arity>`"))?;
                declared.insert(p);
            }
            "axiom" => {
                let (name, formula) =
                    rest.split_once(':').ok_or_else(|| err(line, rest_col, "expected `axiom <name>: <formula>`"))?;
                let name = name.trim();
                if name.is_empty() {
                    return Err(err(line, rest_col, "missing axiom name"));
                }
                let f_col = column(raw, offset(raw, formula));
                let f = parse_formula(formula).map_err(|e| err(line, f_col + column(formula, e.pos) - 1, e.msg))?;
                for p in f.rel() {
                    if !declared.contains(&p) {
                        return Err(err(line, f_col, format!("predicate {}/{} is not declared", p.name, p.arity)));
                    }
                }
                let ax = GeometricAxiom::from_formula(name, &f).map_err(|e| err(line, f_col, e.to_string()))?;
                let rule = compile_axiom(&ax).map_err(|e| err(line, f_col, e.to_string()))?;
                let (singular, diagnostics) = is_singular(&rule);
                if !singular && !ax.constants().is_empty() {
                    warnings.push(format!("axiom `{name}` mentions constants"));
                }
                reports.push(RuleReport { id: rule.id.clone(), singular, diagnostics });
                t.push_rule(rule).map_err(|e| err(line, indent + 1, e.to_string()))?;
            }
            other => return Err(err(line, indent + 1, format!("unknown directive `{other}`"))),
        }
    }
    let mut theory = theory.ok_or_else(|| err(1, 1, "missing `theory <name>` line"))?;
    theory.preds.extend(declared);
    Ok(CompiledTheory { theory, reports, warnings })
}
