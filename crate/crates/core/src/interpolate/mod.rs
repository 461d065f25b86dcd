//! Split-interpolant extraction for G plus singular geometric rules, with
//! kernel-checked witness derivations.

mod batch;
mod engine;

use std::fmt;

use thiserror::Error;

use crate::fresh::Fresh;
use crate::geometric::TheorySpec;
use crate::kernel::{check, CheckReport, Derivation, KernelError, Violation};
use crate::syntax::{lang_of, ter_of, Formula, Language, Sequent, Term};

pub use engine::GeoCase;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Half {
    One,
    Two,
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Half::One => "1",
            Half::Two => "2",
        })
    }
}

/// Side assignment for every occurrence of a sequent, by position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    pub ant: Vec<Half>,
    pub suc: Vec<Half>,
}

impl Partition {
    pub fn new(ant: Vec<Half>, suc: Vec<Half>) -> Partition {
        Partition { ant, suc }
    }

    /// Parses `L:1,2;R:2`. Either part may be omitted when empty.
    pub fn parse(src: &str) -> Result<Partition, InterpError> {
        let bad = |msg: String| InterpError::MalformedPartition(msg);
        let mut ant = None;
        let mut suc = None;
        for part in src.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, list) = part.split_once(':').ok_or_else(|| bad(format!("`{part}` lacks `:`")))?;
            let halves = list
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|h| match h {
                    "1" => Ok(Half::One),
                    "2" => Ok(Half::Two),
                    other => Err(bad(format!("side `{other}` is not 1 or 2"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let slot = match key.trim() {
                "L" => &mut ant,
                "R" => &mut suc,
                other => return Err(bad(format!("unknown part `{other}`, expected L or R"))),
            };
            if slot.replace(halves).is_some() {
                return Err(bad(format!("part `{}` given twice", key.trim())));
            }
        }
        Ok(Partition { ant: ant.unwrap_or_default(), suc: suc.unwrap_or_default() })
    }

    pub fn validate(&self, s: &Sequent) -> Result<(), InterpError> {
        if self.ant.len() != s.ant.len() || self.suc.len() != s.suc.len() {
            return Err(InterpError::MalformedPartition(format!(
                "partition covers {}+{} occurrences but `{s}` has {}+{}",
                self.ant.len(),
                self.suc.len(),
                s.ant.len(),
                s.suc.len()
            )));
        }
        Ok(())
    }

    /// Splits `s` into `(Γ₁, Γ₂, Δ₁, Δ₂)`.
    pub fn split(&self, s: &Sequent) -> Split {
        let pick = |fs: &[Formula], hs: &[Half], h: Half| -> Vec<Formula> {
            fs.iter().zip(hs).filter(|(_, x)| **x == h).map(|(f, _)| f.clone()).collect()
        };
        Split {
            g1: pick(&s.ant, &self.ant, Half::One),
            g2: pick(&s.ant, &self.ant, Half::Two),
            d1: pick(&s.suc, &self.suc, Half::One),
            d2: pick(&s.suc, &self.suc, Half::Two),
        }
    }

    /// All partitions of `s` in counting order, at most `max` of them.
    pub fn enumerate(s: &Sequent, max: usize) -> Vec<Partition> {
        let n = s.ant.len() + s.suc.len();
        let total: u128 = if n >= 127 { u128::MAX } else { 1u128 << n };
        let count = total.min(max as u128) as usize;
        (0..count)
            .map(|code| {
                let bit = |i: usize| if (code >> i) & 1 == 1 { Half::Two } else { Half::One };
                Partition {
                    ant: (0..s.ant.len()).map(bit).collect(),
                    suc: (s.ant.len()..n).map(bit).collect(),
                }
            })
            .collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |hs: &[Half]| hs.iter().map(Half::to_string).collect::<Vec<_>>().join(",");
        write!(f, "L:{};R:{}", list(&self.ant), list(&self.suc))
    }
}

/// The two halves of a partitioned sequent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub g1: Vec<Formula>,
    pub g2: Vec<Formula>,
    pub d1: Vec<Formula>,
    pub d2: Vec<Formula>,
}

impl Split {
    pub fn side1(&self) -> impl Iterator<Item = &Formula> {
        self.g1.iter().chain(&self.d1)
    }

    pub fn side2(&self) -> impl Iterator<Item = &Formula> {
        self.g2.iter().chain(&self.d2)
    }

    pub fn terms1(&self) -> std::collections::BTreeSet<Term> {
        ter_of(self.side1())
    }

    pub fn terms2(&self) -> std::collections::BTreeSet<Term> {
        ter_of(self.side2())
    }

    /// `Γ₁ ⇒ Δ₁, C`
    pub fn first(&self, c: &Formula) -> Sequent {
        let mut suc = self.d1.clone();
        suc.push(c.clone());
        Sequent::new(self.g1.clone(), suc)
    }

    /// `C, Γ₂ ⇒ Δ₂`
    pub fn second(&self, c: &Formula) -> Sequent {
        let mut ant = self.g2.clone();
        ant.push(c.clone());
        Sequent::new(ant, self.d2.clone())
    }
}

/// Which form sub-case 3.3 produces.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mixed {
    /// `∀z̄((Π₂ → C₁ ∨ … ∨ Cₘ)[z̄/t̄])`
    #[default]
    Implicative,
    /// `∃z̄((Π₁ ∧ C₁ ∧ … ∧ Cₘ)[z̄/t̄])`
    Conjunctive,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct InterpConfig {
    pub mixed: Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanguageReport {
    pub interpolant: Language,
    pub side1: Language,
    pub side2: Language,
    pub in_side1: bool,
    pub in_side2: bool,
}

impl LanguageReport {
    pub fn new(c: &Formula, split: &Split) -> LanguageReport {
        let interpolant = c.lang();
        let side1 = lang_of(split.side1());
        let side2 = lang_of(split.side2());
        LanguageReport {
            in_side1: interpolant.is_subset(&side1),
            in_side2: interpolant.is_subset(&side2),
            interpolant,
            side1,
            side2,
        }
    }
}

impl fmt::Display for LanguageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "L(C):     {}", self.interpolant)?;
        writeln!(f, "L(side1): {}", self.side1)?;
        writeln!(f, "L(side2): {}", self.side2)?;
        write!(f, "contained: side1={} side2={}", self.in_side1, self.in_side2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolationResult {
    pub interpolant: Formula,
    /// `Γ₁ ⇒ Δ₁, C`
    pub witness1: Derivation,
    /// `C, Γ₂ ⇒ Δ₂`
    pub witness2: Derivation,
    pub report: LanguageReport,
    /// The geometric case used at each geometric-rule node, in pre-order.
    pub geo_cases: Vec<(String, GeoCase)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("theory `{0}` is not singular")]
    NonSingularTheory(String),
    #[error("malformed partition: {0}")]
    MalformedPartition(String),
    #[error("input derivation does not check: {0}")]
    InvalidDerivation(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Extracts a split-interpolant of `p` from `d`, with the default
/// configuration.
pub fn interpolate(d: &Derivation, p: &Partition, theory: &TheorySpec) -> Result<InterpolationResult, InterpError> {
    interpolate_with(d, p, theory, &InterpConfig::default())
}

pub fn interpolate_with(
    d: &Derivation,
    p: &Partition,
    theory: &TheorySpec,
    config: &InterpConfig,
) -> Result<InterpolationResult, InterpError> {
    if !theory.is_singular() {
        return Err(InterpError::NonSingularTheory(theory.name.clone()));
    }
    p.validate(&d.conclusion)?;
    let report = check(d, theory);
    if !report.ok {
        let first = report.violations.first().map(|v| v.to_string()).unwrap_or_default();
        return Err(InterpError::InvalidDerivation(first));
    }
    let fresh = Fresh::avoiding(&d.var_names());
    let mut e = engine::Engine::new(theory, *config, fresh);
    let piece = e.run(d, p)?;
    let split = p.split(&d.conclusion);
    Ok(InterpolationResult {
        report: LanguageReport::new(&piece.c, &split),
        interpolant: piece.c,
        witness1: piece.w1,
        witness2: piece.w2,
        geo_cases: e.trace,
    })
}

/// Terms of `candidate` outside `Ter(side1) ∩ Ter(side2)`, in term order.
pub fn offending_terms<'a>(
    candidate: &Formula,
    side1: impl IntoIterator<Item = &'a Formula>,
    side2: impl IntoIterator<Item = &'a Formula>,
) -> Vec<Term> {
    let t1 = ter_of(side1);
    let t2 = ter_of(side2);
    candidate.ter().into_iter().filter(|t| !(t1.contains(t) && t2.contains(t))).collect()
}

/// Re-checks both derivability conditions and the language condition.
pub fn verify(r: &InterpolationResult, conclusion: &Sequent, p: &Partition, theory: &TheorySpec) -> CheckReport {
    let mut violations = Vec::new();
    let mut flag = |path: &str, reason: String| violations.push(Violation { path: vec![], reason: format!("{path}: {reason}") });
    if let Err(e) = p.validate(conclusion) {
        flag("partition", e.to_string());
        return CheckReport::from_violations(violations);
    }
    let split = p.split(conclusion);
    let c = &r.interpolant;
    for (name, w, want) in [("witness I", &r.witness1, split.first(c)), ("witness II", &r.witness2, split.second(c))] {
        if w.conclusion != want {
            flag(name, format!("concludes `{}` instead of `{want}`", w.conclusion));
        }
        for v in check(w, theory).violations {
            flag(name, v.to_string());
        }
    }
    let lang = LanguageReport::new(c, &split);
    if !lang.in_side1 {
        flag("language", format!("{} is not contained in side 1 {}", lang.interpolant, lang.side1));
    }
    if !lang.in_side2 {
        flag("language", format!("{} is not contained in side 2 {}", lang.interpolant, lang.side2));
    }
    CheckReport::from_violations(violations)
}

#[cfg(test)]
mod tests;
