//! Monotone supply of fresh variable names `_v0, _v1, ...`.

use std::collections::BTreeSet;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Fresh {
    next: usize,
}

impl Fresh {
    pub fn new() -> Fresh {
        Fresh::default()
    }

    /// A counter that never produces a name in `used`.
    pub fn avoiding<'a>(used: impl IntoIterator<Item = &'a String>) -> Fresh {
        let mut f = Fresh::new();
        f.reserve(used);
        f
    }

    /// Moves the counter past every `_vN` name in `used`.
    pub fn reserve<'a>(&mut self, used: impl IntoIterator<Item = &'a String>) {
        for name in used {
            if let Some(n) = name.strip_prefix("_v").and_then(|d| d.parse::<usize>().ok()) {
                self.next = self.next.max(n + 1);
            }
        }
    }

    pub fn var(&mut self) -> String {
        let name = format!("_v{}", self.next);
        self.next += 1;
        name
    }

    pub fn vars(&mut self, n: usize) -> Vec<String> {
        (0..n).map(|_| self.var()).collect()
    }

    pub fn peek(&self) -> usize {
        self.next
    }
}

/// Collects every variable name (free or bound) of a set of formulas.
pub fn all_vars<'a>(fs: impl IntoIterator<Item = &'a crate::syntax::Formula>) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for f in fs {
        out.extend(f.free_vars());
        out.extend(f.bound_vars());
    }
    out
}
