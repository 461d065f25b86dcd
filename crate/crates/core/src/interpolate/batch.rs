//! Repeated rule applications that build right-nested conjunctions and
//! disjunctions one step at a time.

use crate::fresh::Fresh;
use crate::kernel::{l_and, l_or, r_and, r_or, Derivation, KernelError};
use crate::syntax::Formula;

/// The right-nested tails `Xᵢ ∘ (… ∘ Xᵣ)` for `i = 0..r`.
fn tails(items: &[Formula], join: fn(Formula, Formula) -> Formula) -> Vec<Formula> {
    let mut out = vec![items.last().expect("non-empty batch").clone()];
    for x in items.iter().rev().skip(1) {
        let acc = join(x.clone(), out.last().expect("non-empty").clone());
        out.push(acc);
    }
    out.reverse();
    out
}

/// From `Γ ⇒ Δ, X₁, …, Xᵣ` to `Γ ⇒ Δ, X₁ ∨ … ∨ Xᵣ`.
pub fn r_or_batch(d: Derivation, items: &[Formula]) -> Result<Derivation, KernelError> {
    let t = tails(items, Formula::or);
    let mut d = d;
    for i in (0..items.len() - 1).rev() {
        d = r_or(d, &items[i], &t[i + 1])?;
    }
    Ok(d)
}

/// From `X₁, Γ ⇒ Δ … Xᵣ, Γ ⇒ Δ` to `X₁ ∨ … ∨ Xᵣ, Γ ⇒ Δ`.
pub fn l_or_batch(ds: Vec<Derivation>, items: &[Formula], fresh: &mut Fresh) -> Result<Derivation, KernelError> {
    let t = tails(items, Formula::or);
    let mut ds = ds;
    let mut acc = ds.pop().expect("non-empty batch");
    for i in (0..items.len() - 1).rev() {
        let d = ds.pop().expect("one derivation per item");
        acc = l_or(d, acc, &items[i], &t[i + 1], fresh)?;
    }
    Ok(acc)
}

/// From `Γ ⇒ Δ, X₁ … Γ ⇒ Δ, Xᵣ` to `Γ ⇒ Δ, X₁ ∧ … ∧ Xᵣ`.
pub fn r_and_batch(ds: Vec<Derivation>, items: &[Formula], fresh: &mut Fresh) -> Result<Derivation, KernelError> {
    let t = tails(items, Formula::and);
    let mut ds = ds;
    let mut acc = ds.pop().expect("non-empty batch");
    for i in (0..items.len() - 1).rev() {
        let d = ds.pop().expect("one derivation per item");
        acc = r_and(d, acc, &items[i], &t[i + 1], fresh)?;
    }
    Ok(acc)
}

/// From `X₁, …, Xᵣ, Γ ⇒ Δ` to `X₁ ∧ … ∧ Xᵣ, Γ ⇒ Δ`.
pub fn l_and_batch(d: Derivation, items: &[Formula]) -> Result<Derivation, KernelError> {
    let t = tails(items, Formula::and);
    let mut d = d;
    for i in (0..items.len() - 1).rev() {
        d = l_and(d, &items[i], &t[i + 1])?;
    }
    Ok(d)
}
