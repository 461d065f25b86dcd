//! Proof checking and split-interpolant extraction for the classical sequent
//! calculus G3c extended with singular geometric rules.
//!
//! The pipeline is: parse a derivation (or find one with [`search::prove`]),
//! check it against a [`geometric::TheorySpec`] with [`kernel::check`], then
//! extract an interpolant together with two checked witness derivations via
//! [`interpolate::interpolate`].

pub mod fresh;
pub mod gen;
pub mod geometric;
pub mod golden;
pub mod interpolate;
pub mod kernel;
pub mod search;
pub mod syntax;
