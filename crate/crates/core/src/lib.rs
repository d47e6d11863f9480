//! Finite quantum-logic workbench.
//!
//! The crate builds and validates finite ortholattices, orthomodular lattices,
//! BZ lattices, effect algebras and QMV algebras, evaluates quantum-logic
//! formulas algebraically and over Kripkean orthoframes, checks derivations in
//! the natural-deduction calculi for these logics, and replays the known
//! finite counterexamples and structure theorems.

pub mod algebraic;
pub mod catalog;
pub mod completion;
pub mod effect;
pub mod formula;
pub mod kripke;
pub mod lattice;
pub mod modal;
pub mod orthopair;
pub mod proof;
pub mod reproduce;
