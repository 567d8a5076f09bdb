//! Definability calculus for the projective hierarchy.
//!
//! - [`pointclass`]: the classes Σ(n), Π(n), Δ(n) and their lattice.
//! - [`expr`]: the `.pjc` declaration language.
//! - [`infer`]: the rule engine assigning classes and measurability levels.
//! - [`derivation`]: proof trees, their JSON form, and an independent checker.
//! - [`finite_model`]: exact semantics on finite spaces and identity oracles.
//! - [`games`]: finite alternating games solved by backward induction.

pub mod derivation;
pub mod expr;
pub mod finite_model;
pub mod games;
pub mod infer;
pub mod pointclass;
