//! Operator calculus of increasing tableaux.
//!
//! An increasing tableau fills a Young diagram with integers in `[1, q]`
//! strictly increasing along rows and columns. This crate implements the
//! K-theoretic jeu de taquin on such tableaux (component-wise swaps,
//! slides, rectification), the derived dynamics (K-promotion, K-evacuation
//! and its dual, growth diagrams, orbits), exhaustive enumeration of
//! `Inc^q(shape)`, and an audit engine that verifies frame-invariance and
//! homomesy statements over whole enumerated families, reporting
//! machine-readable verdicts with re-checkable counterexample witnesses.

pub mod audits;
pub mod dynamics;
pub mod enumeration;
pub mod format;
pub mod kjdt;
pub mod shapes;
pub mod tableaux;
