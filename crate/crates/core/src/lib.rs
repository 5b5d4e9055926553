//! Exact computational engine for parabolically induced modules over
//! chi-reduced enveloping algebras of reductive Lie algebras in positive
//! characteristic.
//!
//! The crate builds the induced modules as explicit matrices over `F_{p^m}`,
//! computes the simplicity scalar two independent ways (by direct operator
//! action and by the closed product formula), tests module simplicity with a
//! MeatAxe-style criterion, and certifies that nonvanishing of the scalar
//! implies simplicity over exhaustive desk-scale sweeps.

pub mod chevalley;
pub mod gfield;
pub mod induce;
pub mod linalg;
pub mod pbw;
pub mod repmod;
pub mod report;
pub mod rootsys;
