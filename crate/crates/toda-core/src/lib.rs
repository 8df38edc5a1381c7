//! Loop-group machinery for the A₂⁽²⁾ Toda family.
//!
//! The crate builds the λ-dependent Lax pairs of six integrable surface
//! classes (minimal Lagrangian surfaces in CP², CH² and CH²₁, definite and
//! indefinite proper affine spheres in ℝ³), solves the associated Tzitzéica
//! equations, integrates extended frames into surface meshes with geometric
//! validators, performs numerical Birkhoff and Iwasawa loop factorizations
//! for both loop-group construction pipelines, and mechanically verifies the
//! classification of the real-form involutions of the twisted loop algebra.
//!
//! Module map:
//! * [`algebra`] — complex 3×3 and truncated Laurent-loop arithmetic, the
//!   order-6 twisting automorphism and its eigenspace grading, the real-form
//!   involutions.
//! * [`geometry`] — the six geometry descriptors, λ-family Maurer-Cartan
//!   forms, Tzitzéica residuals and symmetry-defect diagnostics.
//! * [`pde`] — damped-Newton elliptic solver and Goursat characteristic
//!   marching for the Tzitzéica equations.
//! * [`frames`] — extended-frame integration, surface extraction and
//!   geometric validation.
//! * [`factorization`] — Birkhoff/Iwasawa splittings and the two
//!   potential-based construction pipelines.
//! * [`realforms`] — constraint residuals and exhaustive desk-scale searches
//!   recovering the canonical involution representatives.

pub mod algebra;
pub mod error;
pub mod factorization;
pub mod frames;
pub mod geometry;
pub(crate) mod linalg;
pub mod pde;
pub mod realforms;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
