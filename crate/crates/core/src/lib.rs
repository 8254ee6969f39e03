//! Exact computations in the Schrödinger-Virasoro Lie algebras SV(ε),
//! ε ∈ {0, 1/2}: brackets, derivations, biderivations and post-Lie
//! structures on finite index windows.

pub mod algebra;
pub mod biderivations;
pub mod derivations;
pub mod formal;
pub mod linalg;
pub mod postlie;
pub mod text;
pub mod window;

pub use algebra::{AlgebraConfig, AlgebraError, Element, Epsilon, Family, GeneratorId, Grade};
pub use linalg::Rational;
pub use window::{DefectReport, Violation, Window};
