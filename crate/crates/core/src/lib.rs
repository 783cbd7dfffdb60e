//! Numerical range, numerical radius and spherical spectrum of quaternionic matrices.
//!
//! Quaternions are `q = q₀ + q₁i + q₂j + q₃k`. Vectors form a right module,
//! `⟨X, Y⟩ = Σ x̄ₗ yₗ`, and the numerical range of `A` is
//! `W(A) = {⟨X, AX⟩ : ‖X‖ = 1}`. Everything that needs an eigen-solve goes
//! through the complex adjoint `χ_A` (see [`chi`]).

pub mod chi;
pub mod error;
pub mod io;
pub mod qmat;
pub mod quat;
pub mod range;
pub mod spectrum;
pub mod twobytwo;

pub use error::{Error, Result};
pub use qmat::{QMatrix, QVector};
pub use quat::{ComplexNum, ImaginaryUnit, Quaternion};
