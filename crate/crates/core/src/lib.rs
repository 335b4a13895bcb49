//! Numerical laboratory for nonlinear internal waves in a uniformly rotating,
//! stably stratified fluid.
//!
//! The crate evolves
//!
//! ```text
//! Δψ_t − g ρ_x − f v_z = J(ψ, Δψ)
//! v_t + f ψ_z          = J(ψ, v)
//! ρ_t + (N²/g) ψ_x     = J(ψ, ρ)
//! ```
//!
//! on a doubly periodic box with a dealiased pseudo-spectral method, applies
//! the Lie point symmetries of the system as maps between solutions, and
//! checks the five conservation laws (two means, energy, the semi-dilation
//! law and the rotation law) in differential and integral form.
//!
//! All numerics are generic over [`Real`] (`f32`/`f64`); the `*64` aliases
//! below name the double-precision instantiations used by the CLI and the
//! verification suites.

pub mod conservation;
pub mod dynamics;
mod error;
pub mod field;
mod scalar;
pub mod symmetry;

pub use error::{Error, Result};
pub use scalar::Real;

pub type GridSpec64 = field::GridSpec<f64>;
pub type Grid64 = field::Grid<f64>;
pub type Field64 = field::ScalarField<f64>;
pub type Field32 = field::ScalarField<f32>;
pub type Weighted64 = field::Weighted<f64>;
pub type Params64 = dynamics::PhysicalParams<f64>;
pub type State64 = dynamics::FlowState<f64>;
pub type State32 = dynamics::FlowState<f32>;
pub type Tendencies64 = dynamics::Tendencies<f64>;
pub type Generator64 = symmetry::Generator<f64>;
pub type ConservedSet64 = conservation::ConservedSet<f64>;
