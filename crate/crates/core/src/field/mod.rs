//! Doubly periodic grid, spectral calculus, dealiased products and quadrature.

mod grid;
mod interp;
pub mod io;
mod random;
mod scalar_field;
mod weighted;

pub use grid::{Grid, GridSpec};
pub use interp::FourierInterpolant;
pub use random::BandLimited;
pub use scalar_field::ScalarField;
pub use weighted::{Monomial, Weighted};

#[cfg(test)]
mod tests;
