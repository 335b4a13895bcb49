//! Lie point symmetries: the nine generators, their characteristics and the
//! conserved densities they induce, and the finite group transformations
//! acting on continuous solutions.

mod characteristics;
mod check;
mod generator;
mod ode;
mod sampler;
mod transform;

pub use characteristics::{
    affine_field, characteristics, characteristics_of, displacement_identity_residuals, raw_density,
    semi_dilation_expanded_density, semi_dilation_reduced_density, CharacteristicTriple,
};
pub use check::{first_order_check, second_tendencies, solution_map_check, FirstOrderReport, SymmetryReport};
pub use generator::{Affine, Combination, Generator, GeneratorId, Infinitesimal, TimeProfile, TrigTerm};
pub use sampler::{ClosedForm, SolutionSampler, TrajectorySampler};
pub use transform::{finite_transform, transform_point, Point, RotationFlow, Transformed, X9_TOLERANCE};
