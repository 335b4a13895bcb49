//! The five conservation laws: densities, fluxes, pointwise divergence
//! residuals, integral invariants with drift monitoring, and the algebraic
//! identities behind the flux derivations.

mod identities;
mod integral;
mod laws;

pub use identities::{
    jacobian_identity_check, jacobian_identity_sides, rotation_density_assembly_check, semi_dilation_reduction_check,
    IdentityFields, JacobianIdentity,
};
pub use integral::{
    drift_report, edge_ratio, integral_invariants, read_invariants_csv, trust_horizon, write_invariants_csv,
    ConservedSet, DriftReport, LawDrift, ResidualRecord, DRIFT_FLOOR,
};
pub use laws::{
    density, density_rate, density_weighted, divergence_residual, flux, flux_weighted, DensityFluxSet,
    DivergenceResidual, LawId, Snapshot, TimeDerivative, WeightedFluxSet,
};
