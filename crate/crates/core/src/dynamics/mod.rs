//! Evolution equations, time stepping and initial/exact states.

mod checkpoint;
mod exact;
mod initial;
mod jet;
mod params;
mod rhs;
mod state;
mod stepper;

pub use checkpoint::{read_checkpoint, write_checkpoint, CHECKPOINT_HEADER_LEN, CHECKPOINT_MAGIC};
pub use exact::{dispersion_omega, invariant_solution, Harmonic, InvariantSolutionSpec, TrigProfile};
pub use initial::{gaussian_ic, random_state, GaussianSpec, RandomSpec, SUPPORT_EDGE_TOL};
pub use jet::PointJet;
pub use params::PhysicalParams;
pub use rhs::{pde_residual, tendencies, PdeResidual, ResidualMode};
pub use state::{FlowState, Tendencies};
pub use stepper::{integrate, stable_dt, step_rk4, CFL};

#[cfg(test)]
mod tests;
