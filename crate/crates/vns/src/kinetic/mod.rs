//! Particle representation of the kinetic phase: analytic initial data,
//! quadrature sampling, exact-drag characteristics and moment deposition.

mod deposit;
mod ensemble;
mod profile;
mod push;

pub use deposit::{deposit_moments, sup_moment_norms, MomentFields, MomentNorms};
pub use ensemble::{sample_particles, ParticleEnsemble, SampleReport};
pub use profile::{InitialKineticData, SpatialProfile, VelocityProfile};
pub use push::{push_particles, ConstField, FrozenField, GridInterp, TrajectoryField, VelocityField, ZeroField};
