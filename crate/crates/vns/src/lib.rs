//! Numerical laboratory for coupled fluid / particle-kinetic dynamics on a
//! periodic box.
//!
//! The crate bundles four layers that build on each other:
//!
//! * [`grid`], [`field`], [`ops`], [`ladder`], [`besov`] — a pseudo-spectral
//!   toolbox: Fourier fields on the torus, Leray projection, heat semigroup,
//!   Littlewood-Paley blocks and Besov / Chemin-Lerner norms.
//! * [`kinetic`] — a particle representation of the kinetic density with
//!   exact-drag characteristics, TSC moment deposition and decay functionals.
//! * [`solver`] — Strang-split time integration of the coupled system with a
//!   complete energy/dissipation ledger, and [`mild`] — the Duhamel/Picard
//!   construction of mild solutions in a Kato-type class.
//! * [`stability`] — twin-run orchestration and the comparison functionals
//!   (Q, w-norms, sliced/exact Wasserstein, well-approximation diagnostics,
//!   error terms, Gronwall ratio statistics, stability exponent fits).
//!
//! Everything is deterministic given a seed: random data flows through
//! seeded ChaCha streams and all parallel reductions are fixed-order, so a
//! run is bit-reproducible regardless of worker count.
//!
//! See the `examples/` directory for one runnable demo per capability; the
//! thin `vns` binary exposes the same entry points as subcommands.

pub mod besov;
pub mod config;
pub mod error;
pub mod fft;
pub mod field;
pub mod grid;
pub mod io;
pub mod kinetic;
pub mod ladder;
pub mod mild;
pub mod ops;
pub mod solver;
pub mod stability;
pub mod synth;
pub mod traj;
pub mod util;

pub use besov::BesovIndex;
pub use error::VnsError;
pub use field::SpectralField;
pub use grid::TorusGrid;
pub use kinetic::{InitialKineticData, MomentFields, ParticleEnsemble};

pub use ladder::DyadicLadder;
pub use traj::Trajectory;

/// Crate result alias.
pub type Result<T> = std::result::Result<T, VnsError>;
