//! Stochastic chemical kinetics with a Metropolis-Hastings corrector.
//!
//! This crate simulates well-stirred reaction networks three ways:
//!
//! * exact SSA (Gillespie direct method),
//! * explicit tau-leaping,
//! * a Metropolis-Hastings chain whose proposals come from tau-leaping and
//!   whose acceptance ratio is evaluated from matrix exponentials of the
//!   chemical master equation generator — the exact generator supplies the
//!   target density, the frozen-propensity generator the proposal density.
//!
//! The matrix-exponential engines (dense Pade, parabolic contour quadrature,
//! CRAM, and Krylov projection) live in [`matexp`]; generator assembly and
//! sub-matrix windowing in [`cme_operator`]; the samplers in [`kinetics`] and
//! [`mh`].

pub mod banded;
pub mod cme_operator;
pub mod error;
pub mod histogram;
pub mod kinetics;
pub mod matexp;
pub mod mh;
pub mod reaction_system;
pub mod systems;

pub use banded::BandedMatrix;
pub use cme_operator::{
    build_exact_generator, build_frozen_generator, make_window, submatrix_size_estimate,
    CmeGenerator, GeneratorKind, Window, DEFAULT_GENERATOR_BUDGET,
};
pub use error::{Error, Result};
pub use histogram::{l1_distance, SpeciesHistogram};
pub use kinetics::{RngStream, TrajectoryResult};
pub use matexp::ExpmMethod;
pub use mh::{ChainConfig, ChainRecord, SimMethod, WindowPolicy};
pub use reaction_system::{PropensitySpec, ReactionSystem, State, StateIndex};
