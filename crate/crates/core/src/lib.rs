//! Simulation, monotone coupling and exact mixing analysis of
//! one-dimensional particle systems on the segment `⟦1,N⟧`: the interchange
//! process, the simple exclusion process, the corner-flip dynamics (each
//! symmetric or biased) and the random walk on the simplex.
//!
//! Module map:
//! - [`states`]: state spaces, the height bijection, projections, partial orders.
//! - [`dynamics`]: event-driven simulation through site clocks and marks.
//! - [`coupling`]: grand couplings, coupling times, coupling from the past.
//! - [`spectral`]: Dirichlet spectrum, heat equation, closed-form bounds.
//! - [`exact`]: generators, stationary laws and exact `d(t)` on small spaces.
//! - [`harness`]: Monte-Carlo estimators, profiles, cutoff scans, experiments.

pub mod coupling;
pub mod dynamics;
pub mod error;
pub mod exact;
pub mod harness;
pub mod spectral;
pub mod states;

pub use error::{Error, Result};
