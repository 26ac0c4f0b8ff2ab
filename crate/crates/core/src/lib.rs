//! Conjugation-invariant random rotations on SO(3).
//!
//! The crate covers three connected computations:
//!
//! * [`moments`]: the transforms linking the rotation-angle variate
//!   `X = cos²(Θ/2)` to the corner entry `Z = e₃ᵀRe₃`, and their moments.
//! * [`radon`]: the expected Gram matrix of randomly rotated and projected
//!   landmarks, its inversion, and the [`fake_uniformity`] of the Cayley
//!   family at κ = 1.
//! * [`classifier`]: the Bayes rule separating two shifted copies of a
//!   conjugation-invariant law and its closed-form accuracy.
//!
//! Every closed form is paired with an independent Monte Carlo or
//! quadrature route; see the crate's `examples/` directory.

pub mod classifier;
pub mod cli;
pub mod distributions;
pub mod error;
pub mod fake_uniformity;
pub mod moments;
pub mod radon;
pub mod rng;
pub mod so3;
pub mod stats;

pub use distributions::{DistributionSpec, Family, RotationSampler};
pub use error::{Error, Result};
pub use so3::{AxisAngle, Rotation, UnitVector3};
