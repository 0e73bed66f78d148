//! Exact-arithmetic models of twisted cotangent bundles of type-A flag
//! varieties and their moment maps onto coadjoint orbits.
//!
//! Everything is computed over the Gaussian rationals, so every identity
//! the library claims is checked by literal equality — there are no
//! tolerances anywhere.

pub mod chart;
pub mod error;
pub mod factor;
pub mod jet;
pub mod matrix;
pub mod maurer;
pub mod parabolic;
pub mod sample;
pub mod scalar;
pub mod symplectic;
pub mod twisted;
pub mod verify;
pub mod weyl;

pub use chart::{ChartPoint, ChartPointJson};
pub use error::{Error, Result};
pub use jet::Jet;
pub use matrix::Matrix;
pub use parabolic::{build_parabolic, ParabolicData, Root, WeightLambda};
pub use scalar::{GaussianRational, Rational, Scalar};
pub use twisted::{mu_global, mu_inverse, mu_local, psi_global, solve_w, transition, xi_from_w, OrbitPoint};
pub use weyl::{weyl_cosets, WeylCoset};
