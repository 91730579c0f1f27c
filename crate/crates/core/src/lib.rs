//! Numerical laboratory for the weak-disorder Lifshitz-tail regime of the
//! three-dimensional Anderson model.

// NaN inputs are rejected with `!(x > 0.0)`-style guards; dense kernels index several arrays at once.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod anderson;
pub mod density;
pub mod diagrams;
pub mod dispersion;
pub mod error;
pub mod expansion;
pub mod green;
pub mod quad;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod selfenergy;
pub mod torus;
pub mod values;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Working precision of the concrete aliases.
pub type Real = f64;
pub type EnergyContextF64 = selfenergy::EnergyContext<Real>;
pub type GreenTableF64 = green::GreenTable<Real>;
pub type TorusIntegralF64 = torus::TorusIntegral<Real>;
pub type TorusPointF64 = dispersion::TorusPoint<Real>;
pub type PeriodizedCubeF64 = green::fft::PeriodizedCube<Real>;
