//! Deformed oscillator algebra with a two-branch structure function.
//!
//! The object underneath everything here is the deformed integer
//! `{n} = n(mu*q^(alpha*n+beta) + eta*q^(gamma*n+delta))`, a two-parameter
//! interpolation between bosonic (`{n} = n`) and purely `q`-scaled
//! (`{n} = n*q^(n-1)`) level spacings. The crate builds, in order:
//!
//! * [`algebra`]: deformed numbers and factorials, positivity regimes and
//!   the ladder representation on a truncated level space;
//! * [`calculus`]: the finite-difference derivative whose eigenfunction is
//!   the deformed exponential, its inverse, and a half-line integral with
//!   the scaling-covariant change-of-variable constant;
//! * [`spectral`]: Jacobi (position/momentum) matrices, self-adjointness
//!   diagnostics and oscillator energy levels;
//! * [`coherent`]: annihilation eigenstates, their normalization and
//!   overlaps, and the weight-function construction for the resolution of
//!   the identity;
//! * [`finite`]: the parameter line where the ladder closes at a finite
//!   dimension, with its own exact-zero arithmetic;
//! * [`thermo`]: occupation statistics and radiation-law integrals for a
//!   gas of deformed oscillators;
//! * [`verify`]: the runnable cross-check suite the CLI exposes.
//!
//! Modules [`dd`] (double-double arithmetic), [`matrix`] and [`series`]
//! are small numeric underpinnings; `quad` (crate-internal) is adaptive
//! Gauss-Kronrod quadrature used by the integral-bearing modules.

pub mod algebra;
pub mod calculus;
pub mod coherent;
pub mod dd;
pub mod error;
pub mod finite;
pub mod matrix;
pub mod params;
pub(crate) mod quad;
pub mod series;
pub mod spectral;
pub mod thermo;
pub mod verify;

pub use error::{Error, Result};
pub use params::DeformationParams;
