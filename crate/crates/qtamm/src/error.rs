//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the algebra, calculus, spectral,
/// coherent, finite and thermodynamic modules.
///
/// Domain/validation problems (bad parameters, out-of-domain arguments)
/// and numerical failures (divergent expansions, quadrature breakdown)
/// are kept as distinct variants so callers such as the CLI can map them
/// to different exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Constructor-level parameter validation failed.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The positivity classification needs `alpha != gamma`.
    #[error("degenerate exponents: alpha == gamma == {alpha}")]
    DegenerateExponents { alpha: f64 },

    /// A strict deformed factorial ran over a negative deformed number.
    #[error("negative deformed number {{{n}}} = {value} inside factorial")]
    NegativeFactor { n: u32, value: f64 },

    /// A Fock representation hit a negative deformed number: the ladder
    /// amplitude sqrt({n}) would be imaginary from this level on.
    #[error("representation breaks down at level {n}: {{{n}}} = {value} < 0")]
    RepresentationBreakdown { n: u32, value: f64 },

    /// A deformed antiderivative divided by a vanishing deformed number.
    #[error("zero deformed number {{{n}}} in antiderivative denominator")]
    ZeroDenominator { n: u32 },

    /// The weight-coefficient recursion divided by a vanishing structure
    /// value phi(j) = {j}/j.
    #[error("structure value phi({j}) = 0 in weight recursion")]
    ZeroPhi { j: u32 },

    /// An iterative summation failed to meet its tolerance within the cap.
    #[error("{what} did not converge within {cap} terms")]
    NoConvergence { what: &'static str, cap: usize },

    /// An argument fell outside the domain declared for the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The geometric operator-inverse expansion of the deformed integral
    /// has term ratio >= 1 and cannot be summed.
    #[error("operator-inverse expansion diverges: term ratio {ratio} >= 1")]
    ExpansionDivergence { ratio: f64 },

    /// Adaptive quadrature could not reach the requested tolerance.
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    /// A thermodynamic function was evaluated at or below the domain edge
    /// x_min = ln(1/q) where its defining series diverges.
    #[error("x = {x} is at or below the domain edge x_min = {x_min}")]
    BelowDomain { x: f64, x_min: f64 },

    /// The restricted total-energy integrand has a non-integrable double
    /// pole at the lower endpoint for these parameters.
    #[error("non-integrable singularity at x_min = {x_min}: refinement grew without bound (last slice {last_slice:e})")]
    NonIntegrableSingularity { x_min: f64, last_slice: f64 },
}

impl Error {
    /// True for errors that indicate a numerical failure rather than a
    /// domain/validation problem. The CLI maps these to exit code 2.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::ExpansionDivergence { .. }
                | Error::QuadratureFailure(_)
                | Error::NonIntegrableSingularity { .. }
        )
    }
}
