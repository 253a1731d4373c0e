//! Deformation parameters shared by every module.

use crate::error::{Error, Result};

/// Parameter tuple `(q, mu, eta, alpha, beta, gamma, delta)` of the deformed
/// number `{n} = n(mu*q^(alpha*n+beta) + eta*q^(gamma*n+delta))`.
///
/// `eta` is an independent weight at the type level; the correspondence
/// condition `mu + eta = 1` (which makes `{n} -> n` as `q -> 1`) is only
/// guaranteed by the [`DeformationParams::normalized`] and
/// [`DeformationParams::std_infinite`] constructors.
///
/// The positivity classification additionally assumes `alpha != gamma`;
/// that is checked where it matters (see
/// [`crate::algebra::classify_positivity`]) rather than at construction,
/// since the deformed number itself is well defined without it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationParams {
    pub q: f64,
    pub mu: f64,
    pub eta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl DeformationParams {
    /// General constructor. Requires `q > 0` and finite fields.
    pub fn new(
        q: f64,
        mu: f64,
        eta: f64,
        alpha: f64,
        beta: f64,
        gamma: f64,
        delta: f64,
    ) -> Result<Self> {
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::InvalidParams(format!(
                "deformation base q must be positive and finite, got {q}"
            )));
        }
        for (name, v) in [
            ("mu", mu),
            ("eta", eta),
            ("alpha", alpha),
            ("beta", beta),
            ("gamma", gamma),
            ("delta", delta),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(Self {
            q,
            mu,
            eta,
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    /// Constructor with `eta = 1 - mu`, the correspondence condition that
    /// recovers `{n} = n` in the classical limit `q -> 1`.
    pub fn normalized(q: f64, mu: f64, alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        Self::new(q, mu, 1.0 - mu, alpha, beta, gamma, delta)
    }

    /// The symmetric infinite-dimensional specialization: exponents
    /// `(alpha, beta, gamma, delta) = (-1, 1, 1, -1)` and `eta = 1 - mu`,
    /// giving `{n} = n(mu*q^(1-n) + (1-mu)*q^(n-1))`.
    ///
    /// This is the parameter family used by the calculus, spectral,
    /// coherent and thermodynamic modules.
    pub fn std_infinite(q: f64, mu: f64) -> Result<Self> {
        Self::normalized(q, mu, -1.0, 1.0, 1.0, -1.0)
    }

    /// Classical (undeformed) point: `q = 1`, `mu = eta = 1/2`. The weights
    /// are dyadic so `mu + eta == 1` holds exactly in floating point and
    /// `qnumber(n) == n` exactly for integer `n`.
    pub fn classical() -> Self {
        Self::std_infinite(1.0, 0.5).expect("classical parameters are valid")
    }

    /// The plain Tamm-Dancoff limit `{n} = n*q^(n-1)`: weights `(1, 0)`
    /// with exponents `alpha = 1, beta = -1`. (The eta term carries weight
    /// zero; its exponents are fixed at `(-1, -1)` to keep `alpha != gamma`.)
    pub fn tamm_dancoff(q: f64) -> Result<Self> {
        Self::new(q, 1.0, 0.0, 1.0, -1.0, -1.0, -1.0)
    }

    /// Parameter point whose ladder closes after exactly `d` levels:
    /// `mu = 1/(1 - q^(2d))` with exponents `(1, -1, -1, -1)`, so that
    /// `{n} = n (q^(n-1) - q^(2d-n-1)) / (1 - q^(2d))` vanishes at `n = d`.
    /// Requires `q != 1` (the weight is singular at the classical base)
    /// and `d >= 1`.
    pub fn finite_dim(q: f64, d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParams(
                "finite_dim needs at least one level (d >= 1)".into(),
            ));
        }
        if q == 1.0 {
            return Err(Error::InvalidParams(
                "finite_dim is undefined at q = 1 (weight 1/(1-q^(2d)) is singular)".into(),
            ));
        }
        let q2d = q.powi(2 * d as i32);
        let mu = 1.0 / (1.0 - q2d);
        // eta must be computed directly, not as 1 - mu: for small q and
        // large d, mu = 1 + epsilon with epsilon near ulp(1), and the
        // subtraction would leave eta with only ~24 significant bits.
        // That error survives the cancellation in {d}_d and pushes the
        // closing level visibly away from zero.
        let eta = -q2d / (1.0 - q2d);
        Self::new(q, mu, eta, 1.0, -1.0, -1.0, -1.0)
    }

    /// True away from the classical base `q = 1`.
    pub fn is_deformed(&self) -> bool {
        self.q != 1.0
    }

    /// True when the correspondence condition `mu + eta = 1` holds to 1e-14.
    pub fn is_normalized(&self) -> bool {
        (self.mu + self.eta - 1.0).abs() <= 1e-14
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_q() {
        assert!(DeformationParams::std_infinite(0.0, 0.5).is_err());
        assert!(DeformationParams::std_infinite(-1.0, 0.5).is_err());
        assert!(DeformationParams::std_infinite(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn rejects_non_finite_fields() {
        assert!(DeformationParams::new(0.5, f64::INFINITY, 0.5, -1.0, 1.0, 1.0, -1.0).is_err());
        assert!(DeformationParams::normalized(0.5, f64::NAN, -1.0, 1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn normalization_flags() {
        let p = DeformationParams::std_infinite(0.5, 0.3).unwrap();
        assert!(p.is_normalized());
        assert!(p.is_deformed());
        let c = DeformationParams::classical();
        assert!(c.is_normalized());
        assert!(!c.is_deformed());
        let free = DeformationParams::new(0.5, 2.0, 3.0, -1.0, 1.0, 1.0, -1.0).unwrap();
        assert!(!free.is_normalized());
    }
}
