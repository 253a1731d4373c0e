//! Truncated power series, the carrier for the deformed calculus.
//!
//! A [`PowerSeries`] stores coefficients `c_0..c_{trunc-1}` of
//! `sum c_n x^n`. Arithmetic truncates at the larger operand length, so a
//! product only carries complete convolutions for indices below
//! `min(a.trunc, b.trunc)`; consumers that compare identities on products
//! restrict to that range.

use crate::algebra::qfactorial_checked;
use crate::error::{Error, Result};
use crate::params::DeformationParams;

#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    /// Coefficient of `x^n` at index `n`. Length equals `trunc`.
    pub coeffs: Vec<f64>,
    pub trunc: usize,
}

impl PowerSeries {
    /// Series from an explicit coefficient vector. Panics on an empty
    /// vector: a series has at least the constant term's slot.
    pub fn new(coeffs: Vec<f64>) -> PowerSeries {
        assert!(!coeffs.is_empty(), "PowerSeries needs trunc >= 1");
        let trunc = coeffs.len();
        PowerSeries { coeffs, trunc }
    }

    pub fn zero(trunc: usize) -> PowerSeries {
        assert!(trunc >= 1, "PowerSeries needs trunc >= 1");
        PowerSeries {
            coeffs: vec![0.0; trunc],
            trunc,
        }
    }

    /// `c * x^n`, padded to `trunc` (which must exceed `n`).
    pub fn monomial(n: usize, c: f64, trunc: usize) -> PowerSeries {
        assert!(n < trunc, "monomial degree {n} outside trunc {trunc}");
        let mut s = PowerSeries::zero(trunc);
        s.coeffs[n] = c;
        s
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let trunc = self.trunc.max(other.trunc);
        let mut coeffs = vec![0.0; trunc];
        for (n, c) in coeffs.iter_mut().enumerate() {
            let a = self.coeffs.get(n).copied().unwrap_or(0.0);
            let b = other.coeffs.get(n).copied().unwrap_or(0.0);
            *c = a + b;
        }
        PowerSeries { coeffs, trunc }
    }

    pub fn sub(&self, other: &PowerSeries) -> PowerSeries {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            trunc: self.trunc,
        }
    }

    /// Cauchy product truncated at `max(self.trunc, other.trunc)`.
    /// Indices below `min(self.trunc, other.trunc)` are complete
    /// convolutions; higher indices may miss dropped-degree contributions.
    pub fn multiply(&self, other: &PowerSeries) -> PowerSeries {
        let trunc = self.trunc.max(other.trunc);
        let mut coeffs = vec![0.0; trunc];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= trunc {
                    break;
                }
                coeffs[i + j] += a * b;
            }
        }
        PowerSeries { coeffs, trunc }
    }

    /// Ordinary derivative `c_n x^n -> n c_n x^{n-1}`.
    pub fn ordinary_derivative(&self) -> PowerSeries {
        let trunc = (self.trunc - 1).max(1);
        let mut coeffs = vec![0.0; trunc];
        for n in 1..self.trunc {
            if n - 1 < trunc {
                coeffs[n - 1] = self.coeffs[n] * n as f64;
            }
        }
        PowerSeries { coeffs, trunc }
    }

    /// Horner evaluation at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }
}

/// Normalized monomial basis vector `x^n / sqrt({n}!)`.
///
/// Fails when `{k}` turns negative before `n` (no real normalization) or
/// when the factorial vanishes (zero denominator at the closing level of a
/// finite representation).
pub fn fock_monomial(params: &DeformationParams, n: u32, trunc: usize) -> Result<PowerSeries> {
    let fact = qfactorial_checked(params, n)?;
    if fact == 0.0 {
        return Err(Error::ZeroDenominator { n });
    }
    Ok(PowerSeries::monomial(n as usize, 1.0 / fact.sqrt(), trunc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_pads_to_longer_operand() {
        let a = PowerSeries::new(vec![1.0, 2.0]);
        let b = PowerSeries::new(vec![0.5, 0.0, 3.0]);
        let s = a.add(&b);
        assert_eq!(s.trunc, 3);
        assert_eq!(s.coeffs, vec![1.5, 2.0, 3.0]);
    }

    #[test]
    fn multiply_is_complete_below_min_trunc() {
        // (1 + x)(1 - x) = 1 - x^2 exactly within trunc 4.
        let a = PowerSeries::new(vec![1.0, 1.0, 0.0, 0.0]);
        let b = PowerSeries::new(vec![1.0, -1.0, 0.0, 0.0]);
        let p = a.multiply(&b);
        assert_eq!(p.coeffs, vec![1.0, 0.0, -1.0, 0.0]);
    }

    #[test]
    fn multiply_truncates_high_degrees() {
        let a = PowerSeries::new(vec![0.0, 1.0]); // x
        let p = a.multiply(&a); // x^2 dropped at trunc 2
        assert_eq!(p.coeffs, vec![0.0, 0.0]);
    }

    #[test]
    fn ordinary_derivative_shifts_down() {
        let s = PowerSeries::new(vec![7.0, 3.0, 5.0]); // 7 + 3x + 5x^2
        let d = s.ordinary_derivative();
        assert_eq!(d.coeffs, vec![3.0, 10.0]);
    }

    #[test]
    fn eval_matches_horner_by_hand() {
        let s = PowerSeries::new(vec![1.0, -2.0, 0.5]);
        let x = 1.5;
        assert!((s.eval(x) - (1.0 - 2.0 * x + 0.5 * x * x)).abs() < 1e-15);
    }

    #[test]
    fn fock_monomial_carries_inverse_sqrt_factorial() {
        // q=0.5, mu=0.5: {2}! = 2.5, so |2> = x^2 / sqrt(2.5).
        let p = DeformationParams::std_infinite(0.5, 0.5).unwrap();
        let m = fock_monomial(&p, 2, 4).unwrap();
        assert!((m.coeffs[2] - 1.0 / 2.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(m.coeffs[0], 0.0);
    }

    #[test]
    fn fock_monomial_rejects_vanishing_factorial() {
        // Finite family closes at n = d: {d} = 0 makes sqrt({d}!) = 0.
        let p = DeformationParams::finite_dim(0.5, 2).unwrap();
        match fock_monomial(&p, 2, 4) {
            Err(Error::ZeroDenominator { n: 2 }) => {}
            other => panic!("expected ZeroDenominator, got {other:?}"),
        }
    }

    #[test]
    #[should_panic(expected = "trunc >= 1")]
    fn empty_series_rejected() {
        let _ = PowerSeries::new(vec![]);
    }
}
