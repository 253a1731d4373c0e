//! Thermodynamics of the deformed oscillator with Hamiltonian `H = w N`.
//!
//! The number operator keeps the undeformed spectrum `0, 1, 2, ...`, so the
//! partition function is the plain geometric sum `Z = 1/(1 - e^{-x})` with
//! `x = hbar*w/(k*T)`, independent of `(q, mu)`. Deformation enters through
//! the ensemble average of `a^dag a`, whose eigenvalues are the deformed
//! numbers `{n}`:
//!
//! ```text
//! <a^dag a> = (1 - e^{-x}) * sum_n {n} e^{-n x}
//!           = (e^x - 1) [ mu/(e^x - 1/q)^2 + (1 - mu)/(e^x - q)^2 ]
//! ```
//!
//! The `mu` branch of the series behaves like `(e^{-x}/q)^n`, so the average
//! only exists for `x > x_min(q) = ln(1/q)`; at and below that edge the
//! closed form is reported as [`Error::BelowDomain`]. The mean occupation
//! feeds the deformed black-body density
//!
//! ```text
//! I(nu) = (8 pi hbar nu^3 / c^3) * <a^dag a>(x = hbar nu / (k T))
//! ```
//!
//! and the total energy per unit volume
//! `U = (8 pi hbar / c^3) (k T / hbar)^4 * J(q)`, where `J` is the occupation
//! integral restricted to `(x_min, infinity)`. For `q = 1` the integrand is
//! the classical `x^3/(e^x - 1)` and `J = pi^4/15`. For `q < 1` the
//! restriction does not actually tame the edge: the `mu` term carries a
//! double pole `(x - x_min)^{-2}`, so the integral exists only for `mu = 0`.
//! [`j_restricted`] probes the endpoint with dyadic refinement and reports
//! [`Error::NonIntegrableSingularity`] when the slice contributions grow
//! instead of shrinking, rather than silently returning a number.

use crate::error::{Error, Result};
use crate::quad;

/// Physical constants bundle. Everything in this module defaults to the
/// natural-unit choice `hbar = k = c = 1`; the fields exist so curves can
/// be produced in other unit systems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub k: f64,
    pub c: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self { hbar: 1.0, k: 1.0, c: 1.0 }
    }
}

impl PhysicalConstants {
    fn validate(&self) -> Result<()> {
        for (name, v) in [("hbar", self.hbar), ("k", self.k), ("c", self.c)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "physical constant {name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Domain edge of the mean occupation: `x_min = ln(1/q)`, the point where
/// the `mu` branch of the occupation series stops converging. Zero at
/// `q = 1`. Callers must keep `0 < q <= 1`; the error-returning operations
/// in this module check that before calling.
pub fn x_min(q: f64) -> f64 {
    (1.0 / q).ln()
}

fn check_q_mu(q: f64, mu: f64) -> Result<()> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "thermodynamic base q must lie in (0, 1], got {q}"
        )));
    }
    if !mu.is_finite() {
        return Err(Error::InvalidParams(format!(
            "weight mu must be finite, got {mu}"
        )));
    }
    Ok(())
}

/// Partition function `Z = 1/(1 - e^{-x})` for `x = hbar*w/(k*T) > 0`.
///
/// `H = w N` has the undeformed spectrum, so `Z` is the geometric sum
/// `sum_n e^{-n x}` and carries no `(q, mu)` dependence at all.
pub fn partition_function(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "partition function needs x > 0, got {x}"
        )));
    }
    // 1 - e^{-x} through exp_m1 keeps full precision for small x.
    Ok(-1.0 / (-x).exp_m1())
}

/// Mean occupation `<a^dag a>` at `x = hbar*w/(k*T)`:
///
/// ```text
/// (e^x - 1) [ mu/(e^x - 1/q)^2 + (1 - mu)/(e^x - q)^2 ]
/// ```
///
/// Defined for `x > x_min(q) = ln(1/q)`; at or below the edge the
/// defining series diverges and [`Error::BelowDomain`] is returned.
/// At `q = 1` this is the Bose-Einstein factor `1/(e^x - 1)`.
pub fn mean_occupation(x: f64, q: f64, mu: f64) -> Result<f64> {
    check_q_mu(q, mu)?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("occupation needs finite x, got {x}")));
    }
    let xm = x_min(q);
    if x <= xm {
        return Err(Error::BelowDomain { x, x_min: xm });
    }
    if x > 650.0 {
        // Both denominators equal e^x to within e^{-x}; the remaining
        // correction factors are below f64 resolution at this size.
        return Ok((-x).exp());
    }
    let em1 = x.exp_m1();
    // e^x - 1/q = (e^x - 1) - (1 - q)/q, and likewise for the eta branch.
    let den_mu = em1 - (1.0 - q) / q;
    let den_eta = em1 + (1.0 - q);
    Ok(em1 * (mu / (den_mu * den_mu) + (1.0 - mu) / (den_eta * den_eta)))
}

/// Partial sum of the defining ensemble average,
/// `(1 - e^{-x}) sum_{n=1}^{terms} {n} e^{-n x}`, with
/// `{n} = n(mu q^{1-n} + (1-mu) q^{n-1})`.
///
/// This is the series oracle for [`mean_occupation`] and the divergence
/// witness below the domain edge. Terms are assembled in log space so the
/// growing factor `q^{1-n}` cannot overflow on its own; below `x_min` the
/// partial sums grow without bound (saturating at infinity), which is the
/// expected outcome there, not an error. Requires `mu` in `[0, 1]` so both
/// branch weights stay nonnegative.
pub fn occupation_series(x: f64, q: f64, mu: f64, terms: usize) -> Result<f64> {
    check_q_mu(q, mu)?;
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::Domain(format!(
            "series oracle needs mu in [0, 1] for log-space summation, got {mu}"
        )));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("series oracle needs x > 0, got {x}")));
    }
    let lq = q.ln();
    let lmu = if mu > 0.0 { mu.ln() } else { f64::NEG_INFINITY };
    let leta = if mu < 1.0 { (1.0 - mu).ln() } else { f64::NEG_INFINITY };
    let mut sum = 0.0f64;
    for n in 1..=terms {
        let nf = n as f64;
        let ln_qn = nf.ln() + log_add_exp(lmu + (1.0 - nf) * lq, leta + (nf - 1.0) * lq);
        sum += (ln_qn - nf * x).exp();
        if sum.is_infinite() {
            break;
        }
    }
    Ok(-(-x).exp_m1() * sum)
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Whether a point `(x, q, mu)` admits a finite mean occupation, and its
/// value when it does. Unlike [`mean_occupation`] this reports the edge as
/// data instead of an error, which is what a tabulating caller wants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoPoint {
    pub x: f64,
    pub q: f64,
    pub mu: f64,
    pub in_domain: bool,
    /// Finite exactly when `in_domain`; positive infinity otherwise.
    pub occupation: f64,
    pub note: ThermoNote,
}

/// Domain classification carried by [`ThermoPoint`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThermoNote {
    Ok,
    BelowXmin,
}

/// Classify and evaluate the mean occupation at one point. Validation
/// failures (bad `q`, nonpositive `x`) are still errors; only the domain
/// edge itself is folded into the returned value.
pub fn thermo_point(x: f64, q: f64, mu: f64) -> Result<ThermoPoint> {
    check_q_mu(q, mu)?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("thermo point needs x > 0, got {x}")));
    }
    match mean_occupation(x, q, mu) {
        Ok(occupation) => Ok(ThermoPoint {
            x,
            q,
            mu,
            in_domain: true,
            occupation,
            note: ThermoNote::Ok,
        }),
        Err(Error::BelowDomain { .. }) => Ok(ThermoPoint {
            x,
            q,
            mu,
            in_domain: false,
            occupation: f64::INFINITY,
            note: ThermoNote::BelowXmin,
        }),
        Err(e) => Err(e),
    }
}

/// Deformed black-body spectral density
/// `I(nu) = (8 pi hbar nu^3 / c^3) <a^dag a>(x)` at `x = hbar nu/(k T)`.
///
/// At `q = 1` this is Planck's law `(8 pi hbar nu^3/c^3)/(e^x - 1)`.
/// Frequencies with `x <= x_min(q)` are outside the domain.
pub fn spectral_density(
    nu: f64,
    t: f64,
    q: f64,
    mu: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    constants.validate()?;
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(Error::Domain(format!("frequency must be positive, got {nu}")));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("temperature must be positive, got {t}")));
    }
    let x = constants.hbar * nu / (constants.k * t);
    let occ = mean_occupation(x, q, mu)?;
    Ok(8.0 * std::f64::consts::PI * constants.hbar * nu.powi(3) / constants.c.powi(3) * occ)
}

/// A sampled radiation curve `nu -> I(nu)` for fixed `(q, mu, T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiationCurve {
    /// Strictly increasing, entirely above the domain edge `nu_min`.
    pub nu_grid: Vec<f64>,
    pub i_values: Vec<f64>,
    pub q: f64,
    pub mu: f64,
    pub t: f64,
    pub constants: PhysicalConstants,
}

/// Sample the spectral density on a uniform grid of `samples` points over
/// `(nu_min, nu_max]`, where `nu_min = x_min(q) k T / hbar` is the domain
/// edge (excluded: the first sample sits one step above it).
pub fn radiation_curve(
    q: f64,
    mu: f64,
    t: f64,
    constants: &PhysicalConstants,
    nu_max: f64,
    samples: usize,
) -> Result<RadiationCurve> {
    check_q_mu(q, mu)?;
    constants.validate()?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParams(format!(
            "temperature must be positive, got {t}"
        )));
    }
    if samples < 2 {
        return Err(Error::InvalidParams(format!(
            "a curve needs at least 2 samples, got {samples}"
        )));
    }
    let nu_min = x_min(q) * constants.k * t / constants.hbar;
    if !(nu_max > nu_min) || !nu_max.is_finite() {
        return Err(Error::InvalidParams(format!(
            "nu_max must exceed the domain edge nu_min = {nu_min}, got {nu_max}"
        )));
    }
    let step = (nu_max - nu_min) / samples as f64;
    let mut nu_grid = Vec::with_capacity(samples);
    let mut i_values = Vec::with_capacity(samples);
    for k in 1..=samples {
        let nu = nu_min + k as f64 * step;
        nu_grid.push(nu);
        i_values.push(spectral_density(nu, t, q, mu, constants)?);
    }
    Ok(RadiationCurve {
        nu_grid,
        i_values,
        q,
        mu,
        t,
        constants: *constants,
    })
}

/// Occupation integrand of the restricted total-energy integral:
/// `x^3 (e^x - 1) [ mu/(e^x - 1/q)^2 + (1-mu)/(e^x - q)^2 ]`.
///
/// At `q = 1` both denominators collapse to `e^x - 1` and this is the
/// classical `x^3/(e^x - 1)`, regular at the origin. Beyond `x = 600` the
/// value is below 1e-250 and is clamped to zero so the half-line map never
/// sees an overflowed exponential.
fn j_integrand(q: f64, mu: f64, x: f64) -> f64 {
    if x > 600.0 {
        return 0.0;
    }
    let em1 = x.exp_m1();
    let den_mu = em1 - (1.0 - q) / q;
    let den_eta = em1 + (1.0 - q);
    x.powi(3) * em1 * (mu / (den_mu * den_mu) + (1.0 - mu) / (den_eta * den_eta))
}

/// The restricted occupation integral
/// `J(q, mu) = int_{x_min}^{inf} x^3 <a^dag a>'(x) dx` (integrand above).
///
/// The tail from `x_min + 1` out is integrated through the half-line map;
/// the endpoint region is then approached by dyadic slices
/// `[x_min + delta/2, x_min + delta]`, `delta = 1, 1/2, 1/4, ...`. For an
/// integrable endpoint the slice contributions shrink geometrically and
/// the march stops once they fall below the tolerance budget. For `q < 1`
/// with `mu != 0` the `mu` term has a double pole at `x_min`, the slices
/// double instead, and the march reports
/// [`Error::NonIntegrableSingularity`] once three consecutive slices have
/// failed to shrink.
///
/// `J(1, mu) = pi^4/15` for every `mu` (the classical Stefan-Boltzmann
/// integral `6 zeta(4)`).
pub fn j_restricted(q: f64, mu: f64, quad_tol: f64) -> Result<f64> {
    check_q_mu(q, mu)?;
    if !(quad_tol > 0.0) || !quad_tol.is_finite() {
        return Err(Error::InvalidParams(format!(
            "quadrature tolerance must be positive, got {quad_tol}"
        )));
    }
    let xm = x_min(q);
    let x0 = xm + 1.0;
    let outer = quad::integrate_mapped_halfline(&|t| j_integrand(q, mu, x0 + t), 0.1 * quad_tol)?;

    let mut budget = 50_000usize;
    let slice_tol = (0.01 * quad_tol * outer.abs().max(1.0)).max(1e-300);
    let mut total = outer;
    let mut delta = 1.0f64;
    let mut prev = f64::INFINITY;
    let mut grown = 0u32;
    let mut small = 0u32;
    for _ in 0..80 {
        let s = quad::adaptive_gk(
            &|x| j_integrand(q, mu, x),
            xm + 0.5 * delta,
            xm + delta,
            slice_tol,
            &mut budget,
        )?;
        total += s;
        if prev.is_finite() && s.abs() >= 0.999 * prev.abs() && s.abs() > slice_tol {
            grown += 1;
            if grown >= 3 {
                return Err(Error::NonIntegrableSingularity {
                    x_min: xm,
                    last_slice: s,
                });
            }
        } else {
            grown = 0;
        }
        if s.abs() <= slice_tol {
            small += 1;
            if small >= 2 {
                // Remaining endpoint tail is bounded by a geometric sum of
                // slices already below the per-slice budget.
                return Ok(total);
            }
        } else {
            small = 0;
        }
        prev = s;
        delta *= 0.5;
    }
    Err(Error::QuadratureFailure(format!(
        "endpoint refinement at x_min = {xm} did not settle within 80 dyadic slices"
    )))
}

/// Series form of the classical value `J(1) = 6 sum_m m (m^{-4} - (m+1)^{-4})`,
/// a partial-sum cross-check that telescopes to `6 zeta(4) = pi^4/15`.
/// Only meaningful at `q = 1`; for `q < 1` the unrestricted series diverges.
pub fn j_series_q1(terms: usize) -> f64 {
    let mut sum = 0.0f64;
    for m in 1..=terms {
        let mf = m as f64;
        sum += mf * (mf.powi(-4) - (mf + 1.0).powi(-4));
    }
    6.0 * sum
}

/// Total energy per unit volume and the deformed radiation constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TotalEnergy {
    /// `U = (8 pi hbar / c^3) (k T / hbar)^4 J(q, mu)`.
    pub u: f64,
    /// `a_q = U / T^4`, the temperature-independent prefactor.
    pub a_q: f64,
}

/// Total energy per unit volume at temperature `T`:
/// `U = a_q T^4` with `a_q = (8 pi k^4 / (hbar^3 c^3)) J(q, mu)`.
///
/// The `T^4` scaling is exact by construction (the temperature enters only
/// through the returned product). Inherits [`j_restricted`]'s domain: for
/// `q < 1` and `mu != 0` the restricted integral does not exist and the
/// singularity error is passed through.
pub fn total_energy(
    t: f64,
    q: f64,
    mu: f64,
    constants: &PhysicalConstants,
    quad_tol: f64,
) -> Result<TotalEnergy> {
    constants.validate()?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParams(format!(
            "temperature must be positive, got {t}"
        )));
    }
    let j = j_restricted(q, mu, quad_tol)?;
    let a_q = 8.0 * std::f64::consts::PI * constants.k.powi(4)
        / (constants.hbar.powi(3) * constants.c.powi(3))
        * j;
    Ok(TotalEnergy { u: a_q * t.powi(4), a_q })
}
