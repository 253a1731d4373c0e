//! Deformed differential and integral calculus.
//!
//! The derivative here is the two-sided finite-difference operator
//! `D = (mu T_{1/q} + (1-mu) T_q) d/dx` with `(T_q f)(x) = f(qx)`; on
//! monomials it acts as `x^n -> {n} x^(n-1)`, and its eigenfunction is the
//! deformed exponential `e(x) = sum x^n / {n}!`.
//!
//! The half-line deformed integral inverts the operator
//! `A = mu T_{1/q} + (1-mu) T_q` with a geometric operator series; each
//! series term is an ordinary integral of a dilated copy of the integrand,
//! which a change of variables reduces to one base integral. The base
//! integral of a deformed exponential does not converge classically (the
//! integrand oscillates with growing envelope); it carries a regularized
//! value which the lobe-truncating quadrature in [`crate::quad`] extracts.
//!
//! Built-in integrands are evaluated in double-double arithmetic: the
//! alternating series for `e(-x)` cancels through dozens of digits at the
//! `x` the half-line quadrature visits, far past binary64. Caller-supplied
//! [`EvalFn`] integrands evaluate in binary64 and are accordingly limited
//! to integrands without deep interior cancellation.

use crate::algebra::{qfactorial, qnumber, qnumber_clamped};
use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::params::DeformationParams;
use crate::quad::integrate_halfline_regularized;
use crate::series::PowerSeries;
use num_complex::Complex64;

/// Caller-supplied function with its exact first derivative. The
/// derivative is part of the contract (no internal differencing): the
/// deformed derivative composes argument scalings with the ordinary
/// derivative, and finite-difference error would contaminate the identity
/// checks built on top.
pub struct EvalFn<'a> {
    pub f: &'a dyn Fn(f64) -> f64,
    pub fprime: &'a dyn Fn(f64) -> f64,
}

const EXP_TERM_CAP: usize = 10_000;

pub(crate) fn require_std_exponents(params: &DeformationParams, what: &str) -> Result<()> {
    if params.alpha == -1.0
        && params.beta == 1.0
        && params.gamma == 1.0
        && params.delta == -1.0
        && params.is_normalized()
    {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{what} is defined for the standard infinite-dimensional exponents \
             (alpha, beta, gamma, delta) = (-1, 1, 1, -1) with mu + eta = 1"
        )))
    }
}

/// `T_q^power` on series: `c_n -> q^(power*n) c_n`.
pub fn scale_op(s: &PowerSeries, params: &DeformationParams, power: i32) -> PowerSeries {
    let coeffs = s
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| c * params.q.powi(power * n as i32))
        .collect();
    PowerSeries {
        coeffs,
        trunc: s.trunc,
    }
}

/// Termwise deformed derivative `c_n x^n -> c_n {n} x^(n-1)`.
pub fn deformed_derivative(s: &PowerSeries, params: &DeformationParams) -> PowerSeries {
    let trunc = (s.trunc - 1).max(1);
    let mut coeffs = vec![0.0; trunc];
    for n in 1..s.trunc {
        coeffs[n - 1] = s.coeffs[n] * qnumber_clamped(params, n as f64);
    }
    PowerSeries { coeffs, trunc }
}

/// Functional form `(D g)(x) = mu g'(x/q) + (1-mu) g'(qx)`.
///
/// The caller's domain is declared through `g.fprime` itself: a non-finite
/// derivative value at either scaled argument is treated as out of domain.
pub fn deformed_derivative_fn(g: &EvalFn, params: &DeformationParams, x: f64) -> Result<f64> {
    require_std_exponents(params, "the functional deformed derivative")?;
    let lo = (g.fprime)(x / params.q);
    let hi = (g.fprime)(params.q * x);
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Domain(format!(
            "derivative not finite at scaled arguments {} / {}",
            x / params.q,
            params.q * x
        )));
    }
    Ok(params.mu * lo + params.eta * hi)
}

/// Termwise antiderivative `c_n x^n -> c_n x^(n+1) / {n+1}`; exact inverse
/// of [`deformed_derivative`] (the length grows by one so the round trip
/// loses nothing).
pub fn deformed_antiderivative(s: &PowerSeries, params: &DeformationParams) -> Result<PowerSeries> {
    let trunc = s.trunc + 1;
    let mut coeffs = vec![0.0; trunc];
    for n in 0..s.trunc {
        if s.coeffs[n] == 0.0 {
            continue;
        }
        let d = qnumber_clamped(params, (n + 1) as f64);
        if d == 0.0 {
            return Err(Error::ZeroDenominator { n: n as u32 });
        }
        coeffs[n + 1] = s.coeffs[n] / d;
    }
    Ok(PowerSeries { coeffs, trunc })
}

/// Deformed exponential `sum_n x^n / {n}!` in binary64 with Neumaier
/// compensation. Stops once two consecutive terms fall below
/// `tol * max(|sum|, representation floor)`; errs with [`Error::NoConvergence`]
/// at the term cap (10,000).
pub fn deformed_exp(params: &DeformationParams, x: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut comp = 0.0f64; // Neumaier compensation
    let mut max_term = 1.0f64;
    let mut prev_small = false;
    for k in 1..=EXP_TERM_CAP {
        let qn = qnumber_clamped(params, k as f64);
        if qn == 0.0 {
            return Err(Error::ZeroDenominator { n: k as u32 });
        }
        term *= x / qn;
        let t = term;
        // Neumaier update of (sum, comp).
        let s = sum + t;
        comp += if sum.abs() >= t.abs() {
            (sum - s) + t
        } else {
            (t - s) + sum
        };
        sum = s;
        max_term = max_term.max(t.abs());
        let floor = 0.5 * f64::EPSILON * max_term;
        let threshold = tol * (sum + comp).abs().max(floor);
        let small = t.abs() < threshold;
        if small && prev_small {
            return Ok(sum + comp);
        }
        prev_small = small;
    }
    Err(Error::NoConvergence {
        what: "deformed_exp",
        cap: EXP_TERM_CAP,
    })
}

/// Derivative of the deformed exponential, `sum_n n x^(n-1) / {n}!`,
/// same summation policy as [`deformed_exp`].
pub fn deformed_exp_deriv(params: &DeformationParams, x: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    // Term j carries (j+1) x^j / {j+1}!.
    let q1 = qnumber_clamped(params, 1.0);
    if q1 == 0.0 {
        return Err(Error::ZeroDenominator { n: 1 });
    }
    let mut term = 1.0 / q1;
    let mut sum = term;
    let mut comp = 0.0f64;
    let mut max_term = term.abs();
    let mut prev_small = false;
    for j in 1..=EXP_TERM_CAP {
        let qn = qnumber_clamped(params, (j + 1) as f64);
        if qn == 0.0 {
            return Err(Error::ZeroDenominator { n: (j + 1) as u32 });
        }
        term *= x * (j + 1) as f64 / (j as f64 * qn);
        let t = term;
        let s = sum + t;
        comp += if sum.abs() >= t.abs() {
            (sum - s) + t
        } else {
            (t - s) + sum
        };
        sum = s;
        max_term = max_term.max(t.abs());
        let floor = 0.5 * f64::EPSILON * max_term;
        let threshold = tol * (sum + comp).abs().max(floor);
        let small = t.abs() < threshold;
        if small && prev_small {
            return Ok(sum + comp);
        }
        prev_small = small;
    }
    Err(Error::NoConvergence {
        what: "deformed_exp_deriv",
        cap: EXP_TERM_CAP,
    })
}

/// Deformed exponential of a complex argument (termwise series, same stop
/// rule as the real case). Carrier for coherent-state overlaps.
pub fn deformed_exp_complex(
    params: &DeformationParams,
    z: Complex64,
    tol: f64,
) -> Result<Complex64> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut max_term = 1.0f64;
    let mut prev_small = false;
    for k in 1..=EXP_TERM_CAP {
        let qn = qnumber_clamped(params, k as f64);
        if qn == 0.0 {
            return Err(Error::ZeroDenominator { n: k as u32 });
        }
        term *= z / qn;
        sum += term;
        let t = term.norm();
        max_term = max_term.max(t);
        let floor = 0.5 * f64::EPSILON * max_term;
        let threshold = tol * sum.norm().max(floor);
        let small = t < threshold;
        if small && prev_small {
            return Ok(sum);
        }
        prev_small = small;
    }
    Err(Error::NoConvergence {
        what: "deformed_exp_complex",
        cap: EXP_TERM_CAP,
    })
}

/// Coefficient view of the deformed exponential: `c_n = 1 / {n}!`.
pub fn deformed_exp_series(params: &DeformationParams, trunc: usize) -> Result<PowerSeries> {
    assert!(trunc >= 1, "series needs trunc >= 1");
    let mut coeffs = vec![0.0; trunc];
    coeffs[0] = 1.0;
    let mut c = 1.0;
    for n in 1..trunc {
        let qn = qnumber_clamped(params, n as f64);
        if qn == 0.0 {
            return Err(Error::ZeroDenominator { n: n as u32 });
        }
        c /= qn;
        coeffs[n] = c;
    }
    Ok(PowerSeries { coeffs, trunc })
}

/// Defect of the four-term product rule
/// `D(fg) = (Df)(T_q^{-1} g) + (T_q f)(Dg) - mu (Tf)(T_q^{-1} g')
///  + (1-mu) (T_q f')(Tg)` with `(Tf)(x) = f(qx) - f(x/q)`.
///
/// Returns the largest coefficient deviation over the indices where both
/// sides carry complete convolutions (below `min(trunc) - 1`); the top
/// index is a truncation artifact, like the top row of the matrix
/// commutators.
pub fn leibniz_defect(f: &PowerSeries, g: &PowerSeries, params: &DeformationParams) -> f64 {
    let lhs = deformed_derivative(&f.multiply(g), params);

    let t1 = deformed_derivative(f, params).multiply(&scale_op(g, params, -1));
    let t2 = scale_op(f, params, 1).multiply(&deformed_derivative(g, params));
    let tf = scale_op(f, params, 1).sub(&scale_op(f, params, -1));
    let t3 = tf
        .multiply(&scale_op(&g.ordinary_derivative(), params, -1))
        .scale(-params.mu);
    let tg = scale_op(g, params, 1).sub(&scale_op(g, params, -1));
    let t4 = scale_op(&f.ordinary_derivative(), params, 1)
        .multiply(&tg)
        .scale(params.eta);
    let rhs = t1.add(&t2).add(&t3).add(&t4);

    let complete = f.trunc.min(g.trunc).saturating_sub(1);
    let mut defect = 0.0f64;
    for n in 0..complete {
        let a = lhs.coeffs.get(n).copied().unwrap_or(0.0);
        let b = rhs.coeffs.get(n).copied().unwrap_or(0.0);
        defect = defect.max((a - b).abs());
    }
    defect
}

// ---------------------------------------------------------------------------
// Double-double series evaluation for the half-line integrands.

#[derive(Clone, Copy)]
pub(crate) enum SeriesKind {
    Value,
    SecondDeriv,
}

const DD_TERM_CAP: usize = 100_000;
/// Relative noise floor of the double-double alternating sum: once the
/// result is this far below the largest term, the digits left are rounding
/// residue and the value is clamped to an exact zero (which also keeps the
/// quadrature's sign logic from chasing noise wiggles). The measured
/// jitter of the summation is ~2e-32 of the largest term; the clamp sits
/// at the margin the mirrored moment integrals need (their integrands
/// decay nearly classically, so every extra clamp decade buys only ~1.2
/// units of visible tail).
const DD_NOISE: f64 = 1e-31;

/// `sum_k y^k / {k}!` (Value) or its second derivative
/// `sum_m (m+1)(m+2) y^m / {m+2}!` (SecondDeriv), evaluated in
/// double-double for the standard infinite family. Returns the sum and the
/// largest term magnitude (cancellation gauge).
pub(crate) fn exp_series_dd(q: f64, mu: f64, y: f64, kind: SeriesKind) -> (Dd, f64) {
    let qd = Dd::from_f64(q);
    let qinv = qd.recip();
    let mud = Dd::from_f64(mu);
    let nud = Dd::ONE.sub(mud);
    let yd = Dd::from_f64(y);

    // pw_down = q^(1-k), pw_up = q^(k-1) for the current k.
    let mut pw_down = Dd::ONE;
    let mut pw_up = Dd::ONE;
    let mut k = 0u32;
    let mut next_qn = move || -> Dd {
        k += 1;
        if k > 1 {
            pw_down = pw_down.mul(qinv);
            pw_up = pw_up.mul(qd);
        }
        mud.mul(pw_down).add(nud.mul(pw_up)).mul_f64(k as f64)
    };

    let (mut term, skip) = match kind {
        SeriesKind::Value => (Dd::ONE, 0u32),
        SeriesKind::SecondDeriv => {
            // First term (m = 0): 2 / {2}! = 2 / ({1}{2}).
            let q1 = next_qn();
            let q2 = next_qn();
            (Dd::from_f64(2.0).div(q1.mul(q2)), 2)
        }
    };
    let mut sum = term;
    let mut max_term = term.to_f64().abs();
    for j in 1..DD_TERM_CAP {
        let qn = next_qn(); // {j + skip}
        term = match kind {
            SeriesKind::Value => term.mul(yd).div(qn),
            SeriesKind::SecondDeriv => {
                // r_m = (m+1)(m+2) y^m / {m+2}!; ratio (m+3)/((m+1){m+3}).
                // The integer factors stay exact: an f64-rounded quotient
                // (m+3)/(m+1) here compounds through the recurrence and the
                // cancellation blows the drift up to ~1e-16 of the largest
                // term, which is the whole budget this representation buys.
                let m = j as f64 - 1.0;
                term.mul(yd).mul_f64(m + 3.0).div(qn.mul_f64(m + 1.0))
            }
        };
        sum = sum.add(term);
        let t = term.to_f64().abs();
        if t > max_term {
            max_term = t;
        }
        if j >= 8 && t <= max_term * 1e-34 {
            break;
        }
    }
    let _ = skip;
    (sum, max_term)
}

/// Deterministic jitter level of one double-double series evaluation,
/// relative to the largest term (measured at ~2e-32; kept with margin).
const DD_EVAL_NOISE: f64 = 1e-31;

/// Double-double evaluation collapsed to binary64: (clamped value,
/// absolute noise level of the evaluation).
pub(crate) fn exp_dd_noisy(q: f64, mu: f64, y: f64, kind: SeriesKind) -> (f64, f64) {
    let (sum, max_term) = exp_series_dd(q, mu, y, kind);
    let v = sum.to_f64();
    let noise = max_term * DD_EVAL_NOISE;
    if v.abs() < max_term * DD_NOISE {
        (0.0, noise)
    } else {
        (v, noise)
    }
}

/// Double-double evaluation collapsed to binary64 with the noise clamp.
pub(crate) fn exp_dd_clamped(q: f64, mu: f64, y: f64, kind: SeriesKind) -> f64 {
    exp_dd_noisy(q, mu, y, kind).0
}

// ---------------------------------------------------------------------------
// Half-line deformed integral.

/// Integrand of [`deformed_integral_halfline_detailed`].
pub enum HalflineIntegrand<'a> {
    /// Caller-supplied binary64 integrand (its `fprime` is unused here).
    User(&'a EvalFn<'a>),
    /// `e(-omega x) x^n` built from the integral's own parameters,
    /// evaluated in double-double.
    DeformedExpMonomial { omega: f64, n: u32 },
    /// `phi2 * e''(-x) x^n` with `e` built from the integral's own
    /// parameters: the coherent-state weight-function integrand (the
    /// constant `phi2` and the exponent mirror are the caller's business).
    WeightMonomial { phi2: f64, n: u32 },
}

/// Diagnostics of a half-line deformed integration.
#[derive(Debug, Clone, Copy)]
pub struct HalflineOutcome {
    pub value: f64,
    /// Base-quadrature floor plus series truncation, scaled into the result.
    pub err_estimate: f64,
    /// True when the base integral exists only as a regularized value
    /// (lobe series cut at its optimal truncation point); `err_estimate`
    /// is then an intrinsic floor no tolerance can pass.
    pub regularized: bool,
    /// Terms of the geometric operator series summed.
    pub series_terms: usize,
    /// Magnitude of the series ratio actually used.
    pub expansion_ratio: f64,
}

/// Half-line deformed integral with diagnostics; see
/// [`deformed_integral_halfline`] for the plain value.
pub fn deformed_integral_halfline_detailed(
    f: &HalflineIntegrand,
    params: &DeformationParams,
    quad_tol: f64,
) -> Result<HalflineOutcome> {
    require_std_exponents(params, "the half-line deformed integral")?;
    if !(quad_tol > 0.0) || !quad_tol.is_finite() {
        return Err(Error::Domain(format!(
            "quad_tol must be positive, got {quad_tol}"
        )));
    }
    let (q, mu) = (params.q, params.mu);
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::Domain(format!(
            "the operator-series expansion needs 0 < mu <= 1, got {mu}"
        )));
    }
    // Branch selection. Expanding around the mu-term gives dilations
    // q^(2m+1) and (after the change of variables u = q^(2m+1) x inside
    // each ordinary integral) the signed term ratio (1 - 1/mu) q^-2;
    // expanding around the (1-mu)-term mirrors both. mu = 1/2 is excluded
    // by contract (ratio stated as 1): the error carries that ratio.
    if mu == 0.5 {
        return Err(Error::ExpansionDivergence { ratio: 1.0 });
    }
    let (w0, rho) = if mu > 0.5 {
        ((1.0 / mu) / q, (1.0 - 1.0 / mu) / (q * q))
    } else {
        (q / (1.0 - mu), -mu / (1.0 - mu) * q * q)
    };
    if rho.abs() >= 1.0 {
        return Err(Error::ExpansionDivergence { ratio: rho.abs() });
    }

    // Base ordinary integral, computed once; every series term is an exact
    // scaling of it.
    let base = match f {
        HalflineIntegrand::User(ef) => {
            let g = ef.f;
            integrate_halfline_regularized(&|x| (g(x), 0.0), quad_tol, 0.0)?
        }
        HalflineIntegrand::DeformedExpMonomial { omega, n } => {
            let p = *n as i32;
            let om = *omega;
            integrate_halfline_regularized(
                &|x| {
                    let (v, noise) = exp_dd_noisy(q, mu, -om * x, SeriesKind::Value);
                    let xn = x.powi(p);
                    (v * xn, noise * xn.abs())
                },
                quad_tol,
                0.0,
            )?
        }
        HalflineIntegrand::WeightMonomial { phi2, n } => {
            let p = *n as i32;
            let c = *phi2;
            integrate_halfline_regularized(
                &|x| {
                    let (v, noise) = exp_dd_noisy(q, mu, -x, SeriesKind::SecondDeriv);
                    let s = c * x.powi(p);
                    (v * s, noise * s.abs())
                },
                quad_tol,
                0.0,
            )?
        }
    };

    let mut coeff = w0;
    let mut ksum = 0.0f64;
    let mut terms = 0usize;
    loop {
        ksum += coeff;
        terms += 1;
        coeff *= rho;
        // Geometric tail bound on the remaining coefficients.
        if coeff.abs() / (1.0 - rho.abs()) <= 0.5 * quad_tol * ksum.abs() || terms >= DD_TERM_CAP {
            break;
        }
    }
    let tail = coeff.abs() / (1.0 - rho.abs());
    Ok(HalflineOutcome {
        value: ksum * base.value,
        err_estimate: ksum.abs() * base.err_estimate + tail * base.value.abs(),
        regularized: base.truncated,
        series_terms: terms,
        expansion_ratio: rho.abs(),
    })
}

/// Half-line deformed integral of a caller-supplied integrand.
///
/// Preconditions: standard infinite-family exponents and `0 < mu <= 1`
/// with `mu != 1/2` (the operator series has unit ratio there). The
/// ordinary integrals the series is made of must exist at least as
/// regularized values; the built-in integrand forms of
/// [`deformed_integral_halfline_detailed`] handle the deformed-exponential
/// cases that need extended-precision evaluation.
pub fn deformed_integral_halfline(
    f: &EvalFn,
    params: &DeformationParams,
    quad_tol: f64,
) -> Result<f64> {
    deformed_integral_halfline_detailed(&HalflineIntegrand::User(f), params, quad_tol)
        .map(|o| o.value)
}

/// Relative defect of the reflection identity
/// `{-k}_mu = -(k/(k+2)) {k+2}_(1-mu)`.
pub fn neg_qnumber_identity_defect(params: &DeformationParams, k: u32) -> f64 {
    let mirror = DeformationParams::std_infinite(params.q, 1.0 - params.mu)
        .expect("mirror of valid params is valid");
    let lhs = qnumber(params, -(k as f64));
    let rhs = -(k as f64 / (k as f64 + 2.0)) * qnumber(&mirror, k as f64 + 2.0);
    let scale = lhs.abs().max(rhs.abs()).max(1e-300);
    if k == 0 {
        return (lhs - rhs).abs();
    }
    (lhs - rhs).abs() / scale
}

/// Existence and coefficient of the logarithmic integral pair
/// `D(ln x) = (mu q + (1-mu)/q) / x` and `int Dx 1/x = ln(x) * value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogIntegralIdentity {
    pub value: f64,
    pub exists: bool,
}

pub fn log_integral_identity(params: &DeformationParams) -> LogIntegralIdentity {
    let (q, mu) = (params.q, params.mu);
    let radicand = (1.0 - 1.0 / mu).max(0.0);
    LogIntegralIdentity {
        value: 1.0 / (mu * q + (1.0 - mu) / q),
        exists: q > radicand.sqrt(),
    }
}

/// Analytic right-hand side of the exponential moment identity:
/// `int Dx e(-omega x) x^n = omega^-(n+1) * prod_(k=1..n) (-{-k})`.
pub fn exp_moment_analytic(params: &DeformationParams, omega: f64, n: u32) -> f64 {
    let mut prod = omega.powi(-(n as i32 + 1));
    for k in 1..=n {
        prod *= -qnumber(params, -(k as f64));
    }
    prod
}

/// Analytic right-hand side of the mirrored moment identity:
/// `int D'x e'(-x) x^n = 2 {n+2}! / ({2} (n+1)(n+2))` where the primes
/// mark the replacement `mu -> 1-mu` (integral and exponential both) and
/// the deformed numbers on the right keep the original `mu`.
pub fn mirror_moment_analytic(params: &DeformationParams, n: u32) -> f64 {
    2.0 * qfactorial(params, n + 2)
        / (qnumber(params, 2.0) * (n as f64 + 1.0) * (n as f64 + 2.0))
}
