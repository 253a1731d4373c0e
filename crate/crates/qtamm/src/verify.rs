//! Built-in verification suites: one battery of named checks per module,
//! each reporting the measured defect against a pinned tolerance.
//!
//! The suites exist so a user can point the CLI at their own parameter
//! point and see which identities hold there and by how much, without
//! running the test suite. Checks are data, not assertions: a FAIL line is
//! a finding about the parameter regime (log-concavity and weight
//! positivity genuinely fail at strong deformation), not necessarily a
//! bug. Checks whose defining construction is undefined at the configured
//! point (the operator-series integral at `mu = 1/2`, the finite family at
//! `q = 1`) are omitted from the report rather than faked.
//!
//! Setting the environment variable `QTAMM_PRECISION=extended` (read by
//! [`Precision::from_env`]) switches the series oracles to the
//! double-double evaluator where one exists and widens partial-sum
//! budgets; tolerances are unchanged, only the oracle side moves.

use crate::algebra::{build_fock, commutator_residuals, qnumber};
use crate::calculus::{
    deformed_antiderivative, deformed_derivative, deformed_exp, deformed_exp_deriv,
    deformed_integral_halfline_detailed, exp_dd_clamped, exp_moment_analytic, leibniz_defect,
    neg_qnumber_identity_defect, HalflineIntegrand, SeriesKind,
};
use crate::coherent::{coherent_coeffs, moment_problem_check, phi, positivity_probe, weight_coeffs};
use crate::error::{Error, Result};
use crate::finite::{
    build_fock_d, closure_residuals, exp_eigen_defect_d, leibniz_defect_d,
    moment_identity_d_check, neg_qnumber_d_identity_defect, qfactorial_d, qnumber_d, FiniteParams,
};
use crate::params::DeformationParams;
use crate::series::PowerSeries;
use crate::spectral::{
    selfadjointness_diagnostics, state_statistics, JacobiKind, OscillatorConfig,
};
use crate::thermo;
use num_complex::Complex64;

/// Oracle precision for the verification checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    Standard,
    Extended,
}

impl Precision {
    /// Reads `QTAMM_PRECISION`; the value `extended` (any case) selects
    /// the double-double oracle mode, everything else is standard.
    pub fn from_env() -> Self {
        match std::env::var("QTAMM_PRECISION") {
            Ok(v) if v.eq_ignore_ascii_case("extended") => Precision::Extended,
            _ => Precision::Standard,
        }
    }
}

/// One verification check: a named defect measurement against a pinned
/// tolerance.
#[derive(Debug, Clone)]
pub struct Check {
    pub module: &'static str,
    pub name: &'static str,
    pub tolerance: f64,
    pub measured: f64,
    pub passed: bool,
    /// Context for expected regime-dependent failures.
    pub note: Option<&'static str>,
}

impl Check {
    fn gauge(module: &'static str, name: &'static str, tolerance: f64, measured: f64) -> Self {
        Check {
            module,
            name,
            tolerance,
            measured,
            passed: measured.is_finite() && measured <= tolerance,
            note: None,
        }
    }

    fn with_note(mut self, note: &'static str) -> Self {
        if !self.passed {
            self.note = Some(note);
        }
        self
    }
}

/// Suite names, one per library module with numerical invariants.
pub const SUITES: [&str; 6] = [
    "algebra", "calculus", "spectral", "coherent", "finite", "thermo",
];

/// Parameter point the suites are evaluated at.
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub q: f64,
    pub mu: f64,
    /// Closing level for the finite-family suite.
    pub d: u32,
    pub precision: Precision,
}

/// Run one named suite. `"all"` is handled by [`run_all`].
pub fn run_suite(suite: &str, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    match suite {
        "algebra" => algebra_suite(cfg),
        "calculus" => calculus_suite(cfg),
        "spectral" => spectral_suite(cfg),
        "coherent" => coherent_suite(cfg),
        "finite" => finite_suite(cfg),
        "thermo" => thermo_suite(cfg),
        other => Err(Error::InvalidParams(format!(
            "unknown suite {other:?}; valid: {} or all",
            SUITES.join(", ")
        ))),
    }
}

/// Every suite in [`SUITES`] order, concatenated.
pub fn run_all(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for suite in SUITES {
        checks.extend(run_suite(suite, cfg)?);
    }
    Ok(checks)
}

fn std_params(cfg: &VerifyConfig) -> Result<DeformationParams> {
    DeformationParams::std_infinite(cfg.q, cfg.mu)
}

fn algebra_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let p = std_params(cfg)?;
    let mut checks = Vec::new();

    let rep = build_fock(&p, 32)?;
    let r = commutator_residuals(&rep);
    let worst = r.defect_aadag.max(r.defect_na).max(r.defect_nadag);
    checks.push(Check::gauge(
        "algebra",
        "ladder commutators close on a 32-level representation",
        1e-12,
        worst,
    ));

    let classical = DeformationParams::std_infinite(1.0, cfg.mu)?;
    let mut worst = 0.0f64;
    for n in 1..=20 {
        let nf = f64::from(n);
        worst = worst.max((qnumber(&classical, nf) - nf).abs() / nf);
    }
    checks.push(Check::gauge(
        "algebra",
        "classical reduction {n} -> n at q = 1",
        1e-10,
        worst,
    ));

    let mut min_level = f64::INFINITY;
    for n in 1..=64 {
        min_level = min_level.min(qnumber(&p, f64::from(n)));
    }
    checks.push(
        Check::gauge(
            "algebra",
            "deformed numbers nonnegative through level 64",
            1e-13,
            (-min_level).max(0.0),
        )
        .with_note("levels go negative: no Fock representation this deep"),
    );

    Ok(checks)
}

fn calculus_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let p = std_params(cfg)?;
    let mut checks = Vec::new();

    // D e(x) = e(x) sampled over [0, 3]; value side optionally in
    // double-double, derivative side is the compensated f64 series.
    let e_at = |y: f64| -> Result<f64> {
        match cfg.precision {
            Precision::Standard => deformed_exp(&p, y, 1e-14),
            Precision::Extended => Ok(exp_dd_clamped(p.q, p.mu, y, SeriesKind::Value)),
        }
    };
    let mut worst_num = 0.0f64;
    let mut scale = 0.0f64;
    for k in 0..=30 {
        let x = 3.0 * k as f64 / 30.0;
        let dval = p.mu * deformed_exp_deriv(&p, x / p.q, 1e-14)?
            + p.eta * deformed_exp_deriv(&p, p.q * x, 1e-14)?;
        let ev = e_at(x)?;
        worst_num = worst_num.max((dval - ev).abs());
        scale = scale.max(ev.abs());
    }
    checks.push(Check::gauge(
        "calculus",
        "deformed exponential is the derivative eigenfunction",
        1e-10,
        worst_num / scale,
    ));

    let f = pseudo_series(11, 9);
    let g = pseudo_series(23, 9);
    checks.push(Check::gauge(
        "calculus",
        "four-term Leibniz rule on pseudo-random series",
        1e-12,
        leibniz_defect(&f, &g, &p),
    ));

    let round = deformed_derivative(&deformed_antiderivative(&f, &p)?, &p);
    let mut worst = 0.0f64;
    for (a, b) in round.coeffs.iter().zip(&f.coeffs) {
        worst = worst.max((a - b).abs() / b.abs().max(1.0));
    }
    checks.push(Check::gauge(
        "calculus",
        "antiderivative is a right inverse of the derivative",
        1e-13,
        worst,
    ));

    let mut worst = 0.0f64;
    for k in 1..=10 {
        worst = worst.max(neg_qnumber_identity_defect(&p, k));
    }
    checks.push(Check::gauge(
        "calculus",
        "negative-index reflection {-k} identity",
        1e-13,
        worst,
    ));

    // D ln x = (mu q + (1-mu)/q) / x, evaluated at x = 1.
    let dln = p.mu * p.q + p.eta / p.q;
    let c = crate::calculus::log_integral_identity(&p);
    checks.push(Check::gauge(
        "calculus",
        "logarithm derivative constant matches its closed form",
        1e-14,
        (dln * c.value - 1.0).abs(),
    ));

    // Moment identity through the operator-series integral; only defined
    // away from mu = 1/2 and only when the geometric ratio is below one.
    if let Ok(out) = deformed_integral_halfline_detailed(
        &HalflineIntegrand::DeformedExpMonomial { omega: 1.0, n: 4 },
        &p,
        1e-12,
    ) {
        let want = exp_moment_analytic(&p, 1.0, 4);
        checks.push(
            Check::gauge(
                "calculus",
                "fourth moment of the deformed exponential",
                1e-8,
                (out.value - want).abs() / want.abs(),
            )
            .with_note("the regularized base integral has an intrinsic accuracy floor below q ~ 0.95"),
        );
    }

    Ok(checks)
}

fn spectral_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let p = std_params(cfg)?;
    let mut checks = Vec::new();

    let config = OscillatorConfig::new(p.clone(), 1.0, 1.0, 24)?;
    let vac = state_statistics(&config, 0)?;
    checks.push(Check::gauge(
        "spectral",
        "vacuum uncertainty product is 1/2",
        1e-14,
        (vac.uncertainty - 0.5).abs(),
    ));

    // Variance from the dense tridiagonal square vs the closed form.
    let jac = crate::spectral::build_jacobi(&config, JacobiKind::Q)?;
    let dense = jac.dense_abs();
    let n = 3usize;
    let mut from_matrix = 0.0f64;
    for k in 0..jac.dim {
        let v = dense.get(n, k);
        from_matrix += v * v;
    }
    let closed = state_statistics(&config, n as u32)?.var_q;
    checks.push(Check::gauge(
        "spectral",
        "position variance agrees with the matrix square",
        1e-13,
        (from_matrix - closed).abs() / closed,
    ));

    if p.q < 1.0 && (0.0..=1.0).contains(&p.mu) {
        let d = selfadjointness_diagnostics(&p, 2000)?;
        checks.push(Check::gauge(
            "spectral",
            "ladder ratio tail approaches sqrt(q)",
            1e-3,
            (d.ratio_limit_estimate - p.q.sqrt()).abs(),
        ));
        let d = selfadjointness_diagnostics(&p, 10_000)?;
        checks.push(
            Check::gauge(
                "spectral",
                "ladder weights are log-concave through n = 10^4",
                0.5,
                if d.logconcavity_ok { 0.0 } else { 1.0 },
            )
            .with_note("bottom links of the chain fail here; the convergence argument only needs the tail"),
        );
    }

    Ok(checks)
}

fn coherent_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let p = std_params(cfg)?;
    let mut checks = Vec::new();

    let z = Complex64::new(1.0, 0.0);
    let state = coherent_coeffs(z, &p, 1e-12)?;
    checks.push(Check::gauge(
        "coherent",
        "coherent state normalizes",
        1e-10,
        state.norm_defect.abs(),
    ));

    // || a|z> - z|z> ||: component n of a|z> is c_(n+1) sqrt({n+1}).
    let mut defect_sq = 0.0f64;
    for n in 0..state.coeffs.len() - 1 {
        let amp = crate::algebra::qnumber(&p, (n + 1) as f64).max(0.0).sqrt();
        let diff = state.coeffs[n + 1] * amp - z * state.coeffs[n];
        defect_sq += diff.norm_sqr();
    }
    checks.push(Check::gauge(
        "coherent",
        "coherent state is a ladder eigenvector",
        1e-9,
        defect_sq.sqrt(),
    ));

    let coeffs = weight_coeffs(&p, 4)?;
    let p2 = phi(&p, 2);
    let p3 = phi(&p, 3);
    let p4 = phi(&p, 4);
    let g1_closed = p2 * (p3 - 1.0) / (p2 * p3);
    let g2_closed = (p2 - p3 * p4 + 2.0 * p2 * (p3 - 1.0) * p4) / (2.0 * p2 * p3 * p4);
    let d1 = (coeffs.g[1] - g1_closed).abs() / g1_closed.abs().max(1.0);
    let d2 = (coeffs.g[2] - g2_closed).abs() / g2_closed.abs().max(1.0);
    checks.push(Check::gauge(
        "coherent",
        "weight recursion matches the closed forms for g1, g2",
        1e-12,
        d1.max(d2),
    ));
    checks.push(Check::gauge(
        "coherent",
        "weight recursion anti-diagonal identity",
        1e-12,
        coeffs.recursion_defect(),
    ));

    if p.q < 1.0 {
        let probe = positivity_probe(&p, 10.0, 201)?;
        checks.push(
            Check::gauge(
                "coherent",
                "closed-form weight stays positive on [0, 10]",
                1e-12,
                (-probe.min_value).max(0.0),
            )
            .with_note("the reconstructed weight is not a positive measure at strong deformation"),
        );
    }

    if cfg.mu != 0.5 {
        if let Ok(report) = moment_problem_check(&p, 4, 1e-6) {
            let worst = report
                .rows
                .iter()
                .map(|r| r.rel_error)
                .fold(0.0f64, f64::max);
            checks.push(
                Check::gauge("coherent", "weight reproduces the factorial moments", 1e-6, worst)
                    .with_note("regularized-integral floor exceeds the bar away from q near 1"),
            );
        }
    }

    Ok(checks)
}

fn finite_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    if cfg.q >= 1.0 {
        // The finite family needs 0 < q < 1; there is nothing to check at
        // the classical point.
        return Ok(Vec::new());
    }
    let fp = FiniteParams::new(cfg.q, cfg.d)?;
    let mut checks = Vec::new();

    let rep = build_fock_d(&fp);
    let r = closure_residuals(&rep);
    let worst = r.defect_aadag.max(r.defect_na).max(r.defect_nadag);
    checks.push(Check::gauge(
        "finite",
        "commutators close on every row including the top",
        1e-13,
        worst,
    ));

    checks.push(Check::gauge(
        "finite",
        "the closing level {d} vanishes",
        1e-15,
        qnumber_d(&fp, f64::from(fp.d)).abs(),
    ));

    let mut min_level = f64::INFINITY;
    for n in 1..fp.d {
        min_level = min_level.min(qnumber_d(&fp, f64::from(n)));
    }
    if fp.d > 1 {
        checks.push(Check::gauge(
            "finite",
            "interior levels stay positive",
            1e-15,
            (-min_level).max(0.0),
        ));
    }

    let mut worst = 0.0f64;
    for k in 1..=8 {
        worst = worst.max(neg_qnumber_d_identity_defect(&fp, k));
    }
    checks.push(Check::gauge(
        "finite",
        "negative-index reflection onto the mirrored space",
        1e-13,
        worst,
    ));

    let mut worst = 0.0f64;
    for n in 1..=8 {
        worst = worst.max(moment_identity_d_check(&fp, n).rel_defect);
    }
    checks.push(Check::gauge(
        "finite",
        "alternating moment chain telescopes to mirrored factorials",
        1e-12,
        worst,
    ));

    let defect = exp_eigen_defect_d(&fp, 1.0);
    let leak = 2.0f64.powi(fp.d as i32 - 1) / qfactorial_d(&fp, fp.d - 1);
    checks.push(Check::gauge(
        "finite",
        "truncated exponential leaks exactly its top term",
        1e-10,
        (defect - leak).abs() / leak.max(1e-300),
    ));

    let f = pseudo_series(31, 7);
    let g = pseudo_series(47, 7);
    checks.push(Check::gauge(
        "finite",
        "four-term Leibniz rule with the dilation-difference operator",
        1e-12,
        leibniz_defect_d(&f, &g, &fp),
    ));

    Ok(checks)
}

fn thermo_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let z = thermo::partition_function(std::f64::consts::LN_2)?;
    checks.push(Check::gauge(
        "thermo",
        "partition function is the geometric sum",
        1e-14,
        (z - 2.0).abs(),
    ));

    if (0.0..=1.0).contains(&cfg.mu) {
        let x = thermo::x_min(cfg.q) + 0.5;
        let closed = thermo::mean_occupation(x, cfg.q, cfg.mu)?;
        let terms = match cfg.precision {
            Precision::Standard => 6000,
            Precision::Extended => 24_000,
        };
        let series = thermo::occupation_series(x, cfg.q, cfg.mu, terms)?;
        checks.push(Check::gauge(
            "thermo",
            "closed-form occupation matches the ensemble series",
            1e-10,
            (series - closed).abs() / closed.abs(),
        ));
    }

    let occ = thermo::mean_occupation(1.0, 1.0, cfg.mu)?;
    checks.push(Check::gauge(
        "thermo",
        "classical point gives the Bose-Einstein factor",
        1e-12,
        (occ - 1.0 / 1.0f64.exp_m1()).abs(),
    ));

    let rejected = matches!(
        thermo::mean_occupation(thermo::x_min(cfg.q), cfg.q, cfg.mu),
        Err(Error::BelowDomain { .. })
    );
    checks.push(Check::gauge(
        "thermo",
        "domain edge x <= ln(1/q) is rejected",
        0.5,
        if rejected { 0.0 } else { 1.0 },
    ));

    let j = thermo::j_restricted(1.0, 0.5, 1e-10)?;
    let want = std::f64::consts::PI.powi(4) / 15.0;
    checks.push(Check::gauge(
        "thermo",
        "classical energy integral equals pi^4/15",
        1e-8,
        (j - want).abs() / want,
    ));

    let constants = thermo::PhysicalConstants::default();
    let e1 = thermo::total_energy(1.0, 1.0, 0.5, &constants, 1e-9)?;
    let e2 = thermo::total_energy(2.0, 1.0, 0.5, &constants, 1e-9)?;
    checks.push(Check::gauge(
        "thermo",
        "total energy scales as T^4",
        1e-10,
        (e2.u / e1.u - 16.0).abs() / 16.0,
    ));

    Ok(checks)
}

/// Deterministic splitmix-style coefficients in [-1, 1], so the report is
/// reproducible run to run.
fn pseudo_series(seed: u64, trunc: usize) -> PowerSeries {
    let unit = |i: u64| -> f64 {
        let mut z = seed
            .wrapping_add(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(i.wrapping_mul(0xBF58_476D_1CE4_E5B9));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        (z as f64 / u64::MAX as f64) * 2.0 - 1.0
    };
    PowerSeries::new((0..trunc).map(|i| unit(i as u64)).collect())
}
