//! Command-line front end for the deformed-oscillator library.
//!
//! Every subcommand validates its parameters, computes through the library
//! crate, and emits one table (CSV by default, JSON with `--format json`)
//! to stdout or `--out`. Identical invocations produce byte-identical
//! output. Exit codes: 0 on success, 1 on domain or usage errors, 2 on
//! numerical failures; every failure writes a single-line record
//! `error exit=<code> kind=<kind> detail=<message>` to stderr.

mod table;

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use qtamm::calculus::{deformed_exp, deformed_exp_deriv};
use qtamm::coherent::coherent_coeffs;
use qtamm::finite::{qnumber_d, FiniteParams};
use qtamm::spectral::{energy_level, ladder_coefficient, state_statistics, OscillatorConfig};
use qtamm::thermo::{
    mean_occupation, radiation_curve, spectral_density, total_energy, x_min, PhysicalConstants,
};
use qtamm::verify::{run_all, run_suite, Precision, VerifyConfig};
use qtamm::{algebra, DeformationParams, Error};
use table::{Cell, Format, Table};

#[derive(Parser)]
#[command(
    name = "qtamm",
    version,
    about = "Deformed oscillator algebra: numbers, spectra, coherent states, radiation laws"
)]
struct Cli {
    /// Output format for tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one deformed number {n}.
    Qnum(QnumArgs),
    /// Tabulate deformed numbers and ladder amplitudes of a representation.
    Fock(FockArgs),
    /// Sample the deformed exponential and its derivative identity.
    Calculus(CalculusArgs),
    /// Oscillator energy levels and uncertainty products.
    Spectrum(SpectrumArgs),
    /// Fock expansion of a coherent state.
    Coherent(CoherentArgs),
    /// Deformed numbers of a finite family up to its closing level.
    Finite(FiniteArgs),
    /// Mean-occupation curve, or the total-energy law with --total.
    Thermo(ThermoArgs),
    /// Radiation curve with the Planck reference column.
    Figures(FiguresArgs),
    /// Run cross-check suites and report measured defects.
    Verify(VerifyArgs),
}

/// Full structure-function parameter set. The exponent quadruple defaults
/// to the symmetric infinite family; `eta` defaults to `1 - mu`.
#[derive(Args)]
struct FamilyArgs {
    /// Base q > 0 of the deformation.
    #[arg(long, allow_negative_numbers = true)]
    q: f64,

    /// Weight mu of the first branch.
    #[arg(long, allow_negative_numbers = true)]
    mu: f64,

    /// Weight eta of the second branch [default: 1 - mu].
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<f64>,

    /// Exponent alpha in q^(alpha n + beta).
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    alpha: f64,

    /// Exponent beta in q^(alpha n + beta).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    beta: f64,

    /// Exponent gamma in q^(gamma n + delta).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    gamma: f64,

    /// Exponent delta in q^(gamma n + delta).
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    delta: f64,
}

impl FamilyArgs {
    fn params(&self) -> qtamm::Result<DeformationParams> {
        let eta = self.eta.unwrap_or(1.0 - self.mu);
        DeformationParams::new(
            self.q, self.mu, eta, self.alpha, self.beta, self.gamma, self.delta,
        )
    }
}

#[derive(Args)]
struct QnumArgs {
    #[command(flatten)]
    family: FamilyArgs,

    /// Level to evaluate; fractional and negative values are allowed.
    #[arg(long, allow_negative_numbers = true)]
    n: f64,
}

#[derive(Args)]
struct FockArgs {
    #[command(flatten)]
    family: FamilyArgs,

    /// Number of levels.
    #[arg(long, default_value_t = 16)]
    dim: usize,
}

#[derive(Args)]
struct CalculusArgs {
    /// Base q > 0 of the symmetric family.
    #[arg(long, allow_negative_numbers = true)]
    q: f64,

    /// Branch weight mu; eta = 1 - mu.
    #[arg(long, allow_negative_numbers = true)]
    mu: f64,

    /// Eigenvalue w in D e(wx) = w e(wx).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    omega: f64,

    /// Right end of the sampled interval [0, x-max].
    #[arg(long, default_value_t = 3.0)]
    x_max: f64,

    /// Number of sample points.
    #[arg(long, default_value_t = 31)]
    samples: usize,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Base q > 0 of the symmetric family.
    #[arg(long, allow_negative_numbers = true)]
    q: f64,

    /// Branch weight mu; eta = 1 - mu.
    #[arg(long, allow_negative_numbers = true)]
    mu: f64,

    /// Oscillator mass.
    #[arg(long, default_value_t = 1.0)]
    m: f64,

    /// Oscillator frequency.
    #[arg(long, default_value_t = 1.0)]
    omega: f64,

    /// Highest level to tabulate.
    #[arg(long, default_value_t = 20)]
    n_max: u32,
}

#[derive(Args)]
struct CoherentArgs {
    /// Base q > 0 of the symmetric family.
    #[arg(long, allow_negative_numbers = true)]
    q: f64,

    /// Branch weight mu; eta = 1 - mu.
    #[arg(long, allow_negative_numbers = true)]
    mu: f64,

    /// Real part of the eigenvalue z.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    z_re: f64,

    /// Imaginary part of the eigenvalue z.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    z_im: f64,

    /// Neglected-amplitude bound that sets the truncation level.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Args)]
struct FiniteArgs {
    /// Base q in (0, 1) of the finite family.
    #[arg(long, allow_negative_numbers = true)]
    q: f64,

    /// Closing level: {d} = 0 and the representation has dimension d.
    #[arg(long)]
    d: u32,
}

#[derive(Args)]
struct ThermoArgs {
    /// Base q in (0, 1] of the symmetric family.
    #[arg(long, allow_negative_numbers = true)]
    q: f64,

    /// Branch weight mu; eta = 1 - mu.
    #[arg(long, allow_negative_numbers = true)]
    mu: f64,

    /// Temperature in units of the energy scale.
    #[arg(long, default_value_t = 1.0)]
    t: f64,

    /// Right end of the sampled x = hw/kT interval.
    #[arg(long, default_value_t = 10.0)]
    x_max: f64,

    /// Number of sample points above the domain edge.
    #[arg(long, default_value_t = 50)]
    samples: usize,

    /// Emit the total-energy law U = a_q T^4 instead of the curve.
    #[arg(long)]
    total: bool,

    /// Quadrature tolerance for the restricted total-energy integral.
    #[arg(long, default_value_t = 1e-10)]
    quad_tol: f64,
}

#[derive(Args)]
struct FiguresArgs {
    /// Base q in (0, 1] of the symmetric family.
    #[arg(long, allow_negative_numbers = true)]
    q: f64,

    /// Branch weight mu; eta = 1 - mu.
    #[arg(long, allow_negative_numbers = true)]
    mu: f64,

    /// Highest sampled frequency.
    #[arg(long)]
    nu_max: f64,

    /// Temperature.
    #[arg(long, default_value_t = 1.0)]
    t: f64,

    /// Number of sample points above the domain edge.
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run: algebra, calculus, spectral, coherent, finite,
    /// thermo, or all.
    #[arg(long, default_value = "all")]
    suite: String,

    /// Base q > 0 the suites run at.
    #[arg(long, allow_negative_numbers = true)]
    q: f64,

    /// Branch weight mu; eta = 1 - mu.
    #[arg(long, allow_negative_numbers = true)]
    mu: f64,

    /// Closing level for the finite-family suite.
    #[arg(long, default_value_t = 6)]
    d: u32,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                let _ = e.print();
                std::process::exit(0);
            }
            _ => {
                let first = e.to_string();
                let first = first.lines().next().unwrap_or("invalid arguments");
                let detail = first.trim_start_matches("error: ");
                eprintln!("error exit=1 kind=usage detail={detail}");
                std::process::exit(1);
            }
        },
    };

    let rendered = match run(&cli) {
        Ok(s) => s,
        Err(e) => {
            let exit = if e.is_numerical() { 2 } else { 1 };
            let detail = e.to_string().replace('\n', "; ");
            eprintln!("error exit={exit} kind={} detail={detail}", kind_name(&e));
            std::process::exit(exit);
        }
    };

    let write_result = match &cli.out {
        Some(path) => std::fs::write(path, &rendered),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(rendered.as_bytes())
        }
    };
    if let Err(e) = write_result {
        eprintln!("error exit=1 kind=io detail={e}");
        std::process::exit(1);
    }
}

fn run(cli: &Cli) -> qtamm::Result<String> {
    let table = match &cli.command {
        Command::Qnum(args) => {
            let p = args.family.params()?;
            // Scalar output: the bare value is both the CSV record and a
            // valid JSON document.
            return Ok(format!("{}\n", algebra::qnumber(&p, args.n)));
        }
        Command::Fock(args) => fock_table(args)?,
        Command::Calculus(args) => calculus_table(args)?,
        Command::Spectrum(args) => spectrum_table(args)?,
        Command::Coherent(args) => coherent_table(args)?,
        Command::Finite(args) => finite_table(args)?,
        Command::Thermo(args) => thermo_table(args)?,
        Command::Figures(args) => figures_table(args)?,
        Command::Verify(args) => verify_table(args)?,
    };
    Ok(table.render(cli.format))
}

fn fock_table(args: &FockArgs) -> qtamm::Result<Table> {
    let p = args.family.params()?;
    // Build first: a family whose deformed numbers go negative must fail
    // here with the breakdown level rather than emit an imaginary ladder.
    let rep = algebra::build_fock(&p, args.dim)?;
    let mut t = Table::new(vec!["n", "number", "ladder"]);
    for n in 0..rep.dim {
        t.push(vec![
            Cell::from(n as i64),
            Cell::from(algebra::qnumber(&p, n as f64)),
            Cell::from(ladder_coefficient(&p, n as u32)?),
        ]);
    }
    Ok(t)
}

fn calculus_table(args: &CalculusArgs) -> qtamm::Result<Table> {
    let p = DeformationParams::std_infinite(args.q, args.mu)?;
    if !(args.x_max > 0.0) || !args.x_max.is_finite() {
        return Err(Error::InvalidParams(format!(
            "x-max must be positive, got {}",
            args.x_max
        )));
    }
    if args.samples < 2 {
        return Err(Error::InvalidParams(format!(
            "need at least 2 samples, got {}",
            args.samples
        )));
    }
    let w = args.omega;
    let mut t = Table::new(vec!["x", "exp_value", "derivative", "eigen_defect"]);
    for i in 0..args.samples {
        let x = args.x_max * i as f64 / (args.samples - 1) as f64;
        let e = deformed_exp(&p, w * x, 1e-15)?;
        let din = deformed_exp_deriv(&p, w * x / p.q, 1e-15)?;
        let dout = deformed_exp_deriv(&p, w * p.q * x, 1e-15)?;
        let deriv = w * (p.mu * din + p.eta * dout);
        t.push(vec![
            Cell::from(x),
            Cell::from(e),
            Cell::from(deriv),
            Cell::from((deriv - w * e).abs()),
        ]);
    }
    Ok(t)
}

fn spectrum_table(args: &SpectrumArgs) -> qtamm::Result<Table> {
    let p = DeformationParams::std_infinite(args.q, args.mu)?;
    let cfg = OscillatorConfig::new(p, args.m, args.omega, args.n_max as usize + 2)?;
    let mut t = Table::new(vec!["n", "energy", "delta_q", "delta_p", "product"]);
    for n in 0..=args.n_max {
        let e = energy_level(&cfg, n)?;
        let s = state_statistics(&cfg, n)?;
        t.push(vec![
            Cell::from(n),
            Cell::from(e),
            Cell::from(s.var_q.sqrt()),
            Cell::from(s.var_p.sqrt()),
            Cell::from(s.uncertainty),
        ]);
    }
    Ok(t)
}

fn coherent_table(args: &CoherentArgs) -> qtamm::Result<Table> {
    let p = DeformationParams::std_infinite(args.q, args.mu)?;
    let z = Complex64::new(args.z_re, args.z_im);
    let st = coherent_coeffs(z, &p, args.tol)?;
    let mut t = Table::new(vec!["n", "coeff_re", "coeff_im", "prob"]);
    for (n, c) in st.coeffs.iter().enumerate() {
        t.push(vec![
            Cell::from(n as i64),
            Cell::from(c.re),
            Cell::from(c.im),
            Cell::from(c.norm_sqr()),
        ]);
    }
    Ok(t)
}

fn finite_table(args: &FiniteArgs) -> qtamm::Result<Table> {
    let fp = FiniteParams::new(args.q, args.d)?;
    let mut t = Table::new(vec!["n", "number"]);
    for n in 0..=args.d {
        t.push(vec![Cell::from(n), Cell::from(qnumber_d(&fp, n as f64))]);
    }
    Ok(t)
}

fn thermo_table(args: &ThermoArgs) -> qtamm::Result<Table> {
    let constants = PhysicalConstants::default();
    if args.total {
        let e = total_energy(args.t, args.q, args.mu, &constants, args.quad_tol)?;
        let mut t = Table::new(vec!["t", "u", "a_q"]);
        t.push(vec![
            Cell::from(args.t),
            Cell::from(e.u),
            Cell::from(e.a_q),
        ]);
        return Ok(t);
    }

    let xm = x_min(args.q);
    if !(args.x_max > xm) || !args.x_max.is_finite() {
        return Err(Error::InvalidParams(format!(
            "x-max must exceed the domain edge x_min = {xm}, got {}",
            args.x_max
        )));
    }
    if args.samples < 2 {
        return Err(Error::InvalidParams(format!(
            "need at least 2 samples, got {}",
            args.samples
        )));
    }
    let step = (args.x_max - xm) / args.samples as f64;
    let mut t = Table::new(vec!["x", "occupation"]);
    for k in 1..=args.samples {
        let x = xm + k as f64 * step;
        t.push(vec![
            Cell::from(x),
            Cell::from(mean_occupation(x, args.q, args.mu)?),
        ]);
    }
    Ok(t)
}

fn figures_table(args: &FiguresArgs) -> qtamm::Result<Table> {
    let constants = PhysicalConstants::default();
    let curve = radiation_curve(
        args.q,
        args.mu,
        args.t,
        &constants,
        args.nu_max,
        args.samples,
    )?;
    let mut t = Table::new(vec!["nu", "I_deformed", "I_planck"]);
    for (nu, i) in curve.nu_grid.iter().zip(&curve.i_values) {
        // At q = 1 the deformed density is Planck's law exactly and the
        // branch weight is inert.
        let planck = spectral_density(*nu, args.t, 1.0, 0.5, &constants)?;
        t.push(vec![Cell::from(*nu), Cell::from(*i), Cell::from(planck)]);
    }
    Ok(t)
}

fn verify_table(args: &VerifyArgs) -> qtamm::Result<Table> {
    let cfg = VerifyConfig {
        q: args.q,
        mu: args.mu,
        d: args.d,
        precision: Precision::from_env(),
    };
    let checks = if args.suite == "all" {
        run_all(&cfg)?
    } else {
        run_suite(&args.suite, &cfg)?
    };
    let mut t = Table::new(vec![
        "module",
        "check",
        "tolerance",
        "measured",
        "passed",
        "note",
    ]);
    for c in checks {
        t.push(vec![
            Cell::from(c.module),
            Cell::from(c.name),
            Cell::from(c.tolerance),
            Cell::from(c.measured),
            Cell::from(c.passed),
            Cell::from(c.note.unwrap_or("")),
        ]);
    }
    Ok(t)
}

fn kind_name(e: &Error) -> &'static str {
    match e {
        Error::InvalidParams(_) => "invalid-params",
        Error::DegenerateExponents { .. } => "degenerate-exponents",
        Error::NegativeFactor { .. } => "negative-factor",
        Error::RepresentationBreakdown { .. } => "representation-breakdown",
        Error::ZeroDenominator { .. } => "zero-denominator",
        Error::ZeroPhi { .. } => "zero-phi",
        Error::NoConvergence { .. } => "no-convergence",
        Error::Domain(_) => "domain",
        Error::ExpansionDivergence { .. } => "expansion-divergence",
        Error::QuadratureFailure(_) => "quadrature-failure",
        Error::BelowDomain { .. } => "below-domain",
        Error::NonIntegrableSingularity { .. } => "non-integrable-singularity",
    }
}
