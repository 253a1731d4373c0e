//! Golden-curve check for the deformed black-body density at q = 0.78.
//!
//! The fixture holds independently computed high-precision values of
//! I(nu) for mu in {0.1, 0.5, 0.9} on a 24-point grid over (nu_min, 10],
//! in natural units hbar = k = c = T = 1. The frequencies are stored at
//! full f64 precision and re-parsed here, so the comparison is pointwise
//! exact in the argument.

use qtamm::thermo::{spectral_density, PhysicalConstants};

const FIXTURE: &str = include_str!("fixtures/radiation_q078.csv");

#[test]
fn matches_the_high_precision_fixture() {
    let constants = PhysicalConstants::default();
    let mut rows = 0;
    for line in FIXTURE.lines().skip(1) {
        let fields: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse().expect("fixture field"))
            .collect();
        assert_eq!(fields.len(), 4, "bad fixture row: {line}");
        let nu = fields[0];
        for (col, mu) in [(1, 0.1), (2, 0.5), (3, 0.9)] {
            let want = fields[col];
            let got = spectral_density(nu, 1.0, 0.78, mu, &constants).unwrap();
            assert!(
                ((got - want) / want).abs() < 5e-13,
                "nu={nu}, mu={mu}: got {got}, want {want}"
            );
        }
        rows += 1;
    }
    assert_eq!(rows, 24);
}

#[test]
fn curves_converge_as_frequency_grows() {
    // The mu-dependence enters through (e^x - q^{-1})^{-2} vs
    // (e^x - q)^{-2}; both approach e^{-2x}, so the three fixture curves
    // collapse onto each other at the high-frequency end.
    let mut first_spread = None;
    let mut last_spread = None;
    for line in FIXTURE.lines().skip(1) {
        let fields: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        let spread = (fields[3] - fields[1]) / fields[2];
        if first_spread.is_none() {
            first_spread = Some(spread);
        }
        last_spread = Some(spread);
    }
    assert!(first_spread.unwrap() > 0.5);
    assert!(last_spread.unwrap() < 1e-4);
}
