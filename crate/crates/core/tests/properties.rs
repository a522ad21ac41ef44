use std::f64::consts::{FRAC_PI_2, TAU};

use proptest::prelude::*;

use qubitflux::dynamics::{evolve_closed_form, QubitInitial};
use qubitflux::params::{bessel_j, derive_couplings, CircuitConfig};
use qubitflux::photon_states::{coherent, even_cat, squeezed_vacuum};

// Plain power series, 60 terms. Fine for |x| ≤ 10 in f64.
fn series_j(order: i32, x: f64) -> f64 {
    let h = x / 2.0;
    let mut term = if order == 0 { 1.0 } else { h };
    let mut sum = term;
    for k in 1..60 {
        term *= -h * h / (k as f64 * (k + order) as f64);
        sum += term;
    }
    sum
}

#[test]
fn bessel_matches_series_on_grid() {
    for i in 0..100 {
        let x = -10.0 + 20.0 * i as f64 / 99.0;
        for order in [0, 1] {
            let got = bessel_j(order, x).unwrap();
            assert!((got - series_j(order, x)).abs() < 1e-12, "J{order}({x})");
        }
    }
}

fn shifted(flux: f64) -> (CircuitConfig, CircuitConfig) {
    let base = CircuitConfig {
        flux_dc: flux,
        ..CircuitConfig::demo()
    };
    let next = CircuitConfig {
        flux_dc: flux + 1.0,
        ..base.clone()
    };
    (base, next)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #[test]
    fn bessel_bound(x in -5.0f64..5.0) {
        let j0 = bessel_j(0, x).unwrap();
        let j1 = bessel_j(1, x).unwrap();
        prop_assert!(j0 * j0 + 2.0 * j1 * j1 <= 1.0 + 1e-14);
    }

    #[test]
    fn coupling_flux_periodicity(flux in 0.05f64..0.45) {
        let (a, b) = shifted(flux);
        let (a, b) = (derive_couplings(&a).unwrap(), derive_couplings(&b).unwrap());
        prop_assert!(close(a.chi12, b.chi12));
        prop_assert!(close(a.g12, b.g12));
        prop_assert!(close(a.xi12.re, b.xi12.re) && close(a.xi12.im, b.xi12.im));
        prop_assert!(close(a.ebar_j1, -b.ebar_j1) && close(a.ebar_j2, -b.ebar_j2));
        prop_assert!(close(a.g1, -b.g1) && close(a.g2, -b.g2));
    }

    #[test]
    fn fields_normalized_with_requested_mean(nbar in 0.5f64..20.0, phase in 0.0f64..TAU) {
        for f in [
            coherent(nbar, phase, 1e-10).unwrap(),
            even_cat(nbar, 1e-10).unwrap(),
            squeezed_vacuum(nbar, phase, 1e-10).unwrap(),
        ] {
            let total: f64 = f.probabilities().iter().sum();
            prop_assert!((total + f.tail_mass() - 1.0).abs() < 1e-10);
            prop_assert!(f.tail_mass() < 1e-10);
            prop_assert!((f.mean_photon_number() - nbar).abs() < 1e-6 * nbar.max(1.0));
        }
    }

    #[test]
    fn closed_form_keeps_norm(theta in 0.0f64..FRAC_PI_2, phi in 0.0f64..TAU, tau in 0.0f64..60.0) {
        let init = QubitInitial::new(theta, phi).unwrap();
        let field = coherent(4.0, 0.7, 1e-12).unwrap();
        let total = field.probabilities().iter().sum::<f64>();
        let state = evolve_closed_form(&init, &field, tau);
        prop_assert!((state.norm_sqr() - total).abs() < 1e-12);
    }
}
