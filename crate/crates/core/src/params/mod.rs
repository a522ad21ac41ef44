//! Circuit parameters, derived couplings and drive-frequency matching.

mod bessel;
mod config;

use std::f64::consts::PI;

pub use bessel::{bessel_j, MAX_ARGUMENT as BESSEL_MAX_ARGUMENT};
pub use config::{CircuitConfig, CONFIG_KEYS};

mod trig {
    use std::f64::consts::PI;

    // Split x into a multiple of ½ plus a remainder in [-¼, ¼] so that
    // integer and half-integer arguments give exact zeros and ±1.
    fn reduce(x: f64) -> (i64, f64) {
        let r = x % 2.0;
        let k = (2.0 * r).round();
        ((k as i64).rem_euclid(4), r - k / 2.0)
    }

    /// sin(πx), exact at multiples of ½.
    pub fn sin_pi(x: f64) -> f64 {
        let (k, f) = reduce(x);
        let (s, c) = (PI * f).sin_cos();
        match k {
            0 => s,
            1 => c,
            2 => -s,
            _ => -c,
        }
    }

    /// cos(πx), exact at multiples of ½.
    pub fn cos_pi(x: f64) -> f64 {
        sin_pi(x + 0.5)
    }

}

pub use trig::{cos_pi, sin_pi};

use crate::{Error, Result, C64};

/// Detuning must exceed this multiple of χ₁₂ for the dispersive reduction to
/// the switchable-coupling Hamiltonian to hold.
pub const LARGE_DETUNING_FACTOR: f64 = 10.0;

/// Warnings raised while deriving couplings. None of them is fatal.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RegimeFlags {
    /// Δ = 0: the dispersive shift χ′ was set to zero.
    pub zero_detuning: bool,
    /// Δ < 10 χ₁₂: outside the large-detuning regime.
    pub weak_detuning: bool,
}

/// Effective constants of the driven two-qubit circuit.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedCouplings {
    pub eta1: f64,
    pub eta2: f64,
    /// Renormalized Josephson energies Ē_J1, Ē_J2.
    pub ebar_j1: f64,
    pub ebar_j2: f64,
    /// Always-on coupling χ₁₂ (enters as −χ₁₂ σx σx).
    pub chi12: f64,
    /// Gate-drive amplitudes ε₀⁽¹⁾, ε₀⁽²⁾.
    pub eps01: f64,
    pub eps02: f64,
    /// Δ = |ε₀⁽²⁾ − ε₀⁽¹⁾|.
    pub detuning: f64,
    /// χ′ = χ₁₂² / 2Δ.
    pub chi_prime: f64,
    /// Shifted qubit frequencies ω₁ = ε₀⁽¹⁾ − χ′, ω₂ = ε₀⁽²⁾ + χ′.
    pub omega1: f64,
    pub omega2: f64,
    /// Single-qubit drive couplings g₁, g₂.
    pub g1: f64,
    pub g2: f64,
    /// Drive-induced two-qubit coupling g₁₂.
    pub g12: f64,
    /// Bessel factors ξ for qubit 1 and qubit 2 (they differ when η₁ ≠ η₂).
    pub xi1: f64,
    pub xi2: f64,
    /// Quantized-flux coupling ξ₁₂, carrying the phase of Φ_q.
    pub xi12: C64,
    /// Frequency ω of the variable-frequency flux, copied from the config.
    pub drive_freq: f64,
    pub flags: RegimeFlags,
}

/// Bessel factor ξ for a qubit whose own ratio is `eta_i` and whose partner's
/// is `eta_j`.
fn bessel_factor(eta_i: f64, eta_j: f64, flux_dc: f64, j0: f64, j1: f64) -> f64 {
    let mix = eta_i * eta_i + 3.0 * eta_j * eta_j;
    let c = cos_pi(flux_dc);
    j1 * (1.0 - 3.0 * mix / 16.0 * (1.0 - cos_pi(2.0 * flux_dc) * j0))
        + 3.0 / 8.0 * c * c * j0 * j1 * mix
}

fn renormalized_josephson(e_j: f64, eta_i: f64, eta_j: f64, flux_dc: f64) -> f64 {
    let s = sin_pi(flux_dc);
    e_j * cos_pi(flux_dc) * (1.0 - 3.0 / 8.0 * s * s * (eta_i * eta_i + 3.0 * eta_j * eta_j))
}

/// Evaluates every effective constant. The inductive product L_J I_c1 I_c2
/// is E_J1 E_J2 / E_J0 in energy units.
pub fn derive_couplings(cfg: &CircuitConfig) -> Result<DerivedCouplings> {
    cfg.validate()?;
    let eta1 = cfg.e_j1 / cfg.e_j0;
    let eta2 = cfg.e_j2 / cfg.e_j0;
    let inductive = cfg.e_j1 * cfg.e_j2 / cfg.e_j0;
    let s = sin_pi(cfg.flux_dc);
    let s2 = sin_pi(2.0 * cfg.flux_dc);

    let phi_c = cfg.phi_c();
    let j0 = bessel_j(0, phi_c)?;
    let j1 = bessel_j(1, phi_c)?;

    let chi12 = inductive * s * s;
    let eps01 = cfg.e_c1 * cfg.cap_ratio1;
    let eps02 = cfg.e_c2 * cfg.cap_ratio2;
    let detuning = (eps02 - eps01).abs();
    let mut flags = RegimeFlags::default();
    let chi_prime = if detuning == 0.0 {
        flags.zero_detuning = true;
        0.0
    } else {
        chi12 * chi12 / (2.0 * detuning)
    };
    if detuning < LARGE_DETUNING_FACTOR * chi12 {
        flags.weak_detuning = true;
    }

    let xi1 = bessel_factor(eta1, eta2, cfg.flux_dc, j0, j1);
    let xi2 = bessel_factor(eta2, eta1, cfg.flux_dc, j0, j1);
    let xi12_mag = -2.0 * PI * cfg.flux_q_amp * inductive * s2;

    Ok(DerivedCouplings {
        eta1,
        eta2,
        ebar_j1: renormalized_josephson(cfg.e_j1, eta1, eta2, cfg.flux_dc),
        ebar_j2: renormalized_josephson(cfg.e_j2, eta2, eta1, cfg.flux_dc),
        chi12,
        eps01,
        eps02,
        detuning,
        chi_prime,
        omega1: eps01 - chi_prime,
        omega2: eps02 + chi_prime,
        g1: 2.0 * cfg.e_j1 * s * xi1,
        g2: 2.0 * cfg.e_j2 * s * xi2,
        g12: inductive * s2 * j1,
        xi1,
        xi2,
        xi12: C64::from_polar(1.0, cfg.flux_q_phase) * xi12_mag,
        drive_freq: cfg.drive_freq,
        flags,
    })
}

/// Which interaction a drive frequency switches on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatchKind {
    /// ω ≈ ω₁ + ω₂: |gg⟩ ↔ |ee⟩.
    DoubleFlip,
    /// ω ≈ |ω₂ − ω₁|: |ge⟩ ↔ |eg⟩.
    ExchangeFlip,
    /// ω ≈ ω₁: qubit 1 rotates.
    SingleQubit1,
    /// ω ≈ ω₂: qubit 2 rotates.
    SingleQubit2,
    Decoupled,
}

impl MatchKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::DoubleFlip => "DoubleFlip",
            Self::ExchangeFlip => "ExchangeFlip",
            Self::SingleQubit1 => "SingleQubit1",
            Self::SingleQubit2 => "SingleQubit2",
            Self::Decoupled => "Decoupled",
        }
    }
}

/// Classifies `omega` against ω₁+ω₂, |ω₂−ω₁|, ω₁ and ω₂ by relative
/// mismatch. The smallest mismatch within `tol` wins; exact ties go to the
/// earlier target in that order.
pub fn classify_drive(omega: f64, dc: &DerivedCouplings, tol: f64) -> Result<MatchKind> {
    if !(tol > 0.0 && tol < 0.1) {
        return Err(Error::InvalidArgument(format!(
            "tolerance {tol} outside (0, 0.1)"
        )));
    }
    let targets = [
        (MatchKind::DoubleFlip, dc.omega1 + dc.omega2),
        (MatchKind::ExchangeFlip, (dc.omega2 - dc.omega1).abs()),
        (MatchKind::SingleQubit1, dc.omega1),
        (MatchKind::SingleQubit2, dc.omega2),
    ];
    let mut best: Option<(MatchKind, f64)> = None;
    for (kind, target) in targets {
        if target == 0.0 {
            continue;
        }
        let mismatch = ((omega - target) / target).abs();
        if mismatch <= tol && best.is_none_or(|(_, m)| mismatch < m) {
            best = Some((kind, mismatch));
        }
    }
    Ok(best.map_or(MatchKind::Decoupled, |(kind, _)| kind))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg_with_flux(f: f64) -> CircuitConfig {
        CircuitConfig {
            flux_dc: f,
            ..CircuitConfig::demo()
        }
    }

    #[test]
    fn zero_flux_kills_flux_couplings() {
        let dc = derive_couplings(&cfg_with_flux(0.0)).unwrap();
        assert_eq!(dc.chi12, 0.0);
        assert_eq!(dc.g12, 0.0);
        assert_eq!(dc.xi12, C64::new(0.0, 0.0));
        assert_eq!(dc.g1, 0.0);
    }

    #[test]
    fn half_flux_maximizes_chi_and_kills_drive() {
        let cfg = cfg_with_flux(0.5);
        let dc = derive_couplings(&cfg).unwrap();
        let max = cfg.e_j1 * cfg.e_j2 / cfg.e_j0;
        assert!((dc.chi12 - max).abs() < 1e-15);
        assert!(dc.g12.abs() < 1e-15);
        assert!(dc.xi12.norm() < 1e-15);
    }

    #[test]
    fn quarter_flux_reference_values() {
        // Frozen from a 50-digit mpmath evaluation of the printed formulas:
        // E_J1 = E_J2 = 0.05, E_J0 = 1, f_e = 0.25, φ_c = 0.3, f_q = 0.01.
        let dc = derive_couplings(&CircuitConfig::demo()).unwrap();
        assert!((dc.chi12 - 1.25e-3).abs() < 1e-15);
        assert!(
            (dc.g12 - 3.707_970_406_827_6e-4).abs() < 1e-15,
            "{}",
            dc.g12
        );
        assert!((dc.xi1 - 0.14831259418192458).abs() < 1e-13, "{}", dc.xi1);
        assert!(
            (dc.ebar_j1 - 0.035289047798591137).abs() < 1e-15,
            "{}",
            dc.ebar_j1
        );
        assert!((dc.g1 - 0.010487284108140737).abs() < 1e-15, "{}", dc.g1);
        assert!(
            (dc.xi12.re + 1.5707963267948966e-4).abs() < 1e-15,
            "{}",
            dc.xi12
        );
        assert_eq!(dc.xi12.im, 0.0);
        assert!(!dc.flags.weak_detuning);
    }

    #[test]
    fn detuning_flags() {
        let mut cfg = CircuitConfig::demo();
        cfg.cap_ratio2 = cfg.cap_ratio1;
        let dc = derive_couplings(&cfg).unwrap();
        assert!(dc.flags.zero_detuning && dc.flags.weak_detuning);
        assert_eq!(dc.chi_prime, 0.0);
    }

    #[test]
    fn classify_exact_targets() {
        let dc = derive_couplings(&CircuitConfig::demo()).unwrap();
        let c = |w| classify_drive(w, &dc, 1e-3).unwrap();
        assert_eq!(c(dc.omega1 + dc.omega2), MatchKind::DoubleFlip);
        assert_eq!(c(dc.omega2 - dc.omega1), MatchKind::ExchangeFlip);
        assert_eq!(c(dc.omega1), MatchKind::SingleQubit1);
        assert_eq!(c(dc.omega2), MatchKind::SingleQubit2);
        assert_eq!(c(10.0), MatchKind::Decoupled);
        assert!(classify_drive(0.1, &dc, 0.2).is_err());
        assert!(classify_drive(0.1, &dc, 0.0).is_err());
    }

    #[test]
    fn classify_tie_prefers_smaller_mismatch() {
        let mut dc = derive_couplings(&CircuitConfig::demo()).unwrap();
        // Make ω₂ − ω₁ and ω₁ nearly coincide.
        dc.omega1 = 1.0;
        dc.omega2 = 2.001;
        assert_eq!(
            classify_drive(1.0002, &dc, 0.01).unwrap(),
            MatchKind::SingleQubit1
        );
        assert_eq!(
            classify_drive(1.0009, &dc, 0.01).unwrap(),
            MatchKind::ExchangeFlip
        );
        // Exact tie falls back to list order.
        dc.omega2 = 2.0;
        assert_eq!(
            classify_drive(1.0, &dc, 0.01).unwrap(),
            MatchKind::ExchangeFlip
        );
    }

    #[test]
    fn sign_structure() {
        for i in 1..100 {
            let f = i as f64 / 100.0;
            let dc = derive_couplings(&cfg_with_flux(f)).unwrap();
            assert!(dc.chi12 >= 0.0);
            if f < 0.5 {
                assert!(dc.g12 > 0.0);
            } else if f > 0.5 {
                assert!(dc.g12 < 0.0);
            }
        }
    }

    #[test]
    fn vanishing_ac_flux_limit() {
        let cfg = CircuitConfig {
            flux_ac_amp: 0.0,
            ..CircuitConfig::demo()
        };
        let dc = derive_couplings(&cfg).unwrap();
        assert_eq!(
            (dc.xi1, dc.xi2, dc.g1, dc.g2, dc.g12),
            (0.0, 0.0, 0.0, 0.0, 0.0)
        );
    }
}
