//! The large junction as a quantized oscillator shared by the qubits.
//!
//! In the phase regime the junction is a harmonic mode at the plasma
//! frequency ω_p = √(8E_J0E_c0), coupled to each qubit through
//! g_i0 σxⁱ(a + a†). Eliminating the (never excited) mode gives the
//! effective qubit-qubit coupling χ_ij = −2g_i0g_j0/ω_p.

use std::f64::consts::PI;

use faer::Mat;

use crate::hilbert::{
    basis_index, spinboson_from_parts, two_qubit, FockTruncation, Level, Pauli, QubitSector,
};
use crate::linalg::{distance, norm_sqr, CMat, CVec, HermitianEigen};
use crate::params::{derive_couplings, sin_pi, CircuitConfig};
use crate::{Error, Result, C64};

/// E_J0 / E_c0 at or above which the junction counts as an oscillator.
pub const PHASE_REGIME_RATIO: f64 = 10.0;
/// Plasma frequency multiples of the largest qubit splitting used by the
/// dynamical check.
pub const OMEGA_P_MULTIPLIERS: [f64; 4] = [10.0, 30.0, 50.0, 100.0];
/// Multiplier used for the flux sweep rows.
pub const SWEEP_MULTIPLIER: f64 = 50.0;
pub const SWEEP_POINTS: usize = 50;
/// Samples per coupling period in the dynamical check.
pub const DYNAMICS_SAMPLES: usize = 400;

#[derive(Clone, Debug, PartialEq)]
pub struct BusParams {
    pub omega_p: f64,
    /// ς = (E_J0/2E_c0)^{1/4}.
    pub zeta: f64,
    /// g_i0 per qubit.
    pub g_bus: Vec<f64>,
}

impl BusParams {
    /// Printed formulas without the phase-regime check.
    pub fn from_energies(e_j0: f64, e_c0: f64, e_j: &[f64], flux: f64) -> Result<Self> {
        if !(e_j0 > 0.0 && e_c0 > 0.0) {
            return Err(Error::Config(format!(
                "junction energies must be positive (E_J0 = {e_j0}, E_c0 = {e_c0})"
            )));
        }
        let omega_p = (8.0 * e_j0 * e_c0).sqrt();
        let zeta = (e_j0 / (2.0 * e_c0)).powf(0.25);
        let s = sin_pi(flux);
        let g_bus = e_j.iter().map(|&e| -e / (2.0 * zeta) * s).collect();
        Ok(Self {
            omega_p,
            zeta,
            g_bus,
        })
    }

    /// Bus with a prescribed plasma frequency at fixed E_J0, i.e.
    /// E_c0 = ω_p²/(8E_J0).
    pub fn from_plasma_frequency(e_j0: f64, omega_p: f64, e_j: &[f64], flux: f64) -> Result<Self> {
        if !(omega_p > 0.0 && omega_p.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "plasma frequency {omega_p} must be positive"
            )));
        }
        Self::from_energies(e_j0, omega_p * omega_p / (8.0 * e_j0), e_j, flux)
    }

    /// σxσx coefficient after eliminating the bus: −2g_i0g_j0/ω_p.
    pub fn effective_chi(&self, i: usize, j: usize) -> Result<f64> {
        effective_chi(self, i, j)
    }

    /// Identity shift −Σg_i0²/ω_p picked up by the qubits.
    pub fn lamb_shift(&self) -> f64 {
        -self.g_bus.iter().map(|g| g * g).sum::<f64>() / self.omega_p
    }
}

pub fn bus_params(cfg: &CircuitConfig) -> Result<BusParams> {
    cfg.validate()?;
    if cfg.e_j0 < PHASE_REGIME_RATIO * cfg.e_c0 {
        return Err(Error::Config(format!(
            "large junction not in the phase regime: E_J0 = {} < {PHASE_REGIME_RATIO}·E_c0 = {}",
            cfg.e_j0,
            PHASE_REGIME_RATIO * cfg.e_c0
        )));
    }
    BusParams::from_energies(cfg.e_j0, cfg.e_c0, &[cfg.e_j1, cfg.e_j2], cfg.flux_dc)
}

/// χ_ij = −2g_i0g_j0/ω_p.
pub fn effective_chi(bus: &BusParams, i: usize, j: usize) -> Result<f64> {
    if i == j {
        return Err(Error::InvalidArgument(format!(
            "effective coupling needs two distinct qubits, got {i} twice"
        )));
    }
    let n = bus.g_bus.len();
    if i >= n || j >= n {
        return Err(Error::InvalidArgument(format!(
            "qubit index out of range for {n} qubits"
        )));
    }
    Ok(-2.0 * bus.g_bus[i] * bus.g_bus[j] / bus.omega_p)
}

/// Full coupling matrix χ_ij (zero diagonal).
pub fn coupling_matrix(bus: &BusParams) -> Vec<Vec<f64>> {
    let n = bus.g_bus.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        0.0
                    } else {
                        -2.0 * bus.g_bus[i] * bus.g_bus[j] / bus.omega_p
                    }
                })
                .collect()
        })
        .collect()
}

/// Outcome of propagating the spin-boson model against the eliminated one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DynamicalCheck {
    /// max_t ‖P₀ψ_full(t) − ψ_eff(t)‖ with P₀ the bus-vacuum projector.
    pub distance: f64,
    /// min_t ‖P₀ψ_full(t)‖².
    pub min_ground_occupancy: f64,
    /// Window length, one period 2π/|χ_eff|.
    pub window: f64,
}

/// Starts in |g,g⟩ ⊗ |0⟩ and compares over one coupling period.
pub fn dynamical_check(
    sector: &QubitSector,
    bus: &BusParams,
    n_max: usize,
) -> Result<DynamicalCheck> {
    let chi = effective_chi(bus, 0, 1)?;
    if chi == 0.0 {
        return Ok(DynamicalCheck {
            distance: 0.0,
            min_ground_occupancy: 1.0,
            window: 0.0,
        });
    }
    let full = HermitianEigen::new(spinboson_from_parts(sector, bus, n_max).entries())?;
    let xx = two_qubit(Pauli::X, Pauli::X);
    let q = sector.matrix();
    let shift = bus.lamb_shift();
    let h_eff: CMat = Mat::from_fn(4, 4, |i, j| {
        q[(i, j)]
            + xx[(i, j)] * chi
            + if i == j {
                C64::new(shift, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
    });
    let eff = HermitianEigen::new(&h_eff)?;

    let fock = n_max + 1;
    let mut psi_full = CVec::zeros(4 * fock);
    psi_full[basis_index(Level::Ground, Level::Ground, 0, n_max)] = C64::new(1.0, 0.0);
    let mut psi_eff = CVec::zeros(4);
    psi_eff[crate::hilbert::qubit_index(Level::Ground, Level::Ground)] = C64::new(1.0, 0.0);

    let window = 2.0 * PI / chi.abs();
    let mut worst = 0.0_f64;
    let mut min_occ = 1.0_f64;
    for k in 1..=DYNAMICS_SAMPLES {
        let t = window * k as f64 / DYNAMICS_SAMPLES as f64;
        let f = full.evolve(&psi_full, t);
        let e = eff.evolve(&psi_eff, t);
        let projected = CVec::from_fn(4, |i| f[i * fock]);
        worst = worst.max(distance(&projected, &e));
        min_occ = min_occ.min(norm_sqr(&projected));
    }
    Ok(DynamicalCheck {
        distance: worst,
        min_ground_occupancy: min_occ,
        window,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EquivalenceRow {
    pub flux: f64,
    pub omega_p_multiplier: f64,
    /// χ₁₂ from the inductive (classical) treatment.
    pub chi_classical: f64,
    /// −2g₁₀g₂₀/ω_p.
    pub chi_quantum: f64,
    /// Ratio of the σxσx coefficients, (−χ_classical)/χ_quantum; zero when
    /// both vanish.
    pub ratio: f64,
    pub dyn_distance: f64,
    pub min_ground_occupancy: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    /// Plasma-frequency sweep at the configured flux.
    pub multiplier_rows: Vec<EquivalenceRow>,
    /// Flux sweep at [`SWEEP_MULTIPLIER`].
    pub flux_rows: Vec<EquivalenceRow>,
    /// Mean and relative spread of the coefficient ratio over the flux sweep.
    pub ratio_mean: f64,
    pub ratio_rel_std: f64,
    /// Largest qubit splitting at the configured flux.
    pub max_splitting: f64,
}

impl EquivalenceReport {
    pub fn rows(&self) -> impl Iterator<Item = &EquivalenceRow> {
        self.multiplier_rows.iter().chain(self.flux_rows.iter())
    }
}

fn row(cfg: &CircuitConfig, multiplier: f64, n_max: usize) -> Result<EquivalenceRow> {
    let dc = derive_couplings(cfg)?;
    let sector = QubitSector::from_config(cfg)?;
    let split = sector.splittings();
    let omega_p = multiplier * split[0].max(split[1]);
    let bus =
        BusParams::from_plasma_frequency(cfg.e_j0, omega_p, &[cfg.e_j1, cfg.e_j2], cfg.flux_dc)?;
    let chi_q = effective_chi(&bus, 0, 1)?;
    let ratio = if chi_q == 0.0 { 0.0 } else { -dc.chi12 / chi_q };
    let dynamics = dynamical_check(&sector, &bus, n_max)?;
    Ok(EquivalenceRow {
        flux: cfg.flux_dc,
        omega_p_multiplier: multiplier,
        chi_classical: dc.chi12,
        chi_quantum: chi_q,
        ratio,
        dyn_distance: dynamics.distance,
        min_ground_occupancy: dynamics.min_ground_occupancy,
    })
}

/// Classical-versus-quantum coupling comparison.
///
/// The rows use synthetic plasma frequencies (fixed multiples of the qubit
/// splitting, with E_c0 = ω_p²/8E_J0), so only the configured junction is
/// held to the phase-regime check.
pub fn equivalence_report(cfg: &CircuitConfig, trunc: FockTruncation) -> Result<EquivalenceReport> {
    bus_params(cfg)?;
    let n_max = trunc.n_max;
    let multiplier_rows = OMEGA_P_MULTIPLIERS
        .iter()
        .map(|&m| row(cfg, m, n_max))
        .collect::<Result<Vec<_>>>()?;
    let flux_rows = (0..SWEEP_POINTS)
        .map(|k| {
            let mut c = cfg.clone();
            c.flux_dc = (k as f64 + 0.5) / SWEEP_POINTS as f64;
            row(&c, SWEEP_MULTIPLIER, n_max)
        })
        .collect::<Result<Vec<_>>>()?;
    let ratios: Vec<f64> = flux_rows.iter().map(|r| r.ratio).collect();
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let var = ratios.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / ratios.len() as f64;
    let split = QubitSector::from_config(cfg)?.splittings();
    Ok(EquivalenceReport {
        multiplier_rows,
        flux_rows,
        ratio_mean: mean,
        ratio_rel_std: var.sqrt() / mean.abs(),
        max_splitting: split[0].max(split[1]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plasma_frequency_and_zeta() {
        let b = BusParams::from_energies(1.0, 0.02, &[0.05, 0.05], 0.25).unwrap();
        assert!((b.omega_p - 0.4).abs() < 1e-15);
        assert!((b.zeta - 25f64.powf(0.25)).abs() < 1e-15);
        let unit = BusParams::from_energies(2.0, 1.0, &[0.05], 0.0).unwrap();
        assert_eq!(unit.zeta, 1.0);
        assert_eq!(unit.g_bus, vec![0.0]);
    }

    #[test]
    fn bus_coupling_formula() {
        let b = BusParams::from_energies(1.0, 0.02, &[0.05, 0.07], 0.25).unwrap();
        let s = (PI / 4.0).sin();
        assert!((b.g_bus[0] + 0.05 / (2.0 * b.zeta) * s).abs() < 1e-16);
        assert!((b.g_bus[1] + 0.07 / (2.0 * b.zeta) * s).abs() < 1e-16);
    }

    #[test]
    fn phase_regime_enforced() {
        let mut cfg = CircuitConfig::demo();
        cfg.e_c0 = cfg.e_j0 / 2.0;
        assert!(matches!(bus_params(&cfg), Err(Error::Config(_))));
        cfg.e_c0 = cfg.e_j0 / 10.0;
        assert!(bus_params(&cfg).is_ok());
    }

    #[test]
    fn effective_chi_closed_form() {
        let cfg = CircuitConfig::demo();
        let b = bus_params(&cfg).unwrap();
        let s2 = sin_pi(cfg.flux_dc).powi(2);
        let want = -cfg.e_j1 * cfg.e_j2 * s2 / (4.0 * cfg.e_j0);
        let got = effective_chi(&b, 0, 1).unwrap();
        assert!((got - want).abs() < 1e-15 * want.abs().max(1e-300) + 1e-18);
        assert_eq!(got, effective_chi(&b, 1, 0).unwrap());
        assert!(effective_chi(&b, 1, 1).is_err());
        assert!(effective_chi(&b, 0, 2).is_err());
    }

    #[test]
    fn coupling_matrix_symmetric_with_zero_diagonal() {
        let b = BusParams::from_energies(1.0, 0.02, &[0.05, 0.06, 0.07], 0.3).unwrap();
        let m = coupling_matrix(&b);
        #[allow(clippy::needless_range_loop)]
        for i in 0..3 {
            assert_eq!(m[i][i], 0.0);
            for j in 0..3 {
                assert_eq!(m[i][j], m[j][i]);
                if i != j {
                    assert_eq!(m[i][j], effective_chi(&b, i, j).unwrap());
                }
            }
        }
    }

    #[test]
    fn flux_shape_identity() {
        let chi_at = |f: f64| {
            let b = BusParams::from_energies(1.0, 0.02, &[0.05, 0.05], f).unwrap();
            effective_chi(&b, 0, 1).unwrap()
        };
        for (f, g) in [(0.1, 0.3), (0.25, 0.45), (0.05, 0.7)] {
            let want = sin_pi(f).powi(2) / sin_pi(g).powi(2);
            assert!((chi_at(f) / chi_at(g) - want).abs() < 1e-14 * want);
        }
    }

    #[test]
    fn zero_flux_row_is_trivial() {
        let mut cfg = CircuitConfig::demo();
        cfg.flux_dc = 0.0;
        let r = row(&cfg, 50.0, 5).unwrap();
        assert_eq!(
            (r.chi_classical, r.chi_quantum, r.ratio, r.dyn_distance),
            (0.0, 0.0, 0.0, 0.0)
        );
    }

    #[test]
    fn elimination_converges_with_plasma_frequency() {
        let cfg = CircuitConfig::demo();
        let rows: Vec<_> = [10.0, 30.0, 100.0]
            .iter()
            .map(|&m| row(&cfg, m, 6).unwrap())
            .collect();
        for w in rows.windows(2) {
            assert!(w[1].dyn_distance < 1.2 * w[0].dyn_distance, "{rows:?}");
        }
        assert!(rows.iter().all(|r| r.min_ground_occupancy > 0.99));
        assert!((rows[0].ratio - 4.0).abs() < 1e-12);
    }
}
