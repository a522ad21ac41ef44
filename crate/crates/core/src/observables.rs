//! Supercurrent readout: the current operator, its mean and fluctuation, and
//! the reduced quantity κ = 1 + ⟨σx¹σx²⟩.

use std::f64::consts::PI;

use faer::Mat;
use statrs::function::gamma::ln_gamma;

use crate::dynamics::{evolve_closed_form, kappa_c, JointState, QubitInitial};
use crate::hilbert::{two_qubit, BasisTag, OperatorMatrix, Pauli, Qubit};
use crate::linalg::{expectation, norm_sqr, CMat, CVec};
use crate::params::{sin_pi, CircuitConfig};
use crate::photon_states::{FieldKind, FieldState};
use crate::{Error, Result, C64};

/// Tolerated deviation of ‖ψ‖² from one in κ evaluations (covers the
/// truncated field tail).
pub const NORM_TOL: f64 = 1e-8;
/// Slack on the κ ∈ [0, 2] range.
pub const KAPPA_RANGE_SLACK: f64 = 1e-9;

/// Unit in which a current operator is expressed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurrentUnit {
    /// Common qubit critical current (identical qubits).
    QubitCritical,
    /// Critical current of the large junction.
    LargeJunction,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupercurrentSpec {
    pub eta1: f64,
    pub eta2: f64,
    pub flux: f64,
}

impl SupercurrentSpec {
    pub fn new(eta1: f64, eta2: f64, flux: f64) -> Result<Self> {
        for eta in [eta1, eta2] {
            if !(eta > 0.0 && eta < 1.0) {
                return Err(Error::Config(format!(
                    "critical-current ratio {eta} outside (0, 1)"
                )));
            }
        }
        Ok(Self { eta1, eta2, flux })
    }

    pub fn from_config(cfg: &CircuitConfig) -> Result<Self> {
        Self::new(cfg.e_j1 / cfg.e_j0, cfg.e_j2 / cfg.e_j0, cfg.flux_dc)
    }

    pub fn identical(&self) -> bool {
        self.eta1 == self.eta2
    }

    fn require_identical(&self) -> Result<f64> {
        if self.identical() {
            Ok(self.eta1)
        } else {
            Err(Error::InvalidArgument(format!(
                "unsupported: κ relations need identical qubits (η = {} vs {})",
                self.eta1, self.eta2
            )))
        }
    }
}

/// Î = sin(πf)(I_c1σx¹ + I_c2σx²) − (1/4I₀)sin(2πf)[I_c1² + I_c2² + 2I_c1I_c2σx¹σx²].
///
/// For identical qubits the matrix is in units of I_c, otherwise of I₀.
pub fn supercurrent_operator(spec: &SupercurrentSpec) -> (OperatorMatrix, CurrentUnit) {
    let (i1, i2, i0, unit) = if spec.identical() {
        (1.0, 1.0, 1.0 / spec.eta1, CurrentUnit::QubitCritical)
    } else {
        (spec.eta1, spec.eta2, 1.0, CurrentUnit::LargeJunction)
    };
    let s = sin_pi(spec.flux);
    let s2 = sin_pi(2.0 * spec.flux);
    let x1 = crate::hilbert::pauli(Pauli::X, Qubit::First);
    let x2 = crate::hilbert::pauli(Pauli::X, Qubit::Second);
    let xx = two_qubit(Pauli::X, Pauli::X);
    let k = s2 / (4.0 * i0);
    let m: CMat = Mat::from_fn(4, 4, |r, c| {
        let id = if r == c { 1.0 } else { 0.0 };
        x1.entries()[(r, c)] * (s * i1) + x2.entries()[(r, c)] * (s * i2)
            - (xx[(r, c)] * (2.0 * i1 * i2) + C64::new((i1 * i1 + i2 * i2) * id, 0.0)) * k
    });
    let op = OperatorMatrix::new(BasisTag::TwoQubit, m).expect("4×4 operator");
    (op, unit)
}

/// (⟨Î⟩, ⟨Î²⟩ − ⟨Î⟩²) for a two-qubit state, in the operator's unit.
pub fn current_moments(spec: &SupercurrentSpec, psi: &CVec) -> Result<(f64, f64)> {
    if psi.nrows() != 4 {
        return Err(Error::InvalidArgument(format!(
            "expected a two-qubit state, got length {}",
            psi.nrows()
        )));
    }
    let (op, _) = supercurrent_operator(spec);
    let m = op.entries();
    let sq = m * m;
    let mean = expectation(m, psi).re;
    Ok((mean, expectation(&sq, psi).re - mean * mean))
}

/// Mean current implied by κ for identical qubits: −(η/2) sin(2πf) κ, in I_c.
pub fn current_from_kappa(kappa: f64, spec: &SupercurrentSpec) -> Result<f64> {
    let eta = spec.require_identical()?;
    Ok(-(eta / 2.0) * sin_pi(2.0 * spec.flux) * kappa)
}

/// Current variance in units of I_c²: (full, dominant) with
/// full = (η²/4)sin²(2πf)[1 − (κ−1)²] + 2sin²(πf)κ and dominant = 2sin²(πf)κ.
pub fn fluctuation_formula(kappa: f64, spec: &SupercurrentSpec) -> Result<(f64, f64)> {
    let eta = spec.require_identical()?;
    if !(-KAPPA_RANGE_SLACK..=2.0 + KAPPA_RANGE_SLACK).contains(&kappa) {
        return Err(Error::InvalidArgument(format!(
            "kappa {kappa} outside [0, 2]"
        )));
    }
    let dominant = 2.0 * sin_pi(spec.flux).powi(2) * kappa;
    let small = (eta * eta / 4.0) * sin_pi(2.0 * spec.flux).powi(2) * (1.0 - (kappa - 1.0).powi(2));
    Ok((small + dominant, dominant))
}

/// 1 + ⟨σx¹σx²⟩ with the field traced out. Accepts two-qubit vectors and
/// qubit ⊗ qubit ⊗ Fock vectors.
pub fn kappa_from_state(psi: &CVec, basis: BasisTag) -> Result<f64> {
    if psi.nrows() != basis.dim() {
        return Err(Error::InvalidArgument(format!(
            "state length {} does not match basis dimension {}",
            psi.nrows(),
            basis.dim()
        )));
    }
    if matches!(basis, BasisTag::QubitFock { .. }) {
        return Err(Error::InvalidArgument("κ needs both qubits".into()));
    }
    let n = norm_sqr(psi);
    if (n - 1.0).abs() > NORM_TOL {
        return Err(Error::InvalidArgument(format!(
            "state not normalized (‖ψ‖² = {n})"
        )));
    }
    let f = basis.fock_dim();
    // σx¹σx² maps |q₁q₂⟩ to |q̄₁q̄₂⟩: index q ↦ 3 − q.
    let mut xx = 0.0;
    for nf in 0..f {
        let amp = |q: usize| psi[q * f + nf];
        xx += 2.0 * (amp(0).conj() * amp(3) + amp(1).conj() * amp(2)).re;
    }
    Ok(1.0 + xx)
}

pub fn kappa_from_joint(state: &JointState) -> Result<f64> {
    let n_max = state.required_n_max();
    let psi = state.to_full(n_max)?;
    kappa_from_state(&psi, BasisTag::TwoQubitFock { n_max })
}

/// κ_q(τ) = 1 + 2Re{w₀ cos θ D(0) + Σₙ uₙvₙ}, with
/// w₀ = conj(a₀), uₙ = conj(aₙ₊₁), vₙ = bₙ in the closed-form amplitudes.
pub fn kappa_q_series(init: &QubitInitial, field: &FieldState, tau: f64) -> f64 {
    let (gg, ee) = init.amplitudes();
    let (cos_t, sin_t) = (gg.re, ee.norm());
    let phase = C64::from_polar(1.0, init.phi());
    let d = |n: usize| field.amp(n);
    let root = |n: usize| ((n + 1) as f64).sqrt();
    let a = |n: usize| {
        let (s, c) = (tau * root(n)).sin_cos();
        phase * d(n) * (c * sin_t) - d(n + 1) * (s * cos_t)
    };
    let mut acc = a(0).conj() * d(0) * cos_t;
    for n in 0..field.n_max() {
        let (s, c) = (tau * root(n)).sin_cos();
        let v = phase * d(n) * (s * sin_t) + d(n + 1) * (c * cos_t);
        acc += a(n + 1).conj() * v;
    }
    1.0 + 2.0 * acc.re
}

/// Ground-state qubits with a coherent field:
/// κ_q = 1 − 2cos φ e^{−n̄} Σ A(n) sin(τ√(n+1)) cos(τ√n),
/// A(n) = n̄^{n+½}/(n!√(n+1)).
pub fn kappa_q_coherent_ground(nbar: f64, phase: f64, tau: f64) -> Result<f64> {
    if !(0.0..=crate::photon_states::MAX_NBAR).contains(&nbar) {
        return Err(Error::Domain(format!(
            "mean photon number {nbar} outside [0, 100]"
        )));
    }
    if nbar == 0.0 {
        return Ok(1.0);
    }
    let ln_nbar = nbar.ln();
    let mut sum = 0.0;
    for n in 0.. {
        let nf = n as f64;
        let ln_term = -nbar + (nf + 0.5) * ln_nbar - ln_gamma(nf + 1.0) - 0.5 * (nf + 1.0).ln();
        if nf > nbar && ln_term < -50.0 {
            break;
        }
        sum += ln_term.exp() * (tau * (nf + 1.0).sqrt()).sin() * (tau * nf.sqrt()).cos();
    }
    Ok(1.0 - 2.0 * phase.cos() * sum)
}

/// Model behind a κ trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KappaModel {
    ClassicalDrive,
    QuantizedField { kind: FieldKind },
}

#[derive(Clone, Debug, PartialEq)]
pub struct KappaTrace {
    pub tau_grid: Vec<f64>,
    pub kappa: Vec<f64>,
    pub model: KappaModel,
    pub theta: f64,
    pub phi: f64,
    /// Probability mass dropped by the field truncation.
    pub tail_mass: f64,
}

impl KappaTrace {
    fn checked(self) -> Result<Self> {
        if let Some((t, k)) = self
            .tau_grid
            .iter()
            .zip(&self.kappa)
            .find(|(_, k)| !(-KAPPA_RANGE_SLACK..=2.0 + KAPPA_RANGE_SLACK).contains(*k))
        {
            return Err(Error::Invariant(format!(
                "kappa {k} at tau {t} outside [0, 2]"
            )));
        }
        Ok(self)
    }

    pub fn quantized(init: &QubitInitial, field: &FieldState, tau_grid: &[f64]) -> Result<Self> {
        Self {
            tau_grid: tau_grid.to_vec(),
            kappa: tau_grid
                .iter()
                .map(|&t| kappa_q_series(init, field, t))
                .collect(),
            model: KappaModel::QuantizedField { kind: field.kind() },
            theta: init.theta(),
            phi: init.phi(),
            tail_mass: field.tail_mass(),
        }
        .checked()
    }

    pub fn classical(init: &QubitInitial, tau_grid: &[f64]) -> Result<Self> {
        Self {
            tau_grid: tau_grid.to_vec(),
            kappa: tau_grid.iter().map(|&t| kappa_c(init, t)).collect(),
            model: KappaModel::ClassicalDrive,
            theta: init.theta(),
            phi: init.phi(),
            tail_mass: 0.0,
        }
        .checked()
    }

    /// RMS of κ − mean(κ) over samples with τ in [lo, hi]; the mean is taken
    /// over the whole trace.
    pub fn windowed_rms(&self, lo: f64, hi: f64) -> f64 {
        let mean = self.kappa.iter().sum::<f64>() / self.kappa.len() as f64;
        let (sum, count) = self
            .tau_grid
            .iter()
            .zip(&self.kappa)
            .filter(|(t, _)| (lo..=hi).contains(*t))
            .fold((0.0, 0usize), |(s, c), (_, k)| {
                (s + (k - mean).powi(2), c + 1)
            });
        if count == 0 {
            0.0
        } else {
            (sum / count as f64).sqrt()
        }
    }

    /// Hann-windowed DFT magnitudes of κ − mean(κ) at bins 0..=N/2.
    pub fn spectrum(&self) -> Vec<f64> {
        let n = self.kappa.len();
        let mean = self.kappa.iter().sum::<f64>() / n as f64;
        let x: Vec<f64> = self
            .kappa
            .iter()
            .enumerate()
            .map(|(j, k)| {
                let w = 0.5 - 0.5 * (2.0 * PI * j as f64 / (n - 1) as f64).cos();
                (k - mean) * w
            })
            .collect();
        (0..=n / 2)
            .map(|bin| {
                let step = C64::from_polar(1.0, -2.0 * PI * bin as f64 / n as f64);
                let mut rot = C64::new(1.0, 0.0);
                let mut acc = C64::new(0.0, 0.0);
                for &v in &x {
                    acc += rot * v;
                    rot *= step;
                }
                acc.norm()
            })
            .collect()
    }

    /// Largest spectral peak over the second largest, local maxima only and
    /// the dc bin excluded. Infinite when there is a single peak.
    pub fn peak_ratio(&self) -> f64 {
        let spec = self.spectrum();
        let mut peaks: Vec<f64> = (1..spec.len())
            .filter(|&k| spec[k] >= spec[k - 1] && spec.get(k + 1).is_none_or(|&r| spec[k] > r))
            .map(|k| spec[k])
            .collect();
        peaks.sort_by(|a, b| b.total_cmp(a));
        match peaks.as_slice() {
            [] => 0.0,
            [_] => f64::INFINITY,
            [first, second, ..] => first / second,
        }
    }
}

/// Closed-form κ trace through the full state, for cross-checks against the
/// series.
pub fn kappa_via_state(init: &QubitInitial, field: &FieldState, tau: f64) -> Result<f64> {
    kappa_from_joint(&evolve_closed_form(init, field, tau))
}
