//! Time evolution: the closed-form solution of the one-photon double-flip
//! model, the classical-drive κ_c formula, and a brute-force unitary
//! propagator used to check every closed form.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::hilbert::{
    basis_index, hamiltonian_quantized_with_coupling, qubit_index, BasisTag, Hamiltonian, Level,
};
use crate::linalg::{hermiticity_defect, max_abs, norm_sqr, CVec, HermitianEigen};
use crate::photon_states::{FieldState, TRUNCATION_MARGIN};
use crate::{Error, Result, C64};

/// Minimum midpoint steps per period of the fastest drive.
pub const MIN_STEPS_PER_PERIOD: f64 = 1000.0;
/// Allowed drift of ‖ψ‖² over a propagation.
pub const NORM_DRIFT_TOL: f64 = 1e-10;

/// cos θ|g,g⟩ + sin θ e^{iφ}|e,e⟩.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitInitial {
    theta: f64,
    phi: f64,
}

impl QubitInitial {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidArgument(format!(
                "theta {theta} outside [0, π/2]"
            )));
        }
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::InvalidArgument(format!("phi {phi} outside [0, 2π)")));
        }
        Ok(Self { theta, phi })
    }

    pub fn ground() -> Self {
        Self {
            theta: 0.0,
            phi: 0.0,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// (amplitude of |g,g⟩, amplitude of |e,e⟩).
    pub fn amplitudes(&self) -> (C64, C64) {
        (
            C64::new(self.theta.cos(), 0.0),
            C64::from_polar(self.theta.sin(), self.phi),
        )
    }

    /// Two-qubit state vector.
    pub fn qubit_vector(&self) -> CVec {
        let (gg, ee) = self.amplitudes();
        let mut v = CVec::zeros(4);
        v[qubit_index(Level::Ground, Level::Ground)] = gg;
        v[qubit_index(Level::Excited, Level::Excited)] = ee;
        v
    }

    /// Product state with a field, on `n_max` Fock levels.
    pub fn with_field(&self, field: &FieldState, n_max: usize) -> Result<CVec> {
        if field.n_max() > n_max {
            return Err(Error::InvalidArgument(format!(
                "field support {} exceeds truncation {n_max}",
                field.n_max()
            )));
        }
        let (gg, ee) = self.amplitudes();
        let mut v = CVec::zeros(4 * (n_max + 1));
        for (n, &d) in field.amps().iter().enumerate() {
            v[basis_index(Level::Ground, Level::Ground, n, n_max)] = gg * d;
            v[basis_index(Level::Excited, Level::Excited, n, n_max)] = ee * d;
        }
        Ok(v)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum JointMode {
    /// Σ aₙ|e,e,n⟩ + Σ bₙ|g,g,n+1⟩ + c|g,g,0⟩.
    ClosedForm {
        a: Vec<C64>,
        b: Vec<C64>,
        c_gg0: C64,
    },
    FullVector {
        psi: CVec,
        basis: BasisTag,
    },
}

/// Qubits-plus-field state at dimensionless time `tau`.
#[derive(Clone, Debug, PartialEq)]
pub struct JointState {
    pub tau: f64,
    pub mode: JointMode,
}

impl JointState {
    pub fn norm_sqr(&self) -> f64 {
        match &self.mode {
            JointMode::ClosedForm { a, b, c_gg0 } => {
                a.iter().chain(b).map(|z| z.norm_sqr()).sum::<f64>() + c_gg0.norm_sqr()
            }
            JointMode::FullVector { psi, .. } => norm_sqr(psi),
        }
    }

    /// Smallest Fock cutoff that holds the state.
    pub fn required_n_max(&self) -> usize {
        match &self.mode {
            JointMode::ClosedForm { a, b, .. } => a.len().max(b.len()),
            JointMode::FullVector { basis, .. } => basis.fock_dim() - 1,
        }
    }

    /// Dense vector on qubit1 ⊗ qubit2 ⊗ Fock(0..=n_max).
    pub fn to_full(&self, n_max: usize) -> Result<CVec> {
        match &self.mode {
            JointMode::ClosedForm { a, b, c_gg0 } => {
                if self.required_n_max() > n_max {
                    return Err(Error::InvalidArgument(format!(
                        "state needs {} Fock levels, got {n_max}",
                        self.required_n_max()
                    )));
                }
                let mut v = CVec::zeros(4 * (n_max + 1));
                for (n, &z) in a.iter().enumerate() {
                    v[basis_index(Level::Excited, Level::Excited, n, n_max)] = z;
                }
                for (n, &z) in b.iter().enumerate() {
                    v[basis_index(Level::Ground, Level::Ground, n + 1, n_max)] = z;
                }
                v[basis_index(Level::Ground, Level::Ground, 0, n_max)] = *c_gg0;
                Ok(v)
            }
            JointMode::FullVector { psi, basis } => {
                let have = basis.fock_dim();
                if n_max + 1 < have {
                    // Only allowed when the dropped levels are empty.
                    for q in 0..4 {
                        for n in n_max + 1..have {
                            if psi[q * have + n] != C64::new(0.0, 0.0) {
                                return Err(Error::InvalidArgument(format!(
                                    "state populates Fock level {n} beyond {n_max}"
                                )));
                            }
                        }
                    }
                }
                let mut v = CVec::zeros(4 * (n_max + 1));
                for q in 0..4 {
                    for n in 0..have.min(n_max + 1) {
                        v[q * (n_max + 1) + n] = psi[q * have + n];
                    }
                }
                Ok(v)
            }
        }
    }
}

/// Closed-form state for the coupling ξ₁₂ = i|ξ₁₂| at τ = |ξ₁₂|t:
/// aₙ = cos(τ√(n+1)) sin θ e^{iφ} D(n) − sin(τ√(n+1)) cos θ D(n+1),
/// bₙ = sin(τ√(n+1)) sin θ e^{iφ} D(n) + cos(τ√(n+1)) cos θ D(n+1),
/// c = cos θ D(0).
pub fn evolve_closed_form(init: &QubitInitial, field: &FieldState, tau: f64) -> JointState {
    let (gg, ee) = init.amplitudes();
    let n_top = field.n_max();
    let mut a = Vec::with_capacity(n_top + 1);
    let mut b = Vec::with_capacity(n_top + 1);
    for n in 0..=n_top {
        let (s, c) = (tau * ((n + 1) as f64).sqrt()).sin_cos();
        let up = ee * field.amp(n);
        let down = gg * field.amp(n + 1);
        a.push(up * c - down * s);
        b.push(up * s + down * c);
    }
    JointState {
        tau,
        mode: JointMode::ClosedForm {
            a,
            b,
            c_gg0: gg * field.amp(0),
        },
    }
}

/// Removes the phase of a general coupling ξ₁₂ = |ξ|e^{iχ} by relabeling
/// Fock states, |n⟩ → e^{inα}|n⟩ with α = χ − π/2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplingGauge {
    pub alpha: f64,
}

impl CouplingGauge {
    pub fn for_coupling(xi12: C64) -> Self {
        Self {
            alpha: xi12.arg() - FRAC_PI_2,
        }
    }

    /// Field as seen in the canonical gauge: D(n)e^{−inα}.
    pub fn to_canonical(&self, field: &FieldState) -> FieldState {
        field.with_phase_rotation(-self.alpha)
    }

    /// Multiplies Fock component n by e^{inα}.
    pub fn restore(&self, psi: &CVec, n_max: usize) -> CVec {
        CVec::from_fn(psi.nrows(), |i| {
            psi[i] * C64::from_polar(1.0, (i % (n_max + 1)) as f64 * self.alpha)
        })
    }
}

/// Closed form for an arbitrary coupling at physical time t.
pub fn evolve_closed_form_with_coupling(
    init: &QubitInitial,
    field: &FieldState,
    xi12: C64,
    t: f64,
    n_max: usize,
) -> Result<CVec> {
    let gauge = CouplingGauge::for_coupling(xi12);
    let tau = xi12.norm() * t;
    let psi = evolve_closed_form(init, &gauge.to_canonical(field), tau).to_full(n_max)?;
    Ok(gauge.restore(&psi, n_max))
}

/// κ_c = 1 + sin 2θ cos φ cos τ + cos 2θ sin τ, τ = |g₁₂|t.
pub fn kappa_c(init: &QubitInitial, tau: f64) -> f64 {
    let (theta, phi) = (init.theta, init.phi);
    1.0 + (2.0 * theta).sin() * phi.cos() * tau.cos() + (2.0 * theta).cos() * tau.sin()
}

fn check_hermitian(m: &crate::linalg::CMat, t: f64) -> Result<()> {
    let defect = hermiticity_defect(m);
    if defect > 1e-12 * max_abs(m).max(1.0) {
        return Err(Error::InvalidArgument(format!(
            "Hamiltonian not Hermitian at t = {t} (defect {defect:e})"
        )));
    }
    Ok(())
}

/// Steps required for `t_final` with the given fastest drive frequency.
pub fn required_steps(t_final: f64, max_frequency: f64) -> usize {
    (MIN_STEPS_PER_PERIOD * t_final * max_frequency / (2.0 * PI)).ceil() as usize
}

/// Midpoint-exponential propagation calling `observe(t, ψ)` at t = 0 and
/// after every step. Time-independent Hamiltonians are exponentiated once,
/// with `steps` only setting the observation grid.
pub fn propagate_observed(
    h: &dyn Hamiltonian,
    psi0: &CVec,
    t_final: f64,
    steps: usize,
    mut observe: impl FnMut(f64, &CVec),
) -> Result<CVec> {
    if psi0.nrows() != h.dim() {
        return Err(Error::InvalidArgument(format!(
            "state of length {} for a {}-dimensional Hamiltonian",
            psi0.nrows(),
            h.dim()
        )));
    }
    if !(t_final >= 0.0 && t_final.is_finite()) || steps == 0 {
        return Err(Error::InvalidArgument(
            "need t_final ≥ 0 and at least one step".into(),
        ));
    }
    let n0 = norm_sqr(psi0);
    let dt = t_final / steps as f64;
    observe(0.0, psi0);
    let psi = if h.is_time_independent() {
        let m = h.matrix_at(0.0);
        check_hermitian(&m, 0.0)?;
        let eig = HermitianEigen::new(&m)?;
        let mut last = psi0.clone();
        for k in 1..=steps {
            let t = if k == steps { t_final } else { k as f64 * dt };
            last = eig.evolve(psi0, t);
            observe(t, &last);
        }
        last
    } else {
        if let Some(w) = h.max_drive_frequency() {
            let need = required_steps(t_final, w);
            if steps < need {
                return Err(Error::InvalidArgument(format!(
                    "{steps} steps under-resolve the drive; need at least {need}"
                )));
            }
        }
        let mut psi = psi0.clone();
        for k in 0..steps {
            let mid = (k as f64 + 0.5) * dt;
            let m = h.matrix_at(mid);
            check_hermitian(&m, mid)?;
            psi = HermitianEigen::new(&m)?.evolve(&psi, dt);
            observe((k + 1) as f64 * dt, &psi);
        }
        psi
    };
    let drift = (norm_sqr(&psi) - n0).abs();
    if drift > NORM_DRIFT_TOL {
        return Err(Error::Invariant(format!("norm drifted by {drift:e}")));
    }
    Ok(psi)
}

/// ψ(t_final) by midpoint exponentials U_k = exp(−iH(t_k + Δt/2)Δt).
pub fn propagate_oracle(
    h: &dyn Hamiltonian,
    psi0: &CVec,
    t_final: f64,
    steps: usize,
) -> Result<CVec> {
    propagate_observed(h, psi0, t_final, steps, |_, _| {})
}

/// Dense exponential of the double-flip Hamiltonian with ξ₁₂ = i, so that
/// physical time equals τ. Built once per truncation and reused.
pub struct QuantizedOracle {
    n_max: usize,
    eig: HermitianEigen,
}

impl QuantizedOracle {
    pub fn new(n_max: usize) -> Result<Self> {
        let h = hamiltonian_quantized_with_coupling(C64::new(0.0, 1.0), n_max);
        check_hermitian(h.entries(), 0.0)?;
        Ok(Self {
            n_max,
            eig: HermitianEigen::new(h.entries())?,
        })
    }

    /// Oracle for a field, with the standard margin above its support.
    pub fn for_field(field: &FieldState) -> Result<Self> {
        Self::new(field.n_max() + TRUNCATION_MARGIN)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn evolve(
        &self,
        init: &QubitInitial,
        field: &FieldState,
        tau_grid: &[f64],
    ) -> Result<Vec<JointState>> {
        let psi0 = init.with_field(field, self.n_max)?;
        let n0 = norm_sqr(&psi0);
        tau_grid
            .iter()
            .map(|&tau| {
                if !(tau >= 0.0 && tau.is_finite()) {
                    return Err(Error::InvalidArgument(format!(
                        "tau {tau} must be finite and ≥ 0"
                    )));
                }
                let psi = self.eig.evolve(&psi0, tau);
                let drift = (norm_sqr(&psi) - n0).abs();
                if drift > NORM_DRIFT_TOL {
                    return Err(Error::Invariant(format!(
                        "norm drifted by {drift:e} at tau {tau}"
                    )));
                }
                Ok(JointState {
                    tau,
                    mode: JointMode::FullVector {
                        psi,
                        basis: BasisTag::TwoQubitFock { n_max: self.n_max },
                    },
                })
            })
            .collect()
    }
}

/// Brute-force counterpart of [`evolve_closed_form`].
pub fn evolve_full_quantized(
    init: &QubitInitial,
    field: &FieldState,
    tau_grid: &[f64],
) -> Result<Vec<JointState>> {
    QuantizedOracle::for_field(field)?.evolve(init, field, tau_grid)
}

/// max over τ of the distance between closed-form and dense evolution.
pub fn closed_form_deviation(
    oracle: &QuantizedOracle,
    init: &QubitInitial,
    field: &FieldState,
    taus: &[f64],
) -> Result<f64> {
    let full = oracle.evolve(init, field, taus)?;
    let mut worst = 0.0_f64;
    for (state, &tau) in full.iter().zip(taus) {
        let cf = evolve_closed_form(init, field, tau).to_full(oracle.n_max)?;
        let psi = state.to_full(oracle.n_max)?;
        worst = worst.max(crate::linalg::distance(&cf, &psi));
    }
    Ok(worst)
}

/// |gg⟩ → |ee⟩ transfer under the full lab-frame drive.
#[derive(Clone, Debug, PartialEq)]
pub struct RabiMeasurement {
    /// Population oscillation period, twice the time of the first maximum of
    /// the smoothed |ee⟩ population.
    pub period: f64,
    /// Measured transfer rate π/period in units of |g₁₂|.
    pub factor: f64,
    /// Largest unsmoothed |ee⟩ population in the window.
    pub max_population: f64,
    pub window: f64,
    /// (t, P_ee) in the rotating frame, one sample per step.
    pub samples: Vec<(f64, f64)>,
}

/// Propagates the lab Hamiltonian driven at `omega` from |g,g⟩ over
/// `window` and tracks the |e,e⟩ population in the frame rotating with the
/// Ēᵢσx terms. The smoothing width for the period estimate is one period of
/// the slower qubit, which removes the off-resonant single-qubit wiggles.
pub fn measure_double_flip(
    dc: &crate::params::DerivedCouplings,
    omega: f64,
    window: f64,
) -> Result<RabiMeasurement> {
    use crate::hilbert::LabHamiltonian;
    if dc.g12 == 0.0 {
        return Err(Error::InvalidArgument(
            "no two-qubit drive coupling at this flux".into(),
        ));
    }
    let h = LabHamiltonian::new(dc).with_drive_freq(omega);
    let steps = required_steps(window, h.max_drive_frequency().unwrap_or(0.0)).max(1);
    let ee = qubit_index(Level::Excited, Level::Excited);
    let mut psi0 = CVec::zeros(4);
    psi0[qubit_index(Level::Ground, Level::Ground)] = C64::new(1.0, 0.0);
    let mut samples = Vec::with_capacity(steps + 1);
    propagate_observed(&h, &psi0, window, steps, |t, psi| {
        let frame = h.to_rotating_frame(t);
        let p: C64 = (0..4).map(|j| frame[(ee, j)] * psi[j]).sum();
        samples.push((t, p.norm_sqr()));
    })?;

    let slow = dc.eps01.abs().min(dc.eps02.abs());
    let width = if slow > 0.0 { 2.0 * PI / slow } else { 0.0 };
    let dt = window / steps as f64;
    let half = ((width / dt) / 2.0).round() as usize;
    let mut prefix = Vec::with_capacity(samples.len() + 1);
    prefix.push(0.0);
    for &(_, p) in &samples {
        prefix.push(prefix.last().unwrap() + p);
    }
    let smoothed = |i: usize| {
        let lo = i.saturating_sub(half);
        let hi = (i + half).min(samples.len() - 1);
        (prefix[hi + 1] - prefix[lo]) / (hi + 1 - lo) as f64
    };
    // First maximum: the peak of the smoothed trace before it falls back
    // below half of that peak.
    let mut best = (0usize, f64::NEG_INFINITY);
    for i in 0..samples.len() {
        let v = smoothed(i);
        if v > best.1 {
            best = (i, v);
        } else if v < 0.5 * best.1 {
            break;
        }
    }
    let period = 2.0 * samples[best.0].0;
    let max_population = samples.iter().map(|s| s.1).fold(0.0, f64::max);
    Ok(RabiMeasurement {
        period,
        factor: PI / (period * dc.g12.abs()),
        max_population,
        window,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{
        excitation_number, hamiltonian_rwa, two_qubit, LabHamiltonian, OperatorMatrix, Pauli,
    };
    use crate::linalg::{distance, expectation, CMat};
    use crate::params::{derive_couplings, CircuitConfig, MatchKind};
    use crate::photon_states::{coherent, even_cat, squeezed_vacuum};
    use std::f64::consts::FRAC_PI_4;

    const BOUND: f64 = 1e-10;

    #[test]
    fn initial_state_validation() {
        assert!(QubitInitial::new(-0.1, 0.0).is_err());
        assert!(QubitInitial::new(0.0, 2.0 * PI).is_err());
        assert!(QubitInitial::new(FRAC_PI_2, 0.0).is_ok());
    }

    #[test]
    fn closed_form_at_zero_time() {
        let init = QubitInitial::new(0.4, 1.1).unwrap();
        let field = coherent(3.0, 0.2, BOUND).unwrap();
        let JointMode::ClosedForm { a, b, c_gg0 } = evolve_closed_form(&init, &field, 0.0).mode
        else {
            unreachable!()
        };
        let (gg, ee) = init.amplitudes();
        for n in 0..=field.n_max() {
            assert_eq!(a[n], ee * field.amp(n));
            assert_eq!(b[n], gg * field.amp(n + 1));
        }
        assert_eq!(c_gg0, gg * field.amp(0));
    }

    #[test]
    fn closed_form_norm_is_preserved() {
        let init = QubitInitial::new(0.7, 2.0).unwrap();
        for field in [
            FieldState::vacuum(),
            coherent(7.0, 0.3, BOUND).unwrap(),
            even_cat(7.0, BOUND).unwrap(),
            squeezed_vacuum(7.0, 0.0, BOUND).unwrap(),
        ] {
            let total = 1.0 - field.tail_mass();
            for tau in [0.0, 1.0, 10.0, 50.0] {
                let s = evolve_closed_form(&init, &field, tau);
                assert!((s.norm_sqr() - total).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn vacuum_two_level_rabi() {
        // |e,e,0⟩ ↔ |g,g,1⟩ only.
        let init = QubitInitial::new(FRAC_PI_2, 0.0).unwrap();
        let field = FieldState::vacuum();
        let states = evolve_full_quantized(&init, &field, &[0.3, 1.0, 2.5]).unwrap();
        for s in &states {
            let psi = s.to_full(5).unwrap();
            let p = psi[basis_index(Level::Ground, Level::Ground, 1, 5)].norm_sqr();
            assert!((p - s.tau.sin().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn oracle_matches_closed_form_on_grid() {
        let fields = [
            coherent(7.0, 0.0, BOUND).unwrap(),
            even_cat(7.0, BOUND).unwrap(),
        ];
        for field in &fields {
            let oracle = QuantizedOracle::for_field(field).unwrap();
            for theta in [0.0, FRAC_PI_4, FRAC_PI_2] {
                for phi in [0.0, FRAC_PI_2, PI] {
                    let init = QubitInitial::new(theta, phi).unwrap();
                    let d = closed_form_deviation(&oracle, &init, field, &[0.5, 1.0, 5.0, 20.0])
                        .unwrap();
                    assert!(d < 1e-8, "{:?} θ={theta} φ={phi}: {d:e}", field.kind());
                }
            }
        }
    }

    #[test]
    fn complex_coupling_gauge() {
        let field = coherent(2.0, 0.4, BOUND).unwrap();
        let init = QubitInitial::new(0.6, 0.9).unwrap();
        let n_max = field.n_max() + TRUNCATION_MARGIN;
        for xi in [
            C64::new(0.0, 0.7),
            C64::new(-0.3, 0.2),
            C64::from_polar(1.3, 2.4),
        ] {
            let h = hamiltonian_quantized_with_coupling(xi, n_max);
            let psi0 = init.with_field(&field, n_max).unwrap();
            let t = 2.3;
            let oracle = propagate_oracle(&h, &psi0, t, 1).unwrap();
            let cf = evolve_closed_form_with_coupling(&init, &field, xi, t, n_max).unwrap();
            assert!(distance(&oracle, &cf) < 1e-12, "{xi}");
        }
    }

    #[test]
    fn excitations_conserved() {
        let field = coherent(4.0, 0.0, BOUND).unwrap();
        let init = QubitInitial::new(0.5, 0.0).unwrap();
        let oracle = QuantizedOracle::for_field(&field).unwrap();
        let nc = excitation_number(oracle.n_max());
        let psi0 = init.with_field(&field, oracle.n_max()).unwrap();
        let n0 = expectation(nc.entries(), &psi0).re;
        for s in oracle.evolve(&init, &field, &[1.0, 7.0, 30.0]).unwrap() {
            let psi = s.to_full(oracle.n_max()).unwrap();
            assert!((expectation(nc.entries(), &psi).re - n0).abs() < 1e-10);
        }
    }

    #[test]
    fn kappa_c_values() {
        assert_eq!(kappa_c(&QubitInitial::ground(), 0.0), 1.0);
        let bell = QubitInitial::new(FRAC_PI_4, 0.0).unwrap();
        for tau in [0.0, 0.7, 3.0] {
            assert!((kappa_c(&bell, tau) - 1.0 - tau.cos()).abs() < 1e-15);
        }
        for theta in [0.1, 0.5, 1.2] {
            let init = QubitInitial::new(theta, 0.0).unwrap();
            for n in 0..3 {
                let tau0 = -2.0 * theta + 2.0 * PI * n as f64 - FRAC_PI_2;
                assert!(kappa_c(&init, tau0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kappa_c_matches_rwa_propagation() {
        let cfg = CircuitConfig::demo();
        let dc = derive_couplings(&cfg).unwrap();
        let h = hamiltonian_rwa(&dc, MatchKind::DoubleFlip).unwrap();
        let xx = two_qubit(Pauli::X, Pauli::X);
        for (theta, phi) in [(0.0, 0.0), (FRAC_PI_4, 0.0), (0.3, 1.0), (1.1, 4.0)] {
            let init = QubitInitial::new(theta, phi).unwrap();
            for tau in [0.4, 2.0, 9.0] {
                let psi =
                    propagate_oracle(&h, &init.qubit_vector(), tau / dc.g12.abs(), 1).unwrap();
                let k = 1.0 + expectation(&xx, &psi).re;
                assert!(
                    (k - kappa_c(&init, tau)).abs() < 1e-10,
                    "θ={theta} φ={phi} τ={tau}"
                );
            }
        }
    }

    #[test]
    fn lab_drive_at_double_flip_resonance() {
        let cfg = CircuitConfig {
            e_j1: 0.6,
            e_j2: 0.6,
            e_j0: 1.0,
            e_c1: 1.0,
            e_c2: 1.0,
            cap_ratio1: 0.08,
            cap_ratio2: 0.16,
            flux_dc: 0.04,
            flux_ac_amp: 0.3 / (2.0 * PI),
            ..CircuitConfig::demo()
        };
        let dc = derive_couplings(&cfg).unwrap();
        let window = 1.25 * 2.0 * PI / dc.g12.abs();
        let on = measure_double_flip(&dc, dc.omega1 + dc.omega2, window).unwrap();
        assert!((on.factor - 0.5).abs() < 0.05, "{}", on.factor);
        assert!(on.max_population > 0.5);
        let off = measure_double_flip(&dc, 0.4, window).unwrap();
        assert!(off.max_population < 0.05);
    }

    #[test]
    fn zero_hamiltonian_is_identity() {
        let h = OperatorMatrix::new(BasisTag::TwoQubit, CMat::zeros(4, 4)).unwrap();
        let psi0 = QubitInitial::new(0.3, 0.2).unwrap().qubit_vector();
        assert_eq!(propagate_oracle(&h, &psi0, 10.0, 3).unwrap(), psi0);
    }

    #[test]
    fn rejects_non_hermitian_and_underresolved() {
        let mut m = CMat::zeros(4, 4);
        m[(0, 1)] = C64::new(1.0, 0.0);
        let h = OperatorMatrix::new(BasisTag::TwoQubit, m).unwrap();
        let psi0 = QubitInitial::ground().qubit_vector();
        assert!(matches!(
            propagate_oracle(&h, &psi0, 1.0, 1),
            Err(Error::InvalidArgument(_))
        ));

        let lab = LabHamiltonian::new(&derive_couplings(&CircuitConfig::demo()).unwrap());
        assert!(matches!(
            propagate_oracle(&lab, &psi0, 100.0, 10),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn full_state_truncation_roundtrip() {
        let init = QubitInitial::new(0.5, 0.5).unwrap();
        let field = coherent(1.0, 0.0, BOUND).unwrap();
        let s = evolve_closed_form(&init, &field, 0.8);
        let n = s.required_n_max();
        let v = s.to_full(n).unwrap();
        let full = JointState {
            tau: 0.8,
            mode: JointMode::FullVector {
                psi: s.to_full(n + 4).unwrap(),
                basis: BasisTag::TwoQubitFock { n_max: n + 4 },
            },
        };
        assert_eq!(full.to_full(n).unwrap(), v);
        assert!(s.to_full(n - 1).is_err());
    }
}
