//! Truncated photon-number amplitudes for coherent, even-cat and squeezed
//! vacuum fields.
//!
//! Amplitudes are evaluated in log space (log-gamma factorials) and the
//! vector is cut at the smallest n_max whose neglected probability is below
//! the requested bound. Amplitudes are not renormalized after the cut.

use statrs::function::gamma::ln_gamma;

use crate::hilbert::{FockTruncation, MAX_TAIL_BOUND};
use crate::{Error, Result, C64};

/// Default neglected-probability bound.
pub const DEFAULT_TAIL_BOUND: f64 = 1e-10;
/// Largest mean photon number accepted by the generators.
pub const MAX_NBAR: f64 = 100.0;
/// Extra Fock levels added on top of the field support for dynamics.
pub const TRUNCATION_MARGIN: usize = 5;
/// Hard ceiling on the photon numbers scanned while looking for the cut.
const SCAN_LIMIT: usize = 200_000;

/// Provenance of a field state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FieldKind {
    Vacuum,
    /// |α⟩ with α = √n̄ e^{iφ}.
    Coherent {
        nbar: f64,
        phase: f64,
    },
    /// (|α⟩ + |−α⟩)/N₊ with real α. `alpha_sq` is |α|², chosen so the mean
    /// photon number equals `nbar` (|α|² tanh|α|² = n̄).
    EvenCat {
        nbar: f64,
        alpha_sq: f64,
    },
    /// S(r e^{iβ})|0⟩ with n̄ = sinh² r.
    SqueezedVacuum {
        nbar: f64,
        r: f64,
        beta: f64,
    },
    Custom,
}

impl FieldKind {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Vacuum => "vacuum",
            Self::Coherent { .. } => "coherent",
            Self::EvenCat { .. } => "even_cat",
            Self::SqueezedVacuum { .. } => "squeezed_vacuum",
            Self::Custom => "custom",
        }
    }

    /// True when only even photon numbers are populated.
    pub fn even_only(&self) -> bool {
        matches!(self, Self::EvenCat { .. } | Self::SqueezedVacuum { .. })
    }
}

/// Request for a field state, before truncation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FieldSpec {
    Vacuum,
    Coherent { nbar: f64, phase: f64 },
    EvenCat { nbar: f64 },
    SqueezedVacuum { nbar: f64, beta: f64 },
}

impl FieldSpec {
    pub fn build(&self, bound: f64) -> Result<FieldState> {
        match *self {
            Self::Vacuum => Ok(FieldState::vacuum()),
            Self::Coherent { nbar, phase } => coherent(nbar, phase, bound),
            Self::EvenCat { nbar } => even_cat(nbar, bound),
            Self::SqueezedVacuum { nbar, beta } => squeezed_vacuum(nbar, beta, bound),
        }
    }
}

/// Photon-number amplitudes D(0..=n_max).
#[derive(Clone, Debug, PartialEq)]
pub struct FieldState {
    amps: Vec<C64>,
    kind: FieldKind,
    tail_mass: f64,
}

impl FieldState {
    pub fn vacuum() -> Self {
        Self {
            amps: vec![C64::new(1.0, 0.0)],
            kind: FieldKind::Vacuum,
            tail_mass: 0.0,
        }
    }

    /// Arbitrary amplitudes; `tail_mass` is whatever probability the caller
    /// knows to be missing.
    pub fn custom(amps: Vec<C64>, tail_mass: f64) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidArgument(
                "field needs at least one amplitude".into(),
            ));
        }
        let total: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (total + tail_mass - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "amplitudes carry probability {total} with tail {tail_mass}"
            )));
        }
        Ok(Self {
            amps,
            kind: FieldKind::Custom,
            tail_mass,
        })
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    /// D(n), zero beyond the stored support.
    pub fn amp(&self, n: usize) -> C64 {
        self.amps.get(n).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// Highest stored photon number.
    pub fn n_max(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(n, a)| n as f64 * a.norm_sqr())
            .sum()
    }

    /// Truncation for dynamics: the support plus [`TRUNCATION_MARGIN`].
    pub fn truncation(&self, bound: f64) -> Result<FockTruncation> {
        FockTruncation::new(self.n_max() + TRUNCATION_MARGIN, bound)
    }

    /// Same field with D(n) multiplied by e^{inθ}.
    pub fn with_phase_rotation(&self, theta: f64) -> Self {
        Self {
            amps: self
                .amps
                .iter()
                .enumerate()
                .map(|(n, a)| a * C64::from_polar(1.0, n as f64 * theta))
                .collect(),
            kind: FieldKind::Custom,
            tail_mass: self.tail_mass,
        }
    }
}

fn check_inputs(nbar: f64, bound: f64) -> Result<()> {
    if !(0.0..=MAX_NBAR).contains(&nbar) {
        return Err(Error::Domain(format!(
            "mean photon number {nbar} outside [0, {MAX_NBAR}]"
        )));
    }
    if !(bound > 0.0 && bound <= MAX_TAIL_BOUND) {
        return Err(Error::InvalidArgument(format!(
            "tail bound {bound} outside (0, {MAX_TAIL_BOUND}]"
        )));
    }
    Ok(())
}

/// Scans ln P(n) until the remaining mass is negligible, then returns the
/// smallest cut n_max with Σ_{n>n_max} P(n) < bound and that tail.
fn find_cut(ln_prob: impl Fn(usize) -> f64, nbar: f64, bound: f64) -> Result<(usize, f64)> {
    let floor = 2 * nbar.ceil() as usize + 20;
    let mut probs = Vec::new();
    loop {
        let n = probs.len();
        if n >= SCAN_LIMIT {
            return Err(Error::Domain(format!(
                "field support exceeds {SCAN_LIMIT} photons at bound {bound}"
            )));
        }
        let p = ln_prob(n).exp();
        probs.push(p);
        if n > floor && p + probs[n - 1] < bound * 1e-6 {
            break;
        }
    }
    let mut tail = 0.0;
    let mut cut = probs.len() - 1;
    // Walk down while dropping one more level keeps the tail under bound.
    while cut > 0 && tail + probs[cut] < bound {
        tail += probs[cut];
        cut -= 1;
    }
    Ok((cut, tail))
}

fn ln_factorial(n: usize) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// Coherent state D(n) = e^{−n̄/2} αⁿ/√(n!), α = √n̄ e^{iφ}.
pub fn coherent(nbar: f64, phase: f64, bound: f64) -> Result<FieldState> {
    check_inputs(nbar, bound)?;
    if nbar == 0.0 {
        return Ok(FieldState {
            kind: FieldKind::Coherent { nbar, phase },
            ..FieldState::vacuum()
        });
    }
    let ln_abs = |n: usize| -0.5 * nbar + 0.5 * n as f64 * nbar.ln() - 0.5 * ln_factorial(n);
    let (cut, tail) = find_cut(|n| 2.0 * ln_abs(n), nbar, bound)?;
    let amps = (0..=cut)
        .map(|n| C64::from_polar(ln_abs(n).exp(), n as f64 * phase))
        .collect();
    Ok(FieldState {
        amps,
        kind: FieldKind::Coherent { nbar, phase },
        tail_mass: tail,
    })
}

/// ln cosh x without overflow.
fn ln_cosh(x: f64) -> f64 {
    let x = x.abs();
    x + (-2.0 * x).exp().ln_1p() - std::f64::consts::LN_2
}

/// Solves a·tanh(a) = n̄ for a = |α|² ≥ 0.
pub fn cat_alpha_sq(nbar: f64) -> f64 {
    if nbar == 0.0 {
        return 0.0;
    }
    let mut a = nbar.max(nbar.sqrt());
    for _ in 0..100 {
        let t = a.tanh();
        let f = a * t - nbar;
        let df = t + a * (1.0 - t * t);
        let step = f / df;
        a -= step;
        if step.abs() <= 1e-16 * a {
            break;
        }
    }
    a
}

/// Even cat state D(2n) = α^{2n}/√((2n)! cosh|α|²), D(odd) = 0, real α with
/// |α|² fixed by the requested mean photon number.
pub fn even_cat(nbar: f64, bound: f64) -> Result<FieldState> {
    check_inputs(nbar, bound)?;
    let alpha_sq = cat_alpha_sq(nbar);
    let kind = FieldKind::EvenCat { nbar, alpha_sq };
    if nbar == 0.0 {
        return Ok(FieldState {
            kind,
            ..FieldState::vacuum()
        });
    }
    let ln_abs_even =
        |k: usize| k as f64 * alpha_sq.ln() - 0.5 * ln_factorial(2 * k) - 0.5 * ln_cosh(alpha_sq);
    let ln_prob = |n: usize| {
        if n % 2 == 1 {
            f64::NEG_INFINITY
        } else {
            2.0 * ln_abs_even(n / 2)
        }
    };
    let (cut, tail) = find_cut(ln_prob, nbar, bound)?;
    let amps = (0..=cut)
        .map(|n| {
            if n % 2 == 1 {
                C64::new(0.0, 0.0)
            } else {
                C64::new(ln_abs_even(n / 2).exp(), 0.0)
            }
        })
        .collect();
    Ok(FieldState {
        amps,
        kind,
        tail_mass: tail,
    })
}

/// Squeezed vacuum D(2n) = √((2n)!)/(2ⁿ n! √cosh r)·(−e^{iβ} tanh r)ⁿ,
/// D(odd) = 0, r = arcsinh √n̄.
pub fn squeezed_vacuum(nbar: f64, beta: f64, bound: f64) -> Result<FieldState> {
    check_inputs(nbar, bound)?;
    let r = nbar.sqrt().asinh();
    let kind = FieldKind::SqueezedVacuum { nbar, r, beta };
    if nbar == 0.0 {
        return Ok(FieldState {
            kind,
            ..FieldState::vacuum()
        });
    }
    let ln_tanh = r.tanh().ln();
    let ln_abs_even = |k: usize| {
        0.5 * ln_factorial(2 * k)
            - k as f64 * std::f64::consts::LN_2
            - ln_factorial(k)
            - 0.5 * ln_cosh(r)
            + k as f64 * ln_tanh
    };
    let ln_prob = |n: usize| {
        if n % 2 == 1 {
            f64::NEG_INFINITY
        } else {
            2.0 * ln_abs_even(n / 2)
        }
    };
    let (cut, tail) = find_cut(ln_prob, nbar, bound)?;
    // (−e^{iβ})ⁿ = e^{in(β+π)}.
    let amps = (0..=cut)
        .map(|n| {
            if n % 2 == 1 {
                C64::new(0.0, 0.0)
            } else {
                let k = n / 2;
                C64::from_polar(
                    ln_abs_even(k).exp(),
                    k as f64 * (beta + std::f64::consts::PI),
                )
            }
        })
        .collect();
    Ok(FieldState {
        amps,
        kind,
        tail_mass: tail,
    })
}

/// Fock truncation for dynamics: minimal support under `bound`, plus
/// [`TRUNCATION_MARGIN`] levels.
pub fn choose_truncation(spec: &FieldSpec, bound: f64) -> Result<FockTruncation> {
    if !(bound > 0.0 && bound <= MAX_TAIL_BOUND) {
        return Err(Error::InvalidArgument(format!(
            "tail bound {bound} outside (0, {MAX_TAIL_BOUND}]"
        )));
    }
    spec.build(bound)?.truncation(bound)
}
