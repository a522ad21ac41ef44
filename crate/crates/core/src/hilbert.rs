//! Operators and Hamiltonians on qubit ⊗ qubit (⊗ Fock) spaces.
//!
//! Ordering is qubit 1 ⊗ qubit 2 ⊗ field. Each qubit uses the σz basis
//! {|↑⟩, |↓⟩}; the excited level |e⟩ is |↑⟩ (index 0) and the ground level
//! |g⟩ is |↓⟩ (index 1), so σ₋|e⟩ = |g⟩. Fock operators are truncated with
//! a†|n_max⟩ = 0.

use faer::Mat;

use crate::databus::{bus_params, BusParams};
use crate::linalg::{self, hermiticity_defect, kron, CMat, I, ONE, ZERO};
use crate::params::{cos_pi, CircuitConfig, DerivedCouplings, MatchKind};
use crate::{Error, Result, C64};

/// Hermiticity tolerance for every builder output.
pub const HERMITIAN_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisTag {
    TwoQubit,
    TwoQubitFock { n_max: usize },
    QubitFock { n_max: usize },
}

impl BasisTag {
    pub fn dim(self) -> usize {
        match self {
            Self::TwoQubit => 4,
            Self::TwoQubitFock { n_max } => 4 * (n_max + 1),
            Self::QubitFock { n_max } => 2 * (n_max + 1),
        }
    }

    /// Fock dimension (1 when there is no field).
    pub fn fock_dim(self) -> usize {
        match self {
            Self::TwoQubit => 1,
            Self::TwoQubitFock { n_max } | Self::QubitFock { n_max } => n_max + 1,
        }
    }
}

/// Dense operator tagged with the basis it acts on.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    basis: BasisTag,
    entries: CMat,
}

impl OperatorMatrix {
    pub fn new(basis: BasisTag, entries: CMat) -> Result<Self> {
        let dim = basis.dim();
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Error::InvalidArgument(format!(
                "{}x{} matrix does not match {basis:?} (dim {dim})",
                entries.nrows(),
                entries.ncols()
            )));
        }
        Ok(Self { basis, entries })
    }

    fn from_parts(basis: BasisTag, entries: CMat) -> Self {
        debug_assert_eq!(entries.nrows(), basis.dim());
        Self { basis, entries }
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMat {
        &self.entries
    }

    pub fn into_entries(self) -> CMat {
        self.entries
    }

    pub fn is_hermitian(&self) -> bool {
        hermiticity_defect(&self.entries) < HERMITIAN_TOL
    }

    /// Product in the same basis.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.basis != other.basis {
            return Err(Error::InvalidArgument(format!(
                "basis mismatch: {:?} vs {:?}",
                self.basis, other.basis
            )));
        }
        Ok(Self::from_parts(self.basis, &self.entries * &other.entries))
    }
}

/// Qubit level in the σz basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    /// |e⟩ = |↑⟩, σz = +1.
    Excited,
    /// |g⟩ = |↓⟩, σz = −1.
    Ground,
}

impl Level {
    fn index(self) -> usize {
        match self {
            Self::Excited => 0,
            Self::Ground => 1,
        }
    }
}

/// Index of |q1, q2, n⟩ in a two-qubit ⊗ Fock(n_max) vector.
pub fn basis_index(q1: Level, q2: Level, n: usize, n_max: usize) -> usize {
    (q1.index() * 2 + q2.index()) * (n_max + 1) + n
}

/// Index of |q1, q2⟩ in a two-qubit vector.
pub fn qubit_index(q1: Level, q2: Level) -> usize {
    q1.index() * 2 + q2.index()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
    /// σ₊ = (σx + iσy)/2 = |↑⟩⟨↓|.
    Plus,
    /// σ₋ = (σx − iσy)/2 = |↓⟩⟨↑|.
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Qubit {
    First,
    Second,
}

/// 2×2 single-qubit matrix.
pub fn single_qubit(p: Pauli) -> CMat {
    let m = match p {
        Pauli::X => [[ZERO, ONE], [ONE, ZERO]],
        Pauli::Y => [[ZERO, -I], [I, ZERO]],
        Pauli::Z => [[ONE, ZERO], [ZERO, -ONE]],
        Pauli::Plus => [[ZERO, ONE], [ZERO, ZERO]],
        Pauli::Minus => [[ZERO, ZERO], [ONE, ZERO]],
    };
    Mat::from_fn(2, 2, |i, j| m[i][j])
}

pub fn identity(n: usize) -> CMat {
    Mat::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
}

fn embed(op: &CMat, qubit: Qubit) -> CMat {
    match qubit {
        Qubit::First => kron(op, &identity(2)),
        Qubit::Second => kron(&identity(2), op),
    }
}

/// Two-qubit embedding of a single-qubit Pauli-type operator.
pub fn pauli(which: Pauli, qubit: Qubit) -> OperatorMatrix {
    OperatorMatrix::from_parts(BasisTag::TwoQubit, embed(&single_qubit(which), qubit))
}

/// Product of one operator on each qubit.
pub fn two_qubit(first: Pauli, second: Pauli) -> CMat {
    kron(&single_qubit(first), &single_qubit(second))
}

/// Truncated annihilation operator on Fock(n_max).
pub fn annihilation(n_max: usize) -> CMat {
    Mat::from_fn(n_max + 1, n_max + 1, |i, j| {
        if j == i + 1 {
            C64::new((j as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    })
}

fn number(n_max: usize) -> CMat {
    Mat::from_fn(n_max + 1, n_max + 1, |i, j| {
        if i == j {
            C64::new(i as f64, 0.0)
        } else {
            ZERO
        }
    })
}

/// Fock-space truncation for dynamics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FockTruncation {
    pub n_max: usize,
    pub tail_bound: f64,
}

/// Largest accepted tail bound.
pub const MAX_TAIL_BOUND: f64 = 1e-3;

impl FockTruncation {
    pub fn new(n_max: usize, tail_bound: f64) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidArgument("n_max must be at least 1".into()));
        }
        if !(tail_bound > 0.0 && tail_bound <= MAX_TAIL_BOUND) {
            return Err(Error::InvalidArgument(format!(
                "tail bound {tail_bound} outside (0, {MAX_TAIL_BOUND}]"
            )));
        }
        Ok(Self { n_max, tail_bound })
    }
}

/// Time-dependent Hamiltonian consumed by the propagators.
pub trait Hamiltonian {
    fn dim(&self) -> usize;
    fn matrix_at(&self, t: f64) -> CMat;
    fn is_time_independent(&self) -> bool;
    /// Fastest angular frequency appearing explicitly in the time dependence.
    fn max_drive_frequency(&self) -> Option<f64> {
        None
    }
}

impl Hamiltonian for OperatorMatrix {
    fn dim(&self) -> usize {
        self.entries.nrows()
    }
    fn matrix_at(&self, _t: f64) -> CMat {
        self.entries.clone()
    }
    fn is_time_independent(&self) -> bool {
        true
    }
}

/// The lab-frame driven Hamiltonian
///
/// ```text
/// H(t) = Σᵢ [−Ēᵢ σxⁱ + ε₀ⁱ cos(ω_gi t) σzⁱ] − χ₁₂ σx σx
///        + [g₁₂ σx σx − Σᵢ gᵢ σxⁱ] sin(ω t)
/// ```
///
/// with the gate drive on resonance with the Ēᵢ σx splitting, ω_gi = 2Ēᵢ.
#[derive(Clone, Debug)]
pub struct LabHamiltonian {
    ebar: [f64; 2],
    eps0: [f64; 2],
    omega: f64,
    static_part: CMat,
    gate_ops: [CMat; 2],
    drive_op: CMat,
}

impl LabHamiltonian {
    pub fn new(dc: &DerivedCouplings) -> Self {
        let sx1 = embed(&single_qubit(Pauli::X), Qubit::First);
        let sx2 = embed(&single_qubit(Pauli::X), Qubit::Second);
        let xx = two_qubit(Pauli::X, Pauli::X);
        let r = |x: f64| C64::new(x, 0.0);
        let static_part = Mat::from_fn(4, 4, |i, j| {
            -r(dc.ebar_j1) * sx1[(i, j)] - r(dc.ebar_j2) * sx2[(i, j)] - r(dc.chi12) * xx[(i, j)]
        });
        let drive_op = Mat::from_fn(4, 4, |i, j| {
            r(dc.g12) * xx[(i, j)] - r(dc.g1) * sx1[(i, j)] - r(dc.g2) * sx2[(i, j)]
        });
        Self {
            ebar: [dc.ebar_j1, dc.ebar_j2],
            eps0: [dc.eps01, dc.eps02],
            omega: dc.drive_freq,
            static_part,
            gate_ops: [
                embed(&single_qubit(Pauli::Z), Qubit::First),
                embed(&single_qubit(Pauli::Z), Qubit::Second),
            ],
            drive_op,
        }
    }

    /// Replaces the variable-frequency flux frequency ω.
    pub fn with_drive_freq(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    pub fn drive_freq(&self) -> f64 {
        self.omega
    }

    /// Gate-drive frequencies ω_g1, ω_g2.
    pub fn gate_frequencies(&self) -> [f64; 2] {
        [2.0 * self.ebar[0], 2.0 * self.ebar[1]]
    }

    /// Time-independent part Σ −Ēᵢ σxⁱ − χ₁₂ σx σx.
    pub fn static_part(&self) -> &CMat {
        &self.static_part
    }

    /// Operator multiplying sin(ωt).
    pub fn drive_operator(&self) -> &CMat {
        &self.drive_op
    }

    /// exp(−i Σ Ēᵢ t σxⁱ): maps a lab-frame state into the frame rotating
    /// with the Ēᵢ σx terms, where |g⟩ and |e⟩ are σz eigenstates.
    pub fn to_rotating_frame(&self, t: f64) -> CMat {
        let rot = |ebar: f64| {
            let (s, c) = (ebar * t).sin_cos();
            Mat::from_fn(2, 2, |i, j| {
                if i == j {
                    C64::new(c, 0.0)
                } else {
                    C64::new(0.0, -s)
                }
            })
        };
        kron(&rot(self.ebar[0]), &rot(self.ebar[1]))
    }
}

impl Hamiltonian for LabHamiltonian {
    fn dim(&self) -> usize {
        4
    }

    fn matrix_at(&self, t: f64) -> CMat {
        let [wg1, wg2] = self.gate_frequencies();
        let c1 = self.eps0[0] * (wg1 * t).cos();
        let c2 = self.eps0[1] * (wg2 * t).cos();
        let s = (self.omega * t).sin();
        Mat::from_fn(4, 4, |i, j| {
            self.static_part[(i, j)]
                + self.gate_ops[0][(i, j)] * c1
                + self.gate_ops[1][(i, j)] * c2
                + self.drive_op[(i, j)] * s
        })
    }

    fn is_time_independent(&self) -> bool {
        false
    }

    fn max_drive_frequency(&self) -> Option<f64> {
        let [wg1, wg2] = self.gate_frequencies();
        Some(self.omega.abs().max(wg1.abs()).max(wg2.abs()))
    }
}

/// Lab-frame Hamiltonian at time `t`.
pub fn hamiltonian_lab(dc: &DerivedCouplings, t: f64) -> OperatorMatrix {
    OperatorMatrix::from_parts(BasisTag::TwoQubit, LabHamiltonian::new(dc).matrix_at(t))
}

/// Interaction-frame Hamiltonian switched on by a matching drive.
///
/// The co-rotating weight of sin(ωt) = (e^{iωt} − e^{−iωt})/2i is carried by
/// the coefficient G = −i g₁₂/2:
/// DoubleFlip gives G σ₋σ₋ + G* σ₊σ₊, ExchangeFlip gives G σ₊σ₋ + G* σ₋σ₊.
/// With this weight the |gg⟩ ↔ |ee⟩ rotation angle is |g₁₂| t.
pub fn hamiltonian_rwa(dc: &DerivedCouplings, kind: MatchKind) -> Result<OperatorMatrix> {
    let coupling = rwa_coupling(dc.g12);
    let (a, b) = match kind {
        MatchKind::DoubleFlip => (
            two_qubit(Pauli::Minus, Pauli::Minus),
            two_qubit(Pauli::Plus, Pauli::Plus),
        ),
        MatchKind::ExchangeFlip => (
            two_qubit(Pauli::Plus, Pauli::Minus),
            two_qubit(Pauli::Minus, Pauli::Plus),
        ),
        other => return Err(Error::UnsupportedKind(other)),
    };
    let m = Mat::from_fn(4, 4, |i, j| {
        coupling * a[(i, j)] + coupling.conj() * b[(i, j)]
    });
    Ok(OperatorMatrix::from_parts(BasisTag::TwoQubit, m))
}

/// Co-rotating coefficient −i g₁₂/2.
pub fn rwa_coupling(g12: f64) -> C64 {
    C64::new(0.0, -0.5 * g12)
}

/// H = ξ₁₂ a† σ₋σ₋ + ξ₁₂* a σ₊σ₊ on two qubits ⊗ Fock(n_max).
pub fn hamiltonian_quantized(dc: &DerivedCouplings, trunc: FockTruncation) -> OperatorMatrix {
    hamiltonian_quantized_with_coupling(dc.xi12, trunc.n_max)
}

pub fn hamiltonian_quantized_with_coupling(xi12: C64, n_max: usize) -> OperatorMatrix {
    let basis = BasisTag::TwoQubitFock { n_max };
    let dim = basis.dim();
    let mut m = Mat::<C64>::zeros(dim, dim);
    // Only |e,e,n⟩ ↔ |g,g,n+1⟩ couple; filling them directly keeps the
    // builder exactly Hermitian.
    for n in 0..n_max {
        let ee = basis_index(Level::Excited, Level::Excited, n, n_max);
        let gg = basis_index(Level::Ground, Level::Ground, n + 1, n_max);
        let amp = ((n + 1) as f64).sqrt();
        m[(gg, ee)] = xi12 * amp;
        m[(ee, gg)] = xi12.conj() * amp;
    }
    OperatorMatrix::from_parts(basis, m)
}

/// a†a + (σz⁽¹⁾ + σz⁽²⁾)/4, conserved by the quantized interaction: one
/// photon carries the excitation of both qubits.
pub fn excitation_number(n_max: usize) -> OperatorMatrix {
    let id_f = identity(n_max + 1);
    let sz = |q| kron(&embed(&single_qubit(Pauli::Z), q), &id_f);
    let (z1, z2) = (sz(Qubit::First), sz(Qubit::Second));
    let n = kron(&identity(4), &number(n_max));
    let m = Mat::from_fn(n.nrows(), n.ncols(), |i, j| {
        n[(i, j)] + (z1[(i, j)] + z2[(i, j)]) * 0.25
    });
    OperatorMatrix::from_parts(BasisTag::TwoQubitFock { n_max }, m)
}

/// Qubit part of the spin-boson model: εᵢ σzⁱ − tᵢ σxⁱ for each qubit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitSector {
    pub eps: [f64; 2],
    pub transverse: [f64; 2],
}

impl QubitSector {
    /// Qubits parked at their optimal points: the dc charge bias εᵢ vanishes,
    /// so only the Josephson term survives. The gate amplitude ε0 is an ac
    /// drive and does not enter here.
    pub fn from_config(cfg: &CircuitConfig) -> Result<Self> {
        cfg.validate()?;
        let c = cos_pi(cfg.flux_dc);
        Ok(Self {
            eps: [0.0; 2],
            transverse: [cfg.e_j1 * c, cfg.e_j2 * c],
        })
    }

    /// Level splittings 2√(εᵢ² + tᵢ²).
    pub fn splittings(&self) -> [f64; 2] {
        [0, 1].map(|i| 2.0 * self.eps[i].hypot(self.transverse[i]))
    }

    /// 4×4 qubit Hamiltonian.
    pub fn matrix(&self) -> CMat {
        let mut m = Mat::<C64>::zeros(4, 4);
        for (i, q) in [Qubit::First, Qubit::Second].into_iter().enumerate() {
            let z = embed(&single_qubit(Pauli::Z), q);
            let x = embed(&single_qubit(Pauli::X), q);
            for r in 0..4 {
                for c in 0..4 {
                    m[(r, c)] += z[(r, c)] * self.eps[i] - x[(r, c)] * self.transverse[i];
                }
            }
        }
        m
    }
}

/// Spin-boson Hamiltonian of the qubits and the quantized large junction:
/// Σᵢ[εᵢσzⁱ − E_Ji cos(πf_e)σxⁱ] + ω_p a†a + Σᵢ g_i0 σxⁱ (a† + a).
pub fn hamiltonian_spinboson(cfg: &CircuitConfig, trunc: FockTruncation) -> Result<OperatorMatrix> {
    let bus = bus_params(cfg)?;
    let sector = QubitSector::from_config(cfg)?;
    Ok(spinboson_from_parts(&sector, &bus, trunc.n_max))
}

pub fn spinboson_from_parts(sector: &QubitSector, bus: &BusParams, n_max: usize) -> OperatorMatrix {
    let id_f = identity(n_max + 1);
    let a = annihilation(n_max);
    let quad = Mat::from_fn(n_max + 1, n_max + 1, |i, j| a[(i, j)] + a[(j, i)].conj());
    let mut m = kron(&sector.matrix(), &id_f);
    let osc = kron(&identity(4), &number(n_max));
    for (i, q) in [Qubit::First, Qubit::Second].into_iter().enumerate() {
        let coupling = kron(&embed(&single_qubit(Pauli::X), q), &quad);
        let g = bus.g_bus[i];
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                m[(r, c)] += coupling[(r, c)] * g;
            }
        }
    }
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            m[(r, c)] += osc[(r, c)] * bus.omega_p;
        }
    }
    OperatorMatrix::from_parts(BasisTag::TwoQubitFock { n_max }, m)
}

/// Commutator [A, B].
pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    let ab = a * b;
    let ba = b * a;
    Mat::from_fn(ab.nrows(), ab.ncols(), |i, j| ab[(i, j)] - ba[(i, j)])
}

/// Convenience for tests and reports: largest entry of a matrix.
pub fn max_entry(m: &CMat) -> f64 {
    linalg::max_abs(m)
}
