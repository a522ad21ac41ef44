//! C interface to `qubitflux`.
//!
//! Every entry point returns a [`QfStatus`]; results go through out-pointers.
//! On failure a message is kept per thread and can be read back with
//! [`qf_last_error`]. Handles are opaque and must be released with their
//! `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qubitflux::dynamics::{kappa_c, QubitInitial};
use qubitflux::observables::KappaTrace;
use qubitflux::params::{
    classify_drive, derive_couplings, CircuitConfig, DerivedCouplings, MatchKind,
};
use qubitflux::photon_states::{coherent, even_cat, squeezed_vacuum, FieldState};
use qubitflux::Error;

/// Result code of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Config = 4,
    Invariant = 5,
    Io = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QfMatchKind {
    DoubleFlip = 0,
    ExchangeFlip = 1,
    SingleQubit1 = 2,
    SingleQubit2 = 3,
    Decoupled = 4,
}

impl From<MatchKind> for QfMatchKind {
    fn from(k: MatchKind) -> Self {
        match k {
            MatchKind::DoubleFlip => Self::DoubleFlip,
            MatchKind::ExchangeFlip => Self::ExchangeFlip,
            MatchKind::SingleQubit1 => Self::SingleQubit1,
            MatchKind::SingleQubit2 => Self::SingleQubit2,
            MatchKind::Decoupled => Self::Decoupled,
        }
    }
}

/// Derived circuit constants, energies in units of E_J0.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QfCouplings {
    pub eta1: f64,
    pub eta2: f64,
    pub ebar_j1: f64,
    pub ebar_j2: f64,
    pub chi12: f64,
    pub eps01: f64,
    pub eps02: f64,
    pub detuning: f64,
    pub chi_prime: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub g1: f64,
    pub g2: f64,
    pub g12: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub xi12_re: f64,
    pub xi12_im: f64,
    pub drive_freq: f64,
    pub zero_detuning: bool,
    pub weak_detuning: bool,
}

impl From<&DerivedCouplings> for QfCouplings {
    fn from(d: &DerivedCouplings) -> Self {
        Self {
            eta1: d.eta1,
            eta2: d.eta2,
            ebar_j1: d.ebar_j1,
            ebar_j2: d.ebar_j2,
            chi12: d.chi12,
            eps01: d.eps01,
            eps02: d.eps02,
            detuning: d.detuning,
            chi_prime: d.chi_prime,
            omega1: d.omega1,
            omega2: d.omega2,
            g1: d.g1,
            g2: d.g2,
            g12: d.g12,
            xi1: d.xi1,
            xi2: d.xi2,
            xi12_re: d.xi12.re,
            xi12_im: d.xi12.im,
            drive_freq: d.drive_freq,
            zero_detuning: d.flags.zero_detuning,
            weak_detuning: d.flags.weak_detuning,
        }
    }
}

/// Circuit configuration handle.
pub struct QfConfig(CircuitConfig);

/// Photon-number amplitudes of a field state.
pub struct QfField(FieldState);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Fail(QfStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_) | Error::UnsupportedKind(_) => QfStatus::InvalidArgument,
            Error::Domain(_) => QfStatus::Domain,
            Error::Config(_) => QfStatus::Config,
            Error::Invariant(_) => QfStatus::Invariant,
            Error::Io(_) => QfStatus::Io,
        };
        Fail(code, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(QfStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> QfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QfStatus::Ok,
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("panic inside qubitflux".into());
            QfStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(QfStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version, static string.
#[no_mangle]
pub extern "C" fn qf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Built-in demonstration circuit.
///
/// # Safety
/// `out` must be a valid pointer to write a handle into.
#[no_mangle]
pub unsafe extern "C" fn qf_config_default(out: *mut *mut QfConfig) -> QfStatus {
    guard(|| {
        *out_arg(out, "out")? = Box::into_raw(Box::new(QfConfig(CircuitConfig::demo())));
        Ok(())
    })
}

/// Reads a `key = value` config file. Unset keys keep their demo values.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qf_config_from_file(
    path: *const c_char,
    out: *mut *mut QfConfig,
) -> QfStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let out = out_arg(out, "out")?;
        *out = Box::into_raw(Box::new(QfConfig(CircuitConfig::from_file(path)?)));
        Ok(())
    })
}

/// # Safety
/// `cfg` must come from this library and `key` be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn qf_config_set(
    cfg: *mut QfConfig,
    key: *const c_char,
    value: f64,
) -> QfStatus {
    guard(|| {
        let cfg = out_arg(cfg, "cfg")?;
        let key = str_arg(key, "key")?;
        let mut next = cfg.0.clone();
        next.set(key, value)?;
        next.validate()?;
        cfg.0 = next;
        Ok(())
    })
}

/// # Safety
/// `cfg` must come from this library, `key` be NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qf_config_get(
    cfg: *const QfConfig,
    key: *const c_char,
    out: *mut f64,
) -> QfStatus {
    guard(|| {
        let cfg = cfg.as_ref().ok_or_else(|| null("cfg"))?;
        let key = str_arg(key, "key")?;
        let out = out_arg(out, "out")?;
        *out = cfg.0.get(key).ok_or_else(|| {
            Fail(
                QfStatus::InvalidArgument,
                format!("unknown config key '{key}'"),
            )
        })?;
        Ok(())
    })
}

/// # Safety
/// `cfg` must come from this library or be null. Frees it.
#[no_mangle]
pub unsafe extern "C" fn qf_config_free(cfg: *mut QfConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// # Safety
/// `cfg` must come from this library and `out` be valid.
#[no_mangle]
pub unsafe extern "C" fn qf_derive_couplings(
    cfg: *const QfConfig,
    out: *mut QfCouplings,
) -> QfStatus {
    guard(|| {
        let cfg = cfg.as_ref().ok_or_else(|| null("cfg"))?;
        let out = out_arg(out, "out")?;
        *out = QfCouplings::from(&derive_couplings(&cfg.0)?);
        Ok(())
    })
}

/// Which resonance a drive at `omega` hits, within relative tolerance `tol`.
///
/// # Safety
/// `cfg` must come from this library and `out` be valid.
#[no_mangle]
pub unsafe extern "C" fn qf_classify_drive(
    cfg: *const QfConfig,
    omega: f64,
    tol: f64,
    out: *mut QfMatchKind,
) -> QfStatus {
    guard(|| {
        let cfg = cfg.as_ref().ok_or_else(|| null("cfg"))?;
        let out = out_arg(out, "out")?;
        *out = classify_drive(omega, &derive_couplings(&cfg.0)?, tol)?.into();
        Ok(())
    })
}

unsafe fn new_field(
    out: *mut *mut QfField,
    build: impl FnOnce() -> qubitflux::Result<FieldState>,
) -> QfStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = Box::into_raw(Box::new(QfField(build()?)));
        Ok(())
    })
}

/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qf_field_vacuum(out: *mut *mut QfField) -> QfStatus {
    new_field(out, || Ok(FieldState::vacuum()))
}

/// Coherent state with mean photon number `nbar` and phase `phase`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qf_field_coherent(
    nbar: f64,
    phase: f64,
    tail_bound: f64,
    out: *mut *mut QfField,
) -> QfStatus {
    new_field(out, || coherent(nbar, phase, tail_bound))
}

/// Even superposition of |α⟩ and |−α⟩ with mean photon number `nbar`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qf_field_even_cat(
    nbar: f64,
    tail_bound: f64,
    out: *mut *mut QfField,
) -> QfStatus {
    new_field(out, || even_cat(nbar, tail_bound))
}

/// Squeezed vacuum with mean photon number `nbar` and squeezing angle `beta`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qf_field_squeezed_vacuum(
    nbar: f64,
    beta: f64,
    tail_bound: f64,
    out: *mut *mut QfField,
) -> QfStatus {
    new_field(out, || squeezed_vacuum(nbar, beta, tail_bound))
}

/// Number of stored amplitudes (n_max + 1).
///
/// # Safety
/// `field` must come from this library and `out` be valid.
#[no_mangle]
pub unsafe extern "C" fn qf_field_len(field: *const QfField, out: *mut usize) -> QfStatus {
    guard(|| {
        let field = field.as_ref().ok_or_else(|| null("field"))?;
        *out_arg(out, "out")? = field.0.amps().len();
        Ok(())
    })
}

/// Copies P(n) into `buf`. Fails with `BufferTooSmall` when `cap` is less
/// than [`qf_field_len`].
///
/// # Safety
/// `buf` must hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn qf_field_probabilities(
    field: *const QfField,
    buf: *mut f64,
    cap: usize,
) -> QfStatus {
    guard(|| {
        let field = field.as_ref().ok_or_else(|| null("field"))?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let p = field.0.probabilities();
        if cap < p.len() {
            return Err(Fail(
                QfStatus::BufferTooSmall,
                format!("need {} entries, got {cap}", p.len()),
            ));
        }
        ptr::copy_nonoverlapping(p.as_ptr(), buf, p.len());
        Ok(())
    })
}

/// # Safety
/// `field` must come from this library or be null. Frees it.
#[no_mangle]
pub unsafe extern "C" fn qf_field_free(field: *mut QfField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// κ(τ) for qubits starting in cos θ|gg⟩ + e^{iφ} sin θ|ee⟩ and the given
/// quantized field, written to `out[i]` for each `taus[i]`.
///
/// # Safety
/// `taus` and `out` must each hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn qf_kappa_trace(
    field: *const QfField,
    theta: f64,
    phi: f64,
    taus: *const f64,
    n: usize,
    out: *mut f64,
) -> QfStatus {
    guard(|| {
        let field = field.as_ref().ok_or_else(|| null("field"))?;
        if n > 0 && (taus.is_null() || out.is_null()) {
            return Err(null("taus or out"));
        }
        if n == 0 {
            return Ok(());
        }
        let init = QubitInitial::new(theta, phi)?;
        let taus = std::slice::from_raw_parts(taus, n);
        let trace = KappaTrace::quantized(&init, &field.0, taus)?;
        ptr::copy_nonoverlapping(trace.kappa.as_ptr(), out, n);
        Ok(())
    })
}

/// κ under a classical drive.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qf_kappa_classical(
    theta: f64,
    phi: f64,
    tau: f64,
    out: *mut f64,
) -> QfStatus {
    guard(|| {
        let init = QubitInitial::new(theta, phi)?;
        *out_arg(out, "out")? = kappa_c(&init, tau);
        Ok(())
    })
}
