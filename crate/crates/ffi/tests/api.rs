use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use qubitflux_ffi::*;

fn last_error() -> String {
    let p = qf_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn config_roundtrip_and_couplings() {
    unsafe {
        let mut cfg: *mut QfConfig = ptr::null_mut();
        assert_eq!(qf_config_default(&mut cfg), QfStatus::Ok);
        let key = CString::new("flux_dc").unwrap();
        assert_eq!(qf_config_set(cfg, key.as_ptr(), 0.5), QfStatus::Ok);
        let mut v = 0.0;
        assert_eq!(qf_config_get(cfg, key.as_ptr(), &mut v), QfStatus::Ok);
        assert_eq!(v, 0.5);

        let mut c = QfCouplings::default();
        assert_eq!(qf_derive_couplings(cfg, &mut c), QfStatus::Ok);
        assert_eq!(c.g12, 0.0);
        assert_eq!(c.xi12_re, 0.0);
        assert!((c.chi12 - 0.0025).abs() < 1e-15);

        let mut kind = QfMatchKind::Decoupled;
        assert_eq!(
            qf_classify_drive(cfg, c.omega1 + c.omega2, 0.01, &mut kind),
            QfStatus::Ok
        );
        assert_eq!(kind, QfMatchKind::DoubleFlip);
        qf_config_free(cfg);
    }
}

#[test]
fn rejected_set_leaves_config_untouched() {
    unsafe {
        let mut cfg: *mut QfConfig = ptr::null_mut();
        qf_config_default(&mut cfg);
        let key = CString::new("e_j1").unwrap();
        let mut before = 0.0;
        qf_config_get(cfg, key.as_ptr(), &mut before);
        assert_ne!(qf_config_set(cfg, key.as_ptr(), -1.0), QfStatus::Ok);
        let mut after = 0.0;
        qf_config_get(cfg, key.as_ptr(), &mut after);
        assert_eq!(before, after);

        let bogus = CString::new("nope").unwrap();
        assert_eq!(
            qf_config_get(cfg, bogus.as_ptr(), &mut after),
            QfStatus::InvalidArgument
        );
        assert!(last_error().contains("nope"));
        qf_config_free(cfg);
    }
}

#[test]
fn null_and_missing_inputs() {
    unsafe {
        assert_eq!(qf_config_default(ptr::null_mut()), QfStatus::NullPointer);
        assert!(last_error().contains("out"));
        let mut cfg: *mut QfConfig = ptr::null_mut();
        let path = CString::new("/definitely/not/here.cfg").unwrap();
        assert_eq!(
            qf_config_from_file(path.as_ptr(), &mut cfg),
            QfStatus::Config
        );
        assert!(cfg.is_null());
        qf_config_free(ptr::null_mut());
        qf_field_free(ptr::null_mut());
    }
}

#[test]
fn field_probabilities_and_kappa() {
    unsafe {
        let mut f: *mut QfField = ptr::null_mut();
        assert_eq!(qf_field_even_cat(7.0, 1e-10, &mut f), QfStatus::Ok);
        let mut len = 0usize;
        qf_field_len(f, &mut len);
        let mut small = vec![0.0; len - 1];
        assert_eq!(
            qf_field_probabilities(f, small.as_mut_ptr(), small.len()),
            QfStatus::BufferTooSmall
        );
        let mut p = vec![0.0; len];
        assert_eq!(qf_field_probabilities(f, p.as_mut_ptr(), len), QfStatus::Ok);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        assert!(p.iter().skip(1).step_by(2).all(|&x| x == 0.0));

        // Ground-state qubits with an even field: κ stays at 1.
        let taus = [0.0, 1.0, 7.5, 30.0];
        let mut k = [0.0; 4];
        assert_eq!(
            qf_kappa_trace(f, 0.0, 0.0, taus.as_ptr(), 4, k.as_mut_ptr()),
            QfStatus::Ok
        );
        assert!(k.iter().all(|&x| (x - 1.0).abs() < 1e-12));
        qf_field_free(f);

        let mut bad: *mut QfField = ptr::null_mut();
        assert_eq!(
            qf_field_coherent(-1.0, 0.0, 1e-10, &mut bad),
            QfStatus::Domain
        );
        assert!(bad.is_null());

        let mut kc = 0.0;
        assert_eq!(
            qf_kappa_classical(std::f64::consts::FRAC_PI_4, 0.0, 0.0, &mut kc),
            QfStatus::Ok
        );
        assert!((kc - 2.0).abs() < 1e-15);
        assert_eq!(
            qf_kappa_classical(3.0, 0.0, 0.0, &mut kc),
            QfStatus::InvalidArgument
        );
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(qf_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/qubitflux.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "qf_config_default",
        "qf_derive_couplings",
        "qf_kappa_trace",
        "QF_STATUS_OK",
        "QfCouplings",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", "-std=c99"])
        .arg(&header)
        .status()
    else {
        eprintln!("no C compiler; skipped syntax check");
        return;
    };
    assert!(status.success());
}
