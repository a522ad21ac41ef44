//! Raw circuit parameters and their flat `key = value` file format.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use crate::{Error, Result};

/// Raw circuit parameters, all energies in one common unit (ħ = 1).
#[derive(Clone, Debug, PartialEq)]
pub struct CircuitConfig {
    /// Qubit Josephson energies E_J1, E_J2.
    pub e_j1: f64,
    pub e_j2: f64,
    /// Large-junction Josephson energy E_J0.
    pub e_j0: f64,
    /// Large-junction charging energy E_c0 (only the data bus uses it).
    pub e_c0: f64,
    /// Qubit charging energies E_c1, E_c2.
    pub e_c1: f64,
    pub e_c2: f64,
    /// Gate voltage factors C_i V_gi / 2e.
    pub cap_ratio1: f64,
    pub cap_ratio2: f64,
    /// Static flux Φ_e/Φ₀.
    pub flux_dc: f64,
    /// Variable-frequency flux amplitude Φ_c/Φ₀.
    pub flux_ac_amp: f64,
    /// Quantized flux amplitude |Φ_q|/Φ₀.
    pub flux_q_amp: f64,
    /// Phase of Φ_q in radians.
    pub flux_q_phase: f64,
    /// Angular frequency ω of the variable-frequency flux.
    pub drive_freq: f64,
}

/// Every key accepted in a config file, in canonical order.
pub const CONFIG_KEYS: [&str; 13] = [
    "e_j1",
    "e_j2",
    "e_j0",
    "e_c0",
    "e_c1",
    "e_c2",
    "cap_ratio1",
    "cap_ratio2",
    "flux_dc",
    "flux_ac_amp",
    "flux_q_amp",
    "flux_q_phase",
    "drive_freq",
];

impl Default for CircuitConfig {
    fn default() -> Self {
        Self::demo()
    }
}

impl CircuitConfig {
    /// Demonstration circuit in units of E_J0: η = 0.05 for both qubits,
    /// E_c0 = E_J0/50, f_e = 0.25, φ_c = 0.3, and gate offsets chosen so the
    /// detuning is 20 χ₁₂. The drive sits on the double-flip resonance.
    pub fn demo() -> Self {
        Self {
            e_j1: 0.05,
            e_j2: 0.05,
            e_j0: 1.0,
            e_c0: 0.02,
            e_c1: 0.5,
            e_c2: 0.5,
            cap_ratio1: 0.1,
            cap_ratio2: 0.15,
            flux_dc: 0.25,
            flux_ac_amp: 0.3 / (2.0 * PI),
            flux_q_amp: 0.01,
            flux_q_phase: 0.0,
            drive_freq: 0.125,
        }
    }

    /// φ_c = 2π Φ_c/Φ₀.
    pub fn phi_c(&self) -> f64 {
        2.0 * PI * self.flux_ac_amp
    }

    pub fn validate(&self) -> Result<()> {
        for key in CONFIG_KEYS {
            let v = self.get(key).expect("known key");
            if !v.is_finite() {
                return Err(Error::Config(format!("{key} = {v} is not finite")));
            }
        }
        let energies = [
            ("e_j1", self.e_j1),
            ("e_j2", self.e_j2),
            ("e_j0", self.e_j0),
            ("e_c0", self.e_c0),
            ("e_c1", self.e_c1),
            ("e_c2", self.e_c2),
        ];
        for (key, v) in energies {
            if v <= 0.0 {
                return Err(Error::Config(format!(
                    "{key} = {v} must be strictly positive"
                )));
            }
        }
        if self.e_j1 >= self.e_j0 || self.e_j2 >= self.e_j0 {
            return Err(Error::Config(format!(
                "qubit Josephson energies ({}, {}) must be below e_j0 = {} (eta < 1)",
                self.e_j1, self.e_j2, self.e_j0
            )));
        }
        if self.flux_q_amp < 0.0 {
            return Err(Error::Config(
                "flux_q_amp is a magnitude and must be >= 0".into(),
            ));
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        Some(match key {
            "e_j1" => self.e_j1,
            "e_j2" => self.e_j2,
            "e_j0" => self.e_j0,
            "e_c0" => self.e_c0,
            "e_c1" => self.e_c1,
            "e_c2" => self.e_c2,
            "cap_ratio1" => self.cap_ratio1,
            "cap_ratio2" => self.cap_ratio2,
            "flux_dc" => self.flux_dc,
            "flux_ac_amp" => self.flux_ac_amp,
            "flux_q_amp" => self.flux_q_amp,
            "flux_q_phase" => self.flux_q_phase,
            "drive_freq" => self.drive_freq,
            _ => return None,
        })
    }

    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let slot = match key {
            "e_j1" => &mut self.e_j1,
            "e_j2" => &mut self.e_j2,
            "e_j0" => &mut self.e_j0,
            "e_c0" => &mut self.e_c0,
            "e_c1" => &mut self.e_c1,
            "e_c2" => &mut self.e_c2,
            "cap_ratio1" => &mut self.cap_ratio1,
            "cap_ratio2" => &mut self.cap_ratio2,
            "flux_dc" => &mut self.flux_dc,
            "flux_ac_amp" => &mut self.flux_ac_amp,
            "flux_q_amp" => &mut self.flux_q_amp,
            "flux_q_phase" => &mut self.flux_q_phase,
            "drive_freq" => &mut self.drive_freq,
            _ => return Err(Error::Config(format!("unknown config key `{key}`"))),
        };
        *slot = value;
        Ok(())
    }

    /// Parses `key = value` lines over the demo defaults. `#` starts a
    /// comment; blank lines are ignored; unknown or repeated keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::demo();
        let mut seen = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let key = key.trim();
            let value: f64 = value.trim().parse().map_err(|_| {
                Error::Config(format!(
                    "line {}: `{}` is not a number",
                    lineno + 1,
                    value.trim()
                ))
            })?;
            if seen.contains(&key) {
                return Err(Error::Config(format!(
                    "line {}: duplicate key `{key}`",
                    lineno + 1
                )));
            }
            cfg.set(key, value)
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
            seen.push(key);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Renders every key in canonical order; `parse` reads it back exactly.
    pub fn to_kv_string(&self) -> String {
        let mut out = String::new();
        for key in CONFIG_KEYS {
            let _ = writeln!(out, "{key} = {:?}", self.get(key).expect("known key"));
        }
        out
    }
}
