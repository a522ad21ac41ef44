//! Two charge qubits coupled through a shared large Josephson junction.
//!
//! The crate covers the circuit's effective couplings ([`params`]), the
//! operators and Hamiltonians over qubit/Fock tensor spaces ([`hilbert`]),
//! quantized field states ([`photon_states`]), closed-form and brute-force
//! dynamics ([`dynamics`]), the supercurrent readout observable
//! ([`observables`]) and the quantized-junction data bus ([`databus`]).
//!
//! Units: ħ = 1, energies are angular frequencies (by default in units of the
//! large-junction Josephson energy), fluxes are fractions of Φ₀ and currents
//! enter only through the ratios η = E_J/E_J0.

pub mod cli;
pub mod databus;
pub mod dynamics;
mod error;
pub mod hilbert;
pub mod linalg;
pub mod observables;
pub mod params;
pub mod photon_states;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
