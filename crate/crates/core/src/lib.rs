//! Simulation core for a three-node atomic quantum transistor: two atomic
//! ensembles (ME1, ME2) exchanging a single excitation through a three-level
//! gate atom by virtual photons, plus a control ensemble (ME3) that switches
//! the exchange on or off.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] – parameters, validation and the 3×3 collective Hamiltonian.
//! * [`analytic`] – closed-form amplitudes, swap times, phase laws and the
//!   SWAP(θ) family.
//! * [`microsim`] – the atom-resolved single-excitation Hamiltonian and an
//!   exact eigendecomposition propagator, used as an independent oracle.
//! * [`protocol`] – the control-SWAP pulse sequence on a 24-state register,
//!   dark/bright states and entanglement measures.
//!
//! All math is generic over the real scalar ([`Real`], implemented for `f32`
//! and `f64`). Units are ħ = 1 with dimensionless frequencies. The aliases at
//! the crate root fix the scalar to `f64`, which is what the tolerances quoted
//! in the docs assume.

pub mod analytic;
pub mod error;
pub mod microsim;
pub mod model;
pub mod num;
pub mod protocol;

pub use error::{Error, Result};
pub use num::Real;

pub use nalgebra::Complex;

/// Double-precision complex amplitude.
pub type C64 = Complex<f64>;

pub type AtomSite64 = model::AtomSite<f64>;
pub type NodeSpec64 = model::NodeSpec<f64>;
pub type SystemParams64 = model::SystemParams<f64>;
pub type EffectiveModel64 = model::EffectiveModel<f64>;
pub type AmplitudeTriple64 = analytic::AmplitudeTriple<f64>;
pub type SwapThetaConfig64 = analytic::SwapThetaConfig<f64>;
pub type StateVector64 = microsim::StateVector<f64>;
pub type QubitState64 = protocol::QubitState<f64>;
pub type RegisterState64 = protocol::RegisterState<f64>;
pub type ProtocolStep64 = protocol::ProtocolStep<f64>;
pub type ProtocolTrace64 = protocol::ProtocolTrace<f64>;
