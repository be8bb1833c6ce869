//! Simulation of an internally coupled single-qubit quantum Otto cycle.
//!
//! The working medium is a qubit whose ground and excited levels are linked
//! by an internal coupling `g`, so the cycle Hamiltonian is
//! `H = [[0, g], [g, omega]]` per stroke. The crate computes the three
//! limit-cycle families of the machine —
//!
//! * **GSLC** (Gibbs-state limit cycle): instantaneous thermalization,
//!   closed-form heat and work;
//! * **ELC** (equilibrating limit cycle): infinite-duration isochoric
//!   strokes reaching the global GKSL stationary state;
//! * **NELC** (non-equilibrating limit cycle): finite-duration strokes,
//!   solved from the stroboscopic one-cycle map;
//!
//! — along with energy flows, engine/refrigerator classification,
//! efficiency, COP, power, and batch parameter sweeps with CSV/JSON/SVG
//! output (see the `otto` binary).

pub mod error;
pub mod gslc;
pub mod limit_cycle;
pub mod linalg;
pub mod lindblad;
pub mod qubit;
pub mod sweep;
pub mod svg;
pub mod thermo;

pub use error::{OttoError, Result};
