//! Klein-Gordon fields in a one-dimensional infinite square well whose right
//! wall recedes at constant speed.
//!
//! The moving-wall problem becomes a static strip once the forward lightcone of
//! the wall's vanishing point is sliced by hyperbolae. [`coords`] holds that
//! map, [`modes`] the exact solutions it produces, [`products`] the conserved
//! Klein-Gordon scalar products and energy diagnostics, [`wavepacket`] the
//! positive-frequency Gaussian packet, and [`solver`] two independent
//! time-domain integrators (static strip and moving grid) that can be checked
//! against each other.
//!
//! Units: c = ħ = 1.

pub mod coords;
pub mod error;
pub mod field;
pub mod modes;
pub mod products;
pub mod quad;
pub mod solver;
pub mod specfun;
pub mod wavepacket;

pub use coords::{flat_to_hyp, hyp_to_flat, lambda_of_nu, wall_position, FlatPoint, HypPoint, WallConfig};
pub use error::{Error, Result};
pub use field::{ComplexField, Frame, TwoComponentField, UniformGrid};
pub use modes::{ExactSolution, MassiveMode, MasslessMode, ModeSpec};
pub use wavepacket::PacketSpec;

pub use num_complex::Complex64;
