//! Optical Bloch equations for a single velocity class.
//!
//! [`build_hamiltonian`] and [`build_dissipator`] assemble the two halves of
//! the master equation
//!
//! ```text
//! dσ/dt = −i[H, σ] + D(σ)
//! ```
//!
//! and [`steady_state`] finds the unique trace-one σ annihilated by it.

mod density;
mod dissipator;
mod drive;
mod hamiltonian;
mod scheme;
mod steady;

use nalgebra::Matrix4;
use num_complex::Complex64;

pub use density::{DensityMatrix, InvariantReport};
pub use dissipator::{build_dissipator, Dissipator, PopulationFlow};
pub use drive::{DriveSet, Field, Propagation};
pub use hamiltonian::{build_hamiltonian, DiagonalConvention};
pub use scheme::{LevelScheme, TransitModel};
pub use steady::{master_equation_rhs, probe_absorption, relaxation_scale, residual, steady_state};

/// A 4×4 complex operator on the level basis, in rad/s for Hamiltonians.
pub type Operator = Matrix4<Complex64>;

/// One of the four atomic levels, numbered as kets `|1⟩..|4⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    One,
    Two,
    Three,
    Four,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::One, Level::Two, Level::Three, Level::Four];

    /// Zero-based matrix index.
    pub fn index(self) -> usize {
        self as usize
    }

    /// The ket number, 1 to 4.
    pub fn ket(self) -> usize {
        self.index() + 1
    }

    pub fn from_ket(ket: usize) -> Option<Level> {
        Level::ALL.get(ket.checked_sub(1)?).copied()
    }
}
