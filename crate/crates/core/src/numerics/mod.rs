//! Grids, quadrature, interpolation, ODE integration, root finding and
//! line fits shared by the physics modules.

pub mod fit;
pub mod grid;
pub mod interp;
pub mod ode;
pub mod quadrature;
pub mod roots;

pub use fit::{fit_line, LineFit};
pub use grid::{valid_node_count, RadialGrid, SpacingKind};
pub use ode::{solve_ivp, DormandPrince, Trajectory};
pub use quadrature::{integrate_radial, integrate_radial_values, Tails};
pub use roots::find_root_bracketed;

/// Hartree atomic units: ħ = m = e = 1, lengths in Bohr, energies in Hartree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub mass: f64,
    pub charge_sq: f64,
}

pub const ATOMIC_UNITS: PhysicalConstants = PhysicalConstants {
    hbar: 1.0,
    mass: 1.0,
    charge_sq: 1.0,
};
