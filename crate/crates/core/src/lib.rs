//! Spin-resolved tunneling of non-relativistic electrons through a 2D
//! rectangular barrier, described by the Lévy-Leblond equation.
//!
//! Three independent routes to the transmission and reflection coefficients
//! are provided and cross-checked: closed-form expressions ([`closed_form`]),
//! a direct solve of the interface matching conditions ([`matcher`]), and the
//! textbook Schrödinger transfer matrix ([`schrodinger`]).
//!
//! ```
//! use tunnel_core::{closed_form, PhysicalScenario};
//!
//! let s = PhysicalScenario::new(80.0, 70.0, 10.0, 0.3);
//! let c = closed_form::coeffs_for(&s, tunnel_core::RepTag::FourRepA).unwrap();
//! assert!((c.t1 + c.t2 + c.r1 + c.r2 - 1.0).abs() < 1e-12);
//! ```

pub mod clifford;
pub mod closed_form;
pub mod error;
pub mod kinematics;
pub mod matcher;
pub mod matrix;
pub mod output;
pub mod schrodinger;
pub mod spinor;
pub mod sweep;
pub mod units;
pub mod validate;

pub use clifford::{build_rep, hamiltonian_spectrum, verify_algebra, MatrixRep, RepTag};
pub use error::{Result, TunnelError};
pub use kinematics::{derive_kinematics, Kinematics, PhysicalScenario, Regime};
pub use matcher::{
    assemble_system, solve_amplitudes, Model, ScatterAmplitudes, ScatterCoefficients,
};
pub use matrix::ComplexMatrix;
pub use spinor::{SpinLabel, Spinor};
pub use sweep::{run_sweep, Engine, SweepResult, SweepSpec, SweepVariable};
pub use units::UnitSystem;

/// Crate version recorded in output metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
