//! Unit conventions.
//!
//! Everything internal is expressed in meV, nm and ps. With these units the
//! wave numbers of interest are O(1) to O(10) nm⁻¹.

use serde::{Deserialize, Serialize};

/// Planck constant in J·s (exact, SI 2019).
pub const PLANCK_J_S: f64 = 6.62607015e-34;
/// Reduced Planck constant in meV·ps, h/2π from the exact SI values.
pub const HBAR_MEV_PS: f64 =
    PLANCK_J_S / (2.0 * std::f64::consts::PI) / JOULE_PER_MEV / SECOND_PER_PS;
/// Free electron mass in kg (CODATA 2018).
pub const ELECTRON_MASS_KG: f64 = 9.1093837015e-31;
/// Joules per meV (exact, SI 2019).
pub const JOULE_PER_MEV: f64 = 1.602176634e-22;

const METER_PER_NM: f64 = 1e-9;
const SECOND_PER_PS: f64 = 1e-12;

/// Physical constants and conversion factors for the meV/nm/ps system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    pub hbar: f64,
    pub joule_per_mev: f64,
    pub meter_per_nm: f64,
    /// Free electron mass in meV·ps²/nm².
    pub electron_mass: f64,
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::SI_DERIVED
    }
}

impl UnitSystem {
    pub const SI_DERIVED: UnitSystem = UnitSystem {
        hbar: HBAR_MEV_PS,
        joule_per_mev: JOULE_PER_MEV,
        meter_per_nm: METER_PER_NM,
        // kg = J s²/m²  ->  meV ps²/nm²
        electron_mass: ELECTRON_MASS_KG / JOULE_PER_MEV
            * (1.0 / (SECOND_PER_PS * SECOND_PER_PS))
            * (METER_PER_NM * METER_PER_NM),
    };

    pub fn mev_to_joule(&self, e: f64) -> f64 {
        e * self.joule_per_mev
    }

    pub fn joule_to_mev(&self, e: f64) -> f64 {
        e / self.joule_per_mev
    }

    pub fn nm_to_m(&self, x: f64) -> f64 {
        x * self.meter_per_nm
    }

    pub fn m_to_nm(&self, x: f64) -> f64 {
        x / self.meter_per_nm
    }

    /// m/s to nm/ps.
    pub fn velocity_to_internal(&self, v: f64) -> f64 {
        v * SECOND_PER_PS / self.meter_per_nm
    }

    pub fn velocity_from_internal(&self, v: f64) -> f64 {
        v * self.meter_per_nm / SECOND_PER_PS
    }

    /// Mass in meV·ps²/nm² for a multiple of the free electron mass.
    pub fn mass(&self, mass_me: f64) -> f64 {
        mass_me * self.electron_mass
    }

    /// Wave number (nm⁻¹) of a free particle with kinetic energy `energy` (meV).
    pub fn wave_number(&self, energy: f64, mass_me: f64) -> f64 {
        (2.0 * self.mass(mass_me) * energy).sqrt() / self.hbar
    }

    /// ħ²k²/2m in meV for a (possibly complex-squared) wave number squared.
    pub fn kinetic_energy(&self, k_squared: f64, mass_me: f64) -> f64 {
        self.hbar * self.hbar * k_squared / (2.0 * self.mass(mass_me))
    }

    /// κ = m v/ħ in nm⁻¹, the wave number that stands in for every "m v" product.
    pub fn kappa(&self, mass_me: f64, fermi_velocity: f64) -> f64 {
        self.mass(mass_me) * self.velocity_to_internal(fermi_velocity) / self.hbar
    }

    /// ħv in meV·nm, converting a wave number into the energy scale of the LLE.
    pub fn hbar_v(&self, fermi_velocity: f64) -> f64 {
        self.hbar * self.velocity_to_internal(fermi_velocity)
    }
}
