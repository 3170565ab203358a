//! Reference values computed without the library: SI constants and the
//! textbook rectangular-barrier formula.
#![allow(dead_code)]

pub const HBAR_SI: f64 = 6.62607015e-34 / (2.0 * std::f64::consts::PI);
pub const ME_SI: f64 = 9.1093837015e-31;
pub const EV_SI: f64 = 1.602176634e-19;

/// Wave number (nm⁻¹) of a free electron with kinetic energy `e_mev`.
pub fn wave_number(e_mev: f64, mass_me: f64) -> f64 {
    (2.0 * mass_me * ME_SI * e_mev * 1e-3 * EV_SI).sqrt() / HBAR_SI * 1e-9
}

/// m v/ħ in nm⁻¹, v in m/s.
pub fn kappa(mass_me: f64, v: f64) -> f64 {
    mass_me * ME_SI * v / HBAR_SI * 1e-9
}

/// Signed qx²: positive when the barrier propagates, negative when evanescent.
pub fn qx_squared(e: f64, v0: f64, phi: f64) -> (f64, f64, f64) {
    let k = wave_number(e, 1.0);
    let (kx, ky) = (k * phi.cos(), k * phi.sin());
    (kx, ky, k * k * (e - v0) / e - ky * ky)
}

/// Textbook T and R for a rectangular barrier, branch chosen explicitly
/// (sin for a propagating barrier wave, sinh for an evanescent one).
pub fn textbook_tr(e: f64, v0: f64, d: f64, phi: f64) -> (f64, f64) {
    let (kx, _, q2) = qx_squared(e, v0, phi);
    let x = if q2 > 0.0 {
        let q = q2.sqrt();
        ((kx * kx - q2) / (2.0 * kx * q)).powi(2) * (q * d).sin().powi(2)
    } else {
        let a = (-q2).sqrt();
        ((kx * kx + a * a) / (2.0 * kx * a)).powi(2) * (a * d).sinh().powi(2)
    };
    (1.0 / (1.0 + x), x / (1.0 + x))
}
