//! Textbook transfer matrix for the 1D reduction along x, independent of the
//! Lévy-Leblond machinery.

use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::kinematics::{derive_kinematics, PhysicalScenario};
use crate::units::UnitSystem;

/// Spin-summed (T, R) for a rectangular barrier with effective energy ħ²kx²/2m.
pub fn schrodinger_transfer_matrix(scenario: &PhysicalScenario) -> Result<(f64, f64)> {
    let kin = derive_kinematics(scenario, &UnitSystem::default())?;
    Ok(transfer(kin.kx, kin.qx, scenario.width_nm))
}

/// Propagates (ψ, ψ') across the barrier with
/// [[cos qd, sin(qd)/q], [−q sin qd, cos qd]] and matches to a purely
/// outgoing wave on the far side.
pub fn transfer(kx: f64, qx: C64, d: f64) -> (f64, f64) {
    let z = qx * d;
    let (c, s) = (z.cos(), z.sin());
    let sinc = if qx == C64::new(0.0, 0.0) {
        C64::new(d, 0.0)
    } else {
        s / qx
    };
    let ik = C64::new(0.0, kx);
    let propagate = |psi: C64, dpsi: C64| (c * psi + sinc * dpsi, -qx * s * psi + c * dpsi);

    // ψ(0) = 1 + r, ψ'(0) = ikx (1 − r); beyond d only t e^{ikx x}. Writing
    // t through the Wronskian (det P = 1) avoids the cancellation between the
    // growing and decaying parts of an evanescent barrier.
    let (p0, dp0) = propagate(C64::new(1.0, 0.0), ik);
    let (p1, dp1) = propagate(C64::new(1.0, 0.0), -ik);
    let den = dp1 - ik * p1;
    let r = -(dp0 - ik * p0) / den;
    let t = -2.0 * ik / den;
    (t.norm_sqr(), r.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn no_barrier() {
        let (t, r) =
            schrodinger_transfer_matrix(&PhysicalScenario::new(50.0, 0.0, 7.0, 0.2)).unwrap();
        assert!((t - 1.0).abs() < 1e-14 && r < 1e-14);
    }

    #[test]
    fn first_resonance() {
        let base = PhysicalScenario::new(80.0, 70.0, 1.0, 0.0);
        let kin = derive_kinematics(&base, &UnitSystem::default()).unwrap();
        let d = PI / kin.qx.re;
        assert!((d - 6.132).abs() < 1e-3, "{d}");
        let (t, _) = schrodinger_transfer_matrix(&base.with_width(d)).unwrap();
        assert!((t - 1.0).abs() < 1e-10);
        let (t, _) = schrodinger_transfer_matrix(&base.with_width(6.132)).unwrap();
        assert!((t - 1.0).abs() < 1e-6);
    }

    #[test]
    fn conserves_flux_and_handles_qx_zero() {
        for qx in [C64::new(0.7, 0.0), C64::new(0.0, 1.3), C64::new(0.0, 0.0)] {
            let (t, r) = transfer(1.1, qx, 12.0);
            assert!((t + r - 1.0).abs() < 1e-13);
        }
        // Thin-film limit at qx = 0: T = 4/(4 + kx² d²).
        let (t, _) = transfer(0.5, C64::new(0.0, 0.0), 4.0);
        assert!((t - 4.0 / 8.0).abs() < 1e-14);
    }

    #[test]
    fn opaque_barrier_has_no_cancellation() {
        let (t, r) = transfer(1.0, C64::new(0.0, 2.5), 30.0);
        let expected = 16.0 * 6.25 / (1.0f64 + 6.25).powi(2) * (-150.0f64).exp();
        assert!((t / expected - 1.0).abs() < 1e-6, "{t} vs {expected}");
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs_propagate() {
        assert!(schrodinger_transfer_matrix(&PhysicalScenario::new(0.0, 1.0, 1.0, 0.0)).is_err());
        assert!(schrodinger_transfer_matrix(&PhysicalScenario::new(5.0, 5.0, 1.0, 0.0)).is_err());
    }
}
