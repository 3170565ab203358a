//! Scenario definition and the wave-vector bookkeeping shared by every solver.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TunnelError};
use crate::units::UnitSystem;

/// Absolute tolerance (meV) within which E = V0 is treated as the resonant edge.
pub const RESONANT_EDGE_TOL_MEV: f64 = 1e-12;

pub const DEFAULT_MASS_ME: f64 = 1.0;
pub const DEFAULT_FERMI_VELOCITY: f64 = 1e6;

/// One tunneling experiment: an electron of energy E incident at angle φ on a
/// barrier of height V0 and width d.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalScenario {
    /// Incident energy E (meV).
    pub energy_mev: f64,
    /// Barrier height V0 (meV).
    pub barrier_mev: f64,
    /// Barrier width d (nm).
    pub width_nm: f64,
    /// Incidence angle φ (rad), measured from the barrier normal.
    pub angle_rad: f64,
    /// Particle mass in units of the free electron mass.
    pub mass_me: f64,
    /// Fermi velocity v (m/s).
    pub fermi_velocity: f64,
}

impl PhysicalScenario {
    /// Scenario with the default free-electron mass and v = 10⁶ m/s.
    pub fn new(energy_mev: f64, barrier_mev: f64, width_nm: f64, angle_rad: f64) -> Self {
        Self {
            energy_mev,
            barrier_mev,
            width_nm,
            angle_rad,
            mass_me: DEFAULT_MASS_ME,
            fermi_velocity: DEFAULT_FERMI_VELOCITY,
        }
    }

    pub fn with_mass(mut self, mass_me: f64) -> Self {
        self.mass_me = mass_me;
        self
    }

    pub fn with_fermi_velocity(mut self, v: f64) -> Self {
        self.fermi_velocity = v;
        self
    }

    pub fn with_angle(mut self, angle_rad: f64) -> Self {
        self.angle_rad = angle_rad;
        self
    }

    pub fn with_width(mut self, width_nm: f64) -> Self {
        self.width_nm = width_nm;
        self
    }

    pub fn with_energy(mut self, energy_mev: f64) -> Self {
        self.energy_mev = energy_mev;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.energy_mev,
            self.barrier_mev,
            self.width_nm,
            self.angle_rad,
            self.mass_me,
            self.fermi_velocity,
        ];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(TunnelError::InvalidScenario(format!(
                "non-finite parameter in {self:?}"
            )));
        }
        if self.energy_mev == 0.0 {
            return Err(TunnelError::DegenerateEnergy);
        }
        if self.energy_mev < 0.0 {
            return Err(TunnelError::InvalidScenario(format!(
                "energy must be positive, got {} meV",
                self.energy_mev
            )));
        }
        if self.width_nm <= 0.0 {
            return Err(TunnelError::InvalidScenario(format!(
                "barrier width must be positive, got {} nm",
                self.width_nm
            )));
        }
        if self.mass_me <= 0.0 || self.fermi_velocity <= 0.0 {
            return Err(TunnelError::InvalidScenario(
                "mass and Fermi velocity must be positive".into(),
            ));
        }
        if self.angle_rad.abs() >= FRAC_PI_2 {
            return Err(TunnelError::InvalidScenario(format!(
                "incidence angle must satisfy |phi| < pi/2, got {}",
                self.angle_rad
            )));
        }
        Ok(())
    }

    /// κ = m v/ħ (nm⁻¹).
    pub fn kappa(&self, units: &UnitSystem) -> f64 {
        units.kappa(self.mass_me, self.fermi_velocity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// E > V0 and qx real: the wave propagates through the barrier.
    Propagating,
    /// E < V0: qx is imaginary for every angle.
    Evanescent,
    /// E > V0 but the incidence angle exceeds the critical angle.
    TotalInternal,
}

/// Wave-vector components for a scenario. `q`, `qx` and `theta` are complex so
/// that the evanescent and total-internal-reflection cases are handled by
/// analytic continuation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub k: f64,
    pub kx: f64,
    pub ky: f64,
    pub q: Complex64,
    pub qx: Complex64,
    pub theta: Complex64,
    pub regime: Regime,
}

impl Kinematics {
    /// q² = k²(E − V0)/E, real by construction.
    pub fn q_squared(&self) -> f64 {
        (self.q * self.q).re
    }
}

/// Square root of a real number on the branch with Im ≥ 0.
fn sqrt_upper(x: f64) -> Complex64 {
    if x >= 0.0 {
        Complex64::new(x.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-x).sqrt())
    }
}

pub fn derive_kinematics(scenario: &PhysicalScenario, units: &UnitSystem) -> Result<Kinematics> {
    scenario.validate()?;
    let e = scenario.energy_mev;
    let v0 = scenario.barrier_mev;
    if (e - v0).abs() < RESONANT_EDGE_TOL_MEV {
        return Err(TunnelError::ResonantEdge {
            energy: e,
            barrier: v0,
        });
    }

    let k = units.wave_number(e, scenario.mass_me);
    let (sin_phi, cos_phi) = scenario.angle_rad.sin_cos();
    let kx = k * cos_phi;
    let ky = k * sin_phi;

    let ratio = (e - v0) / e;
    let q = k * sqrt_upper(ratio);
    let q_sq = k * k * ratio;
    let qx = sqrt_upper(q_sq - ky * ky);
    let theta = (ky / q).asin();

    let regime = if e < v0 {
        Regime::Evanescent
    } else if ky.abs() > q.norm() {
        Regime::TotalInternal
    } else {
        Regime::Propagating
    };

    Ok(Kinematics {
        k,
        kx,
        ky,
        q,
        qx,
        theta,
        regime,
    })
}

/// Critical angle arcsin(√((E − V0)/E)) beyond which a propagating wave is
/// totally reflected. `None` when there is no barrier (V0 ≤ 0) or the barrier
/// is above the incident energy.
pub fn critical_angle(scenario: &PhysicalScenario) -> Option<f64> {
    let e = scenario.energy_mev;
    let v0 = scenario.barrier_mev;
    if v0 <= 0.0 || e <= v0 {
        return None;
    }
    Some(((e - v0) / e).sqrt().asin())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kin(e: f64, v0: f64, phi: f64) -> Kinematics {
        derive_kinematics(
            &PhysicalScenario::new(e, v0, 10.0, phi),
            &UnitSystem::default(),
        )
        .unwrap()
    }

    #[test]
    fn reference_scenario() {
        let k = kin(80.0, 70.0, 0.0);
        assert!((k.k - 1.4491).abs() < 1e-4, "{}", k.k);
        assert!((k.q.re / k.k - 0.353_553).abs() < 1e-6);
        assert!((k.qx - k.q).norm() < 1e-14);
        assert_eq!(k.regime, Regime::Propagating);
    }

    #[test]
    fn below_barrier_is_evanescent() {
        let k = kin(40.0, 50.0, 0.2);
        assert!(k.qx.im > 0.0);
        assert_eq!(k.qx.re, 0.0);
        assert_eq!(k.regime, Regime::Evanescent);
    }

    #[test]
    fn no_barrier() {
        for &phi in &[-1.0, -0.3, 0.0, 0.7, 1.4] {
            let k = kin(55.0, 0.0, phi);
            assert!((k.q.re - k.k).abs() < 1e-14 && k.q.im == 0.0);
            assert!((k.qx - k.kx).norm() < 1e-12);
            assert!((k.theta - phi).norm() < 1e-12);
        }
    }

    #[test]
    fn total_internal_reflection() {
        let k = kin(80.0, 70.0, 0.5);
        assert_eq!(k.regime, Regime::TotalInternal);
        assert!(k.qx.im > 0.0 && k.qx.re == 0.0);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        let u = UnitSystem::default();
        assert!(matches!(
            derive_kinematics(&PhysicalScenario::new(0.0, 10.0, 1.0, 0.0), &u),
            Err(TunnelError::DegenerateEnergy)
        ));
        assert!(matches!(
            derive_kinematics(&PhysicalScenario::new(50.0, 50.0, 1.0, 0.0), &u),
            Err(TunnelError::ResonantEdge { .. })
        ));
        assert!(derive_kinematics(&PhysicalScenario::new(50.0, 50.0 + 1e-9, 1.0, 0.0), &u).is_ok());
        assert!(derive_kinematics(&PhysicalScenario::new(50.0, 10.0, 0.0, 0.0), &u).is_err());
        assert!(derive_kinematics(&PhysicalScenario::new(50.0, 10.0, 1.0, 1.6), &u).is_err());
        assert!(derive_kinematics(
            &PhysicalScenario::new(50.0, 10.0, 1.0, 0.0).with_mass(-1.0),
            &u
        )
        .is_err());
    }

    #[test]
    fn critical_angles() {
        let c = critical_angle(&PhysicalScenario::new(80.0, 70.0, 10.0, 0.0)).unwrap();
        assert!((c - 0.361_37).abs() < 1e-5, "{c}");
        assert_eq!(
            critical_angle(&PhysicalScenario::new(80.0, 0.0, 10.0, 0.0)),
            None
        );
        let c = critical_angle(&PhysicalScenario::new(50.0, 40.0, 10.0, 0.0)).unwrap();
        assert!((c - 0.463_65).abs() < 1e-5, "{c}");
    }

    #[test]
    fn regime_switches_at_critical_angle() {
        let c = critical_angle(&PhysicalScenario::new(80.0, 70.0, 10.0, 0.0)).unwrap();
        assert_eq!(kin(80.0, 70.0, c - 1e-6).regime, Regime::Propagating);
        assert_eq!(kin(80.0, 70.0, c + 1e-6).regime, Regime::TotalInternal);
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn wave_vector_identities(
            e in 1.0f64..300.0,
            v0 in -100.0f64..600.0,
            phi in -1.5f64..1.5,
            m in 0.05f64..3.0,
        ) {
            prop_assume!((e - v0).abs() > 1e-6);
            let s = PhysicalScenario::new(e, v0, 5.0, phi).with_mass(m);
            let k = derive_kinematics(&s, &UnitSystem::default()).unwrap();
            prop_assert!((k.kx * k.kx + k.ky * k.ky - k.k * k.k).abs() <= 1e-12 * k.k * k.k);
            let lhs = k.qx * k.qx + k.ky * k.ky;
            let q2 = k.q * k.q;
            prop_assert!((lhs - q2).norm() <= 1e-12 * q2.norm().max(k.ky * k.ky));
            prop_assert!((k.q * k.theta.sin() - k.ky).norm() <= 1e-10 * k.k);
            prop_assert!(k.qx.im >= 0.0);
            if k.qx.im == 0.0 {
                prop_assert!(k.qx.re >= 0.0);
            }
            prop_assert_eq!(k.regime == Regime::Evanescent, e < v0);
        }

        #[test]
        fn q_decreases_with_barrier(e in 1.0f64..300.0, a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assume!(hi - lo > 1e-9 && hi < 1.0 - 1e-9);
            let u = UnitSystem::default();
            let k1 = derive_kinematics(&PhysicalScenario::new(e, lo * e, 5.0, 0.0), &u).unwrap();
            let k2 = derive_kinematics(&PhysicalScenario::new(e, hi * e, 5.0, 0.0), &u).unwrap();
            prop_assert!(k2.q.norm() < k1.q.norm());
        }
    }
}
