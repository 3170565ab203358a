//! Closed-form transmission and reflection coefficients.
//!
//! Every expression is written with s = sin(d qx), c = cos(d qx) and the
//! common denominator 4kx²qx²c² + (kx² + qx²)²s². For a strongly evanescent
//! barrier (Im(d qx) > 1) the same expressions are divided through by s² and
//! evaluated with cot and csc, whose exponential forms do not overflow.

use num_complex::Complex64 as C64;

use crate::clifford::RepTag;
use crate::error::{Result, TunnelError};
use crate::kinematics::{derive_kinematics, Kinematics, PhysicalScenario};
use crate::matcher::ScatterCoefficients;
use crate::units::UnitSystem;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormInput {
    pub kx: f64,
    pub ky: f64,
    pub qx: C64,
    pub d: f64,
    pub kappa: f64,
}

impl ClosedFormInput {
    pub fn from_kinematics(kin: &Kinematics, d: f64, kappa: f64) -> Self {
        Self {
            kx: kin.kx,
            ky: kin.ky,
            qx: kin.qx,
            d,
            kappa,
        }
    }

    pub fn from_scenario(scenario: &PhysicalScenario) -> Result<Self> {
        let units = UnitSystem::default();
        let kin = derive_kinematics(scenario, &units)?;
        Ok(Self::from_kinematics(
            &kin,
            scenario.width_nm,
            scenario.kappa(&units),
        ))
    }

    fn check(&self) -> Result<()> {
        if !(self.kx > 0.0 && self.d > 0.0 && self.kappa > 0.0) {
            return Err(TunnelError::InvalidScenario(format!(
                "closed form needs kx > 0, d > 0, kappa > 0: {self:?}"
            )));
        }
        if self.qx.norm() <= 1e-15 * self.kx {
            return Err(TunnelError::QxZero);
        }
        Ok(())
    }
}

/// The two shared pieces: 4kx²qx² · w and (kx² − qx²)² · w, where
/// w = s²/den for reflection-type terms and (1/den) for transmission.
struct Pieces {
    /// 4kx²qx²/den
    trans: C64,
    /// s²/den
    refl_weight: C64,
    /// kx² − qx²
    diff: C64,
}

fn pieces(inp: &ClosedFormInput) -> Pieces {
    let kx2 = C64::new(inp.kx * inp.kx, 0.0);
    let qx2 = inp.qx * inp.qx;
    let z = inp.qx * inp.d;
    let four = 4.0 * kx2 * qx2;
    let sum2 = (kx2 + qx2) * (kx2 + qx2);
    let i = C64::new(0.0, 1.0);
    if z.im.abs() > 1.0 {
        // e^{2iz} is small for Im z > 0; flip z otherwise (the expressions are even in z).
        let z = if z.im > 0.0 { z } else { -z };
        let e2 = (2.0 * i * z).exp();
        let cot = i * (e2 + 1.0) / (e2 - 1.0);
        let csc = 2.0 * i * (i * z).exp() / (e2 - 1.0);
        let den = four * cot * cot + sum2;
        Pieces {
            trans: four * csc * csc / den,
            refl_weight: 1.0 / den,
            diff: kx2 - qx2,
        }
    } else {
        let (s, c) = (z.sin(), z.cos());
        let den = four * c * c + sum2 * s * s;
        Pieces {
            trans: four / den,
            refl_weight: s * s / den,
            diff: kx2 - qx2,
        }
    }
}

/// Drops the imaginary part after asserting it is rounding noise.
fn realize(z: C64, what: &str) -> Result<f64> {
    if z.im.abs() < 1e-10 * z.re.abs() + 1e-14 && z.re.is_finite() {
        Ok(z.re)
    } else {
        Err(TunnelError::InternalConsistency(format!(
            "{what} is not real: {z}"
        )))
    }
}

/// (T_QM, R_QM).
pub fn tr_2x2(inp: &ClosedFormInput) -> Result<(f64, f64)> {
    inp.check()?;
    let p = pieces(inp);
    let t = realize(p.trans, "T_QM")?;
    let r = realize(p.diff * p.diff * p.refl_weight, "R_QM")?;
    Ok((t, r))
}

/// Coefficients for η = (γ₀ + iγ₅)/√2. T₂ vanishes identically.
pub fn coeffs_rep_a(inp: &ClosedFormInput) -> Result<ScatterCoefficients> {
    inp.check()?;
    let p = pieces(inp);
    let (kx2, ky2, k2) = (
        inp.kx * inp.kx,
        inp.ky * inp.ky,
        inp.kx * inp.kx + inp.ky * inp.ky,
    );
    let kap2 = inp.kappa * inp.kappa;
    let dd = 2.0 * kap2 + k2;
    let base = p.diff * p.diff * p.refl_weight / (dd * dd);
    let up = 4.0 * kap2 * kap2 + 4.0 * kap2 * (ky2 - kx2) + k2 * k2;
    let flip = 8.0 * kap2 * kx2;
    Ok(ScatterCoefficients {
        t1: realize(p.trans, "T1")?,
        t2: 0.0,
        r1: realize(base * up, "R1")?,
        r2: realize(base * flip, "R2")?,
    })
}

/// Coefficients for η = −i(γ₂ + γ₅)/√2. Transmission is as for
/// [`coeffs_rep_a`]; at sin(d qx) = 0 both reflections vanish.
pub fn coeffs_rep_b(inp: &ClosedFormInput) -> Result<ScatterCoefficients> {
    inp.check()?;
    let p = pieces(inp);
    let t1 = realize(p.trans, "T1")?;
    if p.refl_weight == C64::new(0.0, 0.0) {
        return Ok(ScatterCoefficients {
            t1,
            ..Default::default()
        });
    }
    let ky2 = inp.ky * inp.ky;
    let kap2 = inp.kappa * inp.kappa;
    let base = p.diff * p.diff * p.refl_weight / (2.0 * (ky2 + kap2));
    Ok(ScatterCoefficients {
        t1,
        t2: 0.0,
        r1: realize(base * ky2, "R1")?,
        r2: realize(base * (ky2 + 2.0 * kap2), "R2")?,
    })
}

/// Closed-form coefficients for any representation; the 2×2 model returns
/// (T_QM, R_QM) in `t1`, `r1`.
pub fn coeffs_for(scenario: &PhysicalScenario, rep: RepTag) -> Result<ScatterCoefficients> {
    let inp = ClosedFormInput::from_scenario(scenario)?;
    match rep {
        RepTag::TwoByTwo => tr_2x2(&inp).map(|(t, r)| ScatterCoefficients::spin_summed(t, r)),
        RepTag::FourRepA => coeffs_rep_a(&inp),
        RepTag::FourRepB => coeffs_rep_b(&inp),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcher::oracle;
    use crate::schrodinger::schrodinger_transfer_matrix;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    const KAPPA: f64 = 8.637_992_737_694_25;

    fn input(kx: f64, ky: f64, qx: C64, d: f64) -> ClosedFormInput {
        ClosedFormInput {
            kx,
            ky,
            qx,
            d,
            kappa: KAPPA,
        }
    }

    #[test]
    fn no_barrier() {
        let (t, r) = tr_2x2(&input(1.2, 0.3, C64::new(1.2, 0.0), 10.0)).unwrap();
        assert!((t - 1.0).abs() < 1e-15 && r.abs() < 1e-15);
    }

    #[test]
    fn resonance_is_transparent() {
        let qx = 0.51;
        let inp = input(1.4, 0.0, C64::new(qx, 0.0), PI / qx);
        let (t, r) = tr_2x2(&inp).unwrap();
        assert!((t - 1.0).abs() < 1e-10 && r < 1e-10);
        let b = coeffs_rep_b(&inp).unwrap();
        assert!(b.r1.abs() < 1e-10 && b.r2.abs() < 1e-10);
    }

    #[test]
    fn qx_zero() {
        assert!(matches!(
            tr_2x2(&input(1.0, 0.5, C64::new(0.0, 0.0), 3.0)),
            Err(TunnelError::QxZero)
        ));
    }

    #[test]
    fn triple_cross_check_normal_incidence() {
        let s = PhysicalScenario::new(80.0, 70.0, 10.0, 0.0);
        let (t, r) = tr_2x2(&ClosedFormInput::from_scenario(&s).unwrap()).unwrap();
        let (ts, rs) = schrodinger_transfer_matrix(&s).unwrap();
        let o = oracle(&s, RepTag::TwoByTwo).unwrap().coefficients;
        assert!((t - ts).abs() < 1e-9 && (r - rs).abs() < 1e-9);
        assert!((t - o.t1).abs() < 1e-9 && (r - o.r1).abs() < 1e-9);
    }

    #[test]
    fn rep_a_matches_oracle() {
        let s = PhysicalScenario::new(80.0, 70.0, 10.0, 0.3);
        let c = coeffs_for(&s, RepTag::FourRepA).unwrap();
        let o = oracle(&s, RepTag::FourRepA).unwrap().coefficients;
        for (x, y) in c.as_array().iter().zip(o.as_array()) {
            assert!((x - y).abs() < 1e-10, "{c:?} vs {o:?}");
        }
    }

    #[test]
    fn rep_b_matches_oracle() {
        let s = PhysicalScenario::new(80.0, 70.0, 10.0, 0.3);
        let c = coeffs_for(&s, RepTag::FourRepB).unwrap();
        let o = oracle(&s, RepTag::FourRepB).unwrap().coefficients;
        for (x, y) in c.as_array().iter().zip(o.as_array()) {
            assert!((x - y).abs() < 1e-9, "{c:?} vs {o:?}");
        }
    }

    #[test]
    fn deep_evanescent_stays_finite() {
        let inp = input(1.0, 0.2, C64::new(0.0, 3.0), 250.0);
        let (t, r) = tr_2x2(&inp).unwrap();
        assert!((0.0..1e-300).contains(&t) && (r - 1.0).abs() < 1e-12);
    }

    fn any_input() -> impl Strategy<Value = ClosedFormInput> {
        (
            0.05..3.0f64,
            -3.0..3.0f64,
            0.05..3.0f64,
            any::<bool>(),
            0.5..30.0f64,
        )
            .prop_map(|(kx, ky, q, evanescent, d)| {
                let qx = if evanescent {
                    C64::new(0.0, q)
                } else {
                    C64::new(q, 0.0)
                };
                input(kx, ky, qx, d)
            })
    }

    proptest! {
        #[test]
        fn rep_a_unitarity(inp in any_input()) {
            let c = coeffs_rep_a(&inp).unwrap();
            prop_assert_eq!(c.t2, 0.0);
            prop_assert!(c.unitarity_residual().abs() < 1e-12);
        }

        #[test]
        fn rep_b_sums_to_r_qm(inp in any_input()) {
            let (t, r) = tr_2x2(&inp).unwrap();
            prop_assert!((t + r - 1.0).abs() < 1e-12);
            let b = coeffs_rep_b(&inp).unwrap();
            prop_assert!((b.r1 + b.r2 - r).abs() < 1e-12);
        }

        #[test]
        fn rep_b_normal_incidence_is_all_flip(mut inp in any_input()) {
            inp.ky = 0.0;
            prop_assert_eq!(coeffs_rep_b(&inp).unwrap().r1, 0.0);
        }

        #[test]
        fn rep_a_normal_incidence_factorizes(mut inp in any_input()) {
            inp.ky = 0.0;
            let a = coeffs_rep_a(&inp).unwrap();
            let (kx2, k2) = (inp.kx * inp.kx, 2.0 * KAPPA * KAPPA);
            let (_, r) = tr_2x2(&inp).unwrap();
            let reduced = r * (k2 - kx2).powi(2) / (k2 + kx2).powi(2);
            prop_assert!((a.r1 - reduced).abs() < 1e-13);
        }
    }
}
