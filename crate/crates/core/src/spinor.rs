//! Plane-wave eigenstates of the momentum-space Lévy-Leblond equation.
//!
//! Spinors are pinned rather than unit-normalized: the leading component is
//! fixed (1 for the 4×4 states, the lower component 1 for the 2×2 state), so
//! amplitudes keep the meaning of the usual r and t.

use std::f64::consts::SQRT_2;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::clifford::{build_rep, MatrixRep, RepTag};
use crate::error::{Result, TunnelError};
use crate::matrix::{vec_norm, C64, I, ONE, ZERO};
use crate::units::UnitSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SpinLabel {
    Up,
    Down,
    /// The 2×2 model carries no spin.
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spinor {
    pub rep: RepTag,
    pub components: Vec<C64>,
    /// (kx, ky) in nm⁻¹; kx may be complex in the barrier.
    pub kx: C64,
    pub ky: f64,
    pub label: SpinLabel,
}

impl Spinor {
    pub fn norm(&self) -> f64 {
        vec_norm(&self.components)
    }

    /// k² = kx² + ky², complex when kx is.
    pub fn k_squared(&self) -> C64 {
        self.kx * self.kx + self.ky * self.ky
    }
}

fn check_momentum(kx: C64, ky: f64) -> Result<()> {
    if kx == ZERO && ky == 0.0 {
        return Err(TunnelError::ZeroMomentum);
    }
    Ok(())
}

fn kappa_of(mass_me: f64, fermi_velocity: f64) -> f64 {
    UnitSystem::default().kappa(mass_me, fermi_velocity)
}

/// [√2κ/(kx + i ky), 1] with κ = m v/ħ.
pub fn spinor_2x2(kx: C64, ky: f64, mass_me: f64, fermi_velocity: f64) -> Result<Spinor> {
    spinor_2x2_kappa(kx, ky, kappa_of(mass_me, fermi_velocity))
}

pub fn spinor_2x2_kappa(kx: C64, ky: f64, kappa: f64) -> Result<Spinor> {
    check_momentum(kx, ky)?;
    let denom = kx + I * ky;
    if denom == ZERO {
        return Err(TunnelError::ZeroMomentum);
    }
    Ok(Spinor {
        rep: RepTag::TwoByTwo,
        components: vec![SQRT_2 * kappa / denom, ONE],
        kx,
        ky,
        label: SpinLabel::None,
    })
}

fn four_denominator(kx: C64, ky: f64, kappa: f64) -> Result<(C64, C64)> {
    check_momentum(kx, ky)?;
    let k2 = kx * kx + ky * ky;
    let d = 2.0 * kappa * kappa + k2;
    if d == ZERO {
        return Err(TunnelError::InternalConsistency(
            "spinor denominator 2κ² + k² vanishes".into(),
        ));
    }
    Ok((k2, d))
}

/// Spin-up eigenstate in the η = (γ₀ + iγ₅)/√2 representation, top components (1, 0).
pub fn spinor_4x4_up(kx: C64, ky: f64, mass_me: f64, fermi_velocity: f64) -> Result<Spinor> {
    spinor_4x4_up_kappa(kx, ky, kappa_of(mass_me, fermi_velocity))
}

/// Spin-down partner of [`spinor_4x4_up`], top components (0, 1).
pub fn spinor_4x4_down(kx: C64, ky: f64, mass_me: f64, fermi_velocity: f64) -> Result<Spinor> {
    spinor_4x4_down_kappa(kx, ky, kappa_of(mass_me, fermi_velocity))
}

pub fn spinor_4x4_up_kappa(kx: C64, ky: f64, kappa: f64) -> Result<Spinor> {
    let (k2, d) = four_denominator(kx, ky, kappa)?;
    let c3 = I * (k2 - 2.0 * kappa * kappa) / d;
    let c4 = 2.0 * SQRT_2 * kappa * (kx + I * ky) / d;
    Ok(Spinor {
        rep: RepTag::FourRepA,
        components: vec![ONE, ZERO, c3, c4],
        kx,
        ky,
        label: SpinLabel::Up,
    })
}

pub fn spinor_4x4_down_kappa(kx: C64, ky: f64, kappa: f64) -> Result<Spinor> {
    let (k2, d) = four_denominator(kx, ky, kappa)?;
    let c3 = 2.0 * SQRT_2 * kappa * (kx - I * ky) / d;
    let c4 = I * (k2 - 2.0 * kappa * kappa) / d;
    Ok(Spinor {
        rep: RepTag::FourRepA,
        components: vec![ZERO, ONE, c3, c4],
        kx,
        ky,
        label: SpinLabel::Down,
    })
}

/// On-shell LLE operator Γ·k − εη − κη† with ε = k²/2κ.
pub fn on_shell_operator(rep: &MatrixRep, kx: C64, ky: f64, kappa: f64) -> crate::ComplexMatrix {
    let eps = (kx * kx + ky * ky) / (2.0 * kappa);
    rep.lle_operator(kx, ky, eps, kappa)
}

/// ‖(Γ·k − εη − κη†)s‖ / ‖s‖ in nm⁻¹, evaluated on shell.
pub fn lle_residual(rep: &MatrixRep, spinor: &Spinor, kappa: f64) -> f64 {
    let theta = on_shell_operator(rep, spinor.kx, spinor.ky, kappa);
    vec_norm(&theta.mul_vec(&spinor.components)) / spinor.norm()
}

/// Up/down eigenstates of an arbitrary 4×4 representation, found numerically
/// from the two-dimensional null space of the on-shell operator and pinned to
/// top components (1, 0) and (0, 1).
pub fn pinned_eigenstates(rep: &MatrixRep, kx: C64, ky: f64, kappa: f64) -> Result<[Spinor; 2]> {
    if rep.dim() != 4 {
        return Err(TunnelError::NotFourByFour(rep.tag.to_string()));
    }
    check_momentum(kx, ky)?;
    let theta = on_shell_operator(rep, kx, ky, kappa);
    let m = theta.as_nalgebra();
    let lower = m.columns(2, 2).into_owned();
    let svd = lower.svd(true, true);
    let smax = svd.singular_values.max();
    let make = |top: [C64; 2], label: SpinLabel| -> Result<Spinor> {
        let rhs: DMatrix<C64> = -(m.columns(0, 2) * DMatrix::from_column_slice(2, 1, &top));
        let x = svd
            .solve(&rhs, 1e-13 * smax)
            .map_err(|e| TunnelError::InternalConsistency(e.to_string()))?;
        let s = Spinor {
            rep: rep.tag,
            components: vec![top[0], top[1], x[0], x[1]],
            kx,
            ky,
            label,
        };
        let resid = lle_residual(rep, &s, kappa);
        let scale = 1.0 + (kx.norm() + ky.abs() + kappa) * 1e-12;
        if resid.is_nan() || resid >= 1e-10 * scale {
            return Err(TunnelError::InternalConsistency(format!(
                "pinned eigenstate residual {resid:.3e} for {}",
                rep.tag
            )));
        }
        Ok(s)
    };
    Ok([
        make([ONE, ZERO], SpinLabel::Up)?,
        make([ZERO, ONE], SpinLabel::Down)?,
    ])
}

/// The plane-wave basis used by the matcher: one state for the 2×2 model,
/// (up, down) for the 4×4 representations.
pub fn basis_states(rep: &MatrixRep, kx: C64, ky: f64, kappa: f64) -> Result<Vec<Spinor>> {
    match rep.tag {
        RepTag::TwoByTwo => Ok(vec![spinor_2x2_kappa(kx, ky, kappa)?]),
        RepTag::FourRepA if *rep == build_rep(RepTag::FourRepA) => Ok(vec![
            spinor_4x4_up_kappa(kx, ky, kappa)?,
            spinor_4x4_down_kappa(kx, ky, kappa)?,
        ]),
        _ => Ok(pinned_eigenstates(rep, kx, ky, kappa)?.to_vec()),
    }
}
