//! Direct solve of the interface matching conditions at x = 0 and x = d.
//!
//! Region I carries the incident up state plus reflected waves, region II
//! forward and backward waves with the (possibly complex) qx, region III only
//! transmitted waves. The common e^{i ky y} factor is dropped. Backward waves
//! in the barrier are referenced to x = d, i.e. written b' e^{−i qx (x−d)}, so
//! every matrix entry stays bounded when qx is imaginary; the reported
//! b = b' e^{i qx d} refers to the plain e^{−i qx x} convention.

use serde::{Deserialize, Serialize};

use crate::clifford::{build_rep, MatrixRep, RepTag};
use crate::error::{Result, TunnelError};
use crate::kinematics::{derive_kinematics, Kinematics, PhysicalScenario};
use crate::matrix::{vec_norm, ComplexMatrix, C64, I, ZERO};
use crate::spinor::{basis_states, Spinor};
use crate::units::UnitSystem;

pub const COND_LIMIT: f64 = 1e12;
pub const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    TwoByTwo,
    FourByFour,
}

impl Model {
    pub fn of(rep: RepTag) -> Self {
        match rep {
            RepTag::TwoByTwo => Model::TwoByTwo,
            RepTag::FourRepA | RepTag::FourRepB => Model::FourByFour,
        }
    }
}

/// Matching equations A·x = b with unknowns ordered (r…, a…, b…, t…), each
/// group holding one amplitude per spin state.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub scenario: PhysicalScenario,
    pub rep: MatrixRep,
    pub kinematics: Kinematics,
    pub kappa: f64,
    pub matrix: ComplexMatrix,
    pub rhs: Vec<C64>,
    /// Incident state and the states of region I/III, kept for the flux ratios.
    pub incident: Spinor,
    pub reflected_basis: Vec<Spinor>,
    pub transmitted_basis: Vec<Spinor>,
}

impl LinearSystem {
    /// Number of spin states per wave (1 or 2).
    pub fn spins(&self) -> usize {
        self.rep.dim() / 2
    }
}

/// Amplitudes; `r`, `t`, `a`, `b` hold one entry per spin state (up, down).
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterAmplitudes {
    pub model: Model,
    pub rep: RepTag,
    pub r: Vec<C64>,
    pub t: Vec<C64>,
    pub a: Vec<C64>,
    pub b: Vec<C64>,
    /// 1-norm condition estimate of the matching matrix.
    pub cond: f64,
    /// ‖A·x − b‖ / ‖b‖.
    pub residual: f64,
}

/// Transmission and reflection probabilities. The 2×2 model fills `t1`, `r1`
/// only (T_QM, R_QM).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ScatterCoefficients {
    pub t1: f64,
    pub t2: f64,
    pub r1: f64,
    pub r2: f64,
}

impl ScatterCoefficients {
    pub fn spin_summed(t: f64, r: f64) -> Self {
        Self {
            t1: t,
            r1: r,
            ..Self::default()
        }
    }

    pub fn transmission(&self) -> f64 {
        self.t1 + self.t2
    }

    pub fn reflection(&self) -> f64 {
        self.r1 + self.r2
    }

    /// T₁ + T₂ + R₁ + R₂ − 1.
    pub fn unitarity_residual(&self) -> f64 {
        self.transmission() + self.reflection() - 1.0
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.t1, self.t2, self.r1, self.r2]
    }
}

pub fn assemble_system(scenario: &PhysicalScenario, rep: RepTag) -> Result<LinearSystem> {
    assemble_with(scenario, &build_rep(rep), &UnitSystem::default())
}

/// Assembles the matching system for an arbitrary representation.
pub fn assemble_with(
    scenario: &PhysicalScenario,
    rep: &MatrixRep,
    units: &UnitSystem,
) -> Result<LinearSystem> {
    let kin = derive_kinematics(scenario, units)?;
    if kin.qx == ZERO {
        return Err(TunnelError::QxZero);
    }
    let kappa = scenario.kappa(units);
    let d = scenario.width_nm;
    let kx = C64::new(kin.kx, 0.0);
    let ky = kin.ky;

    let incoming = basis_states(rep, kx, ky, kappa)?;
    let reflected = basis_states(rep, -kx, ky, kappa)?;
    let forward = basis_states(rep, kin.qx, ky, kappa)?;
    let backward = basis_states(rep, -kin.qx, ky, kappa)?;

    let n = rep.dim();
    let s = n / 2;
    let phase_q = (I * kin.qx * d).exp();
    let phase_k = (I * kx * d).exp();

    let mut a = ComplexMatrix::zeros(2 * n);
    let mut set_column = |col: usize, row0: usize, spinor: &Spinor, factor: C64| {
        for (i, z) in spinor.components.iter().enumerate() {
            a.0[(row0 + i, col)] = factor * z;
        }
    };
    let one = C64::new(1.0, 0.0);
    for j in 0..s {
        // x = 0
        set_column(j, 0, &reflected[j], one);
        set_column(s + j, 0, &forward[j], -one);
        set_column(2 * s + j, 0, &backward[j], -phase_q);
        // x = d
        set_column(s + j, n, &forward[j], phase_q);
        set_column(2 * s + j, n, &backward[j], one);
        set_column(3 * s + j, n, &incoming[j], -phase_k);
    }
    let mut rhs = vec![ZERO; 2 * n];
    for (i, z) in incoming[0].components.iter().enumerate() {
        rhs[i] = -z;
    }

    Ok(LinearSystem {
        scenario: *scenario,
        rep: rep.clone(),
        kinematics: kin,
        kappa,
        matrix: a,
        rhs,
        incident: incoming[0].clone(),
        reflected_basis: reflected,
        transmitted_basis: incoming,
    })
}

/// LU solve with partial pivoting, condition and residual checks.
pub fn solve_amplitudes(system: &LinearSystem) -> Result<ScatterAmplitudes> {
    let cond = system.matrix.condition_estimate();
    if cond.is_nan() || cond > COND_LIMIT {
        return Err(TunnelError::IllConditioned {
            cond,
            scenario: Box::new(system.scenario),
        });
    }
    let a = system.matrix.as_nalgebra();
    let b = nalgebra::DVector::from_column_slice(&system.rhs);
    let x = a
        .clone()
        .lu()
        .solve(&b)
        .ok_or_else(|| TunnelError::IllConditioned {
            cond,
            scenario: Box::new(system.scenario),
        })?;
    let residual = (a * &x - &b).norm() / b.norm();
    if residual.is_nan() || residual >= RESIDUAL_TOL {
        return Err(TunnelError::ResidualTooLarge { residual });
    }
    let s = system.spins();
    let x: Vec<C64> = x.iter().copied().collect();
    let rescale = (I * system.kinematics.qx * system.scenario.width_nm).exp();
    Ok(ScatterAmplitudes {
        model: Model::of(system.rep.tag),
        rep: system.rep.tag,
        r: x[0..s].to_vec(),
        a: x[s..2 * s].to_vec(),
        b: x[2 * s..3 * s].iter().map(|z| z * rescale).collect(),
        t: x[3 * s..4 * s].to_vec(),
        cond,
        residual,
    })
}

fn projected_norm_sqr(q: &ComplexMatrix, states: &[Spinor], amps: &[C64]) -> f64 {
    let n = q.dim();
    let mut psi = vec![ZERO; n];
    for (s, &c) in states.iter().zip(amps) {
        for (p, z) in psi.iter_mut().zip(&s.components) {
            *p += c * z;
        }
    }
    let v = q.mul_vec(&psi);
    vec_norm(&v).powi(2)
}

/// Probabilities from amplitudes. Total transmitted and reflected flux are
/// ratios of ‖Qψ‖² (Q = η†η/2, the component obeying the Schrödinger
/// equation) since regions I and III share |kx|; the spin split is
/// proportional to |t_i|² and |r_i|². For the 2×2 model and the
/// η = (γ₀ + iγ₅)/√2 states this reduces to T = |t|², R = |r|².
pub fn coefficients_from_amplitudes(
    system: &LinearSystem,
    amps: &ScatterAmplitudes,
) -> ScatterCoefficients {
    let q = system.rep.schrodinger_projector();
    let incident = projected_norm_sqr(
        &q,
        std::slice::from_ref(&system.incident),
        &[C64::new(1.0, 0.0)],
    );
    let t_total = projected_norm_sqr(&q, &system.transmitted_basis, &amps.t) / incident;
    let r_total = projected_norm_sqr(&q, &system.reflected_basis, &amps.r) / incident;
    let split = |total: f64, c: &[C64]| -> (f64, f64) {
        let w: Vec<f64> = c.iter().map(|z| z.norm_sqr()).collect();
        let sum: f64 = w.iter().sum();
        if sum == 0.0 {
            return (0.0, 0.0);
        }
        (
            total * w[0] / sum,
            w.get(1).map_or(0.0, |x| total * x / sum),
        )
    };
    let (t1, t2) = split(t_total, &amps.t);
    let (r1, r2) = split(r_total, &amps.r);
    ScatterCoefficients { t1, t2, r1, r2 }
}

/// Full oracle result for one scenario.
#[derive(Debug, Clone)]
pub struct OracleSolution {
    pub amplitudes: ScatterAmplitudes,
    pub coefficients: ScatterCoefficients,
}

pub fn oracle(scenario: &PhysicalScenario, rep: RepTag) -> Result<OracleSolution> {
    let system = assemble_system(scenario, rep)?;
    let amplitudes = solve_amplitudes(&system)?;
    let coefficients = coefficients_from_amplitudes(&system, &amplitudes);
    Ok(OracleSolution {
        amplitudes,
        coefficients,
    })
}
