use std::path::PathBuf;

use thiserror::Error;

use crate::kinematics::PhysicalScenario;

/// Errors raised by the kinematics, algebra, solver and sweep layers.
#[derive(Debug, Error)]
pub enum TunnelError {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    /// Zero incident energy leaves no incident wave.
    #[error("incident energy is zero")]
    DegenerateEnergy,

    /// E equals V0: the barrier wave number vanishes and the closed forms are singular.
    #[error("resonant edge: E = {energy} meV is within tolerance of V0 = {barrier} meV")]
    ResonantEdge { energy: f64, barrier: f64 },

    #[error("zero momentum: spinor undefined at (kx, ky) = (0, 0)")]
    ZeroMomentum,

    /// Barrier wave vector component vanishes (E = V0 or the critical angle).
    #[error("qx is zero; closed-form coefficients are singular")]
    QxZero,

    #[error("eta + eps*eta^dagger is numerically singular (condition estimate {cond:.3e})")]
    SingularEtaPrime { cond: f64 },

    #[error("matching system is ill-conditioned (condition estimate {cond:.3e}) for {scenario:?}")]
    IllConditioned {
        cond: f64,
        scenario: Box<PhysicalScenario>,
    },

    #[error("linear solve residual {residual:.3e} exceeds tolerance")]
    ResidualTooLarge { residual: f64 },

    #[error("algebra verification failed: {identity} (residual {residual:.3e})")]
    VerificationFailed { identity: String, residual: f64 },

    #[error("operation requires a 4x4 representation, got {0}")]
    NotFourByFour(String),

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("failed to parse result file: {0}")]
    Parse(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, TunnelError>;
