//! Matrix representations of the Lévy-Leblond equation and their checks.
//!
//! In momentum space the equation reads `ħv (Γ·k) ψ = (η E + η† m v²) ψ`, with
//! spatial matrices Γ = (Γx, Γy) and a nilpotent η. Dividing by ħv gives the
//! wave-number form used throughout: `(Γ·k − ε η − κ η†) ψ = 0` with ε = E/ħv
//! and κ = m v/ħ.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TunnelError};
use crate::matrix::{ComplexMatrix, C64, I, ONE, ZERO};
use crate::units::UnitSystem;

/// Tolerance for exact algebraic identities.
pub const IDENTITY_TOL: f64 = 1e-12;
/// η + εη† is declared singular above this condition estimate.
pub const ETA_PRIME_COND_LIMIT: f64 = 1e14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RepTag {
    /// μ₁ = I, μ₂ = iσ₃, η = (σ₁ − iσ₂)/√2.
    #[serde(rename = "2x2")]
    TwoByTwo,
    /// Dirac basis, Γ = (γ₁, γ₂), η = (γ₀ + iγ₅)/√2.
    #[serde(rename = "a")]
    FourRepA,
    /// Dirac basis, η = −i(γ₂ + γ₅)/√2, Γ = (iγ₀, γ₃).
    #[serde(rename = "b")]
    FourRepB,
}

impl RepTag {
    pub fn dim(self) -> usize {
        match self {
            RepTag::TwoByTwo => 2,
            RepTag::FourRepA | RepTag::FourRepB => 4,
        }
    }

    /// Short label used in CSV output and CLI flags.
    pub fn label(self) -> &'static str {
        match self {
            RepTag::TwoByTwo => "2x2",
            RepTag::FourRepA => "a",
            RepTag::FourRepB => "b",
        }
    }
}

impl fmt::Display for RepTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn pauli(i: usize) -> ComplexMatrix {
    match i {
        1 => ComplexMatrix::from_rows(&[[ZERO, ONE], [ONE, ZERO]]),
        2 => ComplexMatrix::from_rows(&[[ZERO, -I], [I, ZERO]]),
        3 => ComplexMatrix::from_rows(&[[ONE, ZERO], [ZERO, -ONE]]),
        _ => panic!("Pauli index must be 1, 2 or 3"),
    }
}

/// Dirac-basis gamma matrix γ^μ for μ = 0..=3; μ = 5 gives γ₅.
pub fn gamma(mu: usize) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    let z = ComplexMatrix::zeros(2);
    match mu {
        0 => ComplexMatrix::from_blocks(&id, &z, &z, &(-&id)),
        1..=3 => {
            let s = pauli(mu);
            ComplexMatrix::from_blocks(&z, &s, &(-&s), &z)
        }
        5 => ComplexMatrix::from_blocks(&z, &id, &id, &z),
        _ => panic!("gamma index must be 0, 1, 2, 3 or 5"),
    }
}

/// A concrete set of spatial matrices and η.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixRep {
    pub tag: RepTag,
    /// (Γx, Γy).
    pub spatial: [ComplexMatrix; 2],
    pub eta: ComplexMatrix,
    pub eta_dagger: ComplexMatrix,
}

impl MatrixRep {
    /// Arbitrary representation; used to probe [`verify_algebra`] with bad inputs.
    pub fn custom(tag: RepTag, spatial: [ComplexMatrix; 2], eta: ComplexMatrix) -> Self {
        let eta_dagger = eta.adjoint();
        Self {
            tag,
            spatial,
            eta,
            eta_dagger,
        }
    }

    pub fn dim(&self) -> usize {
        self.eta.dim()
    }

    /// Γ·k for a possibly complex kx.
    pub fn gamma_dot_k(&self, kx: C64, ky: f64) -> ComplexMatrix {
        &self.spatial[0].scale(kx) + &self.spatial[1].scale_re(ky)
    }

    /// The wave-number form of the LLE operator, Γ·k − εη − κη†.
    pub fn lle_operator(&self, kx: C64, ky: f64, eps: C64, kappa: f64) -> ComplexMatrix {
        &(&self.gamma_dot_k(kx, ky) - &self.eta.scale(eps)) - &self.eta_dagger.scale_re(kappa)
    }

    /// Projector η†η/2 onto the component that obeys the Schrödinger equation;
    /// its squared norm carries the probability current of a plane wave.
    pub fn schrodinger_projector(&self) -> ComplexMatrix {
        (&self.eta_dagger * &self.eta).scale_re(0.5)
    }
}

pub fn build_rep(tag: RepTag) -> MatrixRep {
    let r = C64::new(FRAC_1_SQRT_2, 0.0);
    match tag {
        RepTag::TwoByTwo => {
            let mu1 = ComplexMatrix::identity(2);
            let mu2 = pauli(3).scale(I);
            let eta = (&pauli(1) - &pauli(2).scale(I)).scale(r);
            MatrixRep::custom(tag, [mu1, mu2], eta)
        }
        RepTag::FourRepA => {
            let eta = (&gamma(0) + &gamma(5).scale(I)).scale(r);
            MatrixRep::custom(tag, [gamma(1), gamma(2)], eta)
        }
        RepTag::FourRepB => {
            // γ₂ is taken by η here, so the y direction uses γ₃ and the x
            // direction iγ₀; both anticommute with γ₂ and γ₅.
            let eta = (&gamma(2) + &gamma(5)).scale(-I * r);
            MatrixRep::custom(tag, [gamma(0).scale(I), gamma(3)], eta)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraReport {
    pub rep: RepTag,
    pub checks: Vec<IdentityCheck>,
}

impl AlgebraReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn worst_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn first_failure(&self) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// Deterministic momenta used by [`verify_algebra`], in nm⁻¹.
pub const DEFAULT_PROBE_MOMENTA: [(f64, f64); 6] = [
    (1.0, 0.0),
    (0.0, 1.0),
    (1.2, 0.4),
    (-0.7, 2.3),
    (5.5, -3.1),
    (-9.0, -4.0),
];

/// κ used for the dispersion probes (free electron, v = 10⁶ m/s).
const PROBE_KAPPA: f64 = 8.637_992_737_694_25;

fn check(identity: &str, residual: f64, tolerance: f64) -> IdentityCheck {
    IdentityCheck {
        identity: identity.to_string(),
        residual,
        tolerance,
        passed: residual.is_finite() && residual < tolerance,
    }
}

/// Evaluates every algebraic identity of `rep` at the given momenta.
pub fn algebra_report(rep: &MatrixRep, momenta: &[(f64, f64)]) -> AlgebraReport {
    let n = rep.dim();
    let id = ComplexMatrix::identity(n);
    let mut checks = vec![
        check("eta^2 = 0", (&rep.eta * &rep.eta).max_abs(), IDENTITY_TOL),
        check(
            "(eta^dagger)^2 = 0",
            (&rep.eta_dagger * &rep.eta_dagger).max_abs(),
            IDENTITY_TOL,
        ),
        check(
            "eta^dagger is the adjoint of eta",
            (&rep.eta_dagger - &rep.eta.adjoint()).max_abs(),
            IDENTITY_TOL,
        ),
        check(
            "{eta, eta^dagger} = 2I",
            (&rep.eta.anticommutator(&rep.eta_dagger) - &id.scale_re(2.0)).max_abs(),
            IDENTITY_TOL,
        ),
    ];

    if n == 4 {
        let mut clifford = 0.0f64;
        let mut anti = 0.0f64;
        for (i, gi) in rep.spatial.iter().enumerate() {
            for (j, gj) in rep.spatial.iter().enumerate() {
                let expected = if i == j {
                    id.scale_re(-2.0)
                } else {
                    ComplexMatrix::zeros(4)
                };
                clifford = clifford.max((&gi.anticommutator(gj) - &expected).max_abs());
            }
            anti = anti
                .max(gi.anticommutator(&rep.eta).max_abs())
                .max(gi.anticommutator(&rep.eta_dagger).max_abs());
        }
        checks.push(check("{G_i, G_j} = -2 delta_ij", clifford, IDENTITY_TOL));
        checks.push(check(
            "{G_i, eta} = {G_i, eta^dagger} = 0",
            anti,
            IDENTITY_TOL,
        ));
    }

    // Squaring the operator must leave only the Schrödinger dispersion
    // k² − 2κε, on and off shell.
    let mut dispersion = 0.0f64;
    for &(kx, ky) in momenta {
        let k2 = kx * kx + ky * ky;
        for eps in [k2 / (2.0 * PROBE_KAPPA), 0.37 * k2 + 1.0, -2.0] {
            let theta = rep.lle_operator(C64::new(kx, 0.0), ky, C64::new(eps, 0.0), PROBE_KAPPA);
            let target = k2 - 2.0 * PROBE_KAPPA * eps;
            let scale = k2 + 2.0 * PROBE_KAPPA * eps.abs() + 1.0;
            let residual = if n == 2 {
                let det = theta.get(0, 0) * theta.get(1, 1) - theta.get(0, 1) * theta.get(1, 0);
                (det - target).norm() / scale
            } else {
                (&(&theta * &theta) + &id.scale_re(target)).max_abs() / scale
            };
            dispersion = dispersion.max(residual);
        }
    }
    checks.push(check(
        "LLE squares to E = hbar^2 k^2 / 2m",
        dispersion,
        IDENTITY_TOL,
    ));

    AlgebraReport {
        rep: rep.tag,
        checks,
    }
}

/// Checks nilpotency, adjointness and the squared-equation dispersion.
pub fn verify_algebra(rep: &MatrixRep) -> Result<AlgebraReport> {
    verify_algebra_at(rep, &DEFAULT_PROBE_MOMENTA)
}

pub fn verify_algebra_at(rep: &MatrixRep, momenta: &[(f64, f64)]) -> Result<AlgebraReport> {
    let report = algebra_report(rep, momenta);
    match report.first_failure() {
        Some(failed) => Err(TunnelError::VerificationFailed {
            identity: failed.identity.clone(),
            residual: failed.residual,
        }),
        None => Ok(report),
    }
}

/// The ε-regularized Hamiltonian H = (η + εη†)⁻¹ (ħv Γ·k − m v² η†) in meV.
#[derive(Debug, Clone)]
pub struct RegularizedHamiltonian {
    pub rep: MatrixRep,
    pub epsilon: f64,
    pub momentum: (f64, f64),
    pub matrix: ComplexMatrix,
}

impl RegularizedHamiltonian {
    pub fn new(
        rep: &MatrixRep,
        kx: f64,
        ky: f64,
        mass_me: f64,
        fermi_velocity: f64,
        epsilon: f64,
        units: &UnitSystem,
    ) -> Result<Self> {
        if rep.dim() != 4 {
            return Err(TunnelError::NotFourByFour(rep.tag.to_string()));
        }
        if epsilon.is_nan() || epsilon <= 0.0 {
            return Err(TunnelError::InvalidScenario(format!(
                "regularization epsilon must be positive, got {epsilon}"
            )));
        }
        let eta_prime = &rep.eta + &rep.eta_dagger.scale_re(epsilon);
        let cond = eta_prime.condition_estimate();
        if cond > ETA_PRIME_COND_LIMIT {
            return Err(TunnelError::SingularEtaPrime { cond });
        }
        let inv = eta_prime
            .inverse()
            .ok_or(TunnelError::SingularEtaPrime { cond })?;
        let hbar_v = units.hbar_v(fermi_velocity);
        let v = units.velocity_to_internal(fermi_velocity);
        let rest = units.mass(mass_me) * v * v;
        let kinetic = &rep.gamma_dot_k(C64::new(kx, 0.0), ky).scale_re(hbar_v)
            - &rep.eta_dagger.scale_re(rest);
        Ok(Self {
            rep: rep.clone(),
            epsilon,
            momentum: (kx, ky),
            matrix: &inv * &kinetic,
        })
    }

    /// Eigenvalues sorted by increasing modulus: the finite pair comes first.
    pub fn spectrum(&self) -> Result<Vec<C64>> {
        let mut ev = self.matrix.eigenvalues().ok_or_else(|| {
            TunnelError::InternalConsistency("Schur decomposition did not converge".into())
        })?;
        ev.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.re.total_cmp(&b.re)));
        Ok(ev)
    }
}

/// The four eigenvalues (meV) of the regularized Hamiltonian, finite pair first.
pub fn hamiltonian_spectrum(
    rep: &MatrixRep,
    kx: f64,
    ky: f64,
    mass_me: f64,
    fermi_velocity: f64,
    epsilon: f64,
) -> Result<Vec<C64>> {
    RegularizedHamiltonian::new(
        rep,
        kx,
        ky,
        mass_me,
        fermi_velocity,
        epsilon,
        &UnitSystem::default(),
    )?
    .spectrum()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn two_by_two_eta_entries() {
        let rep = build_rep(RepTag::TwoByTwo);
        let expected = ComplexMatrix::from_rows(&[[ZERO, ZERO], [C64::new(SQRT2, 0.0), ZERO]]);
        assert!(rep.eta.approx_eq(&expected, 1e-15));
        assert!((&rep.eta * &rep.eta).max_abs() < 1e-15);
        // η + η† = √2 σ₁
        assert!((&rep.eta + &rep.eta_dagger).approx_eq(&pauli(1).scale_re(SQRT2), 1e-15));
    }

    #[test]
    fn rep_a_eta_nilpotent() {
        let rep = build_rep(RepTag::FourRepA);
        assert!((&rep.eta * &rep.eta).max_abs() < 1e-14);
        assert!((&rep.eta_dagger * &rep.eta_dagger).max_abs() < 1e-14);
        assert_eq!(rep.eta_dagger, rep.eta.adjoint());
    }

    #[test]
    fn dirac_basis_layout() {
        let g0 = gamma(0);
        assert_eq!(g0.get(0, 0), ONE);
        assert_eq!(g0.get(3, 3), -ONE);
        let g5 = gamma(5);
        assert_eq!(g5.get(0, 2), ONE);
        assert_eq!(g5.get(2, 0), ONE);
        assert_eq!(g5.get(0, 0), ZERO);
    }

    #[test]
    fn all_reps_verify() {
        for tag in [RepTag::TwoByTwo, RepTag::FourRepA, RepTag::FourRepB] {
            let report = verify_algebra(&build_rep(tag)).unwrap();
            assert!(report.worst_residual() < 1e-12, "{tag}: {report:?}");
        }
    }

    #[test]
    fn sigma1_as_eta_fails_nilpotency() {
        let good = build_rep(RepTag::TwoByTwo);
        let bad = MatrixRep::custom(RepTag::TwoByTwo, good.spatial.clone(), pauli(1));
        match verify_algebra(&bad) {
            Err(TunnelError::VerificationFailed { identity, .. }) => {
                assert!(identity.contains("eta^2"), "{identity}")
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn rep_b_with_gamma2_as_spatial_fails() {
        // η_B contains γ₂, so γ₂ cannot also be the y-direction matrix.
        let b = build_rep(RepTag::FourRepB);
        let bad = MatrixRep::custom(RepTag::FourRepB, [gamma(1), gamma(2)], b.eta.clone());
        assert!(verify_algebra(&bad).is_err());
    }

    #[test]
    fn spectrum_requires_four_by_four() {
        let rep = build_rep(RepTag::TwoByTwo);
        assert!(matches!(
            hamiltonian_spectrum(&rep, 1.0, 0.0, 1.0, 1e6, 1e-3),
            Err(TunnelError::NotFourByFour(_))
        ));
        let rep = build_rep(RepTag::FourRepA);
        assert!(hamiltonian_spectrum(&rep, 1.0, 0.0, 1.0, 1e6, 0.0).is_err());
    }

    fn free_energy(kx: f64, ky: f64) -> f64 {
        UnitSystem::default().kinetic_energy(kx * kx + ky * ky, 1.0)
    }

    #[test]
    fn rep_a_spectrum_splits() {
        let rep = build_rep(RepTag::FourRepA);
        let eps = 1e-3;
        let ev = hamiltonian_spectrum(&rep, 1.0, 0.0, 1.0, 1e6, eps).unwrap();
        let e0 = free_energy(1.0, 0.0);
        for z in &ev[..2] {
            assert!((z - e0).norm() / e0 < 50.0 * eps, "{z} vs {e0}");
        }
        for z in &ev[2..] {
            assert!(z.norm() > 1e-2 / eps, "{z}");
            assert!(z.re < 0.0);
        }
    }

    #[test]
    fn zero_momentum_pair_vanishes() {
        // At k = 0 the finite pair is exactly zero; what remains is rounding
        // relative to the divergent pair, which grows like 1/ε.
        let rep = build_rep(RepTag::FourRepA);
        for eps in [1e-2, 1e-3, 1e-4] {
            let ev = hamiltonian_spectrum(&rep, 0.0, 0.0, 1.0, 1e6, eps).unwrap();
            let finite = ev[0].norm().max(ev[1].norm());
            assert!(finite < 1e-14 * ev[3].norm(), "{ev:?}");
            assert!(finite < 1e-7, "{ev:?}");
        }
    }

    #[test]
    fn rep_b_finite_pair() {
        let rep = build_rep(RepTag::FourRepB);
        let ev = hamiltonian_spectrum(&rep, 1.2, 0.4, 1.0, 1e6, 1e-4).unwrap();
        let e0 = free_energy(1.2, 0.4);
        for z in &ev[..2] {
            assert!((z - e0).norm() / e0 < 1e-3, "{z} vs {e0}");
        }
    }
}
