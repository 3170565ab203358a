//! Randomized cross-validation of all engines and representations.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::clifford::{algebra_report, build_rep, RepTag, DEFAULT_PROBE_MOMENTA, IDENTITY_TOL};
use crate::closed_form::coeffs_for;
use crate::error::Result;
use crate::kinematics::{critical_angle, PhysicalScenario};
use crate::matcher::{oracle, ScatterCoefficients};
use crate::schrodinger::schrodinger_transfer_matrix;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_GRID_POINTS: usize = 200;

pub const UNITARITY_TOL: f64 = 1e-10;
pub const AGREEMENT_TOL: f64 = 1e-9;
pub const NEGATIVITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub points: usize,
    pub seed: u64,
    pub energy_range: (f64, f64),
    pub width_range: (f64, f64),
    pub angle_limit: f64,
    /// Points with |E − V0| below this (meV) are redrawn.
    pub edge_exclusion_mev: f64,
    /// Points within this distance (rad) of the critical angle are redrawn.
    pub critical_exclusion_rad: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            points: DEFAULT_GRID_POINTS,
            seed: DEFAULT_SEED,
            energy_range: (10.0, 200.0),
            width_range: (1.0, 30.0),
            angle_limit: 1.2,
            edge_exclusion_mev: 0.1,
            critical_exclusion_rad: 0.01,
        }
    }
}

impl GridSpec {
    pub fn with_points(mut self, points: usize) -> Self {
        self.points = points;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Draws scenarios with E uniform in the energy range, V0 in [0, 2E], d in
    /// the width range and φ in (−limit, limit), redrawing excluded points.
    pub fn scenarios(&self) -> Vec<PhysicalScenario> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = Vec::with_capacity(self.points);
        while out.len() < self.points {
            let e = rng.random_range(self.energy_range.0..=self.energy_range.1);
            let v0 = rng.random_range(0.0..=2.0 * e);
            let d = rng.random_range(self.width_range.0..=self.width_range.1);
            let phi = rng.random_range(-self.angle_limit..self.angle_limit);
            if phi <= -self.angle_limit || (e - v0).abs() < self.edge_exclusion_mev {
                continue;
            }
            let s = PhysicalScenario::new(e, v0, d, phi);
            if let Some(pc) = critical_angle(&s) {
                if (phi.abs() - pc).abs() < self.critical_exclusion_rad {
                    continue;
                }
            }
            out.push(s);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantCheck {
    pub name: String,
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub grid: GridSpec,
    pub checks: Vec<InvariantCheck>,
    /// Scenarios where some engine returned an error.
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&InvariantCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Everything computed for one grid point.
#[derive(Debug, Clone, Copy)]
struct PointResult {
    closed_2x2: ScatterCoefficients,
    oracle_2x2: ScatterCoefficients,
    schrodinger: (f64, f64),
    closed_a: ScatterCoefficients,
    oracle_a: ScatterCoefficients,
    closed_b: ScatterCoefficients,
    oracle_b: ScatterCoefficients,
    /// Oracle results at −φ.
    mirror_a: ScatterCoefficients,
    mirror_b: ScatterCoefficients,
}

fn evaluate(s: &PhysicalScenario) -> Result<PointResult> {
    let mirror = s.with_angle(-s.angle_rad);
    Ok(PointResult {
        closed_2x2: coeffs_for(s, RepTag::TwoByTwo)?,
        oracle_2x2: oracle(s, RepTag::TwoByTwo)?.coefficients,
        schrodinger: schrodinger_transfer_matrix(s)?,
        closed_a: coeffs_for(s, RepTag::FourRepA)?,
        oracle_a: oracle(s, RepTag::FourRepA)?.coefficients,
        closed_b: coeffs_for(s, RepTag::FourRepB)?,
        oracle_b: oracle(s, RepTag::FourRepB)?.coefficients,
        mirror_a: oracle(&mirror, RepTag::FourRepA)?.coefficients,
        mirror_b: oracle(&mirror, RepTag::FourRepB)?.coefficients,
    })
}

fn max_diff(a: &ScatterCoefficients, b: &ScatterCoefficients) -> f64 {
    a.as_array()
        .iter()
        .zip(b.as_array())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn summed_diff(a: &ScatterCoefficients, t: f64, r: f64) -> f64 {
    (a.transmission() - t).abs().max((a.reflection() - r).abs())
}

/// Runs every invariant class on the grid. Failures are report content.
pub fn validate(grid: &GridSpec) -> ValidationReport {
    let scenarios = grid.scenarios();
    let results: Vec<(PhysicalScenario, Result<PointResult>)> =
        scenarios.par_iter().map(|s| (*s, evaluate(s))).collect();

    let mut failures = Vec::new();
    let mut ok = Vec::new();
    for (s, r) in results {
        match r {
            Ok(p) => ok.push(p),
            Err(e) => failures.push(format!("{s:?}: {e}")),
        }
    }

    let worst = |f: &dyn Fn(&PointResult) -> f64| ok.iter().map(f).fold(0.0, f64::max);
    let mut checks = Vec::new();
    let mut push = |name: &str, worst: f64, tolerance: f64| {
        checks.push(InvariantCheck {
            name: name.to_string(),
            worst,
            tolerance,
            passed: worst.is_finite() && worst < tolerance,
        })
    };

    for tag in [RepTag::TwoByTwo, RepTag::FourRepA, RepTag::FourRepB] {
        let report = algebra_report(&build_rep(tag), &DEFAULT_PROBE_MOMENTA);
        push(
            &format!("algebra_{tag}"),
            report.worst_residual(),
            IDENTITY_TOL,
        );
    }

    push(
        "unitarity_2x2",
        worst(&|p| {
            p.closed_2x2
                .unitarity_residual()
                .abs()
                .max(p.oracle_2x2.unitarity_residual().abs())
        }),
        UNITARITY_TOL,
    );
    push(
        "unitarity_rep_a",
        worst(&|p| {
            p.closed_a
                .unitarity_residual()
                .abs()
                .max(p.oracle_a.unitarity_residual().abs())
        }),
        UNITARITY_TOL,
    );
    push(
        "unitarity_rep_b",
        worst(&|p| {
            p.closed_b
                .unitarity_residual()
                .abs()
                .max(p.oracle_b.unitarity_residual().abs())
        }),
        UNITARITY_TOL,
    );
    push(
        "triple_oracle",
        worst(&|p| {
            let (t, r) = p.schrodinger;
            [
                p.closed_2x2,
                p.oracle_2x2,
                p.closed_a,
                p.oracle_a,
                p.closed_b,
                p.oracle_b,
            ]
            .iter()
            .map(|c| summed_diff(c, t, r))
            .fold(0.0, f64::max)
        }),
        AGREEMENT_TOL,
    );
    push(
        "spin_sum_rep_a",
        worst(&|p| summed_diff(&p.oracle_a, p.oracle_2x2.t1, p.oracle_2x2.r1)),
        AGREEMENT_TOL,
    );
    push(
        "spin_sum_rep_b",
        worst(&|p| summed_diff(&p.oracle_b, p.oracle_2x2.t1, p.oracle_2x2.r1)),
        AGREEMENT_TOL,
    );
    push(
        "closed_vs_oracle_rep_a",
        worst(&|p| max_diff(&p.closed_a, &p.oracle_a)),
        AGREEMENT_TOL,
    );
    push(
        "closed_vs_oracle_rep_b",
        worst(&|p| max_diff(&p.closed_b, &p.oracle_b)),
        AGREEMENT_TOL,
    );
    push(
        "zero_spin_flip_transmission",
        worst(&|p| {
            [p.closed_a, p.oracle_a, p.closed_b, p.oracle_b]
                .iter()
                .map(|c| c.t2.abs())
                .fold(0.0, f64::max)
        }),
        UNITARITY_TOL,
    );
    push(
        "phi_symmetry_rep_a",
        worst(&|p| max_diff(&p.oracle_a, &p.mirror_a)),
        AGREEMENT_TOL,
    );
    push(
        "phi_symmetry_rep_b",
        worst(&|p| max_diff(&p.oracle_b, &p.mirror_b)),
        AGREEMENT_TOL,
    );
    push(
        "non_negativity",
        worst(&|p| {
            [
                p.closed_2x2,
                p.oracle_2x2,
                p.closed_a,
                p.oracle_a,
                p.closed_b,
                p.oracle_b,
            ]
            .iter()
            .flat_map(|c| c.as_array())
            .map(|x| if x < 0.0 { -x } else { 0.0 })
            .fold(0.0, f64::max)
        }),
        NEGATIVITY_TOL,
    );

    ValidationReport {
        grid: *grid,
        checks,
        failures,
    }
}

/// Resonant widths d = nπ/qx at normal incidence (E > V0).
pub fn resonant_widths(energy: f64, barrier: f64, n_max: u32) -> Result<Vec<f64>> {
    let kin = crate::derive_kinematics(
        &PhysicalScenario::new(energy, barrier, 1.0, 0.0),
        &crate::UnitSystem::default(),
    )?;
    Ok((1..=n_max).map(|n| n as f64 * PI / kin.qx.re).collect())
}
