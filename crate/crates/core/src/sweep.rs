//! Parameter sweeps over angle, width or energy, evaluated by any subset of
//! the three engines, plus named presets.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::RepTag;
use crate::closed_form::coeffs_for;
use crate::error::{Result, TunnelError};
use crate::kinematics::PhysicalScenario;
use crate::matcher::{oracle, Model, ScatterCoefficients};
use crate::schrodinger::schrodinger_transfer_matrix;
use crate::units::UnitSystem;

/// Engines whose spin-summed (T, R) differ by more than this are flagged.
pub const AGREEMENT_TOL: f64 = 1e-9;
/// Sweep points with |E − V0| below this (meV) are skipped.
pub const EDGE_EXCLUSION_MEV: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Closed,
    Oracle,
    Schrodinger,
}

impl Engine {
    pub const ALL: [Engine; 3] = [Engine::Closed, Engine::Oracle, Engine::Schrodinger];

    pub fn label(self) -> &'static str {
        match self {
            Engine::Closed => "closed",
            Engine::Oracle => "oracle",
            Engine::Schrodinger => "schrodinger",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Engine {
    type Err = TunnelError;
    fn from_str(s: &str) -> Result<Self> {
        Engine::ALL
            .into_iter()
            .find(|e| e.label() == s)
            .ok_or_else(|| TunnelError::Parse(format!("unknown engine {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVariable {
    Angle,
    Width,
    Energy,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub fixed: PhysicalScenario,
    pub rep: RepTag,
    pub engines: Vec<Engine>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(TunnelError::InvalidSweep(msg));
        if self.count < 2 {
            return bad(format!("need at least 2 points, got {}", self.count));
        }
        if self.engines.is_empty() {
            return bad("no engines selected".into());
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return bad("range must be finite".into());
        }
        let (lo, hi) = (self.start.min(self.stop), self.start.max(self.stop));
        match self.variable {
            SweepVariable::Angle if lo <= -FRAC_PI_2 || hi >= FRAC_PI_2 => bad(format!(
                "angle range [{lo}, {hi}] must lie inside (-pi/2, pi/2)"
            )),
            SweepVariable::Width | SweepVariable::Energy if lo <= 0.0 => bad(format!(
                "{:?} range must be positive, got [{lo}, {hi}]",
                self.variable
            )),
            _ => Ok(()),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }

    pub fn scenario_at(&self, value: f64) -> PhysicalScenario {
        match self.variable {
            SweepVariable::Angle => self.fixed.with_angle(value),
            SweepVariable::Width => self.fixed.with_width(value),
            SweepVariable::Energy => self.fixed.with_energy(value),
        }
    }
}

/// Serialized as in the CSV status column: `OK`, `SKIPPED`, `DISAGREE`, `ERROR:<kind>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum RowStatus {
    Ok,
    Skipped,
    /// Engines at this point disagree beyond [`AGREEMENT_TOL`].
    Disagree,
    Error(String),
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowStatus::Ok => f.write_str("OK"),
            RowStatus::Skipped => f.write_str("SKIPPED"),
            RowStatus::Disagree => f.write_str("DISAGREE"),
            RowStatus::Error(kind) => write!(f, "ERROR:{kind}"),
        }
    }
}

impl From<RowStatus> for String {
    fn from(s: RowStatus) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for RowStatus {
    type Error = TunnelError;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl FromStr for RowStatus {
    type Err = TunnelError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "OK" => RowStatus::Ok,
            "SKIPPED" => RowStatus::Skipped,
            "DISAGREE" => RowStatus::Disagree,
            _ => match s.strip_prefix("ERROR:") {
                Some(kind) => RowStatus::Error(kind.to_string()),
                None => return Err(TunnelError::Parse(format!("unknown status {s:?}"))),
            },
        })
    }
}

/// One (point, engine) result. Coefficients are NaN for skipped or failed
/// points; `cond` is NaN for engines without a linear solve. The Schrödinger
/// engine reports spin-summed values in `t1` and `r1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub phi_rad: f64,
    pub d_nm: f64,
    pub e_mev: f64,
    pub v0_mev: f64,
    pub engine: Engine,
    pub rep: RepTag,
    pub t1: f64,
    pub t2: f64,
    pub r1: f64,
    pub r2: f64,
    pub unitarity_resid: f64,
    pub cond: f64,
    pub status: RowStatus,
}

impl SweepRow {
    pub fn coefficients(&self) -> ScatterCoefficients {
        ScatterCoefficients {
            t1: self.t1,
            t2: self.t2,
            r1: self.r1,
            r2: self.r2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepMetadata {
    pub software: String,
    pub version: String,
    pub model: Model,
    pub rep: RepTag,
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub engines: Vec<Engine>,
    pub scenario: PhysicalScenario,
    pub mass_m: f64,
    pub fermi_velocity: f64,
    pub units: UnitSystem,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub metadata: SweepMetadata,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn rows_for(&self, engine: Engine) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(move |r| r.engine == engine)
    }

    pub fn flagged(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.status == RowStatus::Disagree)
            .count()
    }
}

fn error_kind(e: &TunnelError) -> Option<&'static str> {
    Some(match e {
        TunnelError::DegenerateEnergy | TunnelError::ResonantEdge { .. } | TunnelError::QxZero => {
            return None
        }
        TunnelError::IllConditioned { .. } => "ill_conditioned",
        TunnelError::ResidualTooLarge { .. } => "residual",
        TunnelError::InvalidScenario(_) => "invalid_scenario",
        TunnelError::InternalConsistency(_) => "internal",
        _ => "other",
    })
}

fn evaluate(
    engine: Engine,
    scenario: &PhysicalScenario,
    rep: RepTag,
) -> Result<(ScatterCoefficients, f64)> {
    match engine {
        Engine::Closed => coeffs_for(scenario, rep).map(|c| (c, f64::NAN)),
        Engine::Oracle => oracle(scenario, rep).map(|s| (s.coefficients, s.amplitudes.cond)),
        Engine::Schrodinger => schrodinger_transfer_matrix(scenario)
            .map(|(t, r)| (ScatterCoefficients::spin_summed(t, r), f64::NAN)),
    }
}

fn point_rows(spec: &SweepSpec, engines: &[Engine], value: f64) -> Vec<SweepRow> {
    evaluate_point(&spec.scenario_at(value), spec.rep, engines)
}

/// Rows for one scenario, one per engine, with the same skip and
/// disagreement rules as a sweep.
pub fn evaluate_point(s: &PhysicalScenario, rep: RepTag, engines: &[Engine]) -> Vec<SweepRow> {
    let skip_point = (s.energy_mev - s.barrier_mev).abs() < EDGE_EXCLUSION_MEV;
    let mut rows: Vec<SweepRow> = engines
        .iter()
        .map(|&engine| {
            let outcome = if skip_point {
                Err(TunnelError::ResonantEdge {
                    energy: s.energy_mev,
                    barrier: s.barrier_mev,
                })
            } else {
                evaluate(engine, s, rep)
            };
            let (c, cond, status) = match outcome {
                Ok((c, cond)) => (c, cond, RowStatus::Ok),
                Err(e) => {
                    let nan = ScatterCoefficients {
                        t1: f64::NAN,
                        t2: f64::NAN,
                        r1: f64::NAN,
                        r2: f64::NAN,
                    };
                    let status = match error_kind(&e) {
                        None => RowStatus::Skipped,
                        Some(kind) => RowStatus::Error(kind.to_string()),
                    };
                    (nan, f64::NAN, status)
                }
            };
            SweepRow {
                phi_rad: s.angle_rad,
                d_nm: s.width_nm,
                e_mev: s.energy_mev,
                v0_mev: s.barrier_mev,
                engine,
                rep,
                t1: c.t1,
                t2: c.t2,
                r1: c.r1,
                r2: c.r2,
                unitarity_resid: c.unitarity_residual(),
                cond,
                status,
            }
        })
        .collect();

    let ok: Vec<ScatterCoefficients> = rows
        .iter()
        .filter(|r| r.status == RowStatus::Ok)
        .map(SweepRow::coefficients)
        .collect();
    let disagree = ok.iter().enumerate().any(|(i, a)| {
        ok[i + 1..].iter().any(|b| {
            (a.transmission() - b.transmission()).abs() > AGREEMENT_TOL
                || (a.reflection() - b.reflection()).abs() > AGREEMENT_TOL
        })
    });
    if disagree {
        for r in rows.iter_mut().filter(|r| r.status == RowStatus::Ok) {
            r.status = RowStatus::Disagree;
        }
    }
    rows
}

/// Evaluates every point with every engine. Points are computed in parallel;
/// rows come out sorted by (variable value, engine).
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let mut engines = spec.engines.clone();
    engines.sort();
    engines.dedup();
    let values = spec.values();
    let mut keyed: Vec<(usize, Vec<SweepRow>)> = values
        .par_iter()
        .enumerate()
        .map(|(i, &v)| (i, point_rows(spec, &engines, v)))
        .collect();
    keyed.sort_by_key(|(i, _)| *i);
    let rows = keyed.into_iter().flat_map(|(_, r)| r).collect();

    Ok(SweepResult {
        metadata: SweepMetadata {
            software: "tunnel-core".into(),
            version: crate::VERSION.into(),
            model: Model::of(spec.rep),
            rep: spec.rep,
            variable: spec.variable,
            start: spec.start,
            stop: spec.stop,
            count: spec.count,
            engines,
            scenario: spec.fixed,
            mass_m: spec.fixed.mass_me,
            fermi_velocity: spec.fixed.fermi_velocity,
            units: UnitSystem::default(),
        },
        rows,
    })
}

pub const PRESETS: [&str; 4] = ["fig2_3", "fig4", "fig5_left", "fig5_right"];

/// Named presets: free-electron mass and v = 10⁶ m/s throughout. The angle
/// presets cover (−1.2, 1.2) rad in 481 points; the width presets (0, 30] nm.
pub fn preset(name: &str) -> Option<SweepSpec> {
    let angle = |e: f64, v0: f64| SweepSpec {
        variable: SweepVariable::Angle,
        start: -1.2,
        stop: 1.2,
        count: 481,
        fixed: PhysicalScenario::new(e, v0, 10.0, 0.0),
        rep: RepTag::FourRepA,
        engines: Engine::ALL.to_vec(),
    };
    let width = |e: f64, v0: f64| SweepSpec {
        variable: SweepVariable::Width,
        start: 0.1,
        stop: 30.0,
        count: 300,
        fixed: PhysicalScenario::new(e, v0, 10.0, 0.0),
        rep: RepTag::FourRepA,
        engines: Engine::ALL.to_vec(),
    };
    match name {
        "fig2_3" => Some(angle(80.0, 70.0)),
        "fig4" => Some(angle(40.0, 50.0)),
        "fig5_left" => Some(width(80.0, 70.0)),
        "fig5_right" => Some(width(70.0, 80.0)),
        _ => None,
    }
}
