use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tunnel_core::output::{emit, Format};
use tunnel_core::sweep::{
    evaluate_point, preset, run_sweep, Engine, SweepSpec, SweepVariable, PRESETS,
};
use tunnel_core::validate::{validate, GridSpec};
use tunnel_core::{derive_kinematics, PhysicalScenario, RepTag, TunnelError, UnitSystem};

const EXIT_VALIDATION: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "tunnel",
    version,
    about = "Spin-resolved tunneling through a rectangular barrier"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a single scenario and print the coefficients as JSON.
    Run {
        #[arg(long = "E-meV", allow_hyphen_values = true)]
        energy: f64,
        #[arg(long = "V0-meV", allow_hyphen_values = true)]
        barrier: f64,
        #[arg(long = "d-nm", allow_hyphen_values = true)]
        width: f64,
        #[arg(long = "phi-rad", allow_hyphen_values = true)]
        angle: f64,
        #[command(flatten)]
        material: MaterialArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = EngineArg::All)]
        engine: EngineArg,
    },
    /// Sweep one variable and write the table.
    Sweep {
        #[arg(long, value_enum)]
        var: VarArg,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long)]
        points: usize,
        /// Fixed incident energy (ignored when sweeping energy).
        #[arg(long = "E-meV", default_value_t = 80.0)]
        energy: f64,
        #[arg(long = "V0-meV", default_value_t = 70.0)]
        barrier: f64,
        /// Fixed width (ignored when sweeping width).
        #[arg(long = "d-nm", default_value_t = 10.0)]
        width: f64,
        /// Fixed angle (ignored when sweeping angle).
        #[arg(long = "phi-rad", default_value_t = 0.0, allow_hyphen_values = true)]
        angle: f64,
        #[command(flatten)]
        material: MaterialArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = EngineArg::All)]
        engine: EngineArg,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Run a named parameter set (fig2_3, fig4, fig5_left, fig5_right).
    Preset {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(PRESETS))]
        name: String,
        #[arg(long)]
        out: PathBuf,
        /// Output format; defaults to JSON for a .json path and CSV otherwise.
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Cross-check every engine on a random scenario grid; exits 1 on failure.
    Validate {
        #[arg(long, default_value_t = 200)]
        grid_points: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Args)]
struct MaterialArgs {
    /// Mass in units of the free electron mass.
    #[arg(long, default_value_t = 1.0)]
    mass_me: f64,
    /// Fermi velocity in m/s.
    #[arg(long, default_value_t = 1e6)]
    vfermi: f64,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum, default_value_t = ModelArg::FourByFour)]
    model: ModelArg,
    /// Representation of η for the 4x4 model.
    #[arg(long, value_enum, default_value_t = RepArg::A)]
    rep: RepArg,
}

impl ModelArgs {
    fn tag(&self) -> RepTag {
        match (self.model, self.rep) {
            (ModelArg::TwoByTwo, _) => RepTag::TwoByTwo,
            (ModelArg::FourByFour, RepArg::A) => RepTag::FourRepA,
            (ModelArg::FourByFour, RepArg::B) => RepTag::FourRepB,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    #[value(name = "2x2")]
    TwoByTwo,
    #[value(name = "4x4")]
    FourByFour,
}

#[derive(Clone, Copy, ValueEnum)]
enum RepArg {
    A,
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Closed,
    Oracle,
    Schrodinger,
    All,
}

impl EngineArg {
    fn engines(self) -> Vec<Engine> {
        match self {
            EngineArg::Closed => vec![Engine::Closed],
            EngineArg::Oracle => vec![Engine::Oracle],
            EngineArg::Schrodinger => vec![Engine::Schrodinger],
            EngineArg::All => Engine::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VarArg {
    Angle,
    Width,
    Energy,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

/// Bad physical input counts as a usage error.
fn is_usage_error(err: &anyhow::Error) -> bool {
    matches!(
        err.downcast_ref::<TunnelError>(),
        Some(
            TunnelError::InvalidScenario(_)
                | TunnelError::DegenerateEnergy
                | TunnelError::ResonantEdge { .. }
                | TunnelError::QxZero
                | TunnelError::InvalidSweep(_)
        )
    )
}

fn scenario(
    energy: f64,
    barrier: f64,
    width: f64,
    angle: f64,
    m: &MaterialArgs,
) -> PhysicalScenario {
    PhysicalScenario::new(energy, barrier, width, angle)
        .with_mass(m.mass_me)
        .with_fermi_velocity(m.vfermi)
}

fn run_single(s: PhysicalScenario, rep: RepTag, engines: &[Engine]) -> anyhow::Result<()> {
    let kin = derive_kinematics(&s, &UnitSystem::default())?;
    let rows = evaluate_point(&s, rep, engines);
    let results: Vec<_> = rows
        .iter()
        .map(|r| {
            json!({
                "engine": r.engine,
                "T1": r.t1, "T2": r.t2, "R1": r.r1, "R2": r.r2,
                "unitarity_resid": r.unitarity_resid,
                "cond": r.cond,
                "status": r.status.to_string(),
            })
        })
        .collect();
    let out = json!({
        "scenario": s,
        "rep": rep,
        "kinematics": {
            "kx": kin.kx,
            "ky": kin.ky,
            "qx": [kin.qx.re, kin.qx.im],
            "regime": kin.regime,
        },
        "results": results,
    });
    print_json(&out)?;
    Ok(())
}

fn print_json(value: &serde_json::Value) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn write(spec: &SweepSpec, format: Format, out: &Path) -> anyhow::Result<()> {
    let result = run_sweep(spec)?;
    emit(&result, format, out)?;
    eprintln!(
        "wrote {} rows to {} ({} flagged)",
        result.rows.len(),
        out.display(),
        result.flagged()
    );
    Ok(())
}

fn execute(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Run {
            energy,
            barrier,
            width,
            angle,
            material,
            model,
            engine,
        } => {
            run_single(
                scenario(energy, barrier, width, angle, &material),
                model.tag(),
                &engine.engines(),
            )?;
        }
        Command::Sweep {
            var,
            from,
            to,
            points,
            energy,
            barrier,
            width,
            angle,
            material,
            model,
            engine,
            out,
            format,
        } => {
            let variable = match var {
                VarArg::Angle => SweepVariable::Angle,
                VarArg::Width => SweepVariable::Width,
                VarArg::Energy => SweepVariable::Energy,
            };
            let spec = SweepSpec {
                variable,
                start: from,
                stop: to,
                count: points,
                fixed: scenario(energy, barrier, width, angle, &material),
                rep: model.tag(),
                engines: engine.engines(),
            };
            write(&spec, format.into(), &out)?;
        }
        Command::Preset { name, out, format } => {
            let spec = preset(&name).with_context(|| format!("unknown preset {name}"))?;
            let format = format.map(Format::from).unwrap_or_else(|| {
                if out.extension().is_some_and(|e| e == "json") {
                    Format::Json
                } else {
                    Format::Csv
                }
            });
            write(&spec, format, &out)?;
        }
        Command::Validate { grid_points, seed } => {
            let report = validate(&GridSpec::default().with_points(grid_points).with_seed(seed));
            print_json(&serde_json::to_value(&report)?)?;
            for c in &report.checks {
                eprintln!(
                    "{} {:<28} worst {:.3e} (tol {:.0e})",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.worst,
                    c.tolerance
                );
            }
            if !report.passed() {
                return Ok(ExitCode::from(EXIT_VALIDATION));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn is_broken_pipe(err: &anyhow::Error) -> bool {
    let kind = err
        .downcast_ref::<std::io::Error>()
        .map(|e| e.kind())
        .or_else(|| {
            err.downcast_ref::<serde_json::Error>()
                .and_then(|e| e.io_error_kind())
        });
    kind == Some(std::io::ErrorKind::BrokenPipe)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(err) if is_broken_pipe(&err) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if is_usage_error(&err) {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
