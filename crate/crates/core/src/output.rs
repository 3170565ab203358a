//! CSV and JSON persistence of sweep results.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::clifford::RepTag;
use crate::error::{Result, TunnelError};
use crate::sweep::{SweepResult, SweepRow};

pub const CSV_HEADER: [&str; 13] = [
    "phi_rad",
    "d_nm",
    "E_meV",
    "V0_meV",
    "engine",
    "rep",
    "T1",
    "T2",
    "R1",
    "R2",
    "unitarity_resid",
    "cond",
    "status",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Scientific notation with 12 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.11e}")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> TunnelError + '_ {
    move |source| TunnelError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn write_csv<W: Write>(result: &SweepResult, out: W) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in &result.rows {
        w.write_record([
            fmt_num(r.phi_rad),
            fmt_num(r.d_nm),
            fmt_num(r.e_mev),
            fmt_num(r.v0_mev),
            r.engine.to_string(),
            r.rep.to_string(),
            fmt_num(r.t1),
            fmt_num(r.t2),
            fmt_num(r.r1),
            fmt_num(r.r2),
            fmt_num(r.unitarity_resid),
            fmt_num(r.cond),
            r.status.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write, T: Serialize>(value: &T, mut out: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)
}

pub fn emit(result: &SweepResult, format: Format, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    match format {
        Format::Csv => write_csv(result, &mut out).map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(source) => TunnelError::Io {
                path: path.to_path_buf(),
                source,
            },
            other => TunnelError::Parse(format!("{other:?}")),
        })?,
        Format::Json => write_json(result, &mut out).map_err(io_err(path))?,
    }
    out.flush().map_err(io_err(path))
}

fn parse_rep(s: &str) -> Result<RepTag> {
    [RepTag::TwoByTwo, RepTag::FourRepA, RepTag::FourRepB]
        .into_iter()
        .find(|r| r.label() == s)
        .ok_or_else(|| TunnelError::Parse(format!("unknown rep {s:?}")))
}

/// Reads rows written by [`write_csv`].
pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr
        .headers()
        .map_err(|e| TunnelError::Parse(e.to_string()))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(TunnelError::Parse(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| TunnelError::Parse(e.to_string()))?;
        let num = |i: usize| -> Result<f64> {
            rec[i].parse().map_err(|_| {
                TunnelError::Parse(format!(
                    "bad number {:?} in column {}",
                    &rec[i], CSV_HEADER[i]
                ))
            })
        };
        rows.push(SweepRow {
            phi_rad: num(0)?,
            d_nm: num(1)?,
            e_mev: num(2)?,
            v0_mev: num(3)?,
            engine: rec[4].parse()?,
            rep: parse_rep(&rec[5])?,
            t1: num(6)?,
            t2: num(7)?,
            r1: num(8)?,
            r2: num(9)?,
            unitarity_resid: num(10)?,
            cond: num(11)?,
            status: rec[12].parse()?,
        });
    }
    Ok(rows)
}

pub fn read_csv_file(path: &Path) -> Result<Vec<SweepRow>> {
    read_csv(File::open(path).map_err(io_err(path))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.1), "1.00000000000e-1");
        assert_eq!(fmt_num(-1234.5), "-1.23450000000e3");
        assert_eq!(fmt_num(f64::NAN), "NaN");
        assert!(fmt_num(f64::NAN).parse::<f64>().unwrap().is_nan());
    }

    #[test]
    fn rejects_foreign_header() {
        assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
    }
}
