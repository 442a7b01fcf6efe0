//! Text formats: CSV with full double precision, JSON, and two-column data
//! files for plotting.

use std::io::{Read, Write};

use serde::Serialize;

use crate::bounds::{fit_abscissa, BoundsRecord, BoundsRow};
use crate::error::{Error, Result};
use crate::spectrum::EigenLevel;
use crate::tf_model::PhiPoint;

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Config(format!("CSV error: {other:?}")),
    }
}

fn write_rows<W: Write>(out: W, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(csv_error)?;
    for row in rows {
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_phi_csv<W: Write>(out: W, table: &[PhiPoint]) -> Result<()> {
    write_rows(
        out,
        &["x", "phi", "dphi"],
        table.iter().map(|p| vec![fmt_f64(p.x), fmt_f64(p.phi), fmt_f64(p.dphi)]),
    )
}

pub fn write_levels_csv<W: Write>(out: W, levels: &[EigenLevel]) -> Result<()> {
    write_rows(
        out,
        &["ell", "n_r", "energy", "degeneracy"],
        levels.iter().map(|l| {
            vec![
                l.ell.to_string(),
                l.n_r.to_string(),
                fmt_f64(l.energy),
                l.degeneracy.to_string(),
            ]
        }),
    )
}

pub fn read_levels_csv<R: Read>(input: R) -> Result<Vec<EigenLevel>> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers().map_err(csv_error)?.clone();
    if headers.iter().collect::<Vec<_>>() != ["ell", "n_r", "energy", "degeneracy"] {
        return Err(Error::Config(format!("unexpected level header {headers:?}")));
    }
    let mut levels = Vec::new();
    for record in r.deserialize::<EigenLevel>() {
        let level = record.map_err(csv_error)?;
        if level.degeneracy != 2 * (2 * level.ell + 1) || !(level.energy < 0.0) {
            return Err(Error::Config(format!("inconsistent level {level:?}")));
        }
        levels.push(level);
    }
    Ok(levels)
}

pub fn write_bounds_csv<W: Write>(out: W, rows: &[BoundsRow]) -> Result<()> {
    write_rows(
        out,
        &[
            "Z",
            "upper_total",
            "lower_total",
            "upper_scaled",
            "lower_scaled",
            "gap",
            "correction_scaled",
            "occupied_deficit",
        ],
        rows.iter().map(|row| {
            let r = BoundsRecord::from(row);
            vec![
                r.z.to_string(),
                fmt_f64(r.upper_total),
                fmt_f64(r.lower_total),
                fmt_f64(r.upper_scaled),
                fmt_f64(r.lower_scaled),
                fmt_f64(r.gap),
                fmt_f64(r.correction_scaled),
                r.occupied_deficit.to_string(),
            ]
        }),
    )
}

/// Header line plus `(Z^{-1/3}, value)` pairs.
pub fn write_plot_data<W: Write>(mut out: W, label: &str, points: &[(u32, f64)]) -> Result<()> {
    writeln!(out, "# Z^(-1/3) {label}")?;
    for &(z, v) in points {
        writeln!(out, "{} {}", fmt_f64(fit_abscissa(z)), fmt_f64(v))?;
    }
    Ok(())
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(mut out: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Error::Config(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, -1.588071022611, 5e-324, 1.7976931348623157e308] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn level_csv_rejects_garbage() {
        assert!(read_levels_csv(&b"ell,n_r,energy,degeneracy\n0,0,abc,2\n"[..]).is_err());
        assert!(read_levels_csv(&b"a,b\n1,2\n"[..]).is_err());
        assert!(read_levels_csv(&b"ell,n_r,energy,degeneracy\n1,0,-1.0,2\n"[..]).is_err());
    }
}
