//! Deterministic, atomic file output and datum input.
//!
//! Every writer builds the full byte content in memory, writes it to a
//! temporary file in the destination directory, and renames it into
//! place, so readers never observe partial files. Floats print in
//! Rust's shortest round-trip form and rows follow fixed orderings, so
//! identical inputs produce bit-identical files. No wall-clock content
//! appears in any output.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::CoefficientCheckRow;
use crate::pde::{grid_values, Snapshot};
use crate::scattering::{InitialDatum, ReflectionData};

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

/// Shortest round-trip decimal form; negative zero normalizes to "0".
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

/// Complex value as "re,im" pair already split by the caller, or as a
/// single algebraic token "a+bi" for mixed columns.
pub fn fmt_complex(z: Complex64) -> String {
    let re = fmt_float(z.re);
    let im = z.im;
    if im >= 0.0 || im.is_nan() {
        format!("{re}+{}i", fmt_float(im))
    } else {
        format!("{re}-{}i", fmt_float(-im))
    }
}

/// Write bytes to `path` atomically (temp file in the same directory,
/// then rename). Creates parent directories as needed.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir)?;
    let stamp = TEMP_COUNTER.fetch_add(1, Ordering::Relaxed);
    let name = path
        .file_name()
        .ok_or_else(|| Error::Usage(format!("not a file path: {}", path.display())))?
        .to_string_lossy()
        .into_owned();
    let tmp = dir.join(format!(".{name}.tmp.{}.{stamp}", std::process::id()));
    fs::write(&tmp, bytes)?;
    match fs::rename(&tmp, path) {
        Ok(()) => Ok(()),
        Err(e) => {
            let _ = fs::remove_file(&tmp);
            Err(e.into())
        }
    }
}

/// Write a CSV file with the given header and rows, atomically.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        if row.len() != header.len() {
            return Err(Error::Usage(format!(
                "row width {} does not match header width {}",
                row.len(),
                header.len()
            )));
        }
        w.write_record(row)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Usage(format!("csv buffer error: {e}")))?;
    atomic_write(path, &bytes)
}

/// Serialize a value as pretty JSON (trailing newline), atomically.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    atomic_write(path, &bytes)
}

/// Read an initial datum from a two-column CSV (x, u0). A header row is
/// optional; any first row whose fields do not parse as numbers is
/// skipped. The grid must be uniform and the values must decay at the
/// edges (validated by the datum constructor).
pub fn read_datum_csv(path: &Path) -> Result<InitialDatum> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_path(path)
        .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut xs = Vec::new();
    let mut us = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        if record.len() < 2 {
            return Err(Error::Usage(format!(
                "{}: row {} has {} fields, need 2 (x, u0)",
                path.display(),
                i + 1,
                record.len()
            )));
        }
        let parsed: std::result::Result<(f64, f64), _> = record[0]
            .trim()
            .parse::<f64>()
            .and_then(|x| record[1].trim().parse::<f64>().map(|u| (x, u)));
        match parsed {
            Ok((x, u)) => {
                xs.push(x);
                us.push(u);
            }
            Err(_) if i == 0 => continue, // header row
            Err(e) => {
                return Err(Error::Usage(format!(
                    "{}: row {} is not numeric: {e}",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    InitialDatum::from_samples(xs, us)
}

/// Write a datum as the two-column CSV the reader accepts.
pub fn write_datum_csv(path: &Path, datum: &InitialDatum) -> Result<()> {
    let rows: Vec<Vec<String>> = datum
        .grid
        .iter()
        .zip(datum.values.iter())
        .map(|(&x, &u)| vec![fmt_float(x), fmt_float(u)])
        .collect();
    write_csv(path, &["x", "u0"], &rows)
}

#[derive(Serialize)]
struct ReflectionHeader {
    r0: [f64; 2],
    r0_prime: [f64; 2],
    r0_second: [f64; 2],
    sup_abs_r: f64,
    unitarity_residual: f64,
    symmetry_residual: f64,
}

/// Write reflection data as reflection.csv (k, re_r, im_r) plus
/// reflection.json (derivatives at 0 and certificates). Returns the
/// two paths.
pub fn write_reflection(dir: &Path, rd: &ReflectionData) -> Result<(PathBuf, PathBuf)> {
    let csv_path = dir.join("reflection.csv");
    let rows: Vec<Vec<String>> = rd
        .k_grid
        .iter()
        .zip(rd.r_values.iter())
        .map(|(&k, r)| vec![fmt_float(k), fmt_float(r.re), fmt_float(r.im)])
        .collect();
    write_csv(&csv_path, &["k", "re_r", "im_r"], &rows)?;
    let json_path = dir.join("reflection.json");
    write_json(
        &json_path,
        &ReflectionHeader {
            r0: [rd.r0.re, rd.r0.im],
            r0_prime: [rd.r0_prime.re, rd.r0_prime.im],
            r0_second: [rd.r0_second.re, rd.r0_second.im],
            sup_abs_r: rd.sup_abs,
            unitarity_residual: rd.unitarity_residual,
            symmetry_residual: rd.symmetry_residual(),
        },
    )?;
    Ok((csv_path, json_path))
}

/// File-name-safe rendering of a time value: "160", "2.5" -> "2p5".
pub fn time_tag(t: f64) -> String {
    fmt_float(t).replace('.', "p").replace('-', "m")
}

/// Write one evolution snapshot on its native grid as
/// snapshot_t{tag}.csv with columns x, u. Returns the path.
pub fn write_snapshot_csv(dir: &Path, snap: &Snapshot) -> Result<PathBuf> {
    let (xs, us) = grid_values(&snap.state);
    let rows: Vec<Vec<String>> = xs
        .iter()
        .zip(us.iter())
        .map(|(&x, &u)| vec![fmt_float(x), fmt_float(u)])
        .collect();
    let path = dir.join(format!("snapshot_t{}.csv", time_tag(snap.state.t)));
    write_csv(&path, &["x", "u"], &rows)?;
    Ok(path)
}

/// Write the asymptotic-coefficient table: columns y, u1, u2, u3.
/// Undefined coefficients (orders gated off) appear as empty cells.
pub fn write_coeffs_csv(
    path: &Path,
    ys: &[f64],
    u1: Option<&[f64]>,
    u2: Option<&[f64]>,
    u3: Option<&[f64]>,
) -> Result<()> {
    let cell = |col: Option<&[f64]>, i: usize| -> String {
        col.map(|v| fmt_float(v[i])).unwrap_or_default()
    };
    let rows: Vec<Vec<String>> = (0..ys.len())
        .map(|i| {
            vec![
                fmt_float(ys[i]),
                cell(u1, i),
                cell(u2, i),
                cell(u3, i),
            ]
        })
        .collect();
    write_csv(path, &["y", "u1", "u2", "u3"], &rows)
}

/// Write the model-coefficient verification table.
pub fn write_rh_table(path: &Path, rows: &[CoefficientCheckRow]) -> Result<()> {
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                fmt_float(r.y),
                fmt_float(r.p1),
                fmt_complex(r.p2),
                r.entry.clone(),
                fmt_complex(r.closed_form),
                fmt_complex(r.quadrature),
                fmt_float(r.abs_err),
            ]
        })
        .collect();
    write_csv(
        path,
        &["y", "p1", "p2", "entry", "closed_form", "quadrature", "abs_err"],
        &table,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::Profile;

    fn tmpdir() -> tempfile::TempDir {
        tempfile::tempdir().unwrap()
    }

    #[test]
    fn atomic_write_leaves_no_temp_files() {
        let dir = tmpdir();
        let path = dir.path().join("sub").join("a.txt");
        atomic_write(&path, b"hello").unwrap();
        assert_eq!(fs::read(&path).unwrap(), b"hello");
        let entries: Vec<_> = fs::read_dir(path.parent().unwrap())
            .unwrap()
            .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
            .collect();
        assert_eq!(entries, vec!["a.txt"]);
    }

    #[test]
    fn float_formatting_round_trips() {
        for &x in &[0.1, -2.5e-9, 3.0, 1.0 / 3.0, -0.0, 12345.6789] {
            let s = fmt_float(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, if x == 0.0 { 0.0 } else { x }, "{s}");
        }
        assert_eq!(fmt_float(-0.0), "0");
        assert_eq!(fmt_complex(Complex64::new(1.5, -2.0)), "1.5-2i");
        assert_eq!(fmt_complex(Complex64::new(0.0, 1.0)), "0+1i");
    }

    #[test]
    fn datum_csv_round_trip_and_header_skip() {
        let dir = tmpdir();
        let path = dir.path().join("datum.csv");
        let datum = InitialDatum::from_profile(
            Profile::Sech {
                eps: 0.1,
                center: 0.0,
            },
            40.0,
            0.05,
        )
        .unwrap();
        write_datum_csv(&path, &datum).unwrap();
        let back = read_datum_csv(&path).unwrap();
        assert_eq!(back.grid.len(), datum.grid.len());
        let worst = datum
            .grid
            .iter()
            .map(|&x| (datum.eval(x) - back.eval(x)).abs())
            .fold(0.0_f64, f64::max);
        assert!(worst < 1e-12, "round-trip error {worst:.3e}");
        // Headerless file parses too.
        let body = fs::read_to_string(&path).unwrap();
        let headerless: String = body.lines().skip(1).collect::<Vec<_>>().join("\n");
        let path2 = dir.path().join("datum2.csv");
        fs::write(&path2, headerless).unwrap();
        let back2 = read_datum_csv(&path2).unwrap();
        assert_eq!(back2.grid.len(), datum.grid.len());
    }

    #[test]
    fn csv_output_is_deterministic() {
        let dir = tmpdir();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        let rows = vec![
            vec![fmt_float(1.0), fmt_float(0.5)],
            vec![fmt_float(2.0), fmt_float(-0.0)],
        ];
        write_csv(&a, &["t", "v"], &rows).unwrap();
        write_csv(&b, &["t", "v"], &rows).unwrap();
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    }

    #[test]
    fn coeff_table_handles_gated_columns() {
        let dir = tmpdir();
        let path = dir.path().join("coeffs.csv");
        let ys = [0.0, 1.0];
        let u1 = [0.1, 0.2];
        write_coeffs_csv(&path, &ys, Some(&u1), None, None).unwrap();
        let body = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = body.lines().collect();
        assert_eq!(lines[0], "y,u1,u2,u3");
        assert_eq!(lines[1], "0,0.1,,");
        assert_eq!(lines[2], "1,0.2,,");
    }
}
