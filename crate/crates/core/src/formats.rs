//! Plain-text file formats.
//!
//! Every float is written with 17 significant digits so values survive a
//! write/read round trip bit for bit. Lines starting with `#` carry
//! `key=value` metadata and are otherwise ignored by the readers.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockOutcome, OutcomeDistribution};
use crate::gaussian::{ComplexMatrix, CovarianceMatrix, RealMatrix};
use crate::homodyne::DualHomodyneSample;

/// `key=value` pairs collected from `#` lines.
pub type Metadata = BTreeMap<String, String>;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn complex(z: Complex64) -> String {
    format!("{:.16e}{:+.16e}j", z.re, z.im)
}

fn write_metadata(out: &mut String, meta: &Metadata) {
    if meta.is_empty() {
        return;
    }
    let pairs: Vec<String> = meta.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let _ = writeln!(out, "# {}", pairs.join(" "));
}

/// Data lines with their 1-based line numbers, plus all metadata.
fn split_lines(text: &str) -> (Vec<(usize, &str)>, Metadata) {
    let mut data = Vec::new();
    let mut meta = Metadata::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('#') {
            for token in comment.split_whitespace() {
                if let Some((k, v)) = token.split_once('=') {
                    meta.insert(k.to_string(), v.to_string());
                }
            }
        } else if !line.is_empty() {
            data.push((i + 1, line));
        }
    }
    (data, meta)
}

fn parse_f64(line: usize, s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| parse_err(line, format!("bad number {s:?}")))
}

fn parse_complex(line: usize, s: &str) -> Result<Complex64> {
    let s = s.trim();
    let body = s
        .strip_suffix('j')
        .ok_or_else(|| parse_err(line, format!("complex value {s:?} lacks trailing j")))?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
        .ok_or_else(|| parse_err(line, format!("complex value {s:?} lacks imaginary part")))?;
    Ok(Complex64::new(parse_f64(line, &body[..split])?, parse_f64(line, &body[split..])?))
}

fn meta_usize(meta: &Metadata, key: &str) -> Result<Option<usize>> {
    meta.get(key)
        .map(|v| v.parse().map_err(|_| parse_err(1, format!("bad {key}={v}"))))
        .transpose()
}

/// Covariance matrix file: header `# modes=m ordering=xpxp vacuum=1`, then
/// `2m` rows of comma-separated values.
pub fn write_covariance(cov: &CovarianceMatrix, meta: &Metadata) -> String {
    let mut out = format!("# modes={} ordering=xpxp vacuum=1\n", cov.modes());
    write_metadata(&mut out, meta);
    for row in cov.matrix().row_iter() {
        let cells: Vec<String> = row.iter().map(|&x| real(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_covariance(text: &str) -> Result<(CovarianceMatrix, Metadata)> {
    let (lines, meta) = split_lines(text);
    if let Some(ordering) = meta.get("ordering") {
        if ordering != "xpxp" {
            return Err(parse_err(1, format!("unsupported ordering {ordering}")));
        }
    }
    let n = lines.len();
    if let Some(m) = meta_usize(&meta, "modes")? {
        if 2 * m != n {
            return Err(parse_err(1, format!("header declares {m} modes but found {n} rows")));
        }
    }
    let mut values = Vec::with_capacity(n * n);
    for &(no, line) in &lines {
        let row: Vec<f64> = line.split(',').map(|c| parse_f64(no, c)).collect::<Result<_>>()?;
        if row.len() != n {
            return Err(parse_err(no, format!("expected {n} columns, found {}", row.len())));
        }
        values.extend(row);
    }
    let cov = CovarianceMatrix::new(RealMatrix::from_row_slice(n, n, &values))?;
    Ok((cov, meta))
}

/// Complex CSV, one matrix row per line, entries as `re+imj`.
pub fn write_unitary(u: &ComplexMatrix, meta: &Metadata) -> String {
    let mut out = String::new();
    write_metadata(&mut out, meta);
    for row in u.row_iter() {
        let cells: Vec<String> = row.iter().map(|&z| complex(z)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_unitary(text: &str) -> Result<(ComplexMatrix, Metadata)> {
    let (lines, meta) = split_lines(text);
    let n = lines.len();
    let mut values = Vec::with_capacity(n * n);
    for &(no, line) in &lines {
        let row: Vec<Complex64> = line.split(',').map(|c| parse_complex(no, c)).collect::<Result<_>>()?;
        if row.len() != n {
            return Err(parse_err(no, format!("expected {n} columns, found {}", row.len())));
        }
        values.extend(row);
    }
    Ok((ComplexMatrix::from_row_slice(n, n, &values), meta))
}

fn quadrature_header(modes: usize) -> String {
    (1..=modes).map(|k| format!("x{k},p{k}")).collect::<Vec<_>>().join(",")
}

/// Dual-homodyne records with header `x1,p1,...,xm,pm`.
pub fn write_homodyne_samples(modes: usize, samples: &[DualHomodyneSample], meta: &Metadata) -> Result<String> {
    let mut out = String::new();
    write_metadata(&mut out, meta);
    out.push_str(&quadrature_header(modes));
    out.push('\n');
    for s in samples {
        if s.modes() != modes {
            return Err(Error::DimensionMismatch(s.modes(), modes));
        }
        let cells: Vec<String> = s.values().iter().map(|&x| real(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_homodyne_samples(text: &str) -> Result<(Vec<DualHomodyneSample>, Metadata)> {
    let (lines, meta) = split_lines(text);
    let Some((&(hno, header), rows)) = lines.split_first() else {
        return Err(parse_err(1, "missing header"));
    };
    let cols = header.split(',').count();
    if cols % 2 != 0 || header != quadrature_header(cols / 2) {
        return Err(parse_err(hno, format!("unexpected header {header:?}")));
    }
    let mut samples = Vec::with_capacity(rows.len());
    for &(no, line) in rows {
        let values: Vec<f64> = line.split(',').map(|c| parse_f64(no, c)).collect::<Result<_>>()?;
        if values.len() != cols {
            return Err(parse_err(no, format!("expected {cols} columns, found {}", values.len())));
        }
        samples.push(DualHomodyneSample::new(values)?);
    }
    Ok((samples, meta))
}

fn count_header(modes: usize) -> String {
    (1..=modes).map(|k| format!("n{k}")).collect::<Vec<_>>().join(",")
}

fn fock_meta(out: &mut String, cutoff: u32, mass: f64, seed: u64, meta: &Metadata) {
    let _ = writeln!(out, "# cutoff={cutoff} mass={} seed={seed}", real(mass));
    write_metadata(out, meta);
}

fn parse_counts(no: usize, cells: &[&str]) -> Result<FockOutcome> {
    let counts = cells
        .iter()
        .map(|c| c.trim().parse::<u32>().map_err(|_| parse_err(no, format!("bad count {c:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(FockOutcome::new(counts))
}

fn fock_header<'a>(lines: &'a [(usize, &'a str)], suffix: &str) -> Result<(usize, &'a [(usize, &'a str)])> {
    let Some((&(hno, header), rows)) = lines.split_first() else {
        return Err(parse_err(1, "missing header"));
    };
    let body = header.strip_suffix(suffix).unwrap_or(header);
    let modes = body.split(',').count();
    if body.is_empty() || body != count_header(modes) || (!suffix.is_empty() && !header.ends_with(suffix)) {
        return Err(parse_err(hno, format!("unexpected header {header:?}")));
    }
    Ok((modes, rows))
}

/// Distribution CSV `n1,...,nm,probability`.
pub fn write_distribution(dist: &OutcomeDistribution, seed: u64, meta: &Metadata) -> String {
    let mut out = String::new();
    fock_meta(&mut out, dist.cutoff(), dist.mass(), seed, meta);
    let _ = writeln!(out, "{},probability", count_header(dist.modes()));
    for (o, p) in dist.iter() {
        let counts: Vec<String> = o.occupations().iter().map(u32::to_string).collect();
        let _ = writeln!(out, "{},{}", counts.join(","), real(p));
    }
    out
}

pub fn parse_distribution(text: &str) -> Result<(OutcomeDistribution, Metadata)> {
    let (lines, meta) = split_lines(text);
    let (modes, rows) = fock_header(&lines, ",probability")?;
    let mut entries = BTreeMap::new();
    for &(no, line) in rows {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != modes + 1 {
            return Err(parse_err(no, format!("expected {} columns, found {}", modes + 1, cells.len())));
        }
        entries.insert(parse_counts(no, &cells[..modes])?, parse_f64(no, cells[modes])?);
    }
    let cutoff = match meta.get("cutoff") {
        Some(v) => v.parse().map_err(|_| parse_err(1, format!("bad cutoff={v}")))?,
        None => entries.keys().map(FockOutcome::total).max().unwrap_or(0),
    };
    Ok((OutcomeDistribution::new(modes, cutoff, entries)?, meta))
}

/// Sample CSV `n1,...,nm`, one outcome per row.
pub fn write_fock_samples(
    modes: usize,
    samples: &[FockOutcome],
    cutoff: u32,
    mass: f64,
    seed: u64,
    meta: &Metadata,
) -> Result<String> {
    let mut out = String::new();
    fock_meta(&mut out, cutoff, mass, seed, meta);
    let _ = writeln!(out, "{}", count_header(modes));
    for s in samples {
        if s.modes() != modes {
            return Err(Error::DimensionMismatch(s.modes(), modes));
        }
        let counts: Vec<String> = s.occupations().iter().map(u32::to_string).collect();
        let _ = writeln!(out, "{}", counts.join(","));
    }
    Ok(out)
}

pub fn parse_fock_samples(text: &str) -> Result<(Vec<FockOutcome>, Metadata)> {
    let (lines, meta) = split_lines(text);
    let (modes, rows) = fock_header(&lines, "")?;
    let mut samples = Vec::with_capacity(rows.len());
    for &(no, line) in rows {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != modes {
            return Err(parse_err(no, format!("expected {modes} columns, found {}", cells.len())));
        }
        samples.push(parse_counts(no, &cells)?);
    }
    Ok((samples, meta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::haar_random_unitary;
    use crate::fock::enumerate_distribution;
    use crate::gaussian::GaussianState;

    fn meta() -> Metadata {
        Metadata::from([("config_hash".to_string(), "abc123".to_string())])
    }

    #[test]
    fn covariance_round_trip_is_exact() {
        let state = GaussianState::vacuum(2)
            .unwrap()
            .two_mode_squeeze(0, 1, 0.5)
            .unwrap()
            .squeeze_single(0, 0.123456789)
            .unwrap();
        let text = write_covariance(state.covariance(), &meta());
        assert!(text.starts_with("# modes=2 ordering=xpxp vacuum=1\n"));
        let (back, m) = parse_covariance(&text).unwrap();
        assert_eq!(back.matrix(), state.covariance().matrix());
        assert_eq!(m["config_hash"], "abc123");
        assert_eq!(m["modes"], "2");
    }

    #[test]
    fn covariance_rejects_malformed() {
        assert!(parse_covariance("# modes=2\n1,0\n0,1\n").is_err());
        assert!(matches!(parse_covariance("1,0\n0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_covariance("1,0\n1,1\n").is_err());
    }

    #[test]
    fn unitary_round_trip_is_exact() {
        let u = haar_random_unitary(3, 11).unwrap();
        let text = write_unitary(u.unitary(), &Metadata::new());
        let (back, _) = parse_unitary(&text).unwrap();
        assert_eq!(&back, u.unitary());
        assert_eq!(parse_complex(1, "1e-3-2.5e+2j").unwrap(), Complex64::new(1e-3, -250.0));
        assert_eq!(parse_complex(1, "-1+0j").unwrap(), Complex64::new(-1.0, 0.0));
        assert!(parse_complex(1, "1.0").is_err());
    }

    #[test]
    fn homodyne_round_trip() {
        let samples = vec![
            DualHomodyneSample::new(vec![0.1, -0.2, 1.0 / 3.0, 4.0]).unwrap(),
            DualHomodyneSample::new(vec![0.0, 0.0, -1e-300, 7.5]).unwrap(),
        ];
        let text = write_homodyne_samples(2, &samples, &meta()).unwrap();
        assert!(text.contains("\nx1,p1,x2,p2\n"));
        let (back, _) = parse_homodyne_samples(&text).unwrap();
        assert_eq!(back, samples);
        assert!(parse_homodyne_samples("x1,p2\n1,2\n").is_err());
    }

    #[test]
    fn distribution_and_samples_round_trip() {
        let state = GaussianState::vacuum(2).unwrap().two_mode_squeeze(0, 1, 0.4).unwrap();
        let dist = enumerate_distribution(&state, 4).unwrap();
        let text = write_distribution(&dist, 9, &meta());
        assert!(text.contains("# cutoff=4 mass="));
        assert!(text.contains("n1,n2,probability\n"));
        let (back, m) = parse_distribution(&text).unwrap();
        assert_eq!(back, dist);
        assert_eq!(m["seed"], "9");

        let samples = vec![FockOutcome::new(vec![1, 1]), FockOutcome::vacuum(2)];
        let text = write_fock_samples(2, &samples, 4, dist.mass(), 9, &Metadata::new()).unwrap();
        let (back, m) = parse_fock_samples(&text).unwrap();
        assert_eq!(back, samples);
        assert_eq!(m["cutoff"], "4");
        assert!(parse_fock_samples("n1,n3\n0,0\n").is_err());
    }
}
