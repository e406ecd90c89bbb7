use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use khull_core::report::Series;
use tempfile::NamedTempFile;

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).with_context(|| format!("creating a temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// 17 significant digits: enough to round-trip every `f64`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

/// CSV with a `# khull config_hash=...` comment line before the header.
pub fn csv_bytes(hash: &str, header: &[String], rows: impl Iterator<Item = Vec<f64>>) -> Result<Vec<u8>> {
    let mut out = format!("# khull config_hash={hash}\n").into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(header)?;
        for r in rows {
            w.write_record(r.iter().map(|v| fmt_f64(*v)))?;
        }
        w.flush()?;
    }
    Ok(out)
}

pub fn series_csv(hash: &str, s: &Series) -> Result<Vec<u8>> {
    let header: Vec<String> = s.columns.iter().map(|(n, _)| n.clone()).collect();
    let len = s.columns.first().map_or(0, |c| c.1.len());
    csv_bytes(hash, &header, (0..len).map(|i| s.columns.iter().map(|c| c.1[i]).collect()))
}

/// `report.json` → `report.<group>.csv`.
pub fn sidecar_path(out: &Path, group: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.{group}.csv"))
}

pub fn json_bytes(v: &serde_json::Value) -> Vec<u8> {
    let mut b = serde_json::to_vec_pretty(v).expect("values serialise");
    b.push(b'\n');
    b
}

/// Writes to `out`, or to stdout without one.
pub fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, bytes),
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

/// Numeric rows; `#` starts a comment line.
pub fn read_points(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let row = rec
            .iter()
            .enumerate()
            .map(|(j, f)| {
                f.parse::<f64>().map_err(|_| {
                    crate::Validation(format!("{}: row {}, column {}: `{f}` is not a number", path.display(), i + 1, j + 1))
                })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 1e300, std::f64::consts::PI] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_has_hash_line() {
        let b = csv_bytes("abc", &["a".into(), "b".into()], vec![vec![1.0, 2.0]].into_iter()).unwrap();
        let s = String::from_utf8(b).unwrap();
        assert!(s.starts_with("# khull config_hash=abc\na,b\n"));
    }

    #[test]
    fn sidecar_names() {
        assert_eq!(sidecar_path(Path::new("out/report.json"), "limit"), Path::new("out/report.limit.csv"));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.json");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
