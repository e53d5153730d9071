//! CSV and JSON writers.
//!
//! CSV files have a header row, `,` separators and `\n` line endings.
//! Floats are written in scientific notation with 17 significant digits, so
//! they parse back to the same `f64`. Files are named `<name>_<role>.csv`.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::classical_map::{SectionPoint, SpinVector};
use crate::ensemble::{ChannelDistribution, TransitionMatrix};
use crate::params::SystemParams;
use crate::semiclassics::CompareRow;

/// Round-trip exact float text.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Accumulates CSV text in memory.
#[derive(Debug, Clone, Default)]
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        let mut csv = Csv::default();
        csv.row(header.iter().map(|h| h.as_ref().to_string()));
        csv
    }

    pub fn row<I: IntoIterator<Item = String>>(&mut self, cells: I) {
        let mut first = true;
        for c in cells {
            if !first {
                self.text.push(',');
            }
            self.text.push_str(&c);
            first = false;
        }
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

pub fn sos_csv(points: &[SectionPoint]) -> Csv {
    let mut csv = Csv::new(&["q", "ux", "uy", "uz"]);
    for p in points {
        let [x, y, z] = p.u.0;
        csv.row([p.q.to_string(), fmt_f64(x), fmt_f64(y), fmt_f64(z)]);
    }
    csv
}

/// Ensemble positions; `q` is the kick after which they were taken.
pub fn snapshot_csv(snapshots: &[(usize, Vec<SpinVector>)]) -> Csv {
    let mut csv = Csv::new(&["q", "ux", "uy", "uz"]);
    for (q, us) in snapshots {
        for u in us {
            let [x, y, z] = u.0;
            csv.row([q.to_string(), fmt_f64(x), fmt_f64(y), fmt_f64(z)]);
        }
    }
    csv
}

/// Long-format channel distributions, one row per `(q, N)`; the first
/// entry is kick 1.
pub fn distributions_csv(dists: &[ChannelDistribution], params: &SystemParams) -> Csv {
    let mut csv = Csv::new(&["q", "N", "p"]);
    for (i, d) in dists.iter().enumerate() {
        for (n, p) in params.channels().zip(&d.p) {
            csv.row([(i + 1).to_string(), n.to_string(), fmt_f64(*p)]);
        }
    }
    csv
}

/// A per-kick curve such as `M` or `H`; the first value is kick 1.
pub fn curve_csv(column: &str, values: &[f64]) -> Csv {
    let mut csv = Csv::new(&["q", column]);
    for (i, v) in values.iter().enumerate() {
        csv.row([(i + 1).to_string(), fmt_f64(*v)]);
    }
    csv
}

pub fn compare_csv(rows: &[CompareRow]) -> Csv {
    let mut csv = Csv::new(&["q", "H", "M", "absdiff"]);
    for r in rows {
        csv.row([
            r.q.to_string(),
            fmt_f64(r.h),
            fmt_f64(r.m),
            fmt_f64(r.deviation),
        ]);
    }
    csv
}

/// Grid with destination channels as rows and source channels as columns.
pub fn transition_matrix_csv(tm: &TransitionMatrix, params: &SystemParams) -> Csv {
    matrix_csv(&tm.p, params)
}

pub fn matrix_csv(m: &DMatrix<f64>, params: &SystemParams) -> Csv {
    let mut header = vec!["N".to_string()];
    header.extend(params.channels().map(|n| n.to_string()));
    let mut csv = Csv::new(&header);
    for (i, n) in params.channels().enumerate() {
        csv.row(std::iter::once(n.to_string()).chain((0..m.ncols()).map(|j| fmt_f64(m[(i, j)]))));
    }
    csv
}

/// S-matrix elements `S[N, N′]` as `(re, im)` pairs.
pub fn smatrix_csv(s: &DMatrix<Complex64>, params: &SystemParams) -> Csv {
    let mut csv = Csv::new(&["N", "Nprime", "re", "im"]);
    for (i, n) in params.channels().enumerate() {
        for (j, np) in params.channels().enumerate() {
            let z = s[(i, j)];
            csv.row([n.to_string(), np.to_string(), fmt_f64(z.re), fmt_f64(z.im)]);
        }
    }
    csv
}

/// Output directory plus file prefix.
#[derive(Debug, Clone)]
pub struct RunDir {
    pub dir: PathBuf,
    pub name: String,
}

impl RunDir {
    pub fn create(dir: impl AsRef<Path>, name: &str) -> io::Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(RunDir {
            dir: dir.as_ref().to_path_buf(),
            name: name.to_string(),
        })
    }

    pub fn path(&self, role: &str, ext: &str) -> PathBuf {
        self.dir.join(format!("{}_{role}.{ext}", self.name))
    }

    pub fn write_csv(&self, role: &str, csv: &Csv) -> io::Result<PathBuf> {
        let p = self.path(role, "csv");
        fs::write(&p, csv.as_str())?;
        Ok(p)
    }

    pub fn write_json(&self, role: &str, value: &serde_json::Value) -> io::Result<PathBuf> {
        let p = self.path(role, "json");
        let mut text = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
        text.push('\n');
        fs::write(&p, text)?;
        Ok(p)
    }

    pub fn write_text(&self, role: &str, ext: &str, text: &str) -> io::Result<PathBuf> {
        let p = self.path(role, ext);
        fs::write(&p, text)?;
        Ok(p)
    }
}

/// Parses a CSV written by this module back into header and rows.
pub fn read_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines
        .next()
        .map(|h| h.split(',').map(str::to_string).collect())
        .unwrap_or_default();
    let rows = lines
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (header, rows)
}

/// One-line human summary of a curve.
pub fn describe_curve(label: &str, values: &[f64]) -> String {
    let mut s = String::new();
    let last = values.last().copied().unwrap_or(f64::NAN);
    let max = values.iter().copied().fold(f64::NAN, f64::max);
    let _ = write!(
        s,
        "{label}: {} kicks, final {last:.4}, max {max:.4}",
        values.len()
    );
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> SystemParams {
        SystemParams::new(1.0, 1, 5, 5, 1.0, 1.0).unwrap()
    }

    #[test]
    fn floats_round_trip() {
        for x in [
            0.1,
            1.0 / 3.0,
            -2.5e-300,
            6.02214076e23,
            0.0,
            1.0 - f64::EPSILON,
        ] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn curve_layout() {
        let csv = curve_csv("M", &[0.25, 0.5]);
        assert_eq!(
            csv.as_str(),
            "q,M\n1,2.5000000000000000e-1\n2,5.0000000000000000e-1\n"
        );
        let (h, rows) = read_csv(csv.as_str());
        assert_eq!(h, ["q", "M"]);
        assert_eq!(rows.len(), 2);
    }

    #[test]
    fn distributions_are_long_format() {
        let p = params();
        let d = ChannelDistribution::new(vec![0.25, 0.5, 0.25]).unwrap();
        let csv = distributions_csv(&[d.clone(), d], &p);
        let (h, rows) = read_csv(csv.as_str());
        assert_eq!(h, ["q", "N", "p"]);
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[4][..2], ["2".to_string(), "5".to_string()]);
    }

    #[test]
    fn matrix_grid_has_channel_headers() {
        let p = params();
        let csv = matrix_csv(&DMatrix::identity(3, 3), &p);
        let (h, rows) = read_csv(csv.as_str());
        assert_eq!(h, ["N", "4", "5", "6"]);
        assert_eq!(rows[1][0], "5");
        assert_eq!(rows[1][2].parse::<f64>().unwrap(), 1.0);
    }

    #[test]
    fn smatrix_pairs() {
        let p = params();
        let s = DMatrix::from_fn(3, 3, |i, j| Complex64::new(i as f64, j as f64));
        let (h, rows) = read_csv(smatrix_csv(&s, &p).as_str());
        assert_eq!(h, ["N", "Nprime", "re", "im"]);
        assert_eq!(rows.len(), 9);
        assert_eq!(rows[5][..2], ["5".to_string(), "6".to_string()]);
        assert_eq!(rows[5][3].parse::<f64>().unwrap(), 2.0);
    }

    #[test]
    fn run_dir_naming() {
        let tmp = tempfile::tempdir().unwrap();
        let rd = RunDir::create(tmp.path().join("x"), "fig2_a").unwrap();
        let path = rd.write_csv("H", &curve_csv("H", &[0.1])).unwrap();
        assert_eq!(path.file_name().unwrap(), "fig2_a_H.csv");
        assert!(path.exists());
    }
}
