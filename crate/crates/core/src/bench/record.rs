use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Algorithm, Precision, Status};
use crate::complex::Method;
use crate::error::Result;

/// CSV header, in column order.
pub const CSV_COLUMNS: [&str; 12] = [
    "precision",
    "algorithm",
    "method",
    "kernel",
    "n",
    "K",
    "splits",
    "threads",
    "rep_median_seconds",
    "max_relerr",
    "seed",
    "status",
];

/// One benchmark observation. Field order matches [`CSV_COLUMNS`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub precision: Precision,
    pub algorithm: Algorithm,
    pub method: Method,
    pub kernel: String,
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    /// Empty for kernels other than Ozaki.
    pub splits: Option<usize>,
    pub threads: usize,
    pub rep_median_seconds: f64,
    /// Decimal string; `inf` when the factorization failed.
    pub max_relerr: String,
    pub seed: u64,
    pub status: Status,
}

/// Header plus one row per record.
pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(records: &[BenchRecord], path: impl AsRef<Path>) -> Result<()> {
    write_csv(records, std::fs::File::create(path)?)
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<BenchRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize().map(|rec| rec.map_err(Into::into)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> BenchRecord {
        BenchRecord {
            precision: Precision::Qd,
            algorithm: Algorithm::Blocked,
            method: Method::ThreeM,
            kernel: "ozaki".into(),
            n: 256,
            k: 32,
            splits: Some(12),
            threads: 2,
            rep_median_seconds: 1.25,
            max_relerr: "1.2345678e-060".into(),
            seed: 7,
            status: Status::Ok,
        }
    }

    #[test]
    fn empty_is_header_only() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{}\n", CSV_COLUMNS.join(",")));
    }

    #[test]
    fn twelve_columns_in_order() {
        let mut buf = Vec::new();
        let mut rec = sample();
        write_csv(&[rec.clone()], &mut buf).unwrap();
        rec.splits = None;
        rec.status = Status::VerifyFailed;
        write_csv(&[rec], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[1], "qd,blocked,3m,ozaki,256,32,12,2,1.25,1.2345678e-060,7,ok");
        assert_eq!(lines[3], "qd,blocked,3m,ozaki,256,32,,2,1.25,1.2345678e-060,7,verify_failed");
        assert!(lines.iter().all(|l| l.split(',').count() == 12));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        let mut other = sample();
        other.splits = None;
        other.kernel = "none".into();
        other.algorithm = Algorithm::Normal;
        other.status = Status::Singular;
        other.max_relerr = "inf".into();
        let recs = vec![sample(), other];
        emit_csv(&recs, &path).unwrap();
        assert_eq!(read_csv(&path).unwrap(), recs);
        emit_csv(&[], &path).unwrap();
        assert!(read_csv(&path).unwrap().is_empty());
    }
}
