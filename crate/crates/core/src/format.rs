//! Text formats shared by the library and the command line.
//!
//! Matrices are exchanged as JSON records
//! `{"rows": r, "cols": c, "entries": [[re, im], ...]}` in row-major order.
//! Exact matrices use the same layout with entries written as rational
//! strings (`"3"`, `"-5/9"`). Partitions are `{"blocks": [...], "weights": [...]}`.
//! Functions on polygons are arrays of `{"polygon": [...], "value": v}` with
//! `v` a number or `[re, im]`; increment pairs are arrays of
//! `{"polygon": [...], "index": i}` with `i` 1-based.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{Polygon, QMatrix, QRational};
use crate::schatten::{ComplexMatrix, Partition};
use crate::Complex64;

/// Formats a real number with 15 significant digits.
///
/// Values in `[1e-5, 1e15)` are written positionally, the rest in exponent
/// form. Trailing zeros are dropped.
pub fn fmt15(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.14e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let abs = x.abs();
    if (1e-5..1e15).contains(&abs) {
        let decimals = (14 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".into()
    } else {
        t.to_string()
    }
}

/// Complex number as `re` or `re+imi`.
pub fn fmt15_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        fmt15(z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", fmt15(z.re), fmt15(-z.im))
    } else {
        format!("{}+{}i", fmt15(z.re), fmt15(z.im))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MatrixRecord {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixRecord {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        MatrixRecord {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.row_major().into_iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        ComplexMatrix::from_row_major(self.rows, self.cols, entries)
    }
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let rec: MatrixRecord =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    rec.to_matrix()
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string(&MatrixRecord::from_matrix(m)).expect("serializable")
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PartitionRecord {
    pub blocks: Vec<usize>,
    pub weights: Vec<f64>,
}

pub fn parse_partition(text: &str) -> Result<Partition> {
    let rec: PartitionRecord =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Partition::new(rec.blocks, rec.weights)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RationalMatrixRecord {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<String>,
}

/// Parses `"a"` or `"a/b"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<QRational> {
    s.trim()
        .parse::<QRational>()
        .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

pub fn parse_qmatrix(text: &str, q: u64) -> Result<QMatrix> {
    let rec: RationalMatrixRecord =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if rec.rows != rec.cols {
        return Err(Error::Input(format!(
            "expected a square matrix, got {}x{}",
            rec.rows, rec.cols
        )));
    }
    if rec.entries.len() != rec.rows * rec.cols {
        return Err(Error::Input(format!(
            "{} entries for a {}x{} matrix",
            rec.entries.len(),
            rec.rows,
            rec.cols
        )));
    }
    let entries = rec
        .entries
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<Vec<_>>>()?;
    QMatrix::from_row_major(q, rec.rows, entries)
}

pub fn qmatrix_to_json(m: &QMatrix) -> String {
    let rec = RationalMatrixRecord {
        rows: m.dim(),
        cols: m.dim(),
        entries: m.entries().iter().map(|x| x.to_string()).collect(),
    };
    serde_json::to_string(&rec).expect("serializable")
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ValueRecord {
    Real(f64),
    Complex([f64; 2]),
}

impl ValueRecord {
    pub fn value(self) -> Complex64 {
        match self {
            ValueRecord::Real(re) => Complex64::new(re, 0.0),
            ValueRecord::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PolygonValueRecord {
    pub polygon: Vec<i64>,
    pub value: ValueRecord,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PairRecord {
    pub polygon: Vec<i64>,
    pub index: usize,
}

/// Values of a function on polygons. A polygon listed twice is an error.
pub fn parse_polygon_values(text: &str) -> Result<Vec<(Polygon, Complex64)>> {
    let recs: Vec<PolygonValueRecord> =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut out: Vec<(Polygon, Complex64)> = Vec::with_capacity(recs.len());
    for rec in recs {
        let polygon = Polygon::new(rec.polygon)?;
        if out.iter().any(|(p, _)| *p == polygon) {
            return Err(Error::Input(format!("{polygon} is listed twice")));
        }
        out.push((polygon, rec.value.value()));
    }
    Ok(out)
}

pub fn parse_pairs(text: &str) -> Result<Vec<(Polygon, usize)>> {
    let recs: Vec<PairRecord> =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    recs.into_iter()
        .map(|rec| Ok((Polygon::new(rec.polygon)?, rec.index)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_significant_digits() {
        assert_eq!(fmt15(std::f64::consts::SQRT_2), "1.4142135623731");
        assert_eq!(fmt15(1.0), "1");
        assert_eq!(fmt15(0.5), "0.5");
        assert_eq!(fmt15(-2.5e-9), "-2.5e-9");
        assert_eq!(fmt15(1234.5), "1234.5");
        assert_eq!(fmt15(0.0), "0");
        assert_eq!(fmt15(f64::INFINITY), "inf");
    }

    #[test]
    fn matrix_record_roundtrip() {
        let text = r#"{"rows":2,"cols":1,"entries":[[1.0,0.0],[0.5,-2.0]]}"#;
        let m = parse_matrix(text).unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(m.get(1, 0), Complex64::new(0.5, -2.0));
        assert_eq!(parse_matrix(&matrix_to_json(&m)).unwrap(), m);
    }

    #[test]
    fn matrix_record_rejects_wrong_count() {
        let text = r#"{"rows":2,"cols":2,"entries":[[1.0,0.0]]}"#;
        assert!(matches!(parse_matrix(text), Err(Error::Input(_))));
    }

    #[test]
    fn rational_matrix_parses() {
        let text = r#"{"rows":2,"cols":2,"entries":["1/2","0","0","2"]}"#;
        let m = parse_qmatrix(text, 2).unwrap();
        assert!(m.is_special_linear());
        assert_eq!(parse_qmatrix(&qmatrix_to_json(&m), 2).unwrap(), m);
    }

    #[test]
    fn polygon_values_and_pairs() {
        let f = parse_polygon_values(r#"[{"polygon":[2,2],"value":1.5},{"polygon":[3,2],"value":[0,-1]}]"#).unwrap();
        assert_eq!(f[0].1, Complex64::new(1.5, 0.0));
        assert_eq!(f[1].1, Complex64::new(0.0, -1.0));
        assert!(parse_polygon_values(r#"[{"polygon":[1],"value":1},{"polygon":[1],"value":2}]"#).is_err());
        let pairs = parse_pairs(r#"[{"polygon":[2,2],"index":1}]"#).unwrap();
        assert_eq!(pairs[0].1, 1);
        assert!(parse_pairs("nonsense").is_err());
    }
}
