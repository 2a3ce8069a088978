//! JSON shapes shared by the circuit, family and report formats.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{C64, Ket, Operator};

/// Report schema tag written at the top of every JSON document.
pub const SCHEMA: &str = "histloc/1";

/// A complex number as `[re, im]`.
pub type ComplexDoc = [f64; 2];

/// A square complex matrix as rows of `[re, im]` pairs.
pub type MatrixDoc = Vec<Vec<ComplexDoc>>;

pub fn complex_doc(z: C64) -> ComplexDoc {
    [z.re, z.im]
}

pub fn ket_to_doc(ket: &Ket) -> Vec<ComplexDoc> {
    ket.amplitudes().iter().copied().map(complex_doc).collect()
}

pub fn ket_from_doc(doc: &[ComplexDoc]) -> Result<Ket> {
    Ket::new(doc.iter().map(|&[re, im]| C64::new(re, im)).collect())
}

pub fn matrix_to_doc(op: &Operator) -> MatrixDoc {
    let m = op.matrix();
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| complex_doc(m[(i, j)])).collect()).collect()
}

pub fn matrix_from_doc(doc: &MatrixDoc) -> Result<Operator> {
    let rows: Vec<Vec<C64>> =
        doc.iter().map(|r| r.iter().map(|&[re, im]| C64::new(re, im)).collect()).collect();
    Operator::from_rows(&rows)
}

/// Formats with 12 significant digits, trimming trailing zeros.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".to_string() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-6..=12).contains(&magnitude) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

pub fn complex_sig12(z: C64) -> String {
    if z.im == 0.0 {
        return sig12(z.re);
    }
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{}{}i", sig12(z.re), sign, sig12(z.im.abs()))
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(Error::from)
}

pub fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(Error::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(std::f64::consts::FRAC_1_SQRT_2), "0.707106781187");
        assert_eq!(sig12(1.0), "1");
        assert_eq!(sig12(-0.5), "-0.5");
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(1234.5678901234), "1234.56789012");
        assert_eq!(complex_sig12(C64::new(0.5, -0.25)), "0.5-0.25i");
    }

    #[test]
    fn matrix_doc_round_trip() {
        let op = crate::qmath::gates::y();
        let back = matrix_from_doc(&matrix_to_doc(&op)).unwrap();
        assert_eq!(op, back);
    }
}
