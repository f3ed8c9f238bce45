//! JSON files for matrix factorizations.
//!
//! ```json
//! { "weights": {"x": 1}, "f": "x^2", "F0": [0], "F1": [-1],
//!   "s0": [["x"]], "s1": [["x"]] }
//! ```
//! Variable order is the order of the `weights` object.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::mf::{MatrixFactorization, MfError};
use crate::polyring::{parse_poly, GradedPoly, PolyError, WeightedRing};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("weight of '{0}' must be a positive integer")]
    BadWeight(String),
    #[error("in {field}: {source}")]
    Poly { field: String, source: PolyError },
    #[error(transparent)]
    Invalid(#[from] MfError),
}

impl FormatError {
    /// True when the file parsed but the data is not a factorization.
    pub fn is_mathematical(&self) -> bool {
        matches!(self, FormatError::Invalid(_))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MfFile {
    pub weights: Map<String, Value>,
    pub f: String,
    #[serde(rename = "F0")]
    pub f0: Vec<i64>,
    #[serde(rename = "F1")]
    pub f1: Vec<i64>,
    pub s0: Vec<Vec<String>>,
    pub s1: Vec<Vec<String>>,
}

impl MfFile {
    pub fn from_mf(mf: &MatrixFactorization) -> Self {
        let ring = mf.ring();
        let weights = ring.names().iter().zip(ring.weights()).map(|(n, &w)| (n.clone(), Value::from(w))).collect();
        let strings = |m: &crate::grmod::GradedMap| -> Vec<Vec<String>> {
            m.matrix().iter().map(|r| r.iter().map(GradedPoly::to_string).collect()).collect()
        };
        Self {
            weights,
            f: mf.potential().to_string(),
            f0: mf.f0().twists().to_vec(),
            f1: mf.f1().twists().to_vec(),
            s0: strings(mf.s0()),
            s1: strings(mf.s1()),
        }
    }

    pub fn ring(&self) -> Result<WeightedRing, FormatError> {
        let mut vars = Vec::with_capacity(self.weights.len());
        for (name, w) in &self.weights {
            let w = w.as_u64().filter(|&w| w > 0 && w <= u32::MAX as u64).ok_or_else(|| FormatError::BadWeight(name.clone()))?;
            vars.push((name.as_str(), w as u32));
        }
        WeightedRing::new(&vars).map_err(|source| FormatError::Poly { field: "weights".into(), source })
    }

    pub fn to_mf(&self) -> Result<MatrixFactorization, FormatError> {
        let ring = self.ring()?;
        let parse = |field: &str, s: &str| parse_poly(&ring, s).map_err(|source| FormatError::Poly { field: field.into(), source });
        let matrix = |field: &str, rows: &[Vec<String>]| -> Result<Vec<Vec<GradedPoly>>, FormatError> {
            rows.iter()
                .enumerate()
                .map(|(r, row)| row.iter().enumerate().map(|(c, s)| parse(&format!("{field}[{r}][{c}]"), s)).collect())
                .collect()
        };
        let f = parse("f", &self.f)?;
        let s0 = matrix("s0", &self.s0)?;
        let s1 = matrix("s1", &self.s1)?;
        Ok(MatrixFactorization::validate(f, self.f0.clone(), self.f1.clone(), s0, s1)?)
    }
}

pub fn parse_mf(text: &str) -> Result<MatrixFactorization, FormatError> {
    serde_json::from_str::<MfFile>(text)?.to_mf()
}

pub fn write_mf(mf: &MatrixFactorization) -> String {
    let mut s = serde_json::to_string_pretty(&MfFile::from_mf(mf)).expect("plain data serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mf::standard::{l_object, quadric_generators};

    #[test]
    fn round_trip() {
        for m in [l_object("x"), quadric_generators(4)[1].clone(), l_object("x").knorrer(1, "u", "v").unwrap()] {
            let text = write_mf(&m);
            assert_eq!(parse_mf(&text).unwrap(), m);
            assert_eq!(write_mf(&parse_mf(&text).unwrap()), text);
        }
    }

    #[test]
    fn diagnostics() {
        let good = r#"{"weights": {"x": 1}, "f": "x^2", "F0": [0], "F1": [-1], "s0": [["x"]], "s1": [["x"]]}"#;
        assert!(parse_mf(good).is_ok());
        let bad_entry = good.replace(r#""s0": [["x"]]"#, r#""s0": [["2*x"]]"#);
        let e = parse_mf(&bad_entry).unwrap_err();
        assert!(e.is_mathematical());
        assert!(matches!(e, FormatError::Invalid(MfError::NotAFactorization { row: 0, col: 0, .. })), "{e}");
        let bad_twist = good.replace(r#""F1": [-1]"#, r#""F1": [-2]"#);
        assert!(matches!(parse_mf(&bad_twist), Err(FormatError::Invalid(MfError::DegreeViolation { .. }))));
        assert!(matches!(parse_mf(&good.replace("x^2", "x^")), Err(FormatError::Poly { .. })));
        assert!(matches!(parse_mf("{"), Err(FormatError::Json(_))));
        assert!(matches!(parse_mf(&good.replace(r#"{"x": 1}"#, r#"{"x": 0}"#)), Err(FormatError::BadWeight(_))));
    }

    #[test]
    fn variable_order_is_kept() {
        let text = r#"{"weights": {"y": 1, "a": 1}, "f": "y^2 + a^2", "F0": [-1], "F1": [-2], "s0": [["y + i*a"]], "s1": [["y - i*a"]]}"#;
        let m = parse_mf(text).unwrap();
        assert_eq!(m.ring().names(), &["y".to_string(), "a".to_string()]);
        assert!(write_mf(&m).find("\"y\"").unwrap() < write_mf(&m).find("\"a\"").unwrap());
    }
}
