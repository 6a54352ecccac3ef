//! On-disk formats: the code specification file and amplitude lists.
//!
//! A code file looks like
//! `{"field": {"p": 2, "m": 1, "poly": [0, 1]}, "generator": [[1, 1, 1]]}`
//! with `poly` optional and every matrix entry an integer in `[0, q)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::GFMatrix;
use crate::qsim::round12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    pub field: FieldSpec,
    pub generator: Vec<Vec<u32>>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    }
}

impl FieldSpec {
    pub fn build(&self) -> Result<Field> {
        Field::new(self.p, self.m, self.poly.as_deref())
    }

    pub fn of(field: &Field) -> Self {
        FieldSpec {
            p: field.p(),
            m: field.m(),
            poly: Some(field.poly().to_vec()),
        }
    }
}

impl CodeSpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }

    pub fn build(&self) -> Result<LinearCode> {
        let field = self.field.build()?;
        LinearCode::new(GFMatrix::from_rows(&field, &self.generator)?)
    }

    pub fn of(code: &LinearCode) -> Self {
        CodeSpec {
            field: FieldSpec::of(code.field()),
            generator: code.generator().to_rows(),
        }
    }
}

/// Parses and validates a code specification.
pub fn parse_code(text: &str) -> Result<LinearCode> {
    CodeSpec::parse(text)?.build()
}

/// Amplitudes as `[re, im]` pairs rounded to 12 decimals.
pub fn amplitude_pairs(amps: &[Complex64]) -> Vec<[f64; 2]> {
    amps.iter().map(|a| [round12(a.re), round12(a.im)]).collect()
}

/// Reads a JSON list of `[re, im]` pairs.
pub fn parse_amplitudes(text: &str) -> Result<Vec<Complex64>> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(text).map_err(json_error)?;
    Ok(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_repetition() {
        let code = parse_code(r#"{"field": {"p": 2, "m": 1}, "generator": [[1, 1, 1]]}"#).unwrap();
        assert_eq!((code.n(), code.k(), code.q()), (3, 1, 2));
        let spec = CodeSpec::of(&code);
        assert_eq!(spec.field.poly, Some(vec![0, 1]));
        assert_eq!(CodeSpec::parse(&serde_json::to_string(&spec).unwrap()).unwrap(), spec);
    }

    #[test]
    fn parse_extension_field_code() {
        let code = parse_code(
            r#"{"field": {"p": 2, "m": 2, "poly": [1, 1, 1]}, "generator": [[1, 2, 3]]}"#,
        )
        .unwrap();
        assert_eq!(code.q(), 4);
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse_code("{\n  \"field\": {\"p\": 2, \"m\": 1},\n  \"generator\": [[1, 1,]]\n}");
        assert!(matches!(err, Err(Error::Parse { line: 3, .. })), "{err:?}");
        assert!(matches!(
            parse_code(r#"{"field": {"p": 2, "m": 1}, "generator": [[1, 2]]}"#),
            Err(Error::ElementOutOfRange { value: 2, q: 2 })
        ));
        assert!(matches!(
            parse_code(r#"{"field": {"p": 2, "m": 1}, "generator": [[1, 1], [1, 1]]}"#),
            Err(Error::RankDeficient { rank: 1, k: 2 })
        ));
        assert!(matches!(
            parse_code(r#"{"field": {"p": 2, "m": 1}, "generator": [[1], [1, 1]]}"#),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            parse_code(r#"{"field": {"p": 2, "m": 1, "q": 2}, "generator": [[1]]}"#),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn amplitudes_round_trip() {
        let amps = parse_amplitudes("[[0.6, 0], [0, -0.8]]").unwrap();
        assert_eq!(amps, vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, -0.8)]);
        assert_eq!(amplitude_pairs(&amps), vec![[0.6, 0.0], [0.0, -0.8]]);
    }
}
