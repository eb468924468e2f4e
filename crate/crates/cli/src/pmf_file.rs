use std::path::Path;

use mtlogloss::{validate_pmf, JointPmf};
use serde::Deserialize;

use crate::error::{CliError, Result};
use crate::format::json_error;

/// `{"pmf": [[...], ...]}`, row-major with `x` indexing rows.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PmfFile {
    pmf: Vec<Vec<f64>>,
}

pub fn parse_pmf(text: &str, path: &Path) -> Result<JointPmf> {
    let file: PmfFile = serde_json::from_str(text).map_err(|e| json_error(path, e))?;
    validate_pmf(&file.pmf).map_err(CliError::model(format!("pmf in {}", path.display())))
}

pub fn load_pmf(path: &Path) -> Result<JointPmf> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    parse_pmf(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<JointPmf> {
        parse_pmf(s, Path::new("test.json"))
    }

    #[test]
    fn uniform_square() {
        let p = parse(r#"{"pmf": [[0.25,0.25],[0.25,0.25]]}"#).unwrap();
        assert_eq!((p.m(), p.l()), (2, 2));
        assert_eq!(p.get(1, 0), 0.25);
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = parse("{\"pmf\": [[0.5, 0.5]\n,]}").unwrap_err();
        match err {
            CliError::Parse { line, column, .. } => assert_eq!((line, column), (2, 2)),
            other => panic!("{other:?}"),
        }
        assert_eq!(err_kind(r#"{"pmf": [[0.5, "x"]]}"#), "ParseError");
        assert_eq!(err_kind(r#"{"pmf": [[0.5]], "extra": 1}"#), "ParseError");
    }

    fn err_kind(s: &str) -> &'static str {
        parse(s).unwrap_err().kind()
    }

    #[test]
    fn invalid_mass_is_a_validation_error() {
        let err = parse(r#"{"pmf": [[0.5, 0.6]]}"#).unwrap_err();
        assert_eq!(err.kind(), "ValidationError");
        assert!(err.to_string().contains("test.json"));
        assert_eq!(parse(r#"{"pmf": [[0.5], [0.25, 0.25]]}"#).unwrap_err().exit_code(), 2);
    }
}
