//! Reading point-set documents.
//!
//! A support document is `{"name": "...", "points": [[0, 0, 0], ...]}`; a
//! mixed-volume document is `{"polytopes": [[[0, 0], ...], ...]}`. Integers
//! may be JSON numbers of any size or decimal strings.

use std::path::Path;

use nodesum_core::{Int, SupportSet};
use serde_json::Value;

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputDocument {
    pub name: Option<String>,
    pub points: Vec<Vec<Int>>,
}

impl InputDocument {
    pub fn support_set(&self) -> Result<SupportSet, CliError> {
        let dim = self.points[0].len();
        if dim < 3 {
            return Err(CliError::Input(format!(
                "points need at least 3 coordinates (2 fiber coordinates plus at least one more), got {dim}"
            )));
        }
        Ok(SupportSet::new(self.points.clone())?)
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn parse_json(text: &str) -> Result<Value, String> {
    serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))
}

fn parse_int(v: &Value) -> Result<Int, String> {
    let literal = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        other => return Err(format!("expected an integer, found {other}")),
    };
    literal.parse().map_err(|_| format!("expected an integer, found {literal:?}"))
}

/// A nonempty list of equal-length integer vectors.
fn parse_points(v: &Value, what: &str) -> Result<Vec<Vec<Int>>, String> {
    let rows = v.as_array().ok_or_else(|| format!("\"{what}\" must be a list of integer vectors"))?;
    if rows.is_empty() {
        return Err(format!("\"{what}\" is empty"));
    }
    let mut points = Vec::with_capacity(rows.len());
    for row in rows {
        let coords = row
            .as_array()
            .ok_or_else(|| format!("\"{what}\" must be a list of integer vectors"))?;
        points.push(coords.iter().map(parse_int).collect::<Result<Vec<_>, _>>()?);
    }
    let dim = points[0].len();
    if dim == 0 {
        return Err(format!("\"{what}\" contains an empty vector"));
    }
    if let Some(bad) = points.iter().find(|p| p.len() != dim) {
        return Err(format!("vectors in \"{what}\" have lengths {dim} and {}", bad.len()));
    }
    Ok(points)
}

pub fn parse_document(text: &str) -> Result<InputDocument, String> {
    let doc = parse_json(text)?;
    let obj = doc.as_object().ok_or("expected a JSON object")?;
    let name = match obj.get("name") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err("\"name\" must be a string".into()),
    };
    let points = parse_points(obj.get("points").ok_or("missing \"points\"")?, "points")?;
    Ok(InputDocument { name, points })
}

pub fn parse_polytopes(text: &str) -> Result<Vec<Vec<Vec<Int>>>, String> {
    let doc = parse_json(text)?;
    let list = doc
        .get("polytopes")
        .and_then(Value::as_array)
        .ok_or("expected an object with a \"polytopes\" list")?;
    if list.is_empty() {
        return Err("\"polytopes\" is empty".into());
    }
    list.iter().map(|p| parse_points(p, "polytopes")).collect()
}

pub fn read_document(path: &Path) -> Result<InputDocument, CliError> {
    parse_document(&read_text(path)?).map_err(|message| CliError::Parse {
        path: path.display().to_string(),
        message,
    })
}

pub fn read_polytopes(path: &Path) -> Result<Vec<Vec<Vec<Int>>>, CliError> {
    parse_polytopes(&read_text(path)?).map_err(|message| CliError::Parse {
        path: path.display().to_string(),
        message,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_and_strings() {
        let doc = parse_document(r#"{"name": "x", "points": [[0, "12345678901234567890123", -3]]}"#).unwrap();
        assert_eq!(doc.name.as_deref(), Some("x"));
        assert_eq!(doc.points[0][1], "12345678901234567890123".parse::<Int>().unwrap());
        assert_eq!(doc.points[0][2], Int::from(-3));
    }

    #[test]
    fn huge_json_numbers_stay_exact() {
        let doc = parse_document(r#"{"points": [[98765432109876543210987654321, 0, 0]]}"#).unwrap();
        assert_eq!(doc.points[0][0].to_string(), "98765432109876543210987654321");
    }

    #[test]
    fn rejects_malformed_documents() {
        assert!(parse_document("not json").is_err());
        assert!(parse_document(r#"{"points": [[0, 1.5, 0]]}"#).is_err());
        assert!(parse_document(r#"{"points": [[0, 0, 0], [1, 0]]}"#).is_err());
        assert!(parse_document(r#"{"points": []}"#).is_err());
        assert!(parse_document(r#"{"name": 3, "points": [[0, 0, 0]]}"#).is_err());
        assert!(parse_document(r#"[[0, 0, 0]]"#).is_err());
    }

    #[test]
    fn polytope_lists() {
        let sets = parse_polytopes(r#"{"polytopes": [[[0, 0], [1, 0]], [[0, 0], [0, 1]]]}"#).unwrap();
        assert_eq!(sets.len(), 2);
        assert!(parse_polytopes(r#"{"polytopes": []}"#).is_err());
    }
}
