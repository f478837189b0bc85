//! Algebra specs as consumed by the command layer: either a preset reference
//! `{"preset": name, "params": [...]}` or an explicit structure-constant
//! table `{"dim", "labels", "unit", "scalars", "structure_constants"}` with
//! 0-based indices and entries `[i, j, k, numerator, denominator]`; omitted
//! triples mean coefficient zero.

use crate::algebra::{Algebra, AlgebraError, Preset, ScalarMode, Violation};
use crate::scalar::{format_rat, Rat};
use num_traits::Zero;
use serde_json::{json, Map, Value};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecError {
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    NotAnObject,
    MissingField {
        field: &'static str,
    },
    BadField {
        field: String,
        detail: String,
    },
    Algebra(String),
    /// The table parsed but the algebra laws fail; every violated law listed.
    InvalidAlgebra {
        violations: Vec<String>,
    },
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::Json {
                line,
                column,
                message,
            } => {
                write!(f, "invalid JSON at line {line}, column {column}: {message}")
            }
            SpecError::NotAnObject => write!(f, "algebra spec must be a JSON object"),
            SpecError::MissingField { field } => write!(f, "missing field '{field}'"),
            SpecError::BadField { field, detail } => write!(f, "bad field '{field}': {detail}"),
            SpecError::Algebra(e) => write!(f, "{e}"),
            SpecError::InvalidAlgebra { violations } => {
                write!(f, "algebra laws violated: {}", violations.join("; "))
            }
        }
    }
}

impl std::error::Error for SpecError {}

impl From<AlgebraError> for SpecError {
    fn from(e: AlgebraError) -> Self {
        SpecError::Algebra(e.to_string())
    }
}

#[derive(Clone, Debug)]
pub enum SpecSource {
    Preset(Preset),
    Explicit {
        dim: usize,
        labels: Option<Vec<String>>,
        unit: Vec<Rat>,
        entries: Vec<(usize, usize, usize, Rat)>,
    },
}

#[derive(Clone, Debug)]
pub struct AlgebraSpec {
    pub source: SpecSource,
    pub scalar_mode: ScalarMode,
}

impl AlgebraSpec {
    pub fn parse(text: &str) -> Result<AlgebraSpec, SpecError> {
        let value: Value = serde_json::from_str(text).map_err(|e| SpecError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let obj = value.as_object().ok_or(SpecError::NotAnObject)?;
        let scalar_mode = parse_scalars(obj)?;
        if obj.contains_key("preset") {
            let name = obj["preset"].as_str().ok_or_else(|| SpecError::BadField {
                field: "preset".into(),
                detail: "must be a string".into(),
            })?;
            let params = match obj.get("params") {
                None => Vec::new(),
                Some(Value::Array(items)) => items
                    .iter()
                    .map(|v| {
                        v.as_i64().ok_or_else(|| SpecError::BadField {
                            field: "params".into(),
                            detail: "entries must be integers".into(),
                        })
                    })
                    .collect::<Result<Vec<i64>, _>>()?,
                Some(_) => {
                    return Err(SpecError::BadField {
                        field: "params".into(),
                        detail: "must be an array of integers".into(),
                    })
                }
            };
            let preset = Preset::parse(name, &params)?;
            return Ok(AlgebraSpec {
                source: SpecSource::Preset(preset),
                scalar_mode,
            });
        }

        let dim = obj
            .get("dim")
            .ok_or(SpecError::MissingField { field: "dim" })?
            .as_u64()
            .ok_or_else(|| SpecError::BadField {
                field: "dim".into(),
                detail: "must be a positive integer".into(),
            })? as usize;
        let labels = match obj.get("labels") {
            None => None,
            Some(Value::Array(items)) => {
                let labels: Vec<String> = items
                    .iter()
                    .map(|v| {
                        v.as_str()
                            .map(str::to_string)
                            .ok_or_else(|| SpecError::BadField {
                                field: "labels".into(),
                                detail: "entries must be strings".into(),
                            })
                    })
                    .collect::<Result<_, _>>()?;
                if labels.len() != dim {
                    return Err(SpecError::BadField {
                        field: "labels".into(),
                        detail: format!("expected {dim} labels, found {}", labels.len()),
                    });
                }
                Some(labels)
            }
            Some(_) => {
                return Err(SpecError::BadField {
                    field: "labels".into(),
                    detail: "must be an array of strings".into(),
                })
            }
        };
        let unit_value = obj
            .get("unit")
            .ok_or(SpecError::MissingField { field: "unit" })?;
        let unit = parse_rat_array(unit_value, "unit")?;
        if unit.len() != dim {
            return Err(SpecError::BadField {
                field: "unit".into(),
                detail: format!("expected {dim} coordinates, found {}", unit.len()),
            });
        }
        let entries_value = obj
            .get("structure_constants")
            .ok_or(SpecError::MissingField {
                field: "structure_constants",
            })?;
        let raw_entries = entries_value
            .as_array()
            .ok_or_else(|| SpecError::BadField {
                field: "structure_constants".into(),
                detail: "must be an array of [i, j, k, numerator, denominator] entries".into(),
            })?;
        let mut entries = Vec::with_capacity(raw_entries.len());
        for (pos, item) in raw_entries.iter().enumerate() {
            let tuple =
                item.as_array()
                    .filter(|t| t.len() == 5)
                    .ok_or_else(|| SpecError::BadField {
                        field: format!("structure_constants[{pos}]"),
                        detail: "must be [i, j, k, numerator, denominator]".into(),
                    })?;
            let idx = |p: usize| -> Result<usize, SpecError> {
                let v = tuple[p].as_u64().ok_or_else(|| SpecError::BadField {
                    field: format!("structure_constants[{pos}]"),
                    detail: "indices must be non-negative integers".into(),
                })? as usize;
                if v >= dim {
                    return Err(SpecError::BadField {
                        field: format!("structure_constants[{pos}]"),
                        detail: format!("index {v} out of range for dim {dim}"),
                    });
                }
                Ok(v)
            };
            let (i, j, k) = (idx(0)?, idx(1)?, idx(2)?);
            let numer = tuple[3].as_i64().ok_or_else(|| SpecError::BadField {
                field: format!("structure_constants[{pos}]"),
                detail: "numerator must be an integer".into(),
            })?;
            let denom = tuple[4].as_i64().ok_or_else(|| SpecError::BadField {
                field: format!("structure_constants[{pos}]"),
                detail: "denominator must be an integer".into(),
            })?;
            if denom == 0 {
                return Err(SpecError::BadField {
                    field: format!("structure_constants[{pos}]"),
                    detail: "denominator must be nonzero".into(),
                });
            }
            entries.push((i, j, k, crate::scalar::rat(numer, denom)));
        }
        Ok(AlgebraSpec {
            source: SpecSource::Explicit {
                dim,
                labels,
                unit,
                entries,
            },
            scalar_mode,
        })
    }

    /// Builds the algebra (structural checks only; see `build_validated`).
    pub fn build(&self) -> Result<Algebra, SpecError> {
        match &self.source {
            SpecSource::Preset(preset) => Ok(preset.build(self.scalar_mode)?),
            SpecSource::Explicit {
                dim,
                labels,
                unit,
                entries,
            } => {
                let labels = labels
                    .clone()
                    .unwrap_or_else(|| (0..*dim).map(|i| format!("e{i}")).collect());
                let mut table = vec![vec![vec![Rat::zero(); *dim]; *dim]; *dim];
                for (i, j, k, c) in entries {
                    table[*i][*j][*k] = c.clone();
                }
                Ok(Algebra::new(labels, table, unit.clone(), self.scalar_mode)?)
            }
        }
    }

    /// Builds and validates; a table violating the algebra laws is reported
    /// with the full list of violated triples.
    pub fn build_validated(&self) -> Result<Algebra, SpecError> {
        let algebra = self.build()?;
        let violations = algebra.validate();
        if violations.is_empty() {
            Ok(algebra)
        } else {
            Err(SpecError::InvalidAlgebra {
                violations: violations.iter().map(Violation::to_string).collect(),
            })
        }
    }

    /// The spec as originally given, as JSON.
    pub fn echo_json(&self) -> Value {
        match &self.source {
            SpecSource::Preset(p) => json!({
                "preset": p.name(),
                "params": p.params(),
                "scalars": self.scalar_mode.to_string(),
            }),
            SpecSource::Explicit {
                dim,
                labels,
                unit,
                entries,
            } => {
                let entries: Vec<Value> = entries
                    .iter()
                    .map(|(i, j, k, c)| {
                        json!([i, j, k, int_value(c.numer()), int_value(c.denom())])
                    })
                    .collect();
                json!({
                    "dim": dim,
                    "labels": labels,
                    "unit": unit.iter().map(format_rat).collect::<Vec<_>>(),
                    "scalars": self.scalar_mode.to_string(),
                    "structure_constants": entries,
                })
            }
        }
    }
}

/// The fully resolved table of an algebra, in the explicit spec schema; this
/// plus the seed reproduces any run exactly.
pub fn resolved_json(a: &Algebra) -> Value {
    let d = a.dim();
    let mut entries = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for (k, c) in a.basis_product(i, j).iter().enumerate() {
                if !c.is_zero() {
                    entries.push(json!([i, j, k, int_value(c.numer()), int_value(c.denom())]));
                }
            }
        }
    }
    json!({
        "dim": d,
        "labels": a.labels(),
        "unit": a.unit().iter().map(format_rat).collect::<Vec<_>>(),
        "scalars": a.scalar_mode().to_string(),
        "structure_constants": entries,
    })
}

/// Integers that fit i64 stay JSON numbers; anything bigger becomes a string.
fn int_value(n: &crate::scalar::Int) -> Value {
    match i64::try_from(n.clone()) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

fn parse_scalars(obj: &Map<String, Value>) -> Result<ScalarMode, SpecError> {
    match obj.get("scalars") {
        None => Ok(ScalarMode::Rational),
        Some(Value::String(s)) if s == "Q" => Ok(ScalarMode::Rational),
        Some(Value::String(s)) if s == "Z" => Ok(ScalarMode::Integer),
        Some(_) => Err(SpecError::BadField {
            field: "scalars".into(),
            detail: "must be \"Q\" or \"Z\"".into(),
        }),
    }
}

/// Array entries may be integers or "n/d" strings.
fn parse_rat_array(value: &Value, field: &str) -> Result<Vec<Rat>, SpecError> {
    let items = value.as_array().ok_or_else(|| SpecError::BadField {
        field: field.into(),
        detail: "must be an array".into(),
    })?;
    items
        .iter()
        .map(|v| match v {
            Value::Number(n) => {
                n.as_i64()
                    .map(crate::scalar::rat_int)
                    .ok_or_else(|| SpecError::BadField {
                        field: field.into(),
                        detail: "numbers must be integers".into(),
                    })
            }
            Value::String(s) => crate::scalar::parse_rat(s).ok_or_else(|| SpecError::BadField {
                field: field.into(),
                detail: format!("bad rational '{s}'"),
            }),
            _ => Err(SpecError::BadField {
                field: field.into(),
                detail: "entries must be integers or 'n/d' strings".into(),
            }),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_specs() {
        let spec = AlgebraSpec::parse(r#"{"preset":"dual_numbers"}"#).unwrap();
        let a = spec.build_validated().unwrap();
        assert_eq!(a.dim(), 2);
        assert!(a.is_commutative());

        let spec = AlgebraSpec::parse(r#"{"preset":"truncated_free","params":[2,2]}"#).unwrap();
        let a = spec.build_validated().unwrap();
        assert_eq!(a.dim(), 7);
        assert!(!a.is_commutative());
    }

    #[test]
    fn missing_unit_is_named() {
        let err = AlgebraSpec::parse(r#"{"dim":2,"structure_constants":[]}"#).unwrap_err();
        assert_eq!(err, SpecError::MissingField { field: "unit" });
    }

    #[test]
    fn explicit_dual_numbers() {
        let text = r#"{
            "dim": 2,
            "labels": ["1", "X"],
            "unit": [1, 0],
            "scalars": "Q",
            "structure_constants": [
                [0, 0, 0, 1, 1],
                [0, 1, 1, 1, 1],
                [1, 0, 1, 1, 1]
            ]
        }"#;
        let spec = AlgebraSpec::parse(text).unwrap();
        let a = spec.build_validated().unwrap();
        assert!(a.is_commutative());
        let preset = Preset::DualNumbers.build(ScalarMode::Rational).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(a.basis_product(i, j), preset.basis_product(i, j));
            }
        }
    }

    #[test]
    fn invalid_tables_list_violations() {
        // e0 is the declared unit but e0·e0 = e1.
        let text = r#"{
            "dim": 2,
            "unit": [1, 0],
            "structure_constants": [[0, 0, 1, 1, 1]]
        }"#;
        let spec = AlgebraSpec::parse(text).unwrap();
        match spec.build_validated() {
            Err(SpecError::InvalidAlgebra { violations }) => assert!(!violations.is_empty()),
            other => panic!("expected InvalidAlgebra, got {other:?}"),
        }
    }

    #[test]
    fn json_errors_carry_positions() {
        match AlgebraSpec::parse("{\n  \"preset\": ") {
            Err(SpecError::Json { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected Json error, got {other:?}"),
        }
    }

    #[test]
    fn z_mode_rejects_fractions() {
        let text = r#"{
            "dim": 1,
            "unit": [1],
            "scalars": "Z",
            "structure_constants": [[0, 0, 0, 1, 2]]
        }"#;
        let spec = AlgebraSpec::parse(text).unwrap();
        assert!(spec.build().is_err());
    }

    #[test]
    fn resolved_json_round_trips() {
        let spec = AlgebraSpec::parse(r#"{"preset":"upper_triangular","params":[2]}"#).unwrap();
        let a = spec.build_validated().unwrap();
        let resolved = resolved_json(&a);
        let again = AlgebraSpec::parse(&resolved.to_string()).unwrap();
        let b = again.build_validated().unwrap();
        assert_eq!(a.labels(), b.labels());
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                assert_eq!(a.basis_product(i, j), b.basis_product(i, j));
            }
        }
    }
}
