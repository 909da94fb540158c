//! JSON ensemble documents and per-member validation diagnostics.
//!
//! ```json
//! { "dim": 2, "label": "example",
//!   "members": [ { "prob": 0.5, "vector": [[1, 0], [0, 0]] },
//!                { "prob": 0.5, "matrix": [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]] } ] }
//! ```
//!
//! Complex numbers are `[re, im]` pairs. State vectors within 1e-6 of unit
//! norm are normalized on load; anything further off is rejected.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::ensemble::{DensityOperator, Ensemble, Member, TOL_NORM, TOL_PSD, TOL_VECTOR_NORM};
use crate::error::{Error, Result};
use crate::linalg::{hermiticity_residual, HermitianOperator, C64, TOL_HERM};

/// A parsed but not yet validated ensemble document.
#[derive(Clone, Debug)]
pub struct RawEnsemble {
    pub dim: usize,
    pub label: String,
    pub members: Vec<RawMember>,
}

#[derive(Clone, Debug)]
pub struct RawMember {
    pub prob: f64,
    pub matrix: DMatrix<C64>,
    /// As written in the file, before normalization.
    pub vector: Option<DVector<C64>>,
}

fn schema(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        field: field.into(),
        message: message.into(),
    }
}

fn parse_complex(v: &Value, field: &str) -> Result<C64> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| schema(field, "expected a [re, im] pair"))?;
    let re = pair[0]
        .as_f64()
        .ok_or_else(|| schema(format!("{field}[0]"), "expected a number"))?;
    let im = pair[1]
        .as_f64()
        .ok_or_else(|| schema(format!("{field}[1]"), "expected a number"))?;
    Ok(C64::new(re, im))
}

fn parse_vector(v: &Value, dim: usize, field: &str) -> Result<DVector<C64>> {
    let entries = v
        .as_array()
        .ok_or_else(|| schema(field, "expected an array of [re, im] pairs"))?;
    if entries.len() != dim {
        return Err(schema(
            field,
            format!("expected {dim} entries, found {}", entries.len()),
        ));
    }
    let parsed = entries
        .iter()
        .enumerate()
        .map(|(i, z)| parse_complex(z, &format!("{field}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Ok(DVector::from_vec(parsed))
}

fn parse_matrix(v: &Value, dim: usize, field: &str) -> Result<DMatrix<C64>> {
    let rows = v
        .as_array()
        .ok_or_else(|| schema(field, "expected an array of rows"))?;
    if rows.len() != dim {
        return Err(schema(
            field,
            format!("expected {dim} rows, found {}", rows.len()),
        ));
    }
    let mut m = DMatrix::zeros(dim, dim);
    for (i, row) in rows.iter().enumerate() {
        let row = parse_vector(row, dim, &format!("{field}[{i}]"))?;
        m.row_mut(i).copy_from(&row.transpose());
    }
    Ok(m)
}

fn parse_member(v: &Value, dim: usize, field: &str) -> Result<RawMember> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema(field, "expected an object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "prob" | "vector" | "matrix") {
            return Err(schema(format!("{field}.{key}"), "unknown field"));
        }
    }
    let prob = obj
        .get("prob")
        .ok_or_else(|| schema(format!("{field}.prob"), "missing field"))?
        .as_f64()
        .ok_or_else(|| schema(format!("{field}.prob"), "expected a number"))?;
    match (obj.get("vector"), obj.get("matrix")) {
        (Some(v), None) => {
            let vector = parse_vector(v, dim, &format!("{field}.vector"))?;
            let norm = vector.norm();
            let unit = if norm > 0.0 {
                vector.unscale(norm)
            } else {
                vector.clone()
            };
            Ok(RawMember {
                prob,
                matrix: &unit * unit.adjoint(),
                vector: Some(vector),
            })
        }
        (None, Some(m)) => Ok(RawMember {
            prob,
            matrix: parse_matrix(m, dim, &format!("{field}.matrix"))?,
            vector: None,
        }),
        (Some(_), Some(_)) => Err(schema(
            field,
            "give exactly one of `vector` or `matrix`, not both",
        )),
        (None, None) => Err(schema(field, "missing `vector` or `matrix`")),
    }
}

impl RawEnsemble {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| schema("$", e.to_string()))?;
        Self::from_json(&value)
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| schema("$", "expected an object"))?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "dim" | "label" | "members") {
                return Err(schema(key.clone(), "unknown field"));
            }
        }
        let dim =
            obj.get("dim")
                .ok_or_else(|| schema("dim", "missing field"))?
                .as_u64()
                .filter(|&d| d > 0)
                .ok_or_else(|| schema("dim", "expected a positive integer"))? as usize;
        let label = match obj.get("label") {
            None => String::new(),
            Some(l) => l
                .as_str()
                .ok_or_else(|| schema("label", "expected a string"))?
                .to_owned(),
        };
        let members = obj
            .get("members")
            .ok_or_else(|| schema("members", "missing field"))?
            .as_array()
            .ok_or_else(|| schema("members", "expected an array"))?;
        if members.is_empty() {
            return Err(schema("members", "must contain at least one member"));
        }
        let members = members
            .iter()
            .enumerate()
            .map(|(i, m)| parse_member(m, dim, &format!("members[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dim,
            label,
            members,
        })
    }

    /// The document form of an existing ensemble (vectors where known).
    pub fn from_ensemble(e: &Ensemble) -> Self {
        let members = e
            .members()
            .iter()
            .map(|m| RawMember {
                prob: m.prob,
                matrix: m.state.matrix().clone(),
                vector: m.vector.clone(),
            })
            .collect();
        Self {
            dim: e.dim(),
            label: e.label().to_owned(),
            members,
        }
    }

    pub fn to_json(&self) -> Value {
        let pair = |z: &C64| json!([z.re, z.im]);
        let members: Vec<Value> = self
            .members
            .iter()
            .map(|m| match &m.vector {
                Some(v) => {
                    json!({ "prob": m.prob, "vector": v.iter().map(pair).collect::<Vec<_>>() })
                }
                None => {
                    let rows: Vec<Value> = m
                        .matrix
                        .row_iter()
                        .map(|r| Value::Array(r.iter().map(pair).collect()))
                        .collect();
                    json!({ "prob": m.prob, "matrix": rows })
                }
            })
            .collect();
        let mut obj = Map::new();
        obj.insert("dim".into(), json!(self.dim));
        obj.insert("label".into(), json!(self.label));
        obj.insert("members".into(), Value::Array(members));
        Value::Object(obj)
    }

    /// Validates every invariant and builds the ensemble.
    pub fn into_ensemble(self) -> Result<Ensemble> {
        let members = self
            .members
            .into_iter()
            .enumerate()
            .map(|(i, m)| build_member(m).map_err(|e| Error::member(i, e)))
            .collect::<Result<Vec<_>>>()?;
        let label = if self.label.is_empty() {
            "ensemble".to_owned()
        } else {
            self.label
        };
        Ensemble::new(label, members)
    }

    pub fn diagnostics(&self) -> Diagnostics {
        let members: Vec<MemberDiagnostics> = self
            .members
            .iter()
            .enumerate()
            .map(|(i, m)| MemberDiagnostics::of(i, m))
            .collect();
        let probability_sum: f64 = self.members.iter().map(|m| m.prob).sum();
        let mut problems = Vec::new();
        if (probability_sum - 1.0).abs() > TOL_NORM {
            problems.push(format!("probability sum is {probability_sum}, expected 1"));
        }
        for m in &members {
            problems.extend(
                m.problems
                    .iter()
                    .map(|p| format!("member {}: {p}", m.index)),
            );
        }
        Diagnostics {
            label: self.label.clone(),
            dim: self.dim,
            n_states: self.members.len(),
            probability_sum,
            ok: problems.is_empty(),
            problems,
            members,
        }
    }
}

fn build_member(m: RawMember) -> Result<Member> {
    match m.vector {
        Some(v) => {
            let norm = v.norm();
            if (norm - 1.0).abs() > TOL_VECTOR_NORM {
                return Err(Error::VectorNotNormalized { norm });
            }
            Member::pure(m.prob, v.unscale(norm))
        }
        None => Ok(Member::mixed(
            m.prob,
            DensityOperator::new(HermitianOperator::new(m.matrix)?)?,
        )),
    }
}

pub fn load_ensemble_str(text: &str) -> Result<Ensemble> {
    RawEnsemble::from_json_str(text)?.into_ensemble()
}

#[derive(Clone, Debug, Serialize)]
pub struct MemberDiagnostics {
    pub index: usize,
    pub prob: f64,
    pub trace: f64,
    /// Of the Hermitian part when the matrix is not Hermitian.
    pub min_eigenvalue: f64,
    pub hermiticity_residual: f64,
    pub vector_norm: Option<f64>,
    pub problems: Vec<String>,
}

impl MemberDiagnostics {
    fn of(index: usize, m: &RawMember) -> Self {
        let mut problems = Vec::new();
        if !(0.0..=1.0).contains(&m.prob) {
            problems.push(format!("probability {} outside [0, 1]", m.prob));
        }
        let finite = m
            .matrix
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite());
        let residual = hermiticity_residual(&m.matrix);
        if residual > TOL_HERM {
            problems.push(format!("not Hermitian (residual {residual:.3e})"));
        }
        let trace: f64 = m.matrix.diagonal().iter().map(|z| z.re).sum();
        if (trace - 1.0).abs() > TOL_NORM {
            problems.push(format!("trace is {trace}, expected 1"));
        }
        let min_eigenvalue = if finite {
            HermitianOperator::hermitian_part_of(&m.matrix)
                .min_eigenvalue()
                .unwrap_or(f64::NAN)
        } else {
            problems.push("non-finite matrix entry".into());
            f64::NAN
        };
        if min_eigenvalue < -TOL_PSD {
            problems.push(format!(
                "not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})"
            ));
        }
        let vector_norm = m.vector.as_ref().map(|v| v.norm());
        if let Some(norm) = vector_norm {
            if (norm - 1.0).abs() > TOL_VECTOR_NORM {
                problems.push(format!("state vector norm is {norm}, expected 1"));
            }
        }
        Self {
            index,
            prob: m.prob,
            trace,
            min_eigenvalue,
            hermiticity_residual: residual,
            vector_norm,
            problems,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Diagnostics {
    pub label: String,
    pub dim: usize,
    pub n_states: usize,
    pub probability_sum: f64,
    pub ok: bool,
    pub problems: Vec<String>,
    pub members: Vec<MemberDiagnostics>,
}
