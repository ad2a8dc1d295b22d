// SPDX-License-Identifier: Apache-2.0
//! JSON matrix format. `data` is row-major; each entry is an integer
//! (prime fields, or a packed index) or a little-endian coefficient array.
//! Both a flat list and a list of rows are accepted.

use field_tower::{Fe, FieldCtx, FieldDescriptor};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::MatGF;

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field: {0}")]
    Field(#[from] field_tower::FieldError),
    #[error("matrix data: {0}")]
    Data(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub field: FieldDescriptor,
    pub rows: usize,
    pub cols: usize,
    pub data: Value,
}

fn entry(f: &FieldCtx, v: &Value) -> Result<Fe, ParseError> {
    match v {
        Value::Number(n) => {
            let k = n.as_i64().ok_or_else(|| ParseError::Data(format!("bad integer {n}")))?;
            if f.r() == 1 {
                Ok(f.from_int(k))
            } else {
                u128::try_from(k)
                    .ok()
                    .and_then(|k| f.elem(k).ok())
                    .ok_or_else(|| ParseError::Data(format!("packed index {k} out of range")))
            }
        }
        Value::Array(cs) => {
            let coeffs = cs
                .iter()
                .map(|c| c.as_u64().map(|c| c as u32))
                .collect::<Option<Vec<u32>>>()
                .ok_or_else(|| ParseError::Data("coefficients must be integers".into()))?;
            Ok(f.from_coeffs(&coeffs)?)
        }
        other => Err(ParseError::Data(format!("unexpected entry {other}"))),
    }
}

impl MatrixJson {
    pub fn from_mat(m: &MatGF) -> MatrixJson {
        let f = m.field();
        let data = m
            .data()
            .iter()
            .map(|&x| if f.r() == 1 { Value::from(x.0 as u64) } else { Value::from(f.coeffs(x)) })
            .collect::<Vec<_>>();
        MatrixJson { field: f.descriptor(), rows: m.rows(), cols: m.cols(), data: Value::Array(data) }
    }

    pub fn to_mat(&self) -> Result<MatGF, ParseError> {
        let f = FieldCtx::from_descriptor(&self.field)?;
        let Value::Array(items) = &self.data else {
            return Err(ParseError::Data("data must be an array".into()));
        };
        let want = self.rows * self.cols;
        let flat: Vec<&Value> = if items.len() == want
            && !(self.cols > 1 && items.iter().all(|r| matches!(r, Value::Array(x) if x.len() == self.cols && x.iter().all(Value::is_array))))
        {
            items.iter().collect()
        } else if items.len() == self.rows {
            let mut out = Vec::with_capacity(want);
            for row in items {
                match row {
                    Value::Array(r) if r.len() == self.cols => out.extend(r.iter()),
                    _ => return Err(ParseError::Data("ragged rows".into())),
                }
            }
            out
        } else {
            return Err(ParseError::Data(format!("{} entries for {}x{}", items.len(), self.rows, self.cols)));
        };
        let data = flat.into_iter().map(|v| entry(&f, v)).collect::<Result<Vec<_>, _>>()?;
        MatGF::from_data(&f, self.rows, self.cols, data).map_err(|e| ParseError::Data(e.to_string()))
    }
}

impl Serialize for MatGF {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson::from_mat(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatGF {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        MatrixJson::deserialize(d)?.to_mat().map_err(serde::de::Error::custom)
    }
}
