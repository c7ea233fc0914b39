use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use crate::linalg::{GradedMap, GradedSpace, Matrix, Rational};
use crate::poset::{PointedPoset, RawPoset};

use super::{LimitsError, PosetDiagram};

#[derive(Deserialize)]
#[serde(untagged)]
enum PosetRef {
    Inline(RawPoset),
    Path(String),
}

#[derive(Deserialize)]
struct RawDiagram {
    poset: PosetRef,
    #[serde(default)]
    max_degree: Option<usize>,
    #[serde(default)]
    values: HashMap<String, Vec<usize>>,
    #[serde(default)]
    maps: HashMap<String, HashMap<String, Vec<Vec<Value>>>>,
}

fn entry(v: &Value) -> Result<Rational, LimitsError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(crate::linalg::q)
            .ok_or_else(|| LimitsError::Format(format!("non-integer number {n}; write fractions as strings"))),
        Value::String(s) => s.trim().parse().map_err(|_| LimitsError::Format(format!("bad rational `{s}`"))),
        other => Err(LimitsError::Format(format!("bad matrix entry {other}"))),
    }
}

/// Reads a diagram file. A poset given as a string is a path resolved
/// against `dir`. Omitted values are zero spaces and omitted maps are zero.
pub fn diagram_from_json(text: &str, dir: Option<&Path>) -> Result<PosetDiagram, LimitsError> {
    let raw: RawDiagram = serde_json::from_str(text).map_err(|e| LimitsError::Format(e.to_string()))?;
    let poset = match raw.poset {
        PosetRef::Inline(r) => PointedPoset::from_raw(&r)?,
        PosetRef::Path(p) => {
            let path = dir.map(|d| d.join(&p)).unwrap_or_else(|| p.clone().into());
            let body = std::fs::read_to_string(&path)
                .map_err(|e| LimitsError::Format(format!("{}: {e}", path.display())))?;
            PointedPoset::from_json(&body)?
        }
    };
    let top = raw
        .max_degree
        .unwrap_or_else(|| raw.values.values().map(|v| v.len()).max().unwrap_or(1).saturating_sub(1));
    let mut values = vec![GradedSpace::zero(top); poset.len()];
    for (name, dims) in &raw.values {
        let x = poset.index_of(name)?;
        let mut padded = dims.clone();
        if padded.len() > top + 1 {
            return Err(LimitsError::Format(format!("value of `{name}` exceeds max_degree {top}")));
        }
        padded.resize(top + 1, 0);
        values[x] = GradedSpace::from_dims(&padded)?;
    }
    let mut maps = BTreeMap::new();
    for (key, blocks) in &raw.maps {
        let (a, b) = key
            .split_once('<')
            .ok_or_else(|| LimitsError::Format(format!("map key `{key}` is not of the form x<y")))?;
        let (x, y) = (poset.index_of(a.trim())?, poset.index_of(b.trim())?);
        let mut mats: Vec<Matrix> = (0..=top)
            .map(|d| Matrix::zeros(values[x].dim(d), values[y].dim(d)))
            .collect();
        for (deg, rows) in blocks {
            let d: usize = deg.parse().map_err(|_| LimitsError::Format(format!("bad degree `{deg}`")))?;
            if d > top {
                return Err(LimitsError::Format(format!("degree {d} exceeds max_degree {top}")));
            }
            let (r, c) = (values[x].dim(d), values[y].dim(d));
            if rows.len() != r || rows.iter().any(|row| row.len() != c) {
                return Err(LimitsError::MapShape(a.trim().to_string(), b.trim().to_string()));
            }
            for (i, row) in rows.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    mats[d].set(i, j, entry(v)?);
                }
            }
        }
        maps.insert((x, y), GradedMap::new(values[y].clone(), values[x].clone(), mats)?);
    }
    PosetDiagram::new(poset, values, maps)
}
