use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Output of one invocation. `results` is deterministic for fixed inputs and
/// flags; timing lives outside it.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    /// Input path to SHA-256 of its contents.
    pub inputs: BTreeMap<String, String>,
    pub results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<BTreeMap<String, BTreeMap<String, bool>>>,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Symmetric equality matrix over named results.
pub fn agreement_matrix(values: &BTreeMap<String, Value>) -> BTreeMap<String, BTreeMap<String, bool>> {
    values
        .iter()
        .map(|(a, va)| (a.clone(), values.iter().map(|(b, vb)| (b.clone(), va == vb)).collect()))
        .collect()
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) if !map.is_empty() && (prefix.is_empty() || map.values().any(|x| x.is_object())) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// A two-column text rendering of the report.
pub fn render_table(r: &RunReport) -> String {
    let mut rows = vec![("command".to_string(), r.command.clone()), ("ok".to_string(), r.ok.to_string())];
    for (path, hash) in &r.inputs {
        rows.push((format!("input {path}"), hash[..16.min(hash.len())].to_string()));
    }
    flatten("", &r.results, &mut rows);
    if let Some(m) = &r.agreement {
        for (a, row) in m {
            let agree: Vec<&str> = row.iter().filter(|(b, &x)| x && *b != a).map(|(b, _)| b.as_str()).collect();
            rows.push((format!("agrees {a}"), format!("[{}]", agree.join(", "))));
        }
    }
    if let Some(t) = r.wall_time_seconds {
        rows.push(("wall time".into(), format!("{t:.3} s")));
    }
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in rows {
        let _ = writeln!(s, "{k:<width$}  {v}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn matrix_is_symmetric() {
        let mut v = BTreeMap::new();
        v.insert("a".to_string(), json!([1, 2]));
        v.insert("b".to_string(), json!([1, 2]));
        v.insert("c".to_string(), json!([1, 3]));
        let m = agreement_matrix(&v);
        for (x, row) in &m {
            for (y, &e) in row {
                assert_eq!(e, m[y][x]);
            }
        }
        assert!(m["a"]["b"] && !m["a"]["c"]);
    }

    #[test]
    fn hashes_are_hex() {
        assert_eq!(sha256_hex(b"").len(), 64);
    }
}
