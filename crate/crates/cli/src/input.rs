//! Matrix documents.
//!
//! A document is either a matrix or an object `{"T": matrix, "L": {"Li":
//! matrix, "Lj": matrix}}` where both keys are optional. A matrix is either
//! `{"n": n, "entries": rows}` or just the rows; an entry is a 4-array
//! `[w, x, y, z]`, a real number or a literal string such as `"1 - 2j"`.

use std::path::Path;

use qspectra::left_mult::defining_residual;
use qspectra::{QMatrix, Quaternion};
use serde_json::Value;

use crate::phi::parse_quaternion;

#[derive(Clone, Debug)]
pub struct Document {
    pub t: Option<QMatrix>,
    /// `(L_i, L_j)` as given, not yet validated.
    pub l: Option<(QMatrix, QMatrix)>,
}

impl Document {
    pub fn matrix(&self) -> Result<&QMatrix, String> {
        self.t.as_ref().ok_or_else(|| "input has no matrix \"T\"".to_string())
    }

    pub fn left_residual(&self) -> Option<f64> {
        self.l.as_ref().map(|(li, lj)| defining_residual(li, lj))
    }
}

pub fn load(path: &Path) -> Result<Document, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    document(&value).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn document(v: &Value) -> Result<Document, String> {
    if let Some(obj) = v.as_object() {
        if obj.contains_key("T") || obj.contains_key("L") {
            let t = obj.get("T").map(matrix).transpose()?;
            let l = match obj.get("L") {
                Some(l) => {
                    let li = l.get("Li").ok_or("\"L\" needs \"Li\"")?;
                    let lj = l.get("Lj").ok_or("\"L\" needs \"Lj\"")?;
                    Some((matrix(li)?, matrix(lj)?))
                }
                None => None,
            };
            if let (Some(t), Some((li, lj))) = (&t, &l) {
                if li.n() != t.n() || lj.n() != t.n() {
                    return Err(format!("\"L\" acts on H^{}, \"T\" on H^{}", li.n().max(lj.n()), t.n()));
                }
            }
            return Ok(Document { t, l });
        }
    }
    Ok(Document { t: Some(matrix(v)?), l: None })
}

pub fn matrix(v: &Value) -> Result<QMatrix, String> {
    let rows = match v {
        Value::Object(obj) => {
            let rows = obj.get("entries").ok_or("matrix object needs \"entries\"")?;
            if let Some(n) = obj.get("n") {
                let n = n.as_u64().ok_or("\"n\" must be a non-negative integer")?;
                if rows.as_array().map(Vec::len) != Some(n as usize) {
                    return Err(format!("\"n\" is {n} but \"entries\" has a different number of rows"));
                }
            }
            rows
        }
        other => other,
    };
    let rows = rows.as_array().ok_or("matrix rows must be an array")?;
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row.as_array()
                .ok_or(format!("row {r} is not an array"))?
                .iter()
                .enumerate()
                .map(|(c, e)| quaternion(e).map_err(|m| format!("entry ({r}, {c}): {m}")))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    if parsed.is_empty() {
        return Err("matrix is empty".into());
    }
    QMatrix::from_rows(parsed).map_err(|e| format!("matrix is not square: {e}"))
}

pub fn quaternion(v: &Value) -> Result<Quaternion, String> {
    let q = match v {
        Value::Number(x) => Quaternion::real(x.as_f64().ok_or("number out of range")?),
        Value::String(s) => parse_quaternion(s)?,
        Value::Array(a) if a.len() == 4 => {
            let mut c = [0.0; 4];
            for (k, x) in a.iter().enumerate() {
                c[k] = x.as_f64().ok_or("quaternion components must be numbers")?;
            }
            Quaternion::from(c)
        }
        _ => return Err("expected [w, x, y, z], a number or a quaternion literal".into()),
    };
    if !q.to_array().iter().all(|x| x.is_finite()) {
        return Err("entries must be finite".into());
    }
    Ok(q)
}

/// `"i" | "j" | "k"` or a 4-array.
pub fn unit(s: &str) -> Result<Quaternion, String> {
    match s.trim() {
        "i" => Ok(Quaternion::I),
        "j" => Ok(Quaternion::J),
        "k" => Ok(Quaternion::K),
        other => {
            let v: Value = serde_json::from_str(other).map_err(|_| format!("unit must be i, j, k or [w, x, y, z], got '{other}'"))?;
            quaternion(&v)
        }
    }
}
