//! JSON channel files. A channel serializes in whichever representation it
//! was built from: `{"rep": "a"|"b"|"choi"|"kraus", "dim_in": n, "dim_out":
//! m, "trace_preserving": bool, "data": ...}` with every complex entry as a
//! `[re, im]` pair and Kraus data as `{"eta": 1|-1, "matrix": ...}` terms.
//! Loading also accepts the family shorthand `{"family": "adm"|
//! "translation"|"robust", ...}` so known map families don't need matrix
//! literals on disk.

use crate::channel::{Channel, ChannelError, KrausTerm, Rep};
use crate::maps::{adm, robust_map, translation, DepolarizerParams, MapError, TranslationParams};
use crate::matrix::ComplexMatrix;
use num_complex::Complex64;
use serde_json::{json, Value};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed channel file: {0}")]
    Parse(String),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Map(#[from] MapError),
}

fn matrix_to_value(m: &ComplexMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|r| {
            let row: Vec<Value> = (0..m.cols())
                .map(|c| {
                    let z = m[(r, c)];
                    json!([z.re, z.im])
                })
                .collect();
            Value::Array(row)
        })
        .collect();
    Value::Array(rows)
}

fn complex_from_value(v: &Value) -> Result<Complex64, FileError> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| FileError::Parse("complex entries must be [re, im] pairs".into()))?;
    let re = pair[0]
        .as_f64()
        .ok_or_else(|| FileError::Parse("non-numeric real part".into()))?;
    let im = pair[1]
        .as_f64()
        .ok_or_else(|| FileError::Parse("non-numeric imaginary part".into()))?;
    Ok(Complex64::new(re, im))
}

fn matrix_from_value(v: &Value) -> Result<ComplexMatrix, FileError> {
    let rows = v
        .as_array()
        .ok_or_else(|| FileError::Parse("matrix data must be an array of rows".into()))?;
    if rows.is_empty() {
        return Err(FileError::Parse("matrix has no rows".into()));
    }
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(rows.len());
    for row in rows {
        let cells = row
            .as_array()
            .ok_or_else(|| FileError::Parse("matrix row must be an array".into()))?;
        let mut r = Vec::with_capacity(cells.len());
        for cell in cells {
            r.push(complex_from_value(cell)?);
        }
        out.push(r);
    }
    let width = out[0].len();
    if out.iter().any(|r| r.len() != width) {
        return Err(FileError::Parse("ragged matrix rows".into()));
    }
    Ok(ComplexMatrix::from_rows(&out))
}

/// Serializes in the channel's source representation.
pub fn channel_to_value(channel: &Channel) -> Value {
    let (rep, data) = match channel.source() {
        Rep::A(m) => ("a", matrix_to_value(m)),
        Rep::B(m) => ("b", matrix_to_value(m)),
        Rep::Choi(m) => ("choi", matrix_to_value(m)),
        Rep::Kraus(terms) => (
            "kraus",
            Value::Array(
                terms
                    .iter()
                    .map(|t| json!({"eta": t.eta, "matrix": matrix_to_value(&t.op)}))
                    .collect(),
            ),
        ),
    };
    json!({
        "rep": rep,
        "dim_in": channel.dim_in(),
        "dim_out": channel.dim_out(),
        "trace_preserving": channel.is_trace_preserving(),
        "data": data,
    })
}

fn family_from_value(v: &Value) -> Result<Channel, FileError> {
    let family = v["family"]
        .as_str()
        .ok_or_else(|| FileError::Parse("family must be a string".into()))?;
    match family {
        "adm" => {
            let triples = v["params"]
                .as_array()
                .ok_or_else(|| FileError::Parse("adm needs params: [[a,b,g],...]".into()))?;
            let mut per_qubit = Vec::with_capacity(triples.len());
            for t in triples {
                let t = t
                    .as_array()
                    .filter(|a| a.len() == 3)
                    .ok_or_else(|| FileError::Parse("each adm triple needs 3 numbers".into()))?;
                let mut triple = [0.0; 3];
                for (i, x) in t.iter().enumerate() {
                    triple[i] = x
                        .as_f64()
                        .ok_or_else(|| FileError::Parse("non-numeric adm parameter".into()))?;
                }
                per_qubit.push(triple);
            }
            Ok(adm(&DepolarizerParams::new(per_qubit)?))
        }
        "translation" => {
            let off = v["offset"]
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| FileError::Parse("translation needs offset: [x,y,z]".into()))?;
            let mut offset = [0.0; 3];
            for (i, x) in off.iter().enumerate() {
                offset[i] = x
                    .as_f64()
                    .ok_or_else(|| FileError::Parse("non-numeric offset component".into()))?;
            }
            Ok(translation(&TranslationParams { offset }))
        }
        "robust" => {
            let kappa = v["kappa"]
                .as_f64()
                .ok_or_else(|| FileError::Parse("robust needs a numeric kappa".into()))?;
            Ok(robust_map(kappa)?)
        }
        other => Err(FileError::Parse(format!("unknown family '{other}'"))),
    }
}

/// Accepts either the full representation schema or the family shorthand,
/// distinguished by which key is present.
pub fn channel_from_value(v: &Value) -> Result<Channel, FileError> {
    if v.get("family").is_some() {
        return family_from_value(v);
    }
    let rep = v
        .get("rep")
        .and_then(Value::as_str)
        .ok_or_else(|| FileError::Parse("need either a 'family' or a 'rep' key".into()))?;
    let dim_in = v["dim_in"]
        .as_u64()
        .ok_or_else(|| FileError::Parse("dim_in must be a positive integer".into()))?
        as usize;
    let dim_out = v["dim_out"]
        .as_u64()
        .ok_or_else(|| FileError::Parse("dim_out must be a positive integer".into()))?
        as usize;
    let data = v
        .get("data")
        .ok_or_else(|| FileError::Parse("missing data".into()))?;
    match rep {
        "a" => Ok(Channel::from_a(matrix_from_value(data)?, dim_in, dim_out)?),
        "b" => Ok(Channel::from_b(matrix_from_value(data)?, dim_in, dim_out)?),
        "choi" => Ok(Channel::from_choi(
            matrix_from_value(data)?,
            dim_in,
            dim_out,
        )?),
        "kraus" => {
            let terms = data
                .as_array()
                .ok_or_else(|| FileError::Parse("kraus data must be an array of terms".into()))?;
            let mut kraus = Vec::with_capacity(terms.len());
            for term in terms {
                let eta = term["eta"]
                    .as_i64()
                    .filter(|e| *e == 1 || *e == -1)
                    .ok_or_else(|| FileError::Parse("eta must be 1 or -1".into()))?
                    as i8;
                let op = matrix_from_value(
                    term.get("matrix")
                        .ok_or_else(|| FileError::Parse("kraus term missing matrix".into()))?,
                )?;
                kraus.push(KrausTerm { eta, op });
            }
            Ok(Channel::from_kraus(kraus, dim_in, dim_out)?)
        }
        other => Err(FileError::Parse(format!("unknown rep '{other}'"))),
    }
}

pub fn save_channel(channel: &Channel, path: &Path) -> Result<(), FileError> {
    let text = serde_json::to_string_pretty(&channel_to_value(channel))
        .expect("channel values are plain JSON");
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load_channel(path: &Path) -> Result<Channel, FileError> {
    let text = std::fs::read_to_string(path)?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| FileError::Parse(format!("invalid JSON: {e}")))?;
    channel_from_value(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::DepolarizerParams;

    fn assert_same_a(a: &Channel, b: &Channel) {
        assert_eq!(a.a_matrix().max_abs_diff(b.a_matrix()), 0.0);
    }

    #[test]
    fn a_matrix_round_trip_is_bitwise() {
        let ch = translation(&TranslationParams {
            offset: [0.3, -0.1, 0.5],
        });
        let v = channel_to_value(&ch);
        assert_eq!(v["rep"], "a");
        assert_eq!(v["trace_preserving"], true);
        let back = channel_from_value(&v).unwrap();
        assert_same_a(&ch, &back);
    }

    #[test]
    fn kraus_round_trip_keeps_signs() {
        let ch = translation(&TranslationParams {
            offset: [0.0, 0.0, 0.5],
        });
        let kraus = ch.kraus().clone();
        assert!(kraus.iter().any(|t| t.eta == -1));
        let as_kraus = Channel::from_kraus(kraus, 2, 2).unwrap();
        let v = channel_to_value(&as_kraus);
        assert_eq!(v["rep"], "kraus");
        let back = channel_from_value(&v).unwrap();
        assert!(back.a_matrix().max_abs_diff(ch.a_matrix()) < 1e-12);
    }

    #[test]
    fn family_shorthand_loads() {
        let v = serde_json::json!({"family": "adm", "params": [[0.5, 0.25, -0.5]]});
        let ch = channel_from_value(&v).unwrap();
        let direct = adm(&DepolarizerParams::single(0.5, 0.25, -0.5).unwrap());
        assert_same_a(&ch, &direct);

        let v = serde_json::json!({"family": "translation", "offset": [0.0, 0.0, 0.5]});
        let ch = channel_from_value(&v).unwrap();
        let direct = translation(&TranslationParams {
            offset: [0.0, 0.0, 0.5],
        });
        assert_same_a(&ch, &direct);

        let v = serde_json::json!({"family": "robust", "kappa": 2.0});
        let ch = channel_from_value(&v).unwrap();
        assert_same_a(&ch, &robust_map(2.0).unwrap());
    }

    #[test]
    fn save_and_load_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("chan.json");
        let ch = robust_map(1.0).unwrap();
        save_channel(&ch, &path).unwrap();
        let back = load_channel(&path).unwrap();
        assert_same_a(&ch, &back);
    }

    #[test]
    fn rejects_malformed_inputs() {
        for v in [
            serde_json::json!({"rep": "tableau", "dim_in": 2, "dim_out": 2, "data": []}),
            serde_json::json!({"family": "unknown"}),
            serde_json::json!({"dim_in": 2}),
            serde_json::json!({"rep": "a", "dim_in": 2, "dim_out": 2,
                               "data": [[[0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]}),
        ] {
            assert!(matches!(
                channel_from_value(&v),
                Err(FileError::Parse(_))
            ));
        }
    }
}
