//! Channel files: `{"din": d, "dout": d', "kraus": [matrix, ...]}` where a
//! matrix is an array of rows and each entry is `[re, im]`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use thiserror::Error;

use super::KrausChannel;
use crate::error::Error;
use crate::linops::ComplexMatrix;

#[derive(Debug, Error)]
pub enum ChannelJsonError {
    #[error("malformed channel JSON: {0}")]
    Syntax(#[from] serde_json::Error),

    #[error("field `{field}`: {reason}")]
    Field { field: String, reason: String },

    #[error("channel is invalid: {0}")]
    Channel(#[from] Error),
}

fn field_error(field: impl Into<String>, reason: impl Into<String>) -> ChannelJsonError {
    ChannelJsonError::Field { field: field.into(), reason: reason.into() }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelFile {
    din: usize,
    dout: usize,
    kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

#[derive(Serialize)]
struct ChannelFileOut {
    din: usize,
    dout: usize,
    kraus: Vec<Vec<Vec<[Box<RawValue>; 2]>>>,
}

/// Parses and validates a channel file.
pub fn channel_from_json(text: &str) -> Result<KrausChannel<f64>, ChannelJsonError> {
    let file: ChannelFile = serde_json::from_str(text)?;
    if file.kraus.is_empty() {
        return Err(field_error("kraus", "no Kraus operators"));
    }
    let mut ops = Vec::with_capacity(file.kraus.len());
    for (k, rows) in file.kraus.iter().enumerate() {
        if rows.len() != file.dout {
            return Err(field_error(
                format!("kraus[{k}]"),
                format!("has {} rows, expected dout = {}", rows.len(), file.dout),
            ));
        }
        let mut data = Vec::with_capacity(file.dout * file.din);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != file.din {
                return Err(field_error(
                    format!("kraus[{k}][{r}]"),
                    format!("row {r} has {} entries, expected din = {}", row.len(), file.din),
                ));
            }
            for (col, &[re, im]) in row.iter().enumerate() {
                if !re.is_finite() || !im.is_finite() {
                    return Err(field_error(format!("kraus[{k}][{r}][{col}]"), "entry is not finite"));
                }
                data.push(Complex::new(re, im));
            }
        }
        ops.push(ComplexMatrix::from_vec(file.dout, file.din, data)?);
    }
    Ok(KrausChannel::new(ops)?)
}

/// Serializes with 17 significant digits so a read-back is bit-exact.
pub fn channel_to_json(c: &KrausChannel<f64>) -> String {
    let num = |x: f64| RawValue::from_string(format!("{x:.16e}")).expect("formatted float is valid JSON");
    let kraus = c
        .kraus()
        .iter()
        .map(|k| (0..k.rows()).map(|r| k.row(r).iter().map(|z| [num(z.re), num(z.im)]).collect()).collect())
        .collect();
    let out = ChannelFileOut { din: c.din(), dout: c.dout(), kraus };
    serde_json::to_string(&out).expect("channel serializes")
}
