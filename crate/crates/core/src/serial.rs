//! JSON encoding of states and channels.
//!
//! Complex entries are `[re, im]` pairs. A state is
//! `{"dim": n, "matrix": [[[re, im], ...], ...]}` and a channel is
//! `{"dim": n, "kraus": [matrix, ...]}`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, ComplexMatrix};
use crate::quantum::{DensityMatrix, KrausChannel};

type RawMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateDoc {
    dim: usize,
    matrix: RawMatrix,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelDoc {
    dim: usize,
    kraus: Vec<RawMatrix>,
}

fn decode_matrix(dim: usize, raw: &RawMatrix) -> Result<ComplexMatrix> {
    if raw.len() != dim {
        return Err(Error::DimensionMismatch {
            left: dim,
            right: raw.len(),
        });
    }
    let mut data = Vec::with_capacity(dim * dim);
    for row in raw {
        if row.len() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: row.len(),
            });
        }
        data.extend(row.iter().map(|&[re, im]| c64(re, im)));
    }
    ComplexMatrix::new(dim, data).map_err(|e| Error::Parse(e.to_string()))
}

fn encode_matrix(m: &ComplexMatrix) -> RawMatrix {
    m.rows()
        .into_iter()
        .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn parse_matrix_doc(text: &str) -> Result<ComplexMatrix> {
    let doc: StateDoc = parse_json(text)?;
    decode_matrix(doc.dim, &doc.matrix)
}

pub fn parse_state(text: &str) -> Result<DensityMatrix> {
    DensityMatrix::new(parse_matrix_doc(text)?)
}

pub fn parse_channel(text: &str) -> Result<KrausChannel> {
    let doc: ChannelDoc = parse_json(text)?;
    if doc.kraus.is_empty() {
        return Err(Error::Parse("channel has no Kraus operators".into()));
    }
    let ops = doc
        .kraus
        .iter()
        .map(|m| decode_matrix(doc.dim, m))
        .collect::<Result<Vec<_>>>()?;
    KrausChannel::new(ops)
}

pub fn load_state(path: impl AsRef<Path>) -> Result<DensityMatrix> {
    parse_state(&read(path.as_ref())?)
}

pub fn load_channel(path: impl AsRef<Path>) -> Result<KrausChannel> {
    parse_channel(&read(path.as_ref())?)
}

pub fn state_to_json(rho: &DensityMatrix) -> String {
    let doc = StateDoc {
        dim: rho.dim(),
        matrix: encode_matrix(rho.matrix()),
    };
    serde_json::to_string(&doc).expect("state encodes")
}

pub fn channel_to_json(phi: &KrausChannel) -> String {
    let doc = ChannelDoc {
        dim: phi.dim(),
        kraus: phi.ops().iter().map(encode_matrix).collect(),
    };
    serde_json::to_string(&doc).expect("channel encodes")
}
