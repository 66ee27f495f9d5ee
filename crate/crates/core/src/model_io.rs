//! Plain-text model files.
//!
//! ```text
//! chi2nn-model 1
//! kind chi2nn
//! inputs 2
//! hidden 10
//! 1.2345678901234567e-1
//! ...
//! ```
//!
//! After the four header lines come `inputs·hidden + 2·hidden + 1` values, one
//! per line, in the order input weights (row-major, input index outer),
//! hidden thresholds, output weights, output threshold. Values carry 17
//! significant digits so a save/load round trip is bit-exact.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bpnn::BpnnNetwork;
use crate::chi2nn::Chi2Network;
use crate::network::SingleHiddenLayer;

const MAGIC: &str = "chi2nn-model";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelIoError {
    #[error("line {line}: {detail}")]
    Parse { line: usize, detail: String },
    #[error("expected {expected} parameters, found {found}")]
    Count { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Chi2nn,
    Bpnn,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Chi2nn => "chi2nn",
            ModelKind::Bpnn => "bpnn",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ModelKind::Chi2nn => "χ²NN",
            ModelKind::Bpnn => "BPNN",
        }
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "chi2nn" => Ok(ModelKind::Chi2nn),
            "bpnn" => Ok(ModelKind::Bpnn),
            other => Err(format!("unknown model kind '{other}'")),
        }
    }
}

pub fn write_params(kind: ModelKind, params: &SingleHiddenLayer) -> String {
    let mut out = String::new();
    writeln!(out, "{MAGIC} {VERSION}").unwrap();
    writeln!(out, "kind {}", kind.as_str()).unwrap();
    writeln!(out, "inputs {}", params.inputs()).unwrap();
    writeln!(out, "hidden {}", params.hidden()).unwrap();
    for v in params.params() {
        writeln!(out, "{v:.16e}").unwrap();
    }
    out
}

pub fn read_params(text: &str) -> Result<(ModelKind, SingleHiddenLayer), ModelIoError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let mut header = |key: &str| -> Result<(usize, String), ModelIoError> {
        let (i, line) = lines.next().ok_or(ModelIoError::Parse {
            line: 0,
            detail: format!("missing '{key}' header"),
        })?;
        let mut parts = line.split_whitespace();
        match (parts.next(), parts.next(), parts.next()) {
            (Some(k), Some(v), None) if k == key => Ok((i + 1, v.to_string())),
            _ => Err(ModelIoError::Parse {
                line: i + 1,
                detail: format!("expected '{key} <value>', found '{line}'"),
            }),
        }
    };
    let (line, version) = header(MAGIC)?;
    if version != VERSION.to_string() {
        return Err(ModelIoError::Parse {
            line,
            detail: format!("unsupported version {version}"),
        });
    }
    let (line, kind) = header("kind")?;
    let kind = kind
        .parse::<ModelKind>()
        .map_err(|detail| ModelIoError::Parse { line, detail })?;
    let parse_dim = |(line, v): (usize, String)| {
        v.parse::<usize>().map_err(|_| ModelIoError::Parse {
            line,
            detail: format!("invalid dimension '{v}'"),
        })
    };
    let inputs = parse_dim(header("inputs")?)?;
    let hidden = parse_dim(header("hidden")?)?;

    let mut params = SingleHiddenLayer::zeros(inputs, hidden);
    let expected = params.param_count();
    let values = lines
        .map(|(i, l)| {
            l.trim().parse::<f64>().map_err(|_| ModelIoError::Parse {
                line: i + 1,
                detail: format!("invalid number '{}'", l.trim()),
            })
        })
        .collect::<Result<Vec<f64>, _>>()?;
    if values.len() != expected {
        return Err(ModelIoError::Count {
            expected,
            found: values.len(),
        });
    }
    for (slot, v) in params.params_mut().zip(values) {
        *slot = v;
    }
    Ok((kind, params))
}

impl Chi2Network {
    pub fn to_text(&self) -> String {
        write_params(ModelKind::Chi2nn, &self.params)
    }
}

impl BpnnNetwork {
    pub fn to_text(&self) -> String {
        write_params(ModelKind::Bpnn, &self.params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout() {
        let text = write_params(ModelKind::Bpnn, &SingleHiddenLayer::zeros(2, 3));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(&lines[..4], &["chi2nn-model 1", "kind bpnn", "inputs 2", "hidden 3"]);
        assert_eq!(lines.len(), 4 + 13);
    }

    #[test]
    fn rejects_malformed_files() {
        let good = write_params(ModelKind::Chi2nn, &SingleHiddenLayer::random(1, 2, 0, 0.5));
        assert!(read_params(&good).is_ok());
        assert!(read_params(&good.replace("kind chi2nn", "kind svm")).is_err());
        assert!(read_params(&good.replace("chi2nn-model 1", "chi2nn-model 9")).is_err());
        let truncated: String = good.lines().take(6).map(|l| format!("{l}\n")).collect();
        assert!(matches!(read_params(&truncated), Err(ModelIoError::Count { .. })));
        assert!(read_params("").is_err());
    }
}
