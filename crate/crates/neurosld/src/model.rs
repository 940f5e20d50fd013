//! Versioned JSON model files.
//!
//! ```json
//! {"version":1,"layers":[{"name":"hidden","in":20,"out":16,"activation":"tanh",
//!   "weights":[[...16 rows of 20...]],"biases":[...16...]}]}
//! ```
//!
//! Floats are written in shortest round-trip form, so a load after a save
//! reproduces every parameter bit for bit.

use std::path::Path;

use neurosld_core::{Activation, Layer, NetError, Network};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const MODEL_VERSION: u64 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("model file does not match the schema: {0}")]
    Schema(#[from] serde_json::Error),
    #[error("model version {found} is not supported (expected {MODEL_VERSION})")]
    Version { found: Value },
    #[error("layer {index} ({name}): {message}")]
    Layer {
        index: usize,
        name: String,
        message: String,
    },
    #[error(transparent)]
    Net(#[from] NetError),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayerFile {
    name: String,
    #[serde(rename = "in")]
    input: usize,
    #[serde(rename = "out")]
    output: usize,
    activation: String,
    weights: Vec<Vec<f64>>,
    biases: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    version: u64,
    layers: Vec<LayerFile>,
}

pub fn to_json(net: &Network) -> String {
    let layers = net
        .layers()
        .iter()
        .map(|l| LayerFile {
            name: l.name().to_string(),
            input: l.input_dim(),
            output: l.output_dim(),
            activation: l.activation().as_str().to_string(),
            weights: l
                .weights()
                .chunks(l.input_dim())
                .map(<[f64]>::to_vec)
                .collect(),
            biases: l.biases().to_vec(),
        })
        .collect();
    let mut text = serde_json::to_string(&ModelFile {
        version: MODEL_VERSION,
        layers,
    })
    .expect("model serializes");
    text.push('\n');
    text
}

pub fn from_json(text: &str) -> Result<Network, ModelError> {
    let value: Value = serde_json::from_str(text)?;
    match value.get("version") {
        Some(v) if v.as_u64() == Some(MODEL_VERSION) => {}
        Some(v) => return Err(ModelError::Version { found: v.clone() }),
        None => return Err(ModelError::Version { found: Value::Null }),
    }
    let file: ModelFile = serde_json::from_value(value)?;
    let layers = file
        .layers
        .into_iter()
        .enumerate()
        .map(|(index, l)| {
            let bad = |message: String| ModelError::Layer {
                index,
                name: l.name.clone(),
                message,
            };
            let activation: Activation = l.activation.parse()?;
            if l.weights.len() != l.output || l.weights.iter().any(|row| row.len() != l.input) {
                return Err(bad(format!(
                    "weights must be {} rows of {}",
                    l.output, l.input
                )));
            }
            if l.biases.len() != l.output {
                return Err(bad(format!(
                    "expected {} biases, found {}",
                    l.output,
                    l.biases.len()
                )));
            }
            let weights = l.weights.concat();
            Ok(Layer::from_parts(
                l.name, l.input, l.output, activation, weights, l.biases,
            )?)
        })
        .collect::<Result<Vec<_>, ModelError>>()?;
    Ok(Network::new(layers)?)
}

pub fn save_network(net: &Network, path: &Path) -> Result<(), ModelError> {
    std::fs::write(path, to_json(net)).map_err(|source| ModelError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_network(path: &Path) -> Result<Network, ModelError> {
    let text = std::fs::read_to_string(path).map_err(|source| ModelError::Io {
        path: path.display().to_string(),
        source,
    })?;
    from_json(&text)
}
