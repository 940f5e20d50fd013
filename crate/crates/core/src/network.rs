//! Dense feedforward network with a softmax output, cross-entropy loss and
//! plain per-example gradient descent.
//!
//! Weights are stored row-major, `output_dim × input_dim`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

/// Clamp applied to predictions before taking the logarithm.
pub const LOG_EPSILON: f64 = 1e-12;

/// Hidden-layer count from which a network counts as deep.
pub const DEEP_HIDDEN_LAYERS: usize = 5;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum NetError {
    #[error("unknown activation {0:?}")]
    UnknownActivation(String),
    #[error("layer {0:?}: dimensions must be at least 1")]
    ZeroDimension(String),
    #[error("randomisation scale must be finite and non-negative")]
    BadScale,
    #[error("network has no layers")]
    Empty,
    #[error("layer {index} expects input {expected} but previous layer outputs {found}")]
    Unchained {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("softmax is only allowed on the final layer (layer {0})")]
    InnerSoftmax(usize),
    #[error("layer {name:?}: parameter shape does not match {output_dim}x{input_dim}")]
    ParameterShape {
        name: String,
        input_dim: usize,
        output_dim: usize,
    },
    #[error("expected a vector of length {expected}, got {found}")]
    Length { expected: usize, found: usize },
    #[error("training needs a softmax output layer")]
    OutputNotSoftmax,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Activation {
    Sigmoid,
    Tanh,
    Relu,
    Linear,
    Softmax,
}

impl Activation {
    pub fn as_str(self) -> &'static str {
        match self {
            Activation::Sigmoid => "sigmoid",
            Activation::Tanh => "tanh",
            Activation::Relu => "relu",
            Activation::Linear => "linear",
            Activation::Softmax => "softmax",
        }
    }

    fn apply(self, z: &[f64]) -> Vec<f64> {
        match self {
            Activation::Sigmoid => z.iter().map(|&v| sigmoid(v)).collect(),
            Activation::Tanh => z.iter().map(|&v| libm::tanh(v)).collect(),
            Activation::Relu => z.iter().map(|&v| v.max(0.0)).collect(),
            Activation::Linear => z.to_vec(),
            Activation::Softmax => softmax(z),
        }
    }

    /// Elementwise derivative given pre-activation `z` and output `a`.
    /// Not used for softmax, whose delta is folded into the loss.
    fn derivative(self, z: f64, a: f64) -> f64 {
        match self {
            Activation::Sigmoid => a * (1.0 - a),
            Activation::Tanh => 1.0 - a * a,
            Activation::Relu => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Linear | Activation::Softmax => 1.0,
        }
    }
}

impl FromStr for Activation {
    type Err = NetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "sigmoid" => Activation::Sigmoid,
            "tanh" => Activation::Tanh,
            "relu" => Activation::Relu,
            "linear" => Activation::Linear,
            "softmax" => Activation::Softmax,
            other => return Err(NetError::UnknownActivation(other.into())),
        })
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + libm::exp(-x))
}

/// Numerically stable softmax.
pub fn softmax(z: &[f64]) -> Vec<f64> {
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = z.iter().map(|&v| libm::exp(v - max)).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// `-Σ target_k · ln(max(pred_k, ε))`.
pub fn cross_entropy(pred: &[f64], target: &[f64]) -> Result<f64, NetError> {
    if pred.len() != target.len() {
        return Err(NetError::Length {
            expected: target.len(),
            found: pred.len(),
        });
    }
    Ok(pred
        .iter()
        .zip(target)
        .filter(|(_, &t)| t != 0.0)
        .map(|(&p, &t)| -t * libm::log(p.max(LOG_EPSILON)))
        .sum())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    name: String,
    input_dim: usize,
    output_dim: usize,
    activation: Activation,
    weights: Vec<f64>,
    biases: Vec<f64>,
}

impl Layer {
    /// New layer with weights and biases drawn uniformly from `[-scale, scale]`.
    pub fn init<R: Rng + ?Sized>(
        name: impl Into<String>,
        input_dim: usize,
        output_dim: usize,
        activation: Activation,
        scale: f64,
        rng: &mut R,
    ) -> Result<Layer, NetError> {
        let name = name.into();
        if input_dim == 0 || output_dim == 0 {
            return Err(NetError::ZeroDimension(name));
        }
        if !(scale.is_finite() && scale >= 0.0) {
            return Err(NetError::BadScale);
        }
        let mut draw = || {
            if scale > 0.0 {
                rng.gen_range(-scale..=scale)
            } else {
                0.0
            }
        };
        let weights = (0..input_dim * output_dim).map(|_| draw()).collect();
        let biases = (0..output_dim).map(|_| draw()).collect();
        Ok(Layer {
            name,
            input_dim,
            output_dim,
            activation,
            weights,
            biases,
        })
    }

    /// Layer with explicit parameters; `weights` is row-major.
    pub fn from_parts(
        name: impl Into<String>,
        input_dim: usize,
        output_dim: usize,
        activation: Activation,
        weights: Vec<f64>,
        biases: Vec<f64>,
    ) -> Result<Layer, NetError> {
        let name = name.into();
        if input_dim == 0 || output_dim == 0 {
            return Err(NetError::ZeroDimension(name));
        }
        if weights.len() != input_dim * output_dim || biases.len() != output_dim {
            return Err(NetError::ParameterShape {
                name,
                input_dim,
                output_dim,
            });
        }
        Ok(Layer {
            name,
            input_dim,
            output_dim,
            activation,
            weights,
            biases,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    pub fn biases(&self) -> &[f64] {
        &self.biases
    }

    pub fn biases_mut(&mut self) -> &mut [f64] {
        &mut self.biases
    }

    pub fn weight(&self, row: usize, col: usize) -> f64 {
        self.weights[row * self.input_dim + col]
    }

    fn affine(&self, x: &[f64]) -> Vec<f64> {
        self.weights
            .chunks_exact(self.input_dim)
            .zip(&self.biases)
            .map(|(row, b)| row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + b)
            .collect()
    }
}

/// Intermediate values of one forward pass.
#[derive(Clone, Debug, PartialEq)]
pub struct ForwardPass {
    /// Pre-activations, one per layer.
    pub pre: Vec<Vec<f64>>,
    /// Layer outputs, one per layer.
    pub post: Vec<Vec<f64>>,
}

impl ForwardPass {
    pub fn output(&self) -> &[f64] {
        self.post.last().map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Per-layer parameter gradients, shaped like the network.
#[derive(Clone, Debug, PartialEq)]
pub struct Gradients {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    layers: Vec<Layer>,
}

impl Network {
    pub fn new(layers: Vec<Layer>) -> Result<Network, NetError> {
        if layers.is_empty() {
            return Err(NetError::Empty);
        }
        for (i, pair) in layers.windows(2).enumerate() {
            if pair[0].output_dim != pair[1].input_dim {
                return Err(NetError::Unchained {
                    index: i + 1,
                    expected: pair[1].input_dim,
                    found: pair[0].output_dim,
                });
            }
        }
        if let Some(i) = layers[..layers.len() - 1]
            .iter()
            .position(|l| l.activation == Activation::Softmax)
        {
            return Err(NetError::InnerSoftmax(i));
        }
        Ok(Network { layers })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Layer] {
        &mut self.layers
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers[self.layers.len() - 1].output_dim
    }

    /// Number of hidden representations between input and output.
    pub fn hidden_layers(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn is_deep(&self) -> bool {
        self.hidden_layers() >= DEEP_HIDDEN_LAYERS
    }

    pub fn parameter_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.len() + l.biases.len())
            .sum()
    }

    pub fn forward(&self, x: &[f64]) -> Result<ForwardPass, NetError> {
        if x.len() != self.input_dim() {
            return Err(NetError::Length {
                expected: self.input_dim(),
                found: x.len(),
            });
        }
        let mut pre = Vec::with_capacity(self.layers.len());
        let mut post: Vec<Vec<f64>> = Vec::with_capacity(self.layers.len());
        for layer in &self.layers {
            let input = post.last().map(Vec::as_slice).unwrap_or(x);
            let z = layer.affine(input);
            post.push(layer.activation.apply(&z));
            pre.push(z);
        }
        Ok(ForwardPass { pre, post })
    }

    pub fn predict(&self, x: &[f64]) -> Result<Vec<f64>, NetError> {
        let mut pass = self.forward(x)?;
        Ok(pass.post.pop().unwrap_or_default())
    }

    /// Loss at the current parameters and its gradient for one example.
    pub fn gradients(&self, x: &[f64], target: &[f64]) -> Result<(f64, Gradients), NetError> {
        let last = self.layers.len() - 1;
        if self.layers[last].activation != Activation::Softmax {
            return Err(NetError::OutputNotSoftmax);
        }
        if target.len() != self.output_dim() {
            return Err(NetError::Length {
                expected: self.output_dim(),
                found: target.len(),
            });
        }
        let pass = self.forward(x)?;
        let loss = cross_entropy(pass.output(), target)?;

        let mut gw = vec![Vec::new(); self.layers.len()];
        let mut gb = vec![Vec::new(); self.layers.len()];
        // softmax + cross-entropy: dL/dz = pred - target
        let mut delta: Vec<f64> = pass
            .output()
            .iter()
            .zip(target)
            .map(|(p, t)| p - t)
            .collect();
        for i in (0..=last).rev() {
            let layer = &self.layers[i];
            let input = if i == 0 { x } else { &pass.post[i - 1] };
            let mut w = Vec::with_capacity(layer.weights.len());
            for d in &delta {
                w.extend(input.iter().map(|a| d * a));
            }
            gw[i] = w;
            gb[i] = delta.clone();
            if i > 0 {
                let below = &self.layers[i - 1];
                delta = (0..layer.input_dim)
                    .map(|col| {
                        let back: f64 = delta
                            .iter()
                            .enumerate()
                            .map(|(row, d)| layer.weight(row, col) * d)
                            .sum();
                        back * below
                            .activation
                            .derivative(pass.pre[i - 1][col], pass.post[i - 1][col])
                    })
                    .collect();
            }
        }
        Ok((
            loss,
            Gradients {
                weights: gw,
                biases: gb,
            },
        ))
    }

    /// `θ ← θ - lr · g` for every parameter.
    pub fn apply_gradients(&mut self, grads: &Gradients, lr: f64) {
        for ((layer, gw), gb) in self
            .layers
            .iter_mut()
            .zip(&grads.weights)
            .zip(&grads.biases)
        {
            for (w, g) in layer.weights.iter_mut().zip(gw) {
                *w -= lr * g;
            }
            for (b, g) in layer.biases.iter_mut().zip(gb) {
                *b -= lr * g;
            }
        }
    }

    /// One gradient-descent step on `(x, target)`. Returns the loss measured
    /// before the step.
    pub fn backprop_update(&mut self, x: &[f64], target: &[f64], lr: f64) -> Result<f64, NetError> {
        let (loss, grads) = self.gradients(x, target)?;
        self.apply_gradients(&grads, lr);
        Ok(loss)
    }
}
