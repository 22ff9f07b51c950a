//! Parameter and multiply-add counters for dense and convolutional
//! network architectures. The totals feed the gradient-descent model:
//! W = total weights, C = gradient madds per data point.

use crate::error::{Error, Result};

/// Fully-connected layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DenseLayerSpec {
    pub inputs: u64,
    pub outputs: u64,
    pub include_bias: bool,
}

impl DenseLayerSpec {
    pub fn new(inputs: u64, outputs: u64, include_bias: bool) -> Result<Self> {
        if inputs < 1 || outputs < 1 {
            return Err(Error::InvalidWorkload(
                "dense layer inputs and outputs must be >= 1".into(),
            ));
        }
        Ok(Self {
            inputs,
            outputs,
            include_bias,
        })
    }
}

/// Convolutional layer with a square kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvLayerSpec {
    pub num_maps: u64,
    pub kernel_side: u64,
    pub border: u64,
    pub stride: u64,
    pub include_bias: bool,
}

impl ConvLayerSpec {
    pub fn new(
        num_maps: u64,
        kernel_side: u64,
        border: u64,
        stride: u64,
        include_bias: bool,
    ) -> Result<Self> {
        if num_maps < 1 || kernel_side < 1 || stride < 1 {
            return Err(Error::InvalidWorkload(
                "conv layer num_maps, kernel_side and stride must be >= 1".into(),
            ));
        }
        Ok(Self {
            num_maps,
            kernel_side,
            border,
            stride,
            include_bias,
        })
    }
}

/// Square activation tensor: `side × side × depth`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TensorShape {
    pub side: u64,
    pub depth: u64,
}

impl TensorShape {
    pub fn new(side: u64, depth: u64) -> Result<Self> {
        if side < 1 || depth < 1 {
            return Err(Error::InvalidWorkload(
                "tensor side and depth must be >= 1".into(),
            ));
        }
        Ok(Self { side, depth })
    }

    pub fn flattened(&self) -> u64 {
        self.side * self.side * self.depth
    }
}

/// One layer of an architecture description.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerSpec {
    Dense(DenseLayerSpec),
    Conv(ConvLayerSpec),
}

/// Whole-network totals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NetworkCounts {
    pub total_weights: u64,
    pub forward_madds: u64,
    /// Three-step gradient cost (forward, back propagation, gradient):
    /// 3 × forward_madds, which is 6·W for bias-free dense networks.
    pub gradient_madds: u64,
}

/// Weights and forward-pass madds of a dense layer. The madd count is
/// 2·inputs·outputs; bias adds weights but no madds.
pub fn dense_counts(layer: &DenseLayerSpec) -> (u64, u64) {
    let mut weights = layer.inputs * layer.outputs;
    if layer.include_bias {
        weights += layer.outputs;
    }
    (weights, 2 * layer.inputs * layer.outputs)
}

/// Output side length of a convolution: ⌊(l − k + b)/s⌋ + 1.
/// Errors when the kernel exceeds the padded input.
pub fn conv_output_side(input_side: u64, kernel_side: u64, border: u64, stride: u64) -> Result<u64> {
    let span = input_side as i64 - kernel_side as i64 + border as i64;
    if span < 0 {
        return Err(Error::KernelTooLarge {
            input_side,
            kernel_side,
            border,
        });
    }
    Ok(span as u64 / stride + 1)
}

/// Weights, forward madds, and output shape of a conv layer applied to
/// `input`: madds = n·k²·d·c², weights = n·k²·d (+ n·c² with bias).
pub fn conv_counts(layer: &ConvLayerSpec, input: &TensorShape) -> Result<(u64, u64, TensorShape)> {
    let c = conv_output_side(input.side, layer.kernel_side, layer.border, layer.stride)?;
    let k2d = layer.kernel_side * layer.kernel_side * input.depth;
    let madds = layer.num_maps * k2d * c * c;
    let mut weights = layer.num_maps * k2d;
    if layer.include_bias {
        weights += layer.num_maps * c * c;
    }
    Ok((
        weights,
        madds,
        TensorShape {
            side: c,
            depth: layer.num_maps,
        },
    ))
}

enum Feed {
    Tensor(TensorShape),
    Flat(u64),
}

impl Feed {
    fn flattened(&self) -> u64 {
        match self {
            Feed::Tensor(t) => t.flattened(),
            Feed::Flat(f) => *f,
        }
    }
}

/// Sum weights and madds over an ordered layer stack, checking that
/// shapes chain. Dense layers consume the flattened previous output.
pub fn network_totals(layers: &[LayerSpec], input: TensorShape) -> Result<NetworkCounts> {
    let mut feed = Feed::Tensor(input);
    let mut totals = NetworkCounts::default();
    for (i, layer) in layers.iter().enumerate() {
        match layer {
            LayerSpec::Dense(d) => {
                let flat = feed.flattened();
                if flat != d.inputs {
                    return Err(Error::InvalidArchitecture {
                        layer: i,
                        msg: format!(
                            "dense layer expects {} inputs but previous output flattens to {flat}",
                            d.inputs
                        ),
                    });
                }
                let (w, m) = dense_counts(d);
                totals.total_weights += w;
                totals.forward_madds += m;
                feed = Feed::Flat(d.outputs);
            }
            LayerSpec::Conv(c) => {
                let shape = match &feed {
                    Feed::Tensor(t) => *t,
                    Feed::Flat(_) => {
                        return Err(Error::InvalidArchitecture {
                            layer: i,
                            msg: "conv layer after a dense layer has no tensor shape".into(),
                        })
                    }
                };
                let (w, m, out) =
                    conv_counts(c, &shape).map_err(|e| Error::InvalidArchitecture {
                        layer: i,
                        msg: e.to_string(),
                    })?;
                totals.total_weights += w;
                totals.forward_madds += m;
                feed = Feed::Tensor(out);
            }
        }
    }
    totals.gradient_madds = 3 * totals.forward_madds;
    Ok(totals)
}

/// The MNIST dense stack used throughout the reference workloads:
/// 784 → 2500 → 2000 → 1500 → 1000 → 500 → 10, no bias.
pub fn mnist_dense_stack() -> Vec<LayerSpec> {
    let sizes = [784u64, 2500, 2000, 1500, 1000, 500, 10];
    sizes
        .windows(2)
        .map(|w| LayerSpec::Dense(DenseLayerSpec::new(w[0], w[1], false).unwrap()))
        .collect()
}
