//! JSON model configuration: hardware, workload, topology, and sweep
//! bounds. Architecture descriptions are expanded through `net_arch`
//! so C and W can be derived instead of supplied.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::core_model::{CommTopology, GradientDescentModel, GraphWorkload, HardwareSpec};
use crate::error::{Error, Result};
use crate::graph_partition::{
    degrees_from_edge_list, parse_degree_file, parse_edge_list, DegreeSequence,
};
use crate::net_arch::{
    network_totals, ConvLayerSpec, DenseLayerSpec, LayerSpec, TensorShape,
};
use crate::speedup::ScalingMode;

/// Where the graph comes from: explicit counts (degrees synthesized as
/// near-uniform), an edge-list file, or a degree file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSource {
    Counts { num_vertices: u64, num_edges: u64 },
    EdgeList(PathBuf),
    DegreeFile(PathBuf),
}

impl GraphSource {
    /// Loads or synthesizes the degree sequence.
    pub fn resolve(&self) -> Result<DegreeSequence> {
        match self {
            GraphSource::Counts {
                num_vertices,
                num_edges,
            } => DegreeSequence::uniform(*num_vertices, *num_edges),
            GraphSource::EdgeList(path) => {
                let text = std::fs::read_to_string(path)?;
                degrees_from_edge_list(&parse_edge_list(&text)?)
            }
            GraphSource::DegreeFile(path) => {
                let text = std::fs::read_to_string(path)?;
                parse_degree_file(&text)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphInferenceConfig {
    pub source: GraphSource,
    pub num_states: u64,
    pub replication_factor: f64,
    pub shared_memory: bool,
    pub literal_divide_by_n: bool,
    pub trials: u32,
    pub seed: Option<u64>,
}

impl GraphInferenceConfig {
    /// Builds the time-model workload for a resolved degree sequence.
    pub fn workload(&self, degrees: &DegreeSequence) -> Result<GraphWorkload> {
        GraphWorkload::new(
            degrees.num_vertices(),
            degrees.num_edges(),
            self.num_states,
            self.replication_factor,
            self.shared_memory,
            self.literal_divide_by_n,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WorkloadConfig {
    GradientDescent {
        model: GradientDescentModel,
        scaling: ScalingMode,
        /// Present when C and W were derived from a declared stack.
        architecture: Option<(Vec<LayerSpec>, TensorShape)>,
    },
    GraphInference(GraphInferenceConfig),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub hardware: HardwareSpec,
    pub comm: CommTopology,
    pub workload: WorkloadConfig,
    pub n_min: u32,
    pub n_max: u32,
    pub reference_n: Option<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    hardware: RawHardware,
    workload: RawWorkload,
    #[serde(default)]
    comm: Option<RawComm>,
    sweep: RawSweep,
    #[serde(default)]
    reference_n: Option<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHardware {
    peak_ops_per_sec: f64,
    efficiency: f64,
    bandwidth_bits_per_sec: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComm {
    topology: String,
    #[serde(default = "default_bits")]
    bits_per_param: u32,
    #[serde(default = "default_stages")]
    stages: u32,
}

fn default_bits() -> u32 {
    32
}

fn default_stages() -> u32 {
    2
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum RawWorkload {
    GradientDescent(RawGradientDescent),
    GraphInference(RawGraphInference),
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
#[derive(Default, Clone, Copy)]
enum RawScaling {
    #[default]
    Strong,
    Weak,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGradientDescent {
    #[serde(default)]
    cost_per_point_ops: Option<f64>,
    batch_size: u64,
    #[serde(default)]
    num_params: Option<u64>,
    #[serde(default)]
    architecture: Option<RawArchitecture>,
    #[serde(default)]
    scaling: RawScaling,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArchitecture {
    input: RawShape,
    layers: Vec<RawLayer>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawShape {
    side: u64,
    depth: u64,
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum RawLayer {
    Dense {
        #[serde(rename = "in")]
        inputs: u64,
        #[serde(rename = "out")]
        outputs: u64,
        #[serde(default)]
        bias: bool,
    },
    Conv {
        maps: u64,
        kernel: u64,
        #[serde(default)]
        border: u64,
        #[serde(default = "default_stride")]
        stride: u64,
        #[serde(default)]
        bias: bool,
    },
}

fn default_stride() -> u64 {
    1
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraphInference {
    #[serde(default)]
    num_vertices: Option<u64>,
    #[serde(default)]
    num_edges: Option<u64>,
    #[serde(default)]
    edge_list: Option<PathBuf>,
    #[serde(default)]
    degree_file: Option<PathBuf>,
    states: u64,
    #[serde(default)]
    replication: f64,
    #[serde(default)]
    shared_memory: bool,
    #[serde(default)]
    literal_divide_by_n: bool,
    #[serde(default = "default_trials")]
    trials: u32,
    #[serde(default)]
    seed: Option<u64>,
}

fn default_trials() -> u32 {
    100
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    n_min: u32,
    n_max: u32,
}

fn build_topology(raw: Option<RawComm>) -> Result<CommTopology> {
    let Some(raw) = raw else {
        return Ok(CommTopology::none());
    };
    match raw.topology.as_str() {
        "none" => Ok(CommTopology::none()),
        "linear" => CommTopology::linear(raw.bits_per_param),
        "log_tree" => CommTopology::log_tree(raw.stages, raw.bits_per_param),
        "spark_hybrid" => CommTopology::spark_hybrid(raw.bits_per_param),
        other => Err(Error::Config(format!("unknown topology `{other}`"))),
    }
}

fn build_layers(raw: &RawArchitecture) -> Result<(Vec<LayerSpec>, TensorShape)> {
    let input = TensorShape::new(raw.input.side, raw.input.depth)?;
    let layers = raw
        .layers
        .iter()
        .map(|layer| match *layer {
            RawLayer::Dense { inputs, outputs, bias } => {
                Ok(LayerSpec::Dense(DenseLayerSpec::new(inputs, outputs, bias)?))
            }
            RawLayer::Conv {
                maps,
                kernel,
                border,
                stride,
                bias,
            } => Ok(LayerSpec::Conv(ConvLayerSpec::new(
                maps, kernel, border, stride, bias,
            )?)),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((layers, input))
}

fn build_gradient_descent(
    raw: RawGradientDescent,
    comm: &CommTopology,
    reference_n: Option<u32>,
) -> Result<WorkloadConfig> {
    let (cost, params, architecture) = match raw.architecture {
        Some(ref arch) => {
            if raw.cost_per_point_ops.is_some() || raw.num_params.is_some() {
                return Err(Error::Config(
                    "give either an architecture or explicit cost_per_point_ops/num_params, not both"
                        .into(),
                ));
            }
            let (layers, input) = build_layers(arch)?;
            let totals = network_totals(&layers, input)?;
            (
                totals.gradient_madds as f64,
                totals.total_weights,
                Some((layers, input)),
            )
        }
        None => {
            let cost = raw.cost_per_point_ops.ok_or_else(|| {
                Error::Config("gradient_descent needs cost_per_point_ops or an architecture".into())
            })?;
            let params = raw.num_params.unwrap_or(0);
            if params == 0 && comm.variant() != crate::core_model::TopologyVariant::None {
                return Err(Error::Config(
                    "num_params must be > 0 with a communicating topology".into(),
                ));
            }
            (cost, params, None)
        }
    };
    let scaling = match raw.scaling {
        RawScaling::Strong => ScalingMode::Strong,
        RawScaling::Weak => {
            if reference_n.is_none() {
                return Err(Error::Config("weak scaling needs reference_n".into()));
            }
            ScalingMode::Weak
        }
    };
    Ok(WorkloadConfig::GradientDescent {
        model: GradientDescentModel::new(cost, raw.batch_size, params)?,
        scaling,
        architecture,
    })
}

fn build_graph_inference(raw: RawGraphInference) -> Result<WorkloadConfig> {
    let source = match (raw.edge_list, raw.degree_file, raw.num_vertices, raw.num_edges) {
        (Some(path), None, None, None) => GraphSource::EdgeList(path),
        (None, Some(path), None, None) => GraphSource::DegreeFile(path),
        (None, None, Some(v), Some(e)) => GraphSource::Counts {
            num_vertices: v,
            num_edges: e,
        },
        _ => {
            return Err(Error::Config(
                "graph_inference needs exactly one source: num_vertices+num_edges, \
                 edge_list, or degree_file"
                    .into(),
            ))
        }
    };
    Ok(WorkloadConfig::GraphInference(GraphInferenceConfig {
        source,
        num_states: raw.states,
        replication_factor: raw.replication,
        shared_memory: raw.shared_memory,
        literal_divide_by_n: raw.literal_divide_by_n,
        trials: raw.trials,
        seed: raw.seed,
    }))
}

/// Parses and validates a JSON configuration document.
pub fn parse_config(document: &str) -> Result<ModelConfig> {
    let raw: RawConfig = serde_json::from_str(document)?;
    let hardware = HardwareSpec::new(
        raw.hardware.peak_ops_per_sec,
        raw.hardware.efficiency,
        raw.hardware.bandwidth_bits_per_sec,
    )?;
    let comm = build_topology(raw.comm)?;
    if raw.sweep.n_min < 1 || raw.sweep.n_min > raw.sweep.n_max {
        return Err(Error::Config(format!(
            "sweep bounds must satisfy 1 <= n_min <= n_max, got [{}, {}]",
            raw.sweep.n_min, raw.sweep.n_max
        )));
    }
    let workload = match raw.workload {
        RawWorkload::GradientDescent(gd) => build_gradient_descent(gd, &comm, raw.reference_n)?,
        RawWorkload::GraphInference(gi) => build_graph_inference(gi)?,
    };
    Ok(ModelConfig {
        hardware,
        comm,
        workload,
        n_min: raw.sweep.n_min,
        n_max: raw.sweep.n_max,
        reference_n: raw.reference_n,
    })
}

/// Reads and parses a configuration file.
pub fn load_config(path: &Path) -> Result<ModelConfig> {
    parse_config(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPARK_FC: &str = r#"{
        "hardware": {"peak_ops_per_sec": 105.6e9, "efficiency": 0.8, "bandwidth_bits_per_sec": 1e9},
        "workload": {"gradient_descent": {
            "batch_size": 60000,
            "architecture": {
                "input": {"side": 28, "depth": 1},
                "layers": [
                    {"dense": {"in": 784, "out": 2500}},
                    {"dense": {"in": 2500, "out": 2000}},
                    {"dense": {"in": 2000, "out": 1500}},
                    {"dense": {"in": 1500, "out": 1000}},
                    {"dense": {"in": 1000, "out": 500}},
                    {"dense": {"in": 500, "out": 10}}
                ]
            }
        }},
        "comm": {"topology": "spark_hybrid", "bits_per_param": 64},
        "sweep": {"n_min": 1, "n_max": 13}
    }"#;

    #[test]
    fn spark_fc_derives_c_and_w() {
        let cfg = parse_config(SPARK_FC).unwrap();
        match cfg.workload {
            WorkloadConfig::GradientDescent { model, .. } => {
                assert_eq!(model.cost_per_point_ops, 71_790_000.0);
                assert_eq!(model.num_params, 11_965_000);
                assert_eq!(model.batch_size, 60_000);
            }
            _ => panic!("expected gradient descent"),
        }
        assert_eq!((cfg.n_min, cfg.n_max), (1, 13));
    }

    #[test]
    fn unknown_topology_rejected() {
        let doc = SPARK_FC.replace("spark_hybrid", "ring");
        let err = parse_config(&doc).unwrap_err();
        assert!(err.to_string().contains("unknown topology"), "{err}");
    }

    #[test]
    fn missing_hardware_names_field() {
        let doc = r#"{"workload": {"gradient_descent": {"batch_size": 1, "cost_per_point_ops": 1.0}},
                      "sweep": {"n_min": 1, "n_max": 2}}"#;
        let err = parse_config(doc).unwrap_err();
        assert!(err.to_string().contains("hardware"), "{err}");
    }

    #[test]
    fn explicit_and_architecture_is_ambiguous() {
        let doc = SPARK_FC.replace("\"batch_size\": 60000,", "\"batch_size\": 60000, \"num_params\": 5,");
        let err = parse_config(&doc).unwrap_err();
        assert!(err.to_string().contains("not both"), "{err}");
    }

    #[test]
    fn explicit_constants_accepted() {
        let doc = r#"{
            "hardware": {"peak_ops_per_sec": 4.28e12, "efficiency": 0.5, "bandwidth_bits_per_sec": 1e9},
            "workload": {"gradient_descent": {
                "cost_per_point_ops": 15e9, "batch_size": 128, "num_params": 25000000,
                "scaling": "weak"
            }},
            "comm": {"topology": "log_tree", "stages": 2, "bits_per_param": 32},
            "sweep": {"n_min": 1, "n_max": 128},
            "reference_n": 50
        }"#;
        let cfg = parse_config(doc).unwrap();
        assert_eq!(cfg.reference_n, Some(50));
        match cfg.workload {
            WorkloadConfig::GradientDescent { scaling, .. } => {
                assert_eq!(scaling, ScalingMode::Weak)
            }
            _ => panic!(),
        }
    }

    #[test]
    fn weak_scaling_without_reference_rejected() {
        let doc = r#"{
            "hardware": {"peak_ops_per_sec": 1.0, "efficiency": 1.0, "bandwidth_bits_per_sec": 1.0},
            "workload": {"gradient_descent": {
                "cost_per_point_ops": 1.0, "batch_size": 1, "scaling": "weak"
            }},
            "sweep": {"n_min": 1, "n_max": 4}
        }"#;
        assert!(parse_config(doc).is_err());
    }

    #[test]
    fn graph_inference_config() {
        let doc = r#"{
            "hardware": {"peak_ops_per_sec": 1e9, "efficiency": 1.0, "bandwidth_bits_per_sec": 1e9},
            "workload": {"graph_inference": {
                "num_vertices": 1000, "num_edges": 5000, "states": 2,
                "replication": 1.5, "trials": 200, "seed": 42
            }},
            "sweep": {"n_min": 1, "n_max": 16}
        }"#;
        let cfg = parse_config(doc).unwrap();
        match cfg.workload {
            WorkloadConfig::GraphInference(gi) => {
                assert_eq!(gi.trials, 200);
                assert_eq!(gi.seed, Some(42));
                let degs = gi.source.resolve().unwrap();
                assert_eq!(degs.num_vertices(), 1000);
                assert_eq!(degs.num_edges(), 5000);
                let w = gi.workload(&degs).unwrap();
                assert_eq!(w.num_states, 2);
            }
            _ => panic!("expected graph inference"),
        }
    }

    #[test]
    fn graph_inference_requires_one_source() {
        let doc = r#"{
            "hardware": {"peak_ops_per_sec": 1e9, "efficiency": 1.0, "bandwidth_bits_per_sec": 1e9},
            "workload": {"graph_inference": {"states": 2}},
            "sweep": {"n_min": 1, "n_max": 4}
        }"#;
        assert!(parse_config(doc).is_err());
    }
}
