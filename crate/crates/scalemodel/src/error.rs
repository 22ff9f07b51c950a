use thiserror::Error;

/// Errors produced by model construction, estimation, and I/O.
#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid hardware spec: {0}")]
    InvalidHardware(String),

    #[error("invalid communication topology: {0}")]
    InvalidTopology(String),

    #[error("invalid workload: {0}")]
    InvalidWorkload(String),

    #[error("layer {layer}: {msg}")]
    InvalidArchitecture { layer: usize, msg: String },

    #[error("kernel does not fit: (l={input_side} - k={kernel_side} + b={border}) < 0")]
    KernelTooLarge {
        input_side: u64,
        kernel_side: u64,
        border: u64,
    },

    #[error("self-loop on vertex {0}")]
    SelfLoop(u64),

    #[error("malformed edge list line {line}: {msg}")]
    MalformedEdge { line: usize, msg: String },

    #[error("degree sequence sums to an odd number ({0}); not an edge-endpoint count")]
    OddDegreeSum(u64),

    #[error("empty degree sequence")]
    EmptyDegreeSequence,

    #[error("duplicate-edge formula requires at least 2 vertices (got {0})")]
    TooFewVertices(u64),

    #[error("degenerate time model: t({0}) = 0")]
    DegenerateModel(u32),

    #[error("empty speedup curve")]
    EmptyCurve,

    #[error("reference worker count {reference_n} outside the swept range [{n_min}, {n_max}]")]
    ReferenceOutOfRange {
        reference_n: u32,
        n_min: u32,
        n_max: u32,
    },

    #[error("csv line {line}: {msg}")]
    Csv { line: usize, msg: String },

    #[error("duplicate worker count n={0} in empirical series")]
    DuplicateN(u32),

    #[error("non-positive value {value} at n={n} in empirical series")]
    NonPositiveValue { n: u32, value: f64 },

    #[error("reference n={0} not present in the series")]
    ReferenceMissing(u32),

    #[error("series kind must be `time` to normalize")]
    NotATimeSeries,

    #[error("no predicted value for measured worker counts: {0:?}")]
    UnmatchedPoints(Vec<u32>),

    #[error("config error: {0}")]
    Config(String),

    #[error("curve needs at least 2 points to render (got {0})")]
    TooFewPoints(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("config parse error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
