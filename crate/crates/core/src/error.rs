//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AmbientError {
    #[error("point outside the chart domain of the {model} model")]
    OutOfChart { model: &'static str },
    #[error("curvature derivative order {order} unsupported (expected 0..=3)")]
    UnsupportedOrder { order: usize },
    #[error("pair too far apart for the distance-squared Hessian: d = {dist} > {limit}")]
    PairTooFar { dist: f64, limit: f64 },
    #[error("geodesic shooting failed to converge (residual {residual})")]
    ShootingFailed { residual: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("degenerate induced metric at node {node} (det g = {det})")]
    DegenerateMetric { node: usize, det: f64 },
    #[error("ambient model error: {0}")]
    Ambient(#[from] AmbientError),
    #[error("grid too coarse near the requested patch: {needed} sample(s) required, {found} found")]
    Resolution { needed: usize, found: usize },
    #[error("multiple sheets project over the same base disk near node {node}")]
    MultiSheet { node: usize },
    #[error("graph precondition violated: {0}")]
    GraphPrecondition(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("geometry failure during stepping: {0}")]
    Geometry(#[from] GeometryError),
    #[error("instability detected at t = {t}: sup|A| grew {factor}x in a single step")]
    Instability { t: f64, factor: f64 },
    #[error("step rejected {attempts} times; dt underflow at t = {t}")]
    StepUnderflow { t: f64, attempts: u32 },
    #[error("gauge map not invertible on the grid")]
    GaugeNotInvertible,
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AuditError {
    #[error("flow error during audited run: {0}")]
    Flow(#[from] FlowError),
    #[error("insufficient samples: {found} recorded, {needed} required")]
    InsufficientSamples { found: usize, needed: usize },
    #[error("requested time {t} outside the recorded history [{lo}, {hi}]")]
    TimeOutOfRange { t: f64, lo: f64, hi: f64 },
    #[error("audit hypotheses unverifiable from the stored history: {0}")]
    HypothesisUnknown(String),
    #[error("cutoff construction failed: {0}")]
    CutoffConstruction(String),
}
