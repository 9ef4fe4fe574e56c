//! Fit-consistency sanity check: synthetic silhouette families, the
//! generated-vs-source confusion matrix, and report rendering.

mod confusion;
mod report;
mod silhouette;

pub use confusion::{
    fit_confusion, pair_indices, synthetic_protocol, CellStats, ConfusionOptions, FitReport,
    LabeledLayout, PairRecord, Pairing, GENERATED_SEED_OFFSET,
};
pub use report::{parse_json_report, render_report, ReportFormat, CSV_HEADER};
pub use silhouette::{synth_silhouette, MIN_CANVAS};

use thiserror::Error;

use crate::fit::FitClass;
use crate::shape_metrics::MetricError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("canvas {0}x{1} is smaller than the 64x48 minimum")]
    CanvasTooSmall(usize, usize),
    #[error("no {side} samples for fit `{fit}`")]
    EmptyCell { fit: FitClass, side: &'static str },
    #[error("fits of different garment kinds cannot share a report")]
    MixedKinds,
    #[error("{side} sample {index}: {source}")]
    Metric {
        side: &'static str,
        index: usize,
        source: MetricError,
    },
    #[error("cannot pair samples: {0}")]
    Unpairable(String),
    #[error("report parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, HarnessError>;
