//! Online signature verifiers and evaluation metrics: DTW over z-normalized
//! positions, Manhattan distance over direction/speed histograms, DET
//! curves with the equal error rate, and the T-reference random-impostor
//! protocol used to score whole datasets.

mod det;
mod dtw;
mod histogram;
mod protocol;

pub use det::{compute_det_eer, DetCurve, DetPoint, ScoreSet};
pub use dtw::{dtw_distance, extract_features, FeatureSequence};
pub use histogram::{extract_histograms, manhattan_score, HistogramFeatures};
pub use protocol::{run_protocol, run_protocol_grid, ProtocolDataset, ProtocolReport, Verifier};

pub(crate) use protocol::{
    pairwise_distances as pairwise_for_calibration,
    run_protocol_with_matrix as protocol_with_matrix,
};
