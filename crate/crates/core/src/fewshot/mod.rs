//! Few-shot evaluation: feature extraction, nearest-neighbor
//! classification, and the episode, trial and grid-search protocol.

mod eval;
mod features;
mod knn;

pub use eval::{
    assemble_reports, combine_validation, evaluate_trial, grid_search, ordering_report, run_episode, run_episode_in,
    run_suite, run_trials, select_best, trial_seed, validation_grid_search, validation_trial_scores, CellScore,
    Episode, EvalReport, GridCell, GridResult, GridSpec, OrderingVerdict, Protocol, SeedSplit, SweepTarget,
    TaskOrdering, DEFAULT_SHOTS, DEFAULT_TEST_SIZE, DEFAULT_TRIALS, VALIDATION_TRIALS,
};
pub use features::{
    extract_features, extract_features_in, FeatureKind, PreparedImage, DEFAULT_P, DEFAULT_SIGMA, DEFAULT_WF,
};
pub use knn::{knn_fit, knn_predict, squared_distance, KnnClassifier};
