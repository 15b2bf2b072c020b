//! Cross-validation, significance testing and the context experiments.

mod cv;
mod experiment;
mod folds;
mod metrics;
mod table;
mod wilcoxon;

pub use cv::{cross_validate, fit, keyed_samples, CvResult, CvSettings, DictionaryScope};
pub use experiment::{
    cascade_experiment, influence_experiment, predicted_label_streams, second_half_start,
    ExperimentKind, ExperimentResult, ExperimentSettings, GridRow, LabelStream, MANUAL_SOURCE,
    PREDICTED_SOURCES,
};
pub use folds::{make_folds, FoldAssignment, Granularity};
pub use metrics::{accuracy, Confusion};
pub use table::{
    read_grid_csv, write_grid_csv, write_label_accuracy_csv, write_markdown, write_summary_csv,
};
pub use wilcoxon::{wilcoxon, PValueMethod, WilcoxonResult, ALPHA, EXACT_LIMIT};
