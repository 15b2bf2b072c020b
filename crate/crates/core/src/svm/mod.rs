//! One-vs-rest linear SVM trained in the dual.

mod io;
mod model;
mod solver;

pub use io::{
    dictionary_path, load_model, read_dictionary, read_model, save_model, write_dictionary,
    write_model, FeatureSettings, ModelBundle, DICT_MAGIC, MODEL_MAGIC, MODEL_VERSION,
};
pub use model::{train_ovr, LinearModel, TrainingProblem};
pub use solver::{train_binary, train_binary_observed, BinarySolution, EpochStats, SolverParams};
