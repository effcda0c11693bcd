//! Roof type and complexity imputation from building attributes and
//! neighborhood roof statistics.

mod cv;
mod dataset;
mod forest;
mod importance;
mod margin;
mod model;
mod populate;
pub mod tree;

pub use cv::{cross_validate, stratified_folds, train_validation_split, CvReport};
pub use dataset::{
    build_training_set, feature_row, Feature, MeanImputer, RawRow, Standardizer, Target, TrainingSet,
};
pub use forest::{ForestConfig, ForestModel};
pub use importance::{
    permutation_importance, write_accuracy_csv, write_importance_csv, AccuracyRow, FeatureImportance,
    ImportanceReport,
};
pub use margin::{MarginConfig, MarginModel};
pub use model::{Classifier, ModelConfig, TrainedModel, MODEL_FORMAT, MODEL_VERSION};
pub use populate::impute_missing;
pub use tree::{best_split, DecisionTree, TreeParams};
