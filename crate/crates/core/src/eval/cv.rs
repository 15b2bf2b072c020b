use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::folds::FoldAssignment;
use super::metrics::Confusion;
use crate::error::{Error, Result};
use crate::features::{
    ContextSpec, FeatureDictionary, KeyedVector, LabelTrack, PreparedCorpus, SparseVector,
};
use crate::svm::{train_ovr, LinearModel, SolverParams, TrainingProblem};

/// Which samples the feature dictionary is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DictionaryScope {
    /// Training samples of each fold only.
    #[default]
    Fold,
    /// All target samples.
    Global,
}

impl FromStr for DictionaryScope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fold" => Ok(DictionaryScope::Fold),
            "global" => Ok(DictionaryScope::Global),
            other => Err(Error::Config(format!("unknown dictionary scope `{other}`"))),
        }
    }
}

impl fmt::Display for DictionaryScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DictionaryScope::Fold => "fold",
            DictionaryScope::Global => "global",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvSettings {
    pub svm: SolverParams,
    pub dictionary: DictionaryScope,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvResult {
    pub fold_accuracies: Vec<f64>,
    /// Per-fold confusion matrices over the corpus label set.
    pub confusions: Vec<Confusion>,
    /// Predicted label index of each target segment, `[dialog][segment]`.
    pub predictions: Vec<Vec<Option<usize>>>,
}

impl CvResult {
    pub fn mean_accuracy(&self) -> f64 {
        self.fold_accuracies.iter().sum::<f64>() / self.fold_accuracies.len() as f64
    }

    /// Accuracy over all folds pooled together.
    pub fn pooled_accuracy(&self) -> f64 {
        let mut all = Confusion::new(self.confusions[0].counts.len());
        for c in &self.confusions {
            all.merge(c);
        }
        all.accuracy().unwrap_or(0.0)
    }

    pub fn pooled_confusion(&self) -> Confusion {
        let mut all = Confusion::new(self.confusions[0].counts.len());
        for c in &self.confusions {
            all.merge(c);
        }
        all
    }
}

/// Keyed samples of the given segments, in order.
pub fn keyed_samples(
    prepared: &PreparedCorpus,
    segments: &[(usize, usize)],
    ctx: ContextSpec,
    labels: &LabelTrack,
) -> Vec<KeyedVector> {
    segments
        .par_iter()
        .map(|&(d, s)| prepared.sample(d, s, ctx, labels))
        .collect()
}

/// Trains a model on `train`, using only the classes that occur there.
/// Returns the model and the corpus label index of each model class.
pub fn fit(
    prepared: &PreparedCorpus,
    train: &[(usize, usize)],
    samples: &[SparseVector],
    n_features: usize,
    params: &SolverParams,
    label_set: &[String],
) -> Result<(LinearModel, Vec<usize>)> {
    let mut present: Vec<usize> = train.iter().map(|&(d, s)| prepared.gold[d][s]).collect();
    present.sort_unstable();
    present.dedup();
    let mut local = vec![usize::MAX; label_set.len()];
    for (i, &g) in present.iter().enumerate() {
        local[g] = i;
    }
    let labels = train
        .iter()
        .map(|&(d, s)| local[prepared.gold[d][s]])
        .collect();
    let names = present.iter().map(|&g| label_set[g].clone()).collect();
    let problem = TrainingProblem::new(samples.to_vec(), labels, names, n_features)?;
    Ok((train_ovr(&problem, params)?, present))
}

type FoldOutcome = (f64, Confusion, Vec<((usize, usize), usize)>);

/// k-fold cross-validation of one context setting.
///
/// Context features of every sample are computed from its full dialog history
/// regardless of fold membership, with label context read from `labels`.
pub fn cross_validate(
    prepared: &PreparedCorpus,
    label_set: &[String],
    folds: &FoldAssignment,
    ctx: ContextSpec,
    labels: &LabelTrack,
    settings: &CvSettings,
) -> Result<CvResult> {
    let all_targets = folds.targets();
    let keyed = keyed_samples(prepared, &all_targets, ctx, labels);
    let position: std::collections::HashMap<(usize, usize), usize> = all_targets
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i))
        .collect();
    let global = match settings.dictionary {
        DictionaryScope::Global => Some(FeatureDictionary::build(&keyed)),
        DictionaryScope::Fold => None,
    };

    let per_fold: Vec<FoldOutcome> = (0..folds.k)
        .into_par_iter()
        .map(|f| {
            let train = folds.complement(f);
            let test = folds.members(f);
            let local;
            let dict = match &global {
                Some(d) => d,
                None => {
                    local = FeatureDictionary::build(train.iter().map(|p| &keyed[position[p]]));
                    &local
                }
            };
            let train_x: Vec<SparseVector> = train
                .iter()
                .map(|p| dict.vectorize(&keyed[position[p]]))
                .collect();
            let (model, classes) = fit(
                prepared,
                &train,
                &train_x,
                dict.len(),
                &settings.svm,
                label_set,
            )?;
            let mut confusion = Confusion::new(label_set.len());
            let mut preds = Vec::with_capacity(test.len());
            for p in &test {
                let x = dict.vectorize(&keyed[position[p]]);
                let predicted = classes[model.predict(&x)?];
                confusion.add(prepared.gold[p.0][p.1], predicted);
                preds.push((*p, predicted));
            }
            Ok((confusion.accuracy()?, confusion, preds))
        })
        .collect::<Result<_>>()?;

    let mut predictions: Vec<Vec<Option<usize>>> =
        folds.fold_of.iter().map(|d| vec![None; d.len()]).collect();
    let mut fold_accuracies = Vec::with_capacity(folds.k);
    let mut confusions = Vec::with_capacity(folds.k);
    for (acc, confusion, preds) in per_fold {
        fold_accuracies.push(acc);
        confusions.push(confusion);
        for ((d, s), p) in preds {
            predictions[d][s] = Some(p);
        }
    }
    Ok(CvResult {
        fold_accuracies,
        confusions,
        predictions,
    })
}
