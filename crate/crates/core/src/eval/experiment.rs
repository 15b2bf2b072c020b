use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::cv::{cross_validate, fit, keyed_samples, CvResult, CvSettings};
use super::folds::{make_folds, Granularity};
use super::metrics::accuracy;
use super::wilcoxon::{wilcoxon, WilcoxonResult};
use crate::corpus::{Corpus, Targets};
use crate::error::{Error, Result};
use crate::features::{
    ContextMode, ContextSpec, FeatureDictionary, LabelDimensions, LabelTrack, PreparedCorpus,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    #[default]
    Influence,
    Cascade,
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "influence" => Ok(ExperimentKind::Influence),
            "cascade" => Ok(ExperimentKind::Cascade),
            other => Err(Error::Config(format!("unknown experiment kind `{other}`"))),
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExperimentKind::Influence => "influence",
            ExperimentKind::Cascade => "cascade",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSettings {
    pub folds: usize,
    pub granularity: Granularity,
    pub seed: u64,
    pub cv: CvSettings,
    pub modes: Vec<ContextMode>,
    pub max_prev: usize,
}

/// Cross-validation outcome of one (mode, n_prev) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub mode: String,
    pub n_prev: usize,
    pub fold_accuracies: Vec<f64>,
    pub mean: f64,
    pub pooled: f64,
    /// Test against the row with the same mode and `n_prev - 1`.
    pub vs_previous: Option<WilcoxonResult>,
}

impl GridRow {
    fn new(mode: &str, n_prev: usize, cv: &CvResult) -> Self {
        GridRow {
            mode: mode.to_string(),
            n_prev,
            fold_accuracies: cv.fold_accuracies.clone(),
            mean: cv.mean_accuracy(),
            pooled: cv.pooled_accuracy(),
            vs_previous: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub kind: ExperimentKind,
    pub rows: Vec<GridRow>,
    /// Accuracy of each predicted label stream (cascade only).
    pub label_accuracy: Vec<(String, f64)>,
}

fn check(settings: &ExperimentSettings) -> Result<()> {
    if settings.max_prev == 0 || settings.max_prev > crate::features::MAX_CONTEXT {
        return Err(Error::Config(format!(
            "max_prev must be in 1..={}, got {}",
            crate::features::MAX_CONTEXT,
            settings.max_prev
        )));
    }
    Ok(())
}

/// Adds one row per `n_prev` in `1..=max_prev`, each tested against its predecessor.
fn sweep(
    rows: &mut Vec<GridRow>,
    name: &str,
    baseline: &CvResult,
    max_prev: usize,
    mut run: impl FnMut(usize) -> Result<CvResult>,
) -> Result<()> {
    rows.push(GridRow::new(name, 0, baseline));
    for n in 1..=max_prev {
        let cv = run(n)?;
        let prev = &rows.last().expect("baseline row").fold_accuracies;
        let mut row = GridRow::new(name, n, &cv);
        row.vs_previous = Some(wilcoxon(&row.fold_accuracies, prev)?);
        rows.push(row);
    }
    Ok(())
}

/// Accuracy of every context mode for `n_prev` in `0..=max_prev`, all on the
/// same folds. The context-free cell is computed once and shared by the modes.
pub fn influence_experiment(
    corpus: &Corpus,
    prepared: &PreparedCorpus,
    targets: &Targets,
    settings: &ExperimentSettings,
) -> Result<ExperimentResult> {
    check(settings)?;
    let folds = make_folds(
        corpus,
        targets,
        settings.folds,
        settings.granularity,
        settings.seed,
    )?;
    let labels = &prepared.manual_labels;
    let run = |ctx| {
        cross_validate(
            prepared,
            &corpus.label_set,
            &folds,
            ctx,
            labels,
            &settings.cv,
        )
    };
    let baseline = run(ContextSpec::NONE)?;
    let mut rows = Vec::new();
    for &mode in &settings.modes {
        if mode == ContextMode::None {
            return Err(Error::Config("context mode `none` cannot be swept".into()));
        }
        sweep(&mut rows, mode.name(), &baseline, settings.max_prev, |n| {
            run(ContextSpec::new(mode, n)?)
        })?;
    }
    Ok(ExperimentResult {
        kind: ExperimentKind::Influence,
        rows,
        label_accuracy: vec![],
    })
}

pub const MANUAL_SOURCE: &str = "manual";
pub const PREDICTED_SOURCES: [&str; 3] = ["second-half", "full", "first-half"];

/// Labels predicted for the second half of a corpus by one context-free model.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelStream {
    pub name: String,
    /// Accuracy over the target segments of the second half.
    pub accuracy: f64,
    /// Manual labels with the target dimension of every second-half segment
    /// replaced by the prediction.
    pub track: LabelTrack,
}

/// Index of the first dialog of the second half.
pub fn second_half_start(corpus: &Corpus) -> usize {
    corpus.dialogs.len() / 2
}

/// Splits the dialogs into halves in corpus order and labels every segment of
/// the second half with context-free models trained on the second half, the
/// whole corpus and the first half, in that order.
pub fn predicted_label_streams(
    corpus: &Corpus,
    prepared: &PreparedCorpus,
    targets: &Targets,
    params: &crate::svm::SolverParams,
) -> Result<Vec<LabelStream>> {
    let n_dialogs = corpus.dialogs.len();
    let half = second_half_start(corpus);
    if half == 0 {
        return Err(Error::InvalidInput(
            "the cascade experiment needs at least two dialogs".into(),
        ));
    }
    let in_range = |range: std::ops::Range<usize>| -> Vec<(usize, usize)> {
        range
            .flat_map(|d| (0..corpus.dialogs[d].len()).map(move |s| (d, s)))
            .filter(|&(d, s)| targets.is_target(d, s))
            .collect()
    };
    let first = in_range(0..half);
    let second = in_range(half..n_dialogs);
    let all = in_range(0..n_dialogs);
    if first.is_empty() || second.is_empty() {
        return Err(Error::InvalidInput(
            "a corpus half has no target segments".into(),
        ));
    }
    let second_all: Vec<(usize, usize)> = (half..n_dialogs)
        .flat_map(|d| (0..corpus.dialogs[d].len()).map(move |s| (d, s)))
        .collect();

    let manual = &prepared.manual_labels;
    let test_keys = keyed_samples(prepared, &second_all, ContextSpec::NONE, manual);
    let mut streams = Vec::new();
    for (name, train) in PREDICTED_SOURCES.iter().zip([&second, &all, &first]) {
        let keyed = keyed_samples(prepared, train, ContextSpec::NONE, manual);
        let dict = FeatureDictionary::build(&keyed);
        let xs: Vec<_> = keyed.iter().map(|k| dict.vectorize(k)).collect();
        let (model, classes) = fit(prepared, train, &xs, dict.len(), params, &corpus.label_set)?;
        let mut task: Vec<Vec<u32>> = manual
            .labels
            .iter()
            .map(|d| d.iter().map(|l| l[0]).collect())
            .collect();
        let mut gold = Vec::new();
        let mut predicted = Vec::new();
        for (&(d, s), k) in second_all.iter().zip(&test_keys) {
            let p = classes[model.predict(&dict.vectorize(k))?];
            task[d][s] = prepared.label_ids[p];
            if targets.is_target(d, s) {
                gold.push(prepared.gold[d][s]);
                predicted.push(p);
            }
        }
        streams.push(LabelStream {
            name: name.to_string(),
            accuracy: accuracy(&gold, &predicted)?,
            track: manual.with_task_labels(&task),
        });
    }
    Ok(streams)
}

/// Label context from predicted labels.
///
/// Each stream from [`predicted_label_streams`], and the manual labels, supply
/// the label context for cross-validation over the second half, for training
/// and test folds alike.
pub fn cascade_experiment(
    corpus: &Corpus,
    prepared: &PreparedCorpus,
    targets: &Targets,
    settings: &ExperimentSettings,
) -> Result<ExperimentResult> {
    check(settings)?;
    let half = second_half_start(corpus);
    let streams = predicted_label_streams(corpus, prepared, targets, &settings.cv.svm)?;
    let manual = &prepared.manual_labels;
    let label_accuracy = streams
        .iter()
        .map(|s| (s.name.clone(), s.accuracy))
        .collect();
    let mut tracks = vec![(MANUAL_SOURCE, manual)];
    tracks.extend(streams.iter().map(|s| (s.name.as_str(), &s.track)));

    let mut second_targets = targets.clone();
    for mask in &mut second_targets.mask[..half] {
        mask.fill(false);
    }
    let folds = make_folds(
        corpus,
        &second_targets,
        settings.folds,
        settings.granularity,
        settings.seed,
    )?;
    let run = |ctx, labels: &LabelTrack| {
        cross_validate(
            prepared,
            &corpus.label_set,
            &folds,
            ctx,
            labels,
            &settings.cv,
        )
    };
    let baseline = run(ContextSpec::NONE, manual)?;
    let mode = ContextMode::DaLabels(LabelDimensions::Task);
    let mut rows = Vec::new();
    for (name, track) in &tracks {
        sweep(&mut rows, name, &baseline, settings.max_prev, |n| {
            run(ContextSpec::new(mode, n)?, track)
        })?;
    }
    Ok(ExperimentResult {
        kind: ExperimentKind::Cascade,
        rows,
        label_accuracy,
    })
}
