mod common;

use dactx::corpus::{Corpus, Targets};
use dactx::eval::{
    cross_validate, influence_experiment, make_folds, read_grid_csv, wilcoxon, write_grid_csv,
    CvSettings, DictionaryScope, ExperimentSettings, Granularity,
};
use dactx::features::{
    ContextMode, ContextSpec, FeatureConfig, LabelDimensions, PreparedCorpus, SparseVector,
};
use dactx::svm::{
    load_model, save_model, train_binary, train_ovr, LinearModel, ModelBundle, SolverParams,
    TrainingProblem,
};
use dactx::synth::{generate, SynthParams};
use proptest::prelude::*;

fn small_corpus(seed: u64, dialogs: usize) -> Corpus {
    generate(&SynthParams {
        n_dialogs: dialogs,
        segments_per_dialog: 12,
        seed,
        ..Default::default()
    })
    .unwrap()
}

fn sparse(row: &[f64]) -> SparseVector {
    SparseVector::from_pairs(
        row.iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, v)| (i as u32, *v))
            .collect(),
    )
    .unwrap()
}

#[test]
fn solver_agrees_with_projected_gradient_oracle() {
    for seed in 0..10 {
        let p = common::DenseProblem::random(seed, 8, 4, &[0.1, 1.0]);
        let xs: Vec<SparseVector> = p.x.iter().map(|r| sparse(r)).collect();
        let params = SolverParams {
            cost: p.cost,
            stop_tol: 1e-9,
            max_epochs: 100_000,
            seed,
            bias: p.bias,
        };
        let sol = train_binary(&xs, &p.y, p.x[0].len(), &params).unwrap();
        assert!(sol.converged);
        let oracle = p.oracle_weights(20_000);
        let diff: f64 = sol
            .weights
            .iter()
            .zip(&oracle)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        let norm: f64 = oracle.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(
            diff <= 1e-3 * norm.max(1e-6),
            "seed {seed}: {diff} vs {norm}"
        );
    }
}

#[test]
fn model_and_bundle_files_round_trip() {
    let corpus = small_corpus(1, 6);
    let prepared = PreparedCorpus::new(&corpus, FeatureConfig::default());
    let ctx = ContextSpec::new(ContextMode::IndexTaggedNGrams, 2).unwrap();
    let segments: Vec<(usize, usize)> = (0..6).flat_map(|d| (0..12).map(move |s| (d, s))).collect();
    let keyed = dactx::eval::keyed_samples(&prepared, &segments, ctx, &prepared.manual_labels);
    let dict = dactx::features::FeatureDictionary::build(&keyed);
    let xs: Vec<SparseVector> = keyed.iter().map(|k| dict.vectorize(k)).collect();
    let labels = segments.iter().map(|&(d, s)| prepared.gold[d][s]).collect();
    let problem =
        TrainingProblem::new(xs.clone(), labels, corpus.label_set.clone(), dict.len()).unwrap();
    let model = train_ovr(&problem, &SolverParams::default()).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.dlsvm");
    save_model(&model, &path).unwrap();
    let back = load_model(&path).unwrap();
    assert_eq!(
        LinearModel {
            params: model.params,
            ..back.clone()
        },
        model
    );
    for x in &xs {
        assert_eq!(back.predict(x).unwrap(), model.predict(x).unwrap());
    }

    let bundle = ModelBundle {
        model: model.clone(),
        dictionary: dict,
        featurizer: prepared.featurizer.clone(),
        settings: dactx::svm::FeatureSettings {
            features: FeatureConfig::default(),
            context: ctx,
            aux_dimensions: vec![],
        },
    };
    bundle.save(&path).unwrap();
    let loaded = ModelBundle::load(&path).unwrap();
    let reprepared = PreparedCorpus::with_featurizer(&corpus, loaded.featurizer.clone());
    for (&(d, s), x) in segments.iter().zip(&xs) {
        let again =
            loaded
                .dictionary
                .vectorize(&reprepared.sample(d, s, ctx, &reprepared.manual_labels));
        assert_eq!(&again, x);
    }
}

#[test]
fn cross_validation_accounts_for_every_target() {
    let corpus = small_corpus(2, 9);
    let prepared = PreparedCorpus::new(&corpus, FeatureConfig::default());
    let targets = corpus.filter_segments(&"A".to_string().into()).unwrap();
    let folds = make_folds(&corpus, &targets, 3, Granularity::Dialog, 4).unwrap();
    for dictionary in [DictionaryScope::Fold, DictionaryScope::Global] {
        let settings = CvSettings {
            svm: SolverParams::default(),
            dictionary,
        };
        let ctx = ContextSpec::new(ContextMode::DaLabels(LabelDimensions::Task), 1).unwrap();
        let cv = cross_validate(
            &prepared,
            &corpus.label_set,
            &folds,
            ctx,
            &prepared.manual_labels,
            &settings,
        )
        .unwrap();
        assert_eq!(cv.fold_accuracies.len(), 3);
        assert_eq!(cv.pooled_confusion().total() as usize, targets.count());
        for (d, dialog) in cv.predictions.iter().enumerate() {
            for (s, p) in dialog.iter().enumerate() {
                assert_eq!(p.is_some(), targets.is_target(d, s));
            }
        }
        let pooled = cv.pooled_accuracy();
        assert!(
            cv.fold_accuracies.iter().any(|&a| a <= pooled)
                && cv.fold_accuracies.iter().any(|&a| a >= pooled)
        );
    }
}

#[test]
fn fold_count_bounds() {
    let corpus = small_corpus(3, 4);
    let targets = Targets::all(&corpus);
    assert!(make_folds(&corpus, &targets, 1, Granularity::Dialog, 0)
        .unwrap_err()
        .is_config());
    assert!(make_folds(&corpus, &targets, 5, Granularity::Dialog, 0)
        .unwrap_err()
        .is_config());
    assert!(make_folds(&corpus, &targets, 5, Granularity::Segment, 0).is_ok());
}

#[test]
fn grid_csv_round_trip() {
    let corpus = small_corpus(4, 8);
    let prepared = PreparedCorpus::new(&corpus, FeatureConfig::default());
    let settings = ExperimentSettings {
        folds: 4,
        granularity: Granularity::Dialog,
        seed: 9,
        cv: CvSettings {
            svm: SolverParams::default(),
            dictionary: DictionaryScope::Fold,
        },
        modes: vec![
            ContextMode::UntaggedNGrams,
            ContextMode::DaLabels(LabelDimensions::Task),
        ],
        max_prev: 2,
    };
    let result =
        influence_experiment(&corpus, &prepared, &Targets::all(&corpus), &settings).unwrap();
    assert_eq!(result.rows.len(), 6);
    assert_eq!(
        result.rows[0].fold_accuracies,
        result.rows[3].fold_accuracies
    );
    let mut buf = Vec::new();
    write_grid_csv(&result, &mut buf).unwrap();
    let cells = read_grid_csv(buf.as_slice()).unwrap();
    for row in &result.rows {
        let read = &cells[&(row.mode.clone(), row.n_prev)];
        for (a, b) in read.iter().zip(&row.fold_accuracies) {
            assert!((a - b).abs() < 5e-7);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn folds_partition_targets(seed in 0u64..1000, k in 2usize..6, dialogs in 6usize..12, by_segment in any::<bool>()) {
        let corpus = small_corpus(seed, dialogs);
        let targets = corpus.filter_segments(&"B".to_string().into()).unwrap();
        let g = if by_segment { Granularity::Segment } else { Granularity::Dialog };
        let folds = make_folds(&corpus, &targets, k, g, seed).unwrap();
        let mut seen = 0;
        for f in 0..k {
            let members = folds.members(f);
            prop_assert!(!members.is_empty());
            seen += members.len();
        }
        prop_assert_eq!(seen, targets.count());
        for (d, segs) in folds.fold_of.iter().enumerate() {
            for (s, f) in segs.iter().enumerate() {
                prop_assert_eq!(f.is_some(), targets.is_target(d, s));
            }
            if !by_segment {
                let assigned: std::collections::HashSet<_> = segs.iter().flatten().collect();
                prop_assert!(assigned.len() <= 1);
            }
        }
        if by_segment {
            let sizes = folds.fold_sizes();
            prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        }
        prop_assert_eq!(make_folds(&corpus, &targets, k, g, seed).unwrap(), folds);
    }

    #[test]
    fn wilcoxon_symmetry_and_range(pairs in prop::collection::vec((0u8..8, 0u8..8), 0..30)) {
        let a: Vec<f64> = pairs.iter().map(|p| f64::from(p.0) / 4.0).collect();
        let b: Vec<f64> = pairs.iter().map(|p| f64::from(p.1) / 4.0).collect();
        let ab = wilcoxon(&a, &b).unwrap();
        let ba = wilcoxon(&b, &a).unwrap();
        prop_assert!(ab.p_value > 0.0 && ab.p_value <= 1.0);
        prop_assert_eq!(ab.p_value, ba.p_value);
        prop_assert_eq!(ab.w_plus, ba.w_minus);
        prop_assert_eq!(wilcoxon(&a, &a).unwrap().p_value, 1.0);
        if ab.n_eff <= 12 {
            prop_assert!((ab.p_value - common::wilcoxon_enumerated(&a, &b)).abs() < 1e-12);
        }
    }
}
