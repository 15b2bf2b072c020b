use rayon::prelude::*;

use super::solver::{train_binary, SolverParams};
use crate::error::{Error, Result};
use crate::features::SparseVector;

/// Multi-class training data with labels given as class indices.
#[derive(Debug, Clone)]
pub struct TrainingProblem {
    pub samples: Vec<SparseVector>,
    pub labels: Vec<usize>,
    pub class_names: Vec<String>,
    pub n_features: usize,
}

impl TrainingProblem {
    pub fn new(
        samples: Vec<SparseVector>,
        labels: Vec<usize>,
        class_names: Vec<String>,
        n_features: usize,
    ) -> Result<Self> {
        if samples.len() != labels.len() {
            return Err(Error::InvalidInput(format!(
                "{} samples but {} labels",
                samples.len(),
                labels.len()
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= class_names.len()) {
            return Err(Error::InvalidInput(format!(
                "label index {bad} outside {} classes",
                class_names.len()
            )));
        }
        Ok(TrainingProblem {
            samples,
            labels,
            class_names,
            n_features,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// One-vs-rest linear classifier. Row `c` of `weights` has `n_features + 1`
/// entries; the last multiplies the bias constant.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub labels: Vec<String>,
    pub n_features: usize,
    pub bias: f64,
    pub weights: Vec<Vec<f64>>,
    /// Present for freshly trained models; not stored in model files.
    pub params: Option<SolverParams>,
}

impl LinearModel {
    pub fn n_classes(&self) -> usize {
        self.labels.len()
    }

    pub fn decision_values(&self, x: &SparseVector) -> Result<Vec<f64>> {
        if let Some(id) = x.max_id() {
            if id as usize >= self.n_features {
                return Err(Error::FeatureOutOfRange {
                    id,
                    n_features: self.n_features,
                });
            }
        }
        Ok(self
            .weights
            .iter()
            .map(|w| x.dot(w) + w[self.n_features] * self.bias)
            .collect())
    }

    /// Index of the highest-scoring class; ties go to the lowest index.
    pub fn predict(&self, x: &SparseVector) -> Result<usize> {
        let scores = self.decision_values(x)?;
        let mut best = 0;
        for (c, &s) in scores.iter().enumerate() {
            if s > scores[best] {
                best = c;
            }
        }
        Ok(best)
    }

    pub fn predict_label(&self, x: &SparseVector) -> Result<&str> {
        Ok(&self.labels[self.predict(x)?])
    }
}

/// Trains one binary classifier per class in parallel. Classes with no
/// positive sample get an all-zero weight row.
pub fn train_ovr(problem: &TrainingProblem, params: &SolverParams) -> Result<LinearModel> {
    params.validate()?;
    if problem.is_empty() {
        return Err(Error::InvalidInput("no training samples".into()));
    }
    if problem.class_names.is_empty() {
        return Err(Error::InvalidInput("no classes".into()));
    }
    let d = problem.n_features;
    let weights = (0..problem.class_names.len())
        .into_par_iter()
        .map(|c| {
            if !problem.labels.contains(&c) {
                return Ok(vec![0.0; d + 1]);
            }
            let targets: Vec<f64> = problem
                .labels
                .iter()
                .map(|&l| if l == c { 1.0 } else { -1.0 })
                .collect();
            train_binary(&problem.samples, &targets, d, params)
                .map(|s| s.weights)
                .map_err(|e| Error::Class {
                    class: problem.class_names[c].clone(),
                    source: Box::new(e),
                })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LinearModel {
        labels: problem.class_names.clone(),
        n_features: d,
        bias: params.bias,
        weights,
        params: Some(*params),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(pairs: &[(u32, f64)]) -> SparseVector {
        SparseVector::from_pairs(pairs.to_vec()).unwrap()
    }

    fn toy() -> TrainingProblem {
        let samples = vec![
            sv(&[(0, 1.0)]),
            sv(&[(0, 1.0), (3, 1.0)]),
            sv(&[(1, 1.0)]),
            sv(&[(1, 1.0), (3, 1.0)]),
            sv(&[(2, 1.0)]),
            sv(&[(2, 1.0), (3, 1.0)]),
        ];
        let names = ["a", "b", "c", "unused"].map(String::from).to_vec();
        TrainingProblem::new(samples, vec![0, 0, 1, 1, 2, 2], names, 4).unwrap()
    }

    #[test]
    fn fits_separable_classes() {
        let p = toy();
        let m = train_ovr(
            &p,
            &SolverParams {
                cost: 1.0,
                ..Default::default()
            },
        )
        .unwrap();
        for (x, &y) in p.samples.iter().zip(&p.labels) {
            assert_eq!(m.predict(x).unwrap(), y);
        }
        assert!(m.weights[3].iter().all(|&w| w == 0.0));
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let m = LinearModel {
            labels: vec!["x".into(), "y".into()],
            n_features: 1,
            bias: 1.0,
            weights: vec![vec![0.0, 0.5], vec![0.0, 0.5]],
            params: None,
        };
        assert_eq!(m.predict(&sv(&[(0, 1.0)])).unwrap(), 0);
        assert!(matches!(
            m.predict(&sv(&[(1, 1.0)])),
            Err(Error::FeatureOutOfRange { id: 1, .. })
        ));
    }

    #[test]
    fn class_failure_names_the_class() {
        let mut p = toy();
        p.samples[0] = SparseVector::from_sorted_unchecked(vec![(0, f64::INFINITY)]);
        match train_ovr(&p, &SolverParams::default()) {
            Err(Error::Class { class, .. }) => assert!(["a", "b", "c"].contains(&class.as_str())),
            other => panic!("unexpected {other:?}"),
        }
    }
}
