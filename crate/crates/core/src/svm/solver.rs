use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::SparseVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverParams {
    /// Misclassification cost C.
    pub cost: f64,
    /// Largest projected-gradient violation accepted at convergence.
    pub stop_tol: f64,
    pub max_epochs: usize,
    pub seed: u64,
    /// Value of the constant feature appended to every sample.
    pub bias: f64,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            cost: 0.1,
            stop_tol: 0.01,
            max_epochs: 1000,
            seed: 0,
            bias: 1.0,
        }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.cost > 0.0 && self.cost.is_finite()) {
            return Err(Error::Config(format!(
                "cost must be positive, got {}",
                self.cost
            )));
        }
        if !(self.stop_tol > 0.0 && self.stop_tol.is_finite()) {
            return Err(Error::Config(format!(
                "stop_tol must be positive, got {}",
                self.stop_tol
            )));
        }
        if self.max_epochs == 0 {
            return Err(Error::Config("max_epochs must be at least 1".into()));
        }
        if !self.bias.is_finite() || self.bias < 0.0 {
            return Err(Error::Config(format!(
                "bias must be non-negative, got {}",
                self.bias
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinarySolution {
    /// `n_features + 1` weights, the last one multiplying the bias feature.
    pub weights: Vec<f64>,
    /// Dual variables, one per sample, each in `[0, C]`.
    pub alpha: Vec<f64>,
    pub epochs: usize,
    pub converged: bool,
}

/// Progress report after each epoch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    pub dual_objective: f64,
    /// Largest projected-gradient violation seen during the epoch.
    pub max_violation: f64,
    pub active: usize,
    pub min_alpha: f64,
    pub max_alpha: f64,
}

/// Trains a binary L2-regularized hinge-loss SVM. `targets` holds ±1 per sample.
pub fn train_binary(
    samples: &[SparseVector],
    targets: &[f64],
    n_features: usize,
    params: &SolverParams,
) -> Result<BinarySolution> {
    train_binary_observed(samples, targets, n_features, params, |_| {})
}

/// Dual coordinate descent with shrinking.
///
/// Each epoch visits the active samples in a seeded random order and moves one
/// dual variable at a time to the maximizer of the dual along that coordinate,
/// clipped to `[0, C]`. Samples whose variable sits at a bound with a gradient
/// pointing outwards past the previous epoch's extreme are shrunk. Training
/// stops once a full pass over all samples finds no projected-gradient
/// violation of `stop_tol` or more.
pub fn train_binary_observed(
    samples: &[SparseVector],
    targets: &[f64],
    n_features: usize,
    params: &SolverParams,
    mut observe: impl FnMut(&EpochStats),
) -> Result<BinarySolution> {
    params.validate()?;
    let m = samples.len();
    if m == 0 {
        return Err(Error::InvalidInput("no training samples".into()));
    }
    if targets.len() != m {
        return Err(Error::InvalidInput(format!(
            "{} targets for {m} samples",
            targets.len()
        )));
    }
    for (i, (x, &y)) in samples.iter().zip(targets).enumerate() {
        if y != 1.0 && y != -1.0 {
            return Err(Error::InvalidInput(format!(
                "target {y} of sample {i} is not ±1"
            )));
        }
        if x.entries().iter().any(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { sample: i });
        }
        if let Some(id) = x.max_id() {
            if id as usize >= n_features {
                return Err(Error::FeatureOutOfRange { id, n_features });
            }
        }
    }

    let cost = params.cost;
    let bias = params.bias;
    let bias_col = n_features;
    let mut w = vec![0.0; n_features + 1];
    let mut alpha = vec![0.0; m];
    let diag: Vec<f64> = samples.iter().map(|x| x.norm_sq() + bias * bias).collect();
    let margin = |w: &[f64], i: usize| targets[i] * (samples[i].dot(w) + w[bias_col] * bias);

    let mut index: Vec<usize> = (0..m).collect();
    let mut active = m;
    let mut pg_max_old = f64::INFINITY;
    let mut pg_min_old = f64::NEG_INFINITY;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut converged = false;
    let mut epochs = 0;

    while epochs < params.max_epochs {
        index[..active].shuffle(&mut rng);
        let mut pg_max = f64::NEG_INFINITY;
        let mut pg_min = f64::INFINITY;

        let mut s = 0;
        while s < active {
            let i = index[s];
            let g = margin(&w, i) - 1.0;
            let pg = if alpha[i] == 0.0 {
                if g > pg_max_old {
                    active -= 1;
                    index.swap(s, active);
                    continue;
                }
                g.min(0.0)
            } else if alpha[i] == cost {
                if g < pg_min_old {
                    active -= 1;
                    index.swap(s, active);
                    continue;
                }
                g.max(0.0)
            } else {
                g
            };
            pg_max = pg_max.max(pg);
            pg_min = pg_min.min(pg);

            if pg.abs() > 1e-12 {
                let old = alpha[i];
                alpha[i] = if diag[i] > 0.0 {
                    (old - g / diag[i]).clamp(0.0, cost)
                } else {
                    // Flat direction: the dual grows linearly with alpha.
                    cost
                };
                let step = (alpha[i] - old) * targets[i];
                if step != 0.0 {
                    samples[i].axpy(step, &mut w);
                    w[bias_col] += step * bias;
                }
            }
            s += 1;
        }
        epochs += 1;

        let violation = pg_max.max(-pg_min).max(0.0);
        observe(&EpochStats {
            epoch: epochs,
            dual_objective: alpha.iter().sum::<f64>() - 0.5 * w.iter().map(|v| v * v).sum::<f64>(),
            max_violation: violation,
            active,
            min_alpha: alpha.iter().copied().fold(f64::INFINITY, f64::min),
            max_alpha: alpha.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        });

        if violation < params.stop_tol {
            if active == m && max_violation(&w, &alpha, cost, &margin) < params.stop_tol {
                converged = true;
                break;
            }
            active = m;
            pg_max_old = f64::INFINITY;
            pg_min_old = f64::NEG_INFINITY;
            continue;
        }
        pg_max_old = if pg_max <= 0.0 { f64::INFINITY } else { pg_max };
        pg_min_old = if pg_min >= 0.0 {
            f64::NEG_INFINITY
        } else {
            pg_min
        };
    }

    Ok(BinarySolution {
        weights: w,
        alpha,
        epochs,
        converged,
    })
}

/// Largest projected-gradient violation over all samples at the current point.
fn max_violation(
    w: &[f64],
    alpha: &[f64],
    cost: f64,
    margin: &impl Fn(&[f64], usize) -> f64,
) -> f64 {
    alpha
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let g = margin(w, i) - 1.0;
            if a == 0.0 {
                (-g).max(0.0)
            } else if a == cost {
                g.max(0.0)
            } else {
                g.abs()
            }
        })
        .fold(0.0, f64::max)
}
