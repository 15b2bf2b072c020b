//! Reference implementations used to check the library from the outside.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A small dense binary SVM problem.
pub struct DenseProblem {
    pub x: Vec<Vec<f64>>,
    pub y: Vec<f64>,
    pub cost: f64,
    pub bias: f64,
}

impl DenseProblem {
    pub fn random(seed: u64, max_samples: usize, max_features: usize, costs: &[f64]) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.random_range(2..=max_samples);
        let d = rng.random_range(1..=max_features);
        let x = (0..m)
            .map(|_| {
                (0..d)
                    .map(|_| {
                        if rng.random::<f64>() < 0.3 {
                            0.0
                        } else {
                            rng.random_range(0.0..2.0)
                        }
                    })
                    .collect()
            })
            .collect();
        let mut y: Vec<f64> = (0..m)
            .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
            .collect();
        // Both classes present.
        y[0] = 1.0;
        y[1] = -1.0;
        let cost = costs[rng.random_range(0..costs.len())];
        DenseProblem {
            x,
            y,
            cost,
            bias: 1.0,
        }
    }

    fn augmented(&self, i: usize) -> Vec<f64> {
        let mut v = self.x[i].clone();
        v.push(self.bias);
        v
    }

    /// Primal weights (bias weight last) of the dual optimum, found by
    /// accelerated projected gradient ascent with adaptive restart.
    pub fn oracle_weights(&self, iterations: usize) -> Vec<f64> {
        let m = self.y.len();
        let z: Vec<Vec<f64>> = (0..m).map(|i| self.augmented(i)).collect();
        let q: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        self.y[i]
                            * self.y[j]
                            * z[i].iter().zip(&z[j]).map(|(a, b)| a * b).sum::<f64>()
                    })
                    .collect()
            })
            .collect();
        let lipschitz = q
            .iter()
            .flatten()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
            .max(1e-12);
        let dual = |a: &[f64]| {
            let quad: f64 = (0..m)
                .map(|i| (0..m).map(|j| a[i] * q[i][j] * a[j]).sum::<f64>())
                .sum();
            a.iter().sum::<f64>() - 0.5 * quad
        };
        let step = |p: &[f64]| -> Vec<f64> {
            (0..m)
                .map(|i| {
                    let grad = 1.0 - (0..m).map(|j| q[i][j] * p[j]).sum::<f64>();
                    (p[i] + grad / lipschitz).clamp(0.0, self.cost)
                })
                .collect()
        };
        let mut alpha = vec![0.0; m];
        let mut point = alpha.clone();
        let mut t = 1.0f64;
        let mut best = dual(&alpha);
        for _ in 0..iterations {
            let next = step(&point);
            let value = dual(&next);
            if value < best {
                // Restart momentum from the last iterate.
                point = alpha.clone();
                t = 1.0;
                continue;
            }
            best = value;
            let t_next = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
            point = next
                .iter()
                .zip(&alpha)
                .map(|(n, a)| n + (t - 1.0) / t_next * (n - a))
                .collect();
            alpha = next;
            t = t_next;
        }
        let mut w = vec![0.0; z[0].len()];
        for i in 0..m {
            for (wk, zk) in w.iter_mut().zip(&z[i]) {
                *wk += alpha[i] * self.y[i] * zk;
            }
        }
        w
    }
}

/// Two-sided Wilcoxon p-value by enumerating all sign patterns of the ranks.
pub fn wilcoxon_enumerated(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x - y)
        .filter(|v| *v != 0.0)
        .collect();
    let n = d.len();
    if n == 0 {
        return 1.0;
    }
    let ranks: Vec<f64> = d
        .iter()
        .map(|v| {
            let below = d.iter().filter(|u| u.abs() < v.abs()).count() as f64;
            let equal = d.iter().filter(|u| u.abs() == v.abs()).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect();
    let observed: f64 = d
        .iter()
        .zip(&ranks)
        .filter(|(v, _)| **v > 0.0)
        .map(|(_, r)| r)
        .sum();
    let mean = (n * (n + 1)) as f64 / 4.0;
    let dev = (observed - mean).abs();
    let mut extreme = 0u64;
    for mask in 0u64..(1 << n) {
        let w: f64 = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| ranks[i])
            .sum();
        if (w - mean).abs() >= dev - 1e-9 {
            extreme += 1;
        }
    }
    extreme as f64 / (1u64 << n) as f64
}

pub fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}
