use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Largest number of non-zero differences for which the exact null
/// distribution is used.
pub const EXACT_LIMIT: usize = 12;
pub const ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PValueMethod {
    Exact,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WilcoxonResult {
    /// Sum of ranks of positive differences `a - b`.
    pub w_plus: f64,
    pub w_minus: f64,
    /// Number of non-zero differences.
    pub n_eff: usize,
    /// Two-sided p-value.
    pub p_value: f64,
    pub method: PValueMethod,
}

impl WilcoxonResult {
    pub fn significant(&self) -> bool {
        self.p_value < ALPHA
    }
}

/// Average ranks (1-based) of `values`, which must be sorted ascending, with
/// tie groups returned as their sizes.
fn average_ranks(sorted: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut ranks = vec![0.0; sorted.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && same(sorted[j], sorted[i]) {
            j += 1;
        }
        let r = (i + 1 + j) as f64 / 2.0;
        ranks[i..j].fill(r);
        ties.push(j - i);
        i = j;
    }
    (ranks, ties)
}

/// Magnitudes closer than this relative distance count as tied, so that
/// differences of fold accuracies computed in floating point tie as they would
/// in exact arithmetic.
fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Wilcoxon signed-rank test on paired samples.
///
/// Zero differences are dropped and tied magnitudes receive their average
/// rank. The p-value is exact up to [`EXACT_LIMIT`] non-zero pairs and comes
/// from the normal approximation with tie and continuity corrections above.
pub fn wilcoxon(a: &[f64], b: &[f64]) -> Result<WilcoxonResult> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput(format!(
            "paired samples differ in length ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(
            "non-finite value in paired samples".into(),
        ));
    }
    let mut diffs: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x - y)
        .filter(|&d| d != 0.0)
        .collect();
    let n = diffs.len();
    if n == 0 {
        return Ok(WilcoxonResult {
            w_plus: 0.0,
            w_minus: 0.0,
            n_eff: 0,
            p_value: 1.0,
            method: PValueMethod::Exact,
        });
    }
    diffs.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
    let mags: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let (ranks, ties) = average_ranks(&mags);
    let w_plus: f64 = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| r)
        .sum();
    let total = (n * (n + 1)) as f64 / 2.0;
    let w_minus = total - w_plus;

    let (p_value, method) = if n <= EXACT_LIMIT {
        (exact_p(&ranks, w_plus), PValueMethod::Exact)
    } else {
        (normal_p(n, &ties, w_plus), PValueMethod::Normal)
    };
    Ok(WilcoxonResult {
        w_plus,
        w_minus,
        n_eff: n,
        p_value,
        method,
    })
}

/// Exact two-sided p-value by enumerating the null distribution of the
/// positive rank sum over doubled (hence integer) ranks.
fn exact_p(ranks: &[f64], w_plus: f64) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let max: usize = doubled.iter().sum();
    let mut counts = vec![0u64; max + 1];
    counts[0] = 1;
    for &r in &doubled {
        for s in (r..=max).rev() {
            counts[s] += counts[s - r];
        }
    }
    // Work in doubled units so that the mean max / 2 is an integer or half
    // integer and comparisons are exact.
    let observed = (2.0 * w_plus).round() as i64;
    let centre2 = max as i64; // twice the doubled mean
    let dev = (2 * observed - centre2).abs();
    let extreme: u64 = counts
        .iter()
        .enumerate()
        .filter(|(s, _)| (2 * *s as i64 - centre2).abs() >= dev)
        .map(|(_, c)| c)
        .sum();
    (extreme as f64 / (1u64 << ranks.len()) as f64).min(1.0)
}

fn normal_p(n: usize, ties: &[usize], w_plus: f64) -> f64 {
    let n = n as f64;
    let mean = n * (n + 1.0) / 4.0;
    let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / 48.0;
    let var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term;
    let z = ((w_plus - mean).abs() - 0.5).max(0.0) / var.sqrt();
    erfc(z / std::f64::consts::SQRT_2).min(1.0)
}
