use crate::error::{Error, Result};

/// Square confusion matrix, `counts[gold][predicted]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Confusion {
    pub counts: Vec<Vec<u64>>,
}

impl Confusion {
    pub fn new(n_labels: usize) -> Self {
        Confusion {
            counts: vec![vec![0; n_labels]; n_labels],
        }
    }

    pub fn from_counts(counts: Vec<Vec<u64>>) -> Result<Self> {
        let n = counts.len();
        if counts.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInput("confusion matrix is not square".into()));
        }
        Ok(Confusion { counts })
    }

    pub fn add(&mut self, gold: usize, predicted: usize) {
        self.counts[gold][predicted] += 1;
    }

    pub fn merge(&mut self, other: &Confusion) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> u64 {
        (0..self.counts.len()).map(|i| self.counts[i][i]).sum()
    }

    /// Trace over total.
    pub fn accuracy(&self) -> Result<f64> {
        match self.total() {
            0 => Err(Error::InvalidInput(
                "accuracy of an empty confusion matrix".into(),
            )),
            n => Ok(self.correct() as f64 / n as f64),
        }
    }
}

/// Fraction of positions where the two sequences agree.
pub fn accuracy(gold: &[usize], predicted: &[usize]) -> Result<f64> {
    if gold.len() != predicted.len() {
        return Err(Error::InvalidInput(format!(
            "{} gold labels but {} predictions",
            gold.len(),
            predicted.len()
        )));
    }
    if gold.is_empty() {
        return Err(Error::InvalidInput("accuracy of zero predictions".into()));
    }
    let hits = gold.iter().zip(predicted).filter(|(g, p)| g == p).count();
    Ok(hits as f64 / gold.len() as f64)
}
