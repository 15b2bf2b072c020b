use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Targets};
use crate::error::{Error, Result};

/// Unit that is kept whole when assigning folds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    #[default]
    Dialog,
    Segment,
}

impl FromStr for Granularity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dialog" => Ok(Granularity::Dialog),
            "segment" => Ok(Granularity::Segment),
            other => Err(Error::Config(format!("unknown fold granularity `{other}`"))),
        }
    }
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Granularity::Dialog => "dialog",
            Granularity::Segment => "segment",
        })
    }
}

/// Fold index of every segment, `[dialog][segment]`. Non-target segments are `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldAssignment {
    pub k: usize,
    pub fold_of: Vec<Vec<Option<usize>>>,
}

impl FoldAssignment {
    /// `(dialog, segment)` pairs of target segments in fold `f`, in corpus order.
    pub fn members(&self, f: usize) -> Vec<(usize, usize)> {
        self.select(|x| x == f)
    }

    /// All target segments, in corpus order.
    pub fn targets(&self) -> Vec<(usize, usize)> {
        self.select(|_| true)
    }

    /// Target segments outside fold `f`, in corpus order.
    pub fn complement(&self, f: usize) -> Vec<(usize, usize)> {
        self.select(|x| x != f)
    }

    fn select(&self, keep: impl Fn(usize) -> bool) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (d, segs) in self.fold_of.iter().enumerate() {
            for (s, f) in segs.iter().enumerate() {
                if matches!(f, Some(f) if keep(*f)) {
                    out.push((d, s));
                }
            }
        }
        out
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for f in self.fold_of.iter().flatten().flatten() {
            sizes[*f] += 1;
        }
        sizes
    }
}

/// Shuffles the units with a seeded generator and deals them round-robin into
/// `k` folds. With dialog granularity every segment of a dialog shares a fold.
pub fn make_folds(
    corpus: &Corpus,
    targets: &Targets,
    k: usize,
    granularity: Granularity,
    seed: u64,
) -> Result<FoldAssignment> {
    let units: Vec<Vec<(usize, usize)>> = match granularity {
        Granularity::Dialog => corpus
            .dialogs
            .iter()
            .enumerate()
            .map(|(d, dialog)| {
                (0..dialog.len())
                    .filter(|&s| targets.is_target(d, s))
                    .map(|s| (d, s))
                    .collect::<Vec<_>>()
            })
            .filter(|u| !u.is_empty())
            .collect(),
        Granularity::Segment => corpus
            .dialogs
            .iter()
            .enumerate()
            .flat_map(|(d, dialog)| (0..dialog.len()).map(move |s| (d, s)))
            .filter(|&(d, s)| targets.is_target(d, s))
            .map(|p| vec![p])
            .collect(),
    };
    if k < 2 {
        return Err(Error::Config(format!("need at least 2 folds, got {k}")));
    }
    if k > units.len() {
        return Err(Error::Config(format!(
            "{k} folds requested but only {} {granularity} units are available",
            units.len()
        )));
    }
    let mut order: Vec<usize> = (0..units.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut fold_of: Vec<Vec<Option<usize>>> =
        corpus.dialogs.iter().map(|d| vec![None; d.len()]).collect();
    for (pos, &u) in order.iter().enumerate() {
        for &(d, s) in &units[u] {
            fold_of[d][s] = Some(pos % k);
        }
    }
    Ok(FoldAssignment { k, fold_of })
}
