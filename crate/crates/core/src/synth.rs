//! Synthetic dialogs whose labels follow a first-order Markov chain.
//!
//! Each segment carries a label-specific cue word with probability
//! `cue_prob` plus a handful of filler words shared by all labels, so the
//! best achievable accuracy with and without knowledge of the previous label
//! is known in closed form.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Dialog, Segment};
use crate::error::{Error, Result};

const CUE_WORDS: [&str; 8] = [
    "alpha", "bravo", "charlie", "delta", "echo", "foxtrot", "golf", "hotel",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthParams {
    pub n_dialogs: usize,
    pub segments_per_dialog: usize,
    pub n_labels: usize,
    /// Probability that label `i` is followed by label `(i + 1) % n_labels`.
    pub p_next: f64,
    /// Probability that a segment contains its label's cue word.
    pub cue_prob: f64,
    pub filler_vocab: usize,
    pub min_fillers: usize,
    pub max_fillers: usize,
    pub seed: u64,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams {
            n_dialogs: 100,
            segments_per_dialog: 50,
            n_labels: 4,
            p_next: 0.8,
            cue_prob: 0.3,
            filler_vocab: 50,
            min_fillers: 3,
            max_fillers: 8,
            seed: 0,
        }
    }
}

impl SynthParams {
    fn validate(&self) -> Result<()> {
        let prob = |p: f64| (0.0..=1.0).contains(&p);
        if !(2..=CUE_WORDS.len()).contains(&self.n_labels) {
            return Err(Error::Config(format!(
                "n_labels must be in 2..={}, got {}",
                CUE_WORDS.len(),
                self.n_labels
            )));
        }
        if !prob(self.p_next) || !prob(self.cue_prob) {
            return Err(Error::Config("probabilities must lie in [0, 1]".into()));
        }
        if self.n_dialogs == 0 || self.segments_per_dialog == 0 || self.filler_vocab == 0 {
            return Err(Error::Config(
                "dialog, segment and vocabulary counts must be positive".into(),
            ));
        }
        if self.min_fillers > self.max_fillers {
            return Err(Error::Config("min_fillers exceeds max_fillers".into()));
        }
        Ok(())
    }

    /// Transition probability from label `i` to label `j`.
    pub fn transition(&self, i: usize, j: usize) -> f64 {
        if j == (i + 1) % self.n_labels {
            self.p_next
        } else {
            (1.0 - self.p_next) / (self.n_labels - 1) as f64
        }
    }

    /// Bayes-optimal accuracy from the segment text alone. The chain is
    /// doubly stochastic, so its stationary distribution is uniform.
    pub fn bayes_rate_without_context(&self) -> f64 {
        self.cue_prob + (1.0 - self.cue_prob) / self.n_labels as f64
    }

    /// Bayes-optimal accuracy given the segment text and the previous label.
    pub fn bayes_rate_with_previous_label(&self) -> f64 {
        let best: f64 = (0..self.n_labels)
            .map(|i| {
                (0..self.n_labels)
                    .map(|j| self.transition(i, j))
                    .fold(0.0, f64::max)
            })
            .sum::<f64>()
            / self.n_labels as f64;
        self.cue_prob + (1.0 - self.cue_prob) * best
    }
}

pub fn label_name(i: usize) -> String {
    format!("l{i}")
}

pub fn generate(params: &SynthParams) -> Result<Corpus> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let k = params.n_labels;
    let mut dialogs = Vec::with_capacity(params.n_dialogs);
    for d in 0..params.n_dialogs {
        let id = format!("syn{d:04}");
        let mut label = rng.random_range(0..k);
        let mut segments = Vec::with_capacity(params.segments_per_dialog);
        for s in 0..params.segments_per_dialog {
            if s > 0 {
                label = if rng.random::<f64>() < params.p_next {
                    (label + 1) % k
                } else {
                    let other = rng.random_range(0..k - 1);
                    let next = (label + 1) % k;
                    if other >= next {
                        other + 1
                    } else {
                        other
                    }
                };
            }
            let n_fill = rng.random_range(params.min_fillers..=params.max_fillers);
            let mut words: Vec<String> = (0..n_fill)
                .map(|_| format!("w{:02}", rng.random_range(0..params.filler_vocab)))
                .collect();
            if rng.random::<f64>() < params.cue_prob {
                let at = rng.random_range(0..=words.len());
                words.insert(at, CUE_WORDS[label].to_string());
            }
            let speaker = if s % 2 == 0 { "A" } else { "B" };
            segments.push(Segment::new(
                &id,
                speaker,
                s,
                words.join(" "),
                label_name(label),
            ));
        }
        dialogs.push(Dialog::new(id, segments)?);
    }
    let label_set = (0..k).map(label_name).collect();
    Corpus::new(
        dialogs,
        label_set,
        crate::corpus::TagsetVariant::Iso,
        vec![],
    )
}
