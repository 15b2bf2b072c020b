//! Sparse feature extraction for segments and their dialog history.
//!
//! A sample is the union of the segment's own n-gram counts, wh-word and
//! punctuation indicators, and optionally context features from the `n_prev`
//! preceding segments of the same dialog, in one of three forms:
//!
//! * untagged n-grams, pooled with the segment's own n-gram counts;
//! * n-grams tagged with their distance from the current segment;
//! * indicators of the dialog act labels of the preceding segments.

mod dictionary;
mod export;
mod keys;
mod ngrams;
mod normalize;
mod sparse;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};

pub use dictionary::FeatureDictionary;
pub use export::write_sparse_dataset;
pub use keys::{FeatureKey, Interner, KeySpace};
pub use ngrams::{extract_ngrams, ngram_key, NGramSpec};
pub use normalize::{normalize, MarkupMode, TokenSequence, END, START};
pub use sparse::SparseVector;

pub const WH_WORDS: [&str; 9] = [
    "who", "whom", "whose", "what", "which", "when", "where", "why", "how",
];
pub const PUNCTUATION_INDICATORS: [&str; 6] = ["?", "!", ".", ",", ";", ":"];

/// Name of the target dimension in label context features.
pub const TASK_DIMENSION: &str = "task";
/// Label used for offsets that reach before the start of the dialog.
pub const PAD_LABEL: &str = "<pad>";
/// Label used when a preceding segment has no function in a dimension.
pub const NONE_LABEL: &str = "<none>";

pub const MAX_CONTEXT: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub ngrams: NGramSpec,
    pub markup: MarkupMode,
}

/// Which annotation dimensions label context features draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelDimensions {
    #[default]
    Task,
    All,
}

impl FromStr for LabelDimensions {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "task" | "task_only" => Ok(LabelDimensions::Task),
            "all" => Ok(LabelDimensions::All),
            other => Err(Error::Config(format!("unknown label dimensions `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContextMode {
    None,
    UntaggedNGrams,
    IndexTaggedNGrams,
    DaLabels(LabelDimensions),
}

impl ContextMode {
    /// Short name used in tables and configuration.
    pub fn name(&self) -> &'static str {
        match self {
            ContextMode::None => "none",
            ContextMode::UntaggedNGrams => "untagged",
            ContextMode::IndexTaggedNGrams => "tagged",
            ContextMode::DaLabels(LabelDimensions::Task) => "labels",
            ContextMode::DaLabels(LabelDimensions::All) => "labels-all",
        }
    }

    pub fn parse(name: &str, dims: LabelDimensions) -> Result<Self> {
        match name {
            "none" => Ok(ContextMode::None),
            "untagged" => Ok(ContextMode::UntaggedNGrams),
            "tagged" => Ok(ContextMode::IndexTaggedNGrams),
            "labels" => Ok(ContextMode::DaLabels(dims)),
            "labels-all" => Ok(ContextMode::DaLabels(LabelDimensions::All)),
            "labels-task" => Ok(ContextMode::DaLabels(LabelDimensions::Task)),
            other => Err(Error::Config(format!("unknown context mode `{other}`"))),
        }
    }
}

impl fmt::Display for ContextMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A context mode together with the number of preceding segments it covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ContextSpec {
    mode: ContextMode,
    n_prev: usize,
}

impl ContextSpec {
    pub const NONE: ContextSpec = ContextSpec {
        mode: ContextMode::None,
        n_prev: 0,
    };

    /// `n_prev = 0` collapses any mode to `None`.
    pub fn new(mode: ContextMode, n_prev: usize) -> Result<Self> {
        if n_prev > MAX_CONTEXT {
            return Err(Error::Config(format!(
                "context of {n_prev} preceding segments exceeds the maximum of {MAX_CONTEXT}"
            )));
        }
        match (mode, n_prev) {
            (_, 0) => Ok(Self::NONE),
            (ContextMode::None, _) => Err(Error::Config(
                "context mode `none` requires n_prev = 0".into(),
            )),
            _ => Ok(ContextSpec { mode, n_prev }),
        }
    }

    pub fn mode(&self) -> ContextMode {
        self.mode
    }

    pub fn n_prev(&self) -> usize {
        self.n_prev
    }

    pub fn uses_labels(&self) -> bool {
        matches!(self.mode, ContextMode::DaLabels(_))
    }
}

/// Sample keyed by [`FeatureKey`], sorted by key, keys unique.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyedVector {
    entries: Vec<(FeatureKey, f64)>,
}

impl KeyedVector {
    fn from_unsorted(mut pairs: Vec<(FeatureKey, f64)>) -> Self {
        pairs.sort_unstable_by_key(|&(k, _)| k);
        let mut entries: Vec<(FeatureKey, f64)> = Vec::with_capacity(pairs.len());
        for (k, v) in pairs {
            match entries.last_mut() {
                Some(last) if last.0 == k => last.1 += v,
                _ => entries.push((k, v)),
            }
        }
        KeyedVector { entries }
    }

    pub fn entries(&self) -> &[(FeatureKey, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds another vector's entries, summing shared keys.
    pub fn merged(&self, other: &KeyedVector) -> KeyedVector {
        let mut pairs = self.entries.clone();
        pairs.extend_from_slice(&other.entries);
        KeyedVector::from_unsorted(pairs)
    }

    pub fn render(&self, space: &KeySpace) -> Vec<(String, f64)> {
        self.entries
            .iter()
            .map(|&(k, v)| (space.render(k), v))
            .collect()
    }
}

/// Interned term counts of one segment.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SegmentTerms {
    /// n-gram term ids with counts.
    pub ngrams: Vec<(u32, f64)>,
    /// wh-word and punctuation indicator term ids, value 1.
    pub indicators: Vec<(u32, f64)>,
}

/// Per-segment label ids, parallel to the corpus dialogs, one id per dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelTrack {
    pub labels: Vec<Vec<Vec<u32>>>,
}

impl LabelTrack {
    /// Replaces the target-dimension label of every segment.
    pub fn with_task_labels(&self, task: &[Vec<u32>]) -> LabelTrack {
        let mut out = self.clone();
        for (dialog, ids) in out.labels.iter_mut().zip(task) {
            for (seg, &id) in dialog.iter_mut().zip(ids) {
                seg[0] = id;
            }
        }
        out
    }
}

/// Normalizes text and interns terms and labels into a [`KeySpace`].
#[derive(Debug, Clone)]
pub struct Featurizer {
    pub config: FeatureConfig,
    pub space: KeySpace,
    /// Label dimensions, target dimension first.
    dims: Vec<u16>,
    pad: u32,
    none: u32,
}

impl Featurizer {
    pub fn new(config: FeatureConfig, aux_dimensions: &[String]) -> Self {
        Self::with_space(config, aux_dimensions, KeySpace::default())
    }

    /// Continues interning into an existing key space (e.g. one recovered from
    /// a saved dictionary).
    pub fn with_space(
        config: FeatureConfig,
        aux_dimensions: &[String],
        mut space: KeySpace,
    ) -> Self {
        let dims = std::iter::once(TASK_DIMENSION)
            .chain(aux_dimensions.iter().map(String::as_str))
            .map(|d| space.dims.intern(d) as u16)
            .collect();
        let pad = space.labels.intern(PAD_LABEL);
        let none = space.labels.intern(NONE_LABEL);
        Featurizer {
            config,
            space,
            dims,
            pad,
            none,
        }
    }

    pub fn tokens(&self, raw_text: &str) -> TokenSequence {
        normalize(raw_text, self.config.markup)
    }

    /// n-gram counts and indicators of one token sequence.
    pub fn terms(&mut self, tokens: &TokenSequence) -> SegmentTerms {
        let ngrams = extract_ngrams(tokens, self.config.ngrams)
            .into_iter()
            .map(|(k, c)| (self.space.terms.intern(&k), c as f64))
            .collect();
        let present = |t: &str| tokens.inner().iter().any(|x| x == t);
        let mut indicators = Vec::new();
        for w in WH_WORDS.iter().filter(|w| present(w)) {
            indicators.push((self.space.terms.intern(&format!("wh:{w}")), 1.0));
        }
        for p in PUNCTUATION_INDICATORS.iter().filter(|p| present(p)) {
            indicators.push((self.space.terms.intern(&format!("punct:{p}")), 1.0));
        }
        SegmentTerms { ngrams, indicators }
    }

    /// Label ids for a segment: the target label followed by each aux dimension.
    pub fn label_ids(&mut self, label: &str, aux: &[Option<&str>]) -> Vec<u32> {
        std::iter::once(self.space.labels.intern(label))
            .chain(aux.iter().map(|a| match a {
                Some(l) => self.space.labels.intern(l),
                None => self.none,
            }))
            .collect()
    }

    /// Own-segment features: n-gram counts plus indicators.
    pub fn base_keys(&self, terms: &SegmentTerms) -> KeyedVector {
        KeyedVector::from_unsorted(
            terms
                .ngrams
                .iter()
                .chain(&terms.indicators)
                .map(|&(t, v)| (FeatureKey::Base(t), v))
                .collect(),
        )
    }

    /// Context features. `history[d - 1]` and `labels[d - 1]` describe the
    /// segment `d` positions back; both may be shorter than `n_prev` at the
    /// start of a dialog.
    pub fn context_keys(
        &self,
        history: &[&SegmentTerms],
        labels: &[&[u32]],
        ctx: ContextSpec,
    ) -> KeyedVector {
        let n = ctx.n_prev();
        let mut pairs = Vec::new();
        match ctx.mode() {
            ContextMode::None => {}
            ContextMode::UntaggedNGrams => {
                for terms in history.iter().take(n) {
                    pairs.extend(terms.ngrams.iter().map(|&(t, v)| (FeatureKey::Base(t), v)));
                }
            }
            ContextMode::IndexTaggedNGrams => {
                for (d, terms) in history.iter().take(n).enumerate() {
                    let offset = (d + 1) as u8;
                    pairs.extend(
                        terms
                            .ngrams
                            .iter()
                            .map(|&(term, v)| (FeatureKey::Tagged { offset, term }, v)),
                    );
                }
            }
            ContextMode::DaLabels(which) => {
                let n_dims = match which {
                    LabelDimensions::Task => 1,
                    LabelDimensions::All => self.dims.len(),
                };
                for d in 0..n {
                    let offset = (d + 1) as u8;
                    for (j, &dim) in self.dims.iter().take(n_dims).enumerate() {
                        let label = labels.get(d).map_or(self.pad, |l| l[j]);
                        pairs.push((FeatureKey::Label { offset, dim, label }, 1.0));
                    }
                }
            }
        }
        KeyedVector::from_unsorted(pairs)
    }

    /// Full sample: own features merged with context features.
    pub fn sample_keys(
        &self,
        terms: &SegmentTerms,
        history: &[&SegmentTerms],
        labels: &[&[u32]],
        ctx: ContextSpec,
    ) -> KeyedVector {
        self.base_keys(terms)
            .merged(&self.context_keys(history, labels, ctx))
    }

    /// Base vector of a token sequence. An unfrozen dictionary grows; a frozen
    /// one skips unseen features.
    pub fn base_vector(
        &mut self,
        tokens: &TokenSequence,
        dict: &mut FeatureDictionary,
    ) -> SparseVector {
        let terms = self.terms(tokens);
        let keys = self.base_keys(&terms);
        if !dict.is_frozen() {
            dict.extend(&keys);
        }
        dict.vectorize(&keys)
    }

    /// Context vector for explicit history. `history` is most recent first;
    /// `labels[d - 1]` holds the target label followed by aux-dimension labels
    /// of the segment `d` back.
    pub fn context_vector(
        &mut self,
        history: &[&TokenSequence],
        labels: Option<&[Vec<Option<String>>]>,
        mode: ContextMode,
        n_prev: usize,
        dict: &mut FeatureDictionary,
    ) -> Result<SparseVector> {
        let ctx = ContextSpec::new(mode, n_prev)?;
        let terms: Vec<SegmentTerms> = history.iter().map(|t| self.terms(t)).collect();
        let label_ids: Vec<Vec<u32>> = match labels {
            Some(ls) => ls
                .iter()
                .map(|tuple| {
                    let mut ids: Vec<u32> = tuple
                        .iter()
                        .map(|l| match l {
                            Some(l) => self.space.labels.intern(l),
                            None => self.none,
                        })
                        .collect();
                    ids.resize(self.dims.len(), self.none);
                    ids
                })
                .collect(),
            None if ctx.uses_labels() && !history.is_empty() => {
                return Err(Error::InvalidInput(
                    "label context requested without labels".into(),
                ))
            }
            None => vec![],
        };
        let history_refs: Vec<&SegmentTerms> = terms.iter().collect();
        let label_refs: Vec<&[u32]> = label_ids.iter().map(Vec::as_slice).collect();
        let keys = self.context_keys(&history_refs, &label_refs, ctx);
        if !dict.is_frozen() {
            dict.extend(&keys);
        }
        Ok(dict.vectorize(&keys))
    }
}

/// A corpus with every segment's terms and labels interned, ready for
/// repeated sample construction under different context settings.
#[derive(Debug, Clone)]
pub struct PreparedCorpus {
    pub featurizer: Featurizer,
    /// `[dialog][segment]`
    pub terms: Vec<Vec<SegmentTerms>>,
    /// Gold labels in every dimension.
    pub manual_labels: LabelTrack,
    /// Target label index (into `Corpus::label_set`) of every segment.
    pub gold: Vec<Vec<usize>>,
    /// Label id in the key space of each entry of `Corpus::label_set`.
    pub label_ids: Vec<u32>,
}

impl PreparedCorpus {
    pub fn new(corpus: &Corpus, config: FeatureConfig) -> Self {
        Self::with_featurizer(corpus, Featurizer::new(config, &corpus.aux_dimensions))
    }

    pub fn with_featurizer(corpus: &Corpus, mut featurizer: Featurizer) -> Self {
        let label_index = corpus.label_index();
        let label_ids = corpus
            .label_set
            .iter()
            .map(|l| featurizer.space.labels.intern(l))
            .collect();
        let mut terms = Vec::with_capacity(corpus.dialogs.len());
        let mut labels = Vec::with_capacity(corpus.dialogs.len());
        let mut gold = Vec::with_capacity(corpus.dialogs.len());
        for dialog in &corpus.dialogs {
            let mut dt = Vec::with_capacity(dialog.len());
            let mut dl = Vec::with_capacity(dialog.len());
            let mut dg = Vec::with_capacity(dialog.len());
            for seg in &dialog.segments {
                let tokens = featurizer.tokens(&seg.raw_text);
                dt.push(featurizer.terms(&tokens));
                let aux: Vec<Option<&str>> = corpus
                    .aux_dimensions
                    .iter()
                    .map(|d| seg.aux_labels.get(d).map(String::as_str))
                    .collect();
                dl.push(featurizer.label_ids(&seg.label, &aux));
                dg.push(label_index[seg.label.as_str()]);
            }
            terms.push(dt);
            labels.push(dl);
            gold.push(dg);
        }
        PreparedCorpus {
            featurizer,
            terms,
            manual_labels: LabelTrack { labels },
            gold,
            label_ids,
        }
    }

    /// Sample for segment `seg` of dialog `dialog`, with label context read from `labels`.
    pub fn sample(
        &self,
        dialog: usize,
        seg: usize,
        ctx: ContextSpec,
        labels: &LabelTrack,
    ) -> KeyedVector {
        let n = ctx.n_prev().min(seg);
        let dialog_terms = &self.terms[dialog];
        let history: Vec<&SegmentTerms> = (1..=n).map(|d| &dialog_terms[seg - d]).collect();
        let label_hist: Vec<&[u32]> = if ctx.uses_labels() {
            (1..=n)
                .map(|d| labels.labels[dialog][seg - d].as_slice())
                .collect()
        } else {
            vec![]
        };
        self.featurizer
            .sample_keys(&dialog_terms[seg], &history, &label_hist, ctx)
    }

    pub fn space(&self) -> &KeySpace {
        &self.featurizer.space
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Dialog, Segment};

    fn render(f: &Featurizer, dict: &FeatureDictionary, v: &SparseVector) -> Vec<(String, f64)> {
        v.entries()
            .iter()
            .map(|&(id, x)| (f.space.render(dict.key(id)), x))
            .collect()
    }

    fn featurizer() -> Featurizer {
        Featurizer::new(FeatureConfig::default(), &[])
    }

    #[test]
    fn base_vector_with_indicators() {
        let mut f = featurizer();
        let mut dict = FeatureDictionary::new();
        let v = f.base_vector(&f.tokens("what time ?"), &mut dict);
        let keys: Vec<String> = render(&f, &dict, &v).into_iter().map(|(k, _)| k).collect();
        assert!(keys.contains(&"wh:what".to_string()));
        assert!(keys.contains(&"punct:?".to_string()));
        assert!(keys.contains(&"2:time ?".to_string()));
        assert_eq!(keys.len(), 5 + 4 + 2);

        let plain = f.base_vector(&f.tokens("okay then"), &mut dict);
        assert!(render(&f, &dict, &plain)
            .iter()
            .all(|(k, _)| k.starts_with("1:") || k.starts_with("2:")));

        let again = f.base_vector(&f.tokens("okay then"), &mut dict);
        assert_eq!(plain, again);
    }

    #[test]
    fn frozen_dictionary_skips_unseen() {
        let mut f = featurizer();
        let mut dict = FeatureDictionary::new();
        f.base_vector(&f.tokens("yes"), &mut dict);
        dict.freeze();
        let size = dict.len();
        let v = f.base_vector(&f.tokens("yes no"), &mut dict);
        assert_eq!(dict.len(), size);
        assert!(v.entries().iter().all(|&(id, _)| (id as usize) < size));
        // <s>, yes, </s> and "<s> yes" survive; everything involving "no" is unseen.
        assert_eq!(v.nnz(), 4);
    }

    #[test]
    fn zero_context_is_empty() {
        let mut f = featurizer();
        let t = f.tokens("yes");
        let mut dict = FeatureDictionary::new();
        for mode in [
            ContextMode::None,
            ContextMode::UntaggedNGrams,
            ContextMode::IndexTaggedNGrams,
            ContextMode::DaLabels(LabelDimensions::Task),
        ] {
            let v = f
                .context_vector(&[&t], Some(&[vec![Some("sd".into())]]), mode, 0, &mut dict)
                .unwrap();
            assert!(v.is_empty());
        }
    }

    #[test]
    fn index_tagged_keys() {
        let mut f = featurizer();
        let t = f.tokens("yes");
        let mut dict = FeatureDictionary::new();
        let v = f
            .context_vector(&[&t], None, ContextMode::IndexTaggedNGrams, 1, &mut dict)
            .unwrap();
        let mut keys: Vec<String> = render(&f, &dict, &v).into_iter().map(|(k, _)| k).collect();
        keys.sort();
        assert_eq!(
            keys,
            [
                "1|1:</s>",
                "1|1:<s>",
                "1|1:yes",
                "1|2:<s> yes",
                "1|2:yes </s>"
            ]
        );
    }

    #[test]
    fn label_padding_at_dialog_start() {
        let mut f = featurizer();
        let mut dict = FeatureDictionary::new();
        let v = f
            .context_vector(
                &[],
                Some(&[]),
                ContextMode::DaLabels(LabelDimensions::Task),
                2,
                &mut dict,
            )
            .unwrap();
        let got = render(&f, &dict, &v);
        assert_eq!(
            got,
            [
                ("da|1|task|<pad>".to_string(), 1.0),
                ("da|2|task|<pad>".to_string(), 1.0)
            ]
        );
    }

    #[test]
    fn context_bounds() {
        assert!(ContextSpec::new(ContextMode::UntaggedNGrams, 6).is_err());
        assert!(ContextSpec::new(ContextMode::None, 2).is_err());
        assert_eq!(
            ContextSpec::new(ContextMode::IndexTaggedNGrams, 0).unwrap(),
            ContextSpec::NONE
        );
        let mut f = featurizer();
        let mut dict = FeatureDictionary::new();
        assert!(f
            .context_vector(&[], None, ContextMode::UntaggedNGrams, 6, &mut dict)
            .is_err());
    }

    fn dialog_corpus() -> Corpus {
        let texts = [
            "hello there",
            "how are you ?",
            "fine thanks",
            "what about you ?",
            "good",
        ];
        let labels = ["fp", "qw", "sd", "qw", "sd"];
        let segs = texts
            .iter()
            .zip(labels)
            .enumerate()
            .map(|(i, (t, l))| Segment::new("d", ["A", "B"][i % 2], i, *t, l))
            .collect();
        Corpus::from_dialogs(vec![Dialog::new("d", segs).unwrap()], vec![]).unwrap()
    }

    #[test]
    fn untagged_context_is_additive() {
        let p = PreparedCorpus::new(&dialog_corpus(), FeatureConfig::default());
        let labels = &p.manual_labels;
        for n in 1..=4 {
            let cur = p.sample(
                0,
                4,
                ContextSpec::new(ContextMode::UntaggedNGrams, n).unwrap(),
                labels,
            );
            let prev = p.sample(
                0,
                4,
                ContextSpec::new(ContextMode::UntaggedNGrams, n - 1).unwrap(),
                labels,
            );
            let extra = KeyedVector::from_unsorted(
                p.terms[0][4 - n]
                    .ngrams
                    .iter()
                    .map(|&(t, v)| (FeatureKey::Base(t), v))
                    .collect(),
            );
            assert_eq!(cur, prev.merged(&extra), "n = {n}");
        }
    }

    #[test]
    fn tagged_offsets_are_disjoint_copies() {
        let p = PreparedCorpus::new(&dialog_corpus(), FeatureConfig::default());
        let ctx = ContextSpec::new(ContextMode::IndexTaggedNGrams, 3).unwrap();
        let s = p.sample(0, 4, ctx, &p.manual_labels);
        for d in 1..=3u8 {
            let mut sub: Vec<(u32, f64)> = s
                .entries()
                .iter()
                .filter_map(|&(k, v)| match k {
                    FeatureKey::Tagged { offset, term } if offset == d => Some((term, v)),
                    _ => None,
                })
                .collect();
            sub.sort_unstable_by_key(|x| x.0);
            let mut want = p.terms[0][4 - d as usize].ngrams.clone();
            want.sort_unstable_by_key(|x| x.0);
            assert_eq!(sub, want);
        }
    }

    #[test]
    fn label_context_nonzero_count() {
        let mut c = dialog_corpus();
        c.aux_dimensions = vec!["feedback".into()];
        c.dialogs[0].segments[1]
            .aux_labels
            .insert("feedback".into(), "autoPositive".into());
        let p = PreparedCorpus::new(&c, FeatureConfig::default());
        for n in 1..=5 {
            for (dims, k) in [(LabelDimensions::Task, 1), (LabelDimensions::All, 2)] {
                let ctx = ContextSpec::new(ContextMode::DaLabels(dims), n).unwrap();
                for seg in 0..5 {
                    let ctx_keys = p.featurizer.context_keys(
                        &(1..=n.min(seg))
                            .map(|d| &p.terms[0][seg - d])
                            .collect::<Vec<_>>(),
                        &(1..=n.min(seg))
                            .map(|d| p.manual_labels.labels[0][seg - d].as_slice())
                            .collect::<Vec<_>>(),
                        ctx,
                    );
                    assert_eq!(ctx_keys.len(), n * k);
                }
            }
        }
    }
}
