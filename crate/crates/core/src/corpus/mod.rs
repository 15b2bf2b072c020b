//! Uniform dialog/segment model shared by every corpus format.

mod dialogbank;
mod dump;
mod lego;
mod mapping;
pub mod swda;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dialogbank::{parse_dialogbank_tsv, NO_TASK_LABEL};
pub use dump::{read_segments, write_segments};
pub use lego::parse_lego;
pub use mapping::{LabelMapping, DEFAULT_LEGO_MAPPING};
pub use swda::{apply_tagset_variant, load_switchboard, parse_switchboard};

/// One functional segment, the unit of classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub dialog_id: String,
    pub speaker: String,
    pub index: usize,
    pub raw_text: String,
    pub label: String,
    /// Functions in dimensions other than the target one, keyed by dimension name.
    pub aux_labels: BTreeMap<String, String>,
}

impl Segment {
    pub fn new(
        dialog_id: impl Into<String>,
        speaker: impl Into<String>,
        index: usize,
        raw_text: impl Into<String>,
        label: impl Into<String>,
    ) -> Self {
        Segment {
            dialog_id: dialog_id.into(),
            speaker: speaker.into(),
            index,
            raw_text: raw_text.into(),
            label: label.into(),
            aux_labels: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dialog {
    pub id: String,
    pub segments: Vec<Segment>,
}

impl Dialog {
    /// Builds a dialog, renumbering segment indices from 0 and stamping the dialog id.
    pub fn new(id: impl Into<String>, mut segments: Vec<Segment>) -> Result<Self> {
        let id = id.into();
        if segments.is_empty() {
            return Err(Error::EmptyDialog(id));
        }
        for (i, seg) in segments.iter_mut().enumerate() {
            seg.index = i;
            seg.dialog_id.clone_from(&id);
        }
        Ok(Dialog { id, segments })
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }
}

/// Label-set variant a corpus is expressed in.
///
/// The `Swda*` variants are the SWBD-DAMSL cluster sets. `Iso` covers any
/// corpus whose labels are taken as given (ISO 24617-2 Task functions, mapped
/// LEGO labels, synthetic corpora).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TagsetVariant {
    Swda44,
    Swda43,
    Swda42,
    Swda41,
    Iso,
}

impl TagsetVariant {
    /// Number of labels in the variant, `None` for open label sets.
    pub fn label_count(self) -> Option<usize> {
        match self {
            TagsetVariant::Swda44 => Some(44),
            TagsetVariant::Swda43 => Some(43),
            TagsetVariant::Swda42 => Some(42),
            TagsetVariant::Swda41 => Some(41),
            TagsetVariant::Iso => None,
        }
    }

    pub fn is_swda(self) -> bool {
        self != TagsetVariant::Iso
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TagsetVariant::Swda44 => "swda44",
            TagsetVariant::Swda43 => "swda43",
            TagsetVariant::Swda42 => "swda42",
            TagsetVariant::Swda41 => "swda41",
            TagsetVariant::Iso => "iso",
        }
    }
}

impl fmt::Display for TagsetVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TagsetVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "swda44" | "44" => Ok(TagsetVariant::Swda44),
            "swda43" | "43" => Ok(TagsetVariant::Swda43),
            "swda42" | "42" => Ok(TagsetVariant::Swda42),
            "swda41" | "41" => Ok(TagsetVariant::Swda41),
            "iso" | "iso_task" => Ok(TagsetVariant::Iso),
            other => Err(Error::Config(format!("unknown tag set variant `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub dialogs: Vec<Dialog>,
    pub label_set: Vec<String>,
    pub variant: TagsetVariant,
    /// Names of the non-target annotation dimensions carried in `aux_labels`.
    pub aux_dimensions: Vec<String>,
}

impl Corpus {
    /// Assembles a corpus and checks its invariants: unique dialog ids and every
    /// segment label declared in `label_set`.
    pub fn new(
        dialogs: Vec<Dialog>,
        label_set: Vec<String>,
        variant: TagsetVariant,
        aux_dimensions: Vec<String>,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        for d in &dialogs {
            if !seen.insert(d.id.as_str()) {
                return Err(Error::InvalidInput(format!(
                    "duplicate dialog id `{}`",
                    d.id
                )));
            }
            if d.segments.is_empty() {
                return Err(Error::EmptyDialog(d.id.clone()));
            }
        }
        let declared: HashSet<&str> = label_set.iter().map(String::as_str).collect();
        if declared.len() != label_set.len() {
            return Err(Error::InvalidInput("label set contains duplicates".into()));
        }
        for seg in dialogs.iter().flat_map(|d| &d.segments) {
            if !declared.contains(seg.label.as_str()) {
                return Err(Error::UnknownLabel {
                    label: seg.label.clone(),
                    variant: variant.to_string(),
                });
            }
        }
        Ok(Corpus {
            dialogs,
            label_set,
            variant,
            aux_dimensions,
        })
    }

    /// Builds an open-label-set corpus whose label set is the labels in order of first use.
    pub fn from_dialogs(dialogs: Vec<Dialog>, aux_dimensions: Vec<String>) -> Result<Self> {
        let label_set = labels_in_order(&dialogs);
        Corpus::new(dialogs, label_set, TagsetVariant::Iso, aux_dimensions)
    }

    pub fn segments(&self) -> impl Iterator<Item = &Segment> {
        self.dialogs.iter().flat_map(|d| d.segments.iter())
    }

    pub fn segment_count(&self) -> usize {
        self.dialogs.iter().map(Dialog::len).sum()
    }

    pub fn label_index(&self) -> HashMap<&str, usize> {
        self.label_set
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect()
    }

    /// Label counts sorted by descending count, ties in label-set order.
    pub fn label_distribution(&self) -> Vec<LabelCount> {
        self.label_distribution_where(|_| true)
    }

    pub fn label_distribution_where(&self, keep: impl Fn(&Segment) -> bool) -> Vec<LabelCount> {
        let index = self.label_index();
        let mut counts = vec![0usize; self.label_set.len()];
        let mut total = 0usize;
        for seg in self.segments().filter(|s| keep(s)) {
            counts[index[seg.label.as_str()]] += 1;
            total += 1;
        }
        let mut rows: Vec<LabelCount> = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &count)| LabelCount {
                label: self.label_set[i].clone(),
                count,
                percent: 100.0 * count as f64 / total as f64,
            })
            .collect();
        rows.sort_by_key(|r| std::cmp::Reverse(r.count));
        rows
    }

    /// Marks the segments that are classification targets. Every segment stays
    /// in the corpus so that dialog history is unaffected.
    pub fn filter_segments(&self, filter: &SpeakerFilter) -> Result<Targets> {
        let mask: Vec<Vec<bool>> = self
            .dialogs
            .iter()
            .map(|d| {
                d.segments
                    .iter()
                    .map(|s| filter.matches(&s.speaker))
                    .collect()
            })
            .collect();
        let targets = Targets { mask };
        if targets.count() == 0 {
            return Err(Error::InvalidInput(format!(
                "speaker filter `{filter}` matches no segment"
            )));
        }
        Ok(targets)
    }
}

/// Relabels a corpus; see [`LabelMapping::apply`].
pub fn map_labels(corpus: &Corpus, mapping: &LabelMapping) -> Result<Corpus> {
    mapping.apply(corpus)
}

pub(crate) fn labels_in_order(dialogs: &[Dialog]) -> Vec<String> {
    let mut seen = HashSet::new();
    let mut labels = Vec::new();
    for seg in dialogs.iter().flat_map(|d| &d.segments) {
        if seen.insert(seg.label.as_str()) {
            labels.push(seg.label.clone());
        }
    }
    labels
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelCount {
    pub label: String,
    pub count: usize,
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub enum SpeakerFilter {
    #[default]
    All,
    Speaker(String),
}

impl SpeakerFilter {
    pub fn matches(&self, speaker: &str) -> bool {
        match self {
            SpeakerFilter::All => true,
            SpeakerFilter::Speaker(s) => s == speaker,
        }
    }
}

impl From<String> for SpeakerFilter {
    fn from(s: String) -> Self {
        if s.eq_ignore_ascii_case("all") || s.is_empty() {
            SpeakerFilter::All
        } else {
            SpeakerFilter::Speaker(s)
        }
    }
}

impl From<SpeakerFilter> for String {
    fn from(f: SpeakerFilter) -> Self {
        f.to_string()
    }
}

impl fmt::Display for SpeakerFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpeakerFilter::All => f.write_str("all"),
            SpeakerFilter::Speaker(s) => f.write_str(s),
        }
    }
}

/// Per-segment classification mask, parallel to `Corpus::dialogs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Targets {
    pub mask: Vec<Vec<bool>>,
}

impl Targets {
    pub fn all(corpus: &Corpus) -> Self {
        Targets {
            mask: corpus.dialogs.iter().map(|d| vec![true; d.len()]).collect(),
        }
    }

    pub fn count(&self) -> usize {
        self.mask.iter().flatten().filter(|&&m| m).count()
    }

    pub fn is_target(&self, dialog: usize, segment: usize) -> bool {
        self.mask[dialog][segment]
    }
}

/// Input formats understood by [`load_corpus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    Swda,
    Lego,
    Dialogbank,
    Segments,
}

impl FromStr for CorpusFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "swda" => Ok(CorpusFormat::Swda),
            "lego" => Ok(CorpusFormat::Lego),
            "dialogbank" => Ok(CorpusFormat::Dialogbank),
            "segments" => Ok(CorpusFormat::Segments),
            other => Err(Error::Config(format!("unknown corpus format `{other}`"))),
        }
    }
}

/// Reads a corpus from disk in the given format.
///
/// Switchboard input is clustered to the 44-label set and then reduced to
/// `variant`; LEGO input is relabelled with `mapping` when one is supplied.
pub fn load_corpus(
    path: &Path,
    format: CorpusFormat,
    variant: TagsetVariant,
    mapping: Option<&LabelMapping>,
) -> Result<Corpus> {
    let open = || std::fs::File::open(path).map_err(|e| Error::file(path, e));
    let name = path.display().to_string();
    let corpus = match format {
        CorpusFormat::Swda => load_switchboard(path)?,
        CorpusFormat::Lego => parse_lego(open()?, &name)?,
        CorpusFormat::Dialogbank => parse_dialogbank_tsv(std::io::BufReader::new(open()?), &name)?,
        CorpusFormat::Segments => read_segments(std::io::BufReader::new(open()?), &name)?,
    };
    let corpus = match mapping {
        Some(m) => m.apply(&corpus)?,
        None => corpus,
    };
    if corpus.variant.is_swda() && variant.is_swda() {
        apply_tagset_variant(&corpus, variant)
    } else if corpus.variant != variant {
        Err(Error::Config(format!(
            "{format:?} corpus is in tag set {} and cannot be converted to {variant}",
            corpus.variant
        )))
    } else {
        Ok(corpus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(labels: &[&str]) -> Corpus {
        let segs = labels
            .iter()
            .enumerate()
            .map(|(i, l)| Segment::new("d", if i % 2 == 0 { "A" } else { "B" }, i, "x", *l))
            .collect();
        Corpus::from_dialogs(vec![Dialog::new("d", segs).unwrap()], vec![]).unwrap()
    }

    #[test]
    fn distribution_of_small_fixture() {
        let dist = corpus(&["a", "a", "b", "c"]).label_distribution();
        let got: Vec<_> = dist
            .iter()
            .map(|r| (r.label.as_str(), r.count, r.percent))
            .collect();
        assert_eq!(got, vec![("a", 2, 50.0), ("b", 1, 25.0), ("c", 1, 25.0)]);
    }

    #[test]
    fn distribution_of_empty_corpus() {
        let c = Corpus::new(vec![], vec![], TagsetVariant::Iso, vec![]).unwrap();
        assert!(c.label_distribution().is_empty());
    }

    #[test]
    fn filter_keeps_history_but_masks_targets() {
        let c = corpus(&["a", "b", "a", "b", "a"]);
        let t = c
            .filter_segments(&SpeakerFilter::Speaker("B".into()))
            .unwrap();
        assert_eq!(t.count(), 2);
        assert_eq!(c.segment_count(), 5);
        assert_eq!(t.mask[0], vec![false, true, false, true, false]);

        let all = c.filter_segments(&SpeakerFilter::All).unwrap();
        assert_eq!(all, Targets::all(&c));

        assert!(c
            .filter_segments(&SpeakerFilter::Speaker("Wizard".into()))
            .is_err());
    }

    #[test]
    fn rejects_undeclared_label_and_duplicate_dialogs() {
        let d = Dialog::new("d", vec![Segment::new("d", "A", 0, "x", "q")]).unwrap();
        assert!(matches!(
            Corpus::new(
                vec![d.clone()],
                vec!["a".into()],
                TagsetVariant::Iso,
                vec![]
            ),
            Err(Error::UnknownLabel { .. })
        ));
        assert!(Corpus::new(
            vec![d.clone(), d],
            vec!["q".into()],
            TagsetVariant::Iso,
            vec![]
        )
        .is_err());
        assert!(matches!(
            Dialog::new("e", vec![]),
            Err(Error::EmptyDialog(_))
        ));
    }
}
