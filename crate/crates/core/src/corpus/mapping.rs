//! Label mappings between tag sets, read from `source -> target` text files.

use std::collections::{BTreeMap, BTreeSet};

use super::{labels_in_order, Corpus, Dialog, TagsetVariant};
use crate::error::{Error, Result};

/// Bundled LEGO to ISO 24617-2 Task-function mapping.
pub const DEFAULT_LEGO_MAPPING: &str = include_str!("../../data/lego_default.map");

const DROP: &str = "DROP";

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelMapping {
    entries: BTreeMap<String, String>,
    drop_set: BTreeSet<String>,
}

impl LabelMapping {
    pub fn new(entries: BTreeMap<String, String>, drop_set: BTreeSet<String>) -> Result<Self> {
        if let Some(both) = entries.keys().find(|k| drop_set.contains(*k)) {
            return Err(Error::InvalidInput(format!(
                "label `{both}` is both mapped and dropped"
            )));
        }
        Ok(LabelMapping { entries, drop_set })
    }

    /// Identity mapping over the given labels.
    pub fn identity<'a>(labels: impl IntoIterator<Item = &'a str>) -> Self {
        LabelMapping {
            entries: labels
                .into_iter()
                .map(|l| (l.to_string(), l.to_string()))
                .collect(),
            drop_set: BTreeSet::new(),
        }
    }

    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        let mut drop_set = BTreeSet::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (src, dst) = line
                .split_once("->")
                .ok_or_else(|| Error::parse(source_name, i + 1, "expected `source -> target`"))?;
            let (src, dst) = (src.trim(), dst.trim());
            if src.is_empty() || dst.is_empty() {
                return Err(Error::parse(source_name, i + 1, "empty source or target"));
            }
            if entries.contains_key(src) || drop_set.contains(src) {
                return Err(Error::parse(
                    source_name,
                    i + 1,
                    format!("`{src}` is mapped more than once"),
                ));
            }
            if dst == DROP {
                drop_set.insert(src.to_string());
            } else {
                entries.insert(src.to_string(), dst.to_string());
            }
        }
        LabelMapping::new(entries, drop_set)
    }

    pub fn default_lego() -> Self {
        LabelMapping::parse(DEFAULT_LEGO_MAPPING, "lego_default.map")
            .expect("bundled mapping is well formed")
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.entries
    }

    pub fn drop_set(&self) -> &BTreeSet<String> {
        &self.drop_set
    }

    pub fn targets(&self) -> BTreeSet<&str> {
        self.entries.values().map(String::as_str).collect()
    }

    /// Rewrites every label, removing dropped segments (and dialogs left empty).
    /// The new label set is the targets actually present, in order of first use.
    pub fn apply(&self, corpus: &Corpus) -> Result<Corpus> {
        let unmapped: BTreeSet<&str> = corpus
            .segments()
            .map(|s| s.label.as_str())
            .filter(|l| !self.entries.contains_key(*l) && !self.drop_set.contains(*l))
            .collect();
        if !unmapped.is_empty() {
            return Err(Error::UnmappedLabels(
                unmapped.into_iter().map(str::to_string).collect(),
            ));
        }

        let mut dialogs = Vec::with_capacity(corpus.dialogs.len());
        for dialog in &corpus.dialogs {
            let segments: Vec<_> = dialog
                .segments
                .iter()
                .filter_map(|s| {
                    self.entries.get(&s.label).map(|target| {
                        let mut s = s.clone();
                        s.label.clone_from(target);
                        s
                    })
                })
                .collect();
            if !segments.is_empty() {
                dialogs.push(Dialog::new(dialog.id.clone(), segments)?);
            }
        }
        let label_set = labels_in_order(&dialogs);
        Corpus::new(
            dialogs,
            label_set,
            TagsetVariant::Iso,
            corpus.aux_dimensions.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Segment;

    fn fixture() -> Corpus {
        let labels = ["a", "b", "x", "a", "c", "x", "b", "a", "c", "b"];
        let segs = labels
            .iter()
            .enumerate()
            .map(|(i, l)| Segment::new("d", "A", i, format!("t{i}"), *l))
            .collect();
        Corpus::from_dialogs(vec![Dialog::new("d", segs).unwrap()], vec![]).unwrap()
    }

    #[test]
    fn identity_leaves_corpus_unchanged() {
        let c = fixture();
        let m = LabelMapping::identity(c.label_set.iter().map(String::as_str));
        assert_eq!(m.apply(&c).unwrap(), c);
    }

    #[test]
    fn dropping_one_label() {
        let m = LabelMapping::parse("a -> A\nb -> B\nc -> C\nx -> DROP\n", "m").unwrap();
        let out = m.apply(&fixture()).unwrap();
        assert_eq!(out.segment_count(), 8);
        assert_eq!(out.label_set, ["A", "B", "C"]);
        let texts: Vec<_> = out.segments().map(|s| s.raw_text.as_str()).collect();
        assert_eq!(texts, ["t0", "t1", "t3", "t4", "t6", "t7", "t8", "t9"]);
        assert!(out.segments().enumerate().all(|(i, s)| s.index == i));
    }

    #[test]
    fn unmapped_labels_are_listed() {
        let m = LabelMapping::parse("a -> A\n", "m").unwrap();
        match m.apply(&fixture()) {
            Err(Error::UnmappedLabels(l)) => assert_eq!(l, ["b", "c", "x"]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_errors() {
        assert!(LabelMapping::parse("a => b", "m").is_err());
        assert!(LabelMapping::parse("a -> b\na -> DROP", "m").is_err());
        assert!(LabelMapping::parse(" -> b", "m").is_err());
    }

    #[test]
    fn default_mapping_targets_the_ten_task_labels() {
        let m = LabelMapping::default_lego();
        let want: BTreeSet<&str> = [
            "Check Question",
            "Set Question",
            "Instruct",
            "Answer",
            "Inform",
            "Confirm",
            "Disconfirm",
            "Promise",
            "Request",
            "Suggest",
        ]
        .into_iter()
        .collect();
        assert_eq!(m.targets(), want);
    }
}
