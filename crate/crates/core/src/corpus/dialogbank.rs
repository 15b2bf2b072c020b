//! DialogBank data in a simplified tab-separated layout:
//!
//! ```text
//! dialog_id  seg_id  speaker  text  task  <dim1>  <dim2> ...
//! ```
//!
//! One row per functional segment. `task` holds the Task-dimension function;
//! the remaining columns hold functions in other dimensions. Empty cell means
//! no function in that dimension.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::BufRead;

use super::{labels_in_order, Corpus, Dialog, Segment, TagsetVariant};
use crate::error::{Error, Result};

/// Label given to segments that only carry functions in other dimensions.
pub const NO_TASK_LABEL: &str = "<none>";

const FIXED: [&str; 5] = ["dialog_id", "seg_id", "speaker", "text", "task"];

pub fn parse_dialogbank_tsv(reader: impl BufRead, source_name: &str) -> Result<Corpus> {
    let mut lines = reader.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, line)) => {
                let line = line?;
                if !line.trim().is_empty() && !line.starts_with('#') {
                    break line;
                }
            }
            None => return Corpus::new(vec![], vec![], TagsetVariant::Iso, vec![]),
        }
    };
    let columns: Vec<&str> = header.split('\t').map(str::trim).collect();
    if columns.len() < FIXED.len() || columns[..FIXED.len()] != FIXED {
        return Err(Error::parse(
            source_name,
            1,
            format!("header must start with `{}`", FIXED.join("\\t")),
        ));
    }
    let dims: Vec<String> = columns[FIXED.len()..]
        .iter()
        .map(|s| s.to_string())
        .collect();

    let mut order: Vec<String> = Vec::new();
    let mut segments: HashMap<String, Vec<Segment>> = HashMap::new();
    let mut seg_ids = HashSet::new();

    for (i, line) in lines {
        let line = line?;
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split('\t').collect();
        if cells.len() < FIXED.len() || cells.len() > columns.len() {
            return Err(Error::parse(
                source_name,
                lineno,
                format!("expected {} columns, found {}", columns.len(), cells.len()),
            ));
        }
        let dialog_id = cells[0].trim().to_string();
        let seg_id = cells[1].trim();
        if dialog_id.is_empty() {
            return Err(Error::parse(source_name, lineno, "empty dialog_id"));
        }
        if !seg_ids.insert((dialog_id.clone(), seg_id.to_string())) {
            return Err(Error::parse(
                source_name,
                lineno,
                format!("duplicate segment `{seg_id}` in dialog `{dialog_id}`"),
            ));
        }
        let aux_labels: BTreeMap<String, String> = dims
            .iter()
            .zip(cells.iter().skip(FIXED.len()))
            .filter(|(_, v)| !v.trim().is_empty())
            .map(|(d, v)| (d.clone(), v.trim().to_string()))
            .collect();
        let task = cells[4].trim();
        let label = match (task.is_empty(), aux_labels.is_empty()) {
            (false, _) => task.to_string(),
            (true, false) => NO_TASK_LABEL.to_string(),
            (true, true) => {
                return Err(Error::parse(
                    source_name,
                    lineno,
                    "segment has no communicative function in any dimension",
                ))
            }
        };
        if !segments.contains_key(&dialog_id) {
            order.push(dialog_id.clone());
        }
        segments
            .entry(dialog_id.clone())
            .or_default()
            .push(Segment {
                dialog_id,
                speaker: cells[2].trim().to_string(),
                index: 0,
                raw_text: cells[3].to_string(),
                label,
                aux_labels,
            });
    }

    let dialogs = order
        .into_iter()
        .map(|id| {
            let segs = segments.remove(&id).unwrap_or_default();
            Dialog::new(id, segs)
        })
        .collect::<Result<Vec<_>>>()?;
    let label_set = labels_in_order(&dialogs);
    Corpus::new(dialogs, label_set, TagsetVariant::Iso, dims)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = "dialog_id\tseg_id\tspeaker\ttext\ttask\tautoFeedback\n\
        d1\t1\tP1\tWhere is the mill?\tsetQuestion\t\n\
        d1\t2\tP2\tThe mill, right.\tinform\tautoPositive\n\
        d1\t3\tP1\tokay\t\tautoPositive\n";

    #[test]
    fn task_and_aux_dimensions() {
        let c = parse_dialogbank_tsv(FIXTURE.as_bytes(), "f").unwrap();
        assert_eq!(c.segment_count(), 3);
        assert_eq!(c.aux_dimensions, ["autoFeedback"]);
        let segs = &c.dialogs[0].segments;
        assert!(segs[0].aux_labels.is_empty());
        assert_eq!(segs[1].label, "inform");
        assert_eq!(segs[1].aux_labels["autoFeedback"], "autoPositive");
        assert_eq!(segs[2].label, NO_TASK_LABEL);
        assert_eq!(c.label_set, ["setQuestion", "inform", NO_TASK_LABEL]);
    }

    #[test]
    fn row_without_any_function_is_an_error() {
        let bad = format!("{FIXTURE}d1\t4\tP2\tuh\t\t\n");
        match parse_dialogbank_tsv(bad.as_bytes(), "f") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_header() {
        assert!(parse_dialogbank_tsv("a\tb\n".as_bytes(), "f").is_err());
    }
}
