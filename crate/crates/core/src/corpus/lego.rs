//! LEGO (Let's Go) exports: a delimited table with header
//! `call_id,turn_index,side,transcript,da_label` and an optional `sub_index`
//! column for turns split into several utterances. Comma or tab separated.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Read;

use super::{labels_in_order, Corpus, Dialog, Segment, TagsetVariant};
use crate::error::{Error, Result};

const REQUIRED: [&str; 5] = ["call_id", "turn_index", "side", "transcript", "da_label"];

struct Row {
    turn: u64,
    sub: u64,
    segment: Segment,
}

/// Parses a LEGO table. Calls become dialogs in order of first appearance and
/// their rows are ordered by `(turn_index, sub_index)`. Labels are kept as
/// written; relabel with a [`super::LabelMapping`].
pub fn parse_lego(mut reader: impl Read, source_name: &str) -> Result<Corpus> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    let header = text.lines().next().unwrap_or("");
    let delimiter = if header.contains('\t') { b'\t' } else { b',' };

    let mut csv = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(true)
        .from_reader(text.as_bytes());
    let headers = csv.headers()?.clone();
    let column = |name: &str| headers.iter().position(|h| h.trim() == name);
    let mut cols = [0usize; 5];
    for (slot, name) in cols.iter_mut().zip(REQUIRED) {
        *slot = column(name).ok_or_else(|| {
            Error::parse(source_name, 1, format!("header is missing column `{name}`"))
        })?;
    }
    let [call_col, turn_col, side_col, text_col, label_col] = cols;
    let sub_col = column("sub_index");

    let mut calls: Vec<String> = Vec::new();
    let mut rows: HashMap<String, Vec<Row>> = HashMap::new();
    let mut keys = HashSet::new();
    let mut next_sub: HashMap<(String, u64), u64> = HashMap::new();

    for (i, record) in csv.records().enumerate() {
        let line = i + 2;
        let record = record?;
        let field = |c: usize| record.get(c).map(str::trim).unwrap_or("");
        let call = field(call_col).to_string();
        let turn: u64 = field(turn_col)
            .parse()
            .map_err(|_| Error::parse(source_name, line, "turn_index is not an integer"))?;
        let speaker = match field(side_col) {
            s if s.eq_ignore_ascii_case("system") => "System",
            s if s.eq_ignore_ascii_case("user") => "User",
            other => {
                return Err(Error::parse(
                    source_name,
                    line,
                    format!("unknown side `{other}` (expected System or User)"),
                ))
            }
        };
        let sub = match sub_col {
            Some(c) => field(c)
                .parse()
                .map_err(|_| Error::parse(source_name, line, "sub_index is not an integer"))?,
            None => {
                let n = next_sub.entry((call.clone(), turn)).or_insert(0);
                *n += 1;
                *n - 1
            }
        };
        if !keys.insert((call.clone(), turn, sub)) {
            return Err(Error::parse(
                source_name,
                line,
                format!("duplicate row for call `{call}`, turn {turn}, sub-index {sub}"),
            ));
        }
        if call.is_empty() {
            return Err(Error::parse(source_name, line, "empty call_id"));
        }
        let label = field(label_col);
        if label.is_empty() {
            return Err(Error::parse(source_name, line, "empty da_label"));
        }
        let segment = Segment {
            dialog_id: call.clone(),
            speaker: speaker.to_string(),
            index: 0,
            raw_text: record.get(text_col).unwrap_or("").to_string(),
            label: label.to_string(),
            aux_labels: BTreeMap::new(),
        };
        if !rows.contains_key(&call) {
            calls.push(call.clone());
        }
        rows.entry(call)
            .or_default()
            .push(Row { turn, sub, segment });
    }

    let mut dialogs = Vec::with_capacity(calls.len());
    for call in calls {
        let mut call_rows = rows.remove(&call).unwrap_or_default();
        call_rows.sort_by_key(|r| (r.turn, r.sub));
        dialogs.push(Dialog::new(
            call,
            call_rows.into_iter().map(|r| r.segment).collect(),
        )?);
    }
    let label_set = labels_in_order(&dialogs);
    Corpus::new(dialogs, label_set, TagsetVariant::Iso, vec![])
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = "call_id,turn_index,side,transcript,da_label\n\
        c1,0,System,Welcome to the CMU Let's Go bus information system.,Inform Welcome\n\
        c1,1,User,PENN AT BUTLER,Place Information\n\
        c1,0,System,What can I do for you?,Ask Next Action\n";

    #[test]
    fn three_rows_one_dialog() {
        let c = parse_lego(FIXTURE.as_bytes(), "f").unwrap();
        assert_eq!(c.dialogs.len(), 1);
        assert_eq!(c.segment_count(), 3);
        let speakers: Vec<_> = c.segments().map(|s| s.speaker.as_str()).collect();
        assert_eq!(speakers, ["System", "System", "User"]);
        assert_eq!(c.dialogs[0].segments[2].raw_text, "PENN AT BUTLER");
        assert_eq!(c.dialogs[0].segments[1].raw_text, "What can I do for you?");
    }

    #[test]
    fn tab_separated() {
        let tsv = FIXTURE
            .replace(',', "\t")
            .replace("Welcome to the CMU Let's Go bus information system.", "Hi");
        let c = parse_lego(tsv.as_bytes(), "f").unwrap();
        assert_eq!(c.segment_count(), 3);
    }

    #[test]
    fn unknown_side_is_rejected() {
        let bad = "call_id,turn_index,side,transcript,da_label\nc1,0,Wizard,hello,Inform\n";
        match parse_lego(bad.as_bytes(), "f") {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 2);
                assert!(message.contains("Wizard"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_explicit_sub_index() {
        let bad = "call_id,turn_index,sub_index,side,transcript,da_label\n\
                   c1,0,0,System,a,X\nc1,0,0,System,b,Y\n";
        assert!(parse_lego(bad.as_bytes(), "f").is_err());
    }

    #[test]
    fn missing_column() {
        let bad = "call_id,turn_index,side,transcript\nc1,0,User,x\n";
        assert!(parse_lego(bad.as_bytes(), "f").is_err());
    }
}
