//! Uniform segment TSV written by `dactx parse` and accepted back as the
//! `segments` corpus format.
//!
//! ```text
//! #dactx-segments v1
//! #variant swda42
//! #labels sd b ...
//! dialog_id index speaker label text <aux dim>...
//! ```
//!
//! Columns are tab-separated. Fields escape `\\`, tab, newline and carriage
//! return with backslashes.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use super::{Corpus, Dialog, Segment, TagsetVariant};
use crate::error::{Error, Result};

const MAGIC: &str = "#dactx-segments v1";
const COLUMNS: [&str; 5] = ["dialog_id", "index", "speaker", "label", "text"];

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> std::result::Result<String, String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            other => return Err(format!("bad escape `\\{}`", other.unwrap_or(' '))),
        }
    }
    Ok(out)
}

fn join(fields: impl IntoIterator<Item = impl AsRef<str>>) -> String {
    fields
        .into_iter()
        .map(|f| escape(f.as_ref()))
        .collect::<Vec<_>>()
        .join("\t")
}

pub fn write_segments(corpus: &Corpus, mut out: impl Write) -> Result<()> {
    writeln!(out, "{MAGIC}")?;
    writeln!(out, "#variant\t{}", corpus.variant)?;
    writeln!(out, "#labels\t{}", join(&corpus.label_set))?;
    let header = COLUMNS
        .iter()
        .map(|c| c.to_string())
        .chain(corpus.aux_dimensions.iter().cloned());
    writeln!(out, "{}", join(header))?;
    for seg in corpus.segments() {
        let fixed = [
            seg.dialog_id.clone(),
            seg.index.to_string(),
            seg.speaker.clone(),
            seg.label.clone(),
            seg.raw_text.clone(),
        ];
        let aux = corpus
            .aux_dimensions
            .iter()
            .map(|d| seg.aux_labels.get(d).cloned().unwrap_or_default());
        writeln!(out, "{}", join(fixed.into_iter().chain(aux)))?;
    }
    Ok(())
}

pub fn read_segments(reader: impl BufRead, source_name: &str) -> Result<Corpus> {
    let err = |line: usize, m: String| Error::parse(source_name, line, m);
    let split = |line: usize, s: &str| -> Result<Vec<String>> {
        s.split('\t')
            .map(|f| unescape(f).map_err(|m| err(line, m)))
            .collect()
    };

    let mut variant = None;
    let mut labels = None;
    let mut dims: Option<Vec<String>> = None;
    let mut dialogs: Vec<Dialog> = Vec::new();
    let mut current: Vec<Segment> = Vec::new();

    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let n = i + 1;
        if n == 1 {
            if line != MAGIC {
                return Err(err(n, format!("expected `{MAGIC}`")));
            }
            continue;
        }
        if dims.is_none() {
            if let Some(v) = line.strip_prefix("#variant\t") {
                variant = Some(
                    v.parse::<TagsetVariant>()
                        .map_err(|e| err(n, e.to_string()))?,
                );
            } else if let Some(l) = line.strip_prefix("#labels\t") {
                labels = Some(split(n, l)?);
            } else if line == "#labels" {
                labels = Some(vec![]);
            } else if line.starts_with('#') {
                continue;
            } else {
                let cols = split(n, &line)?;
                if cols.len() < COLUMNS.len() || cols[..COLUMNS.len()] != COLUMNS {
                    return Err(err(n, "bad column header".into()));
                }
                dims = Some(cols[COLUMNS.len()..].to_vec());
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let aux_dims = dims.as_ref().expect("header seen");
        let cols = split(n, &line)?;
        if cols.len() != COLUMNS.len() + aux_dims.len() {
            return Err(err(
                n,
                format!("expected {} fields", COLUMNS.len() + aux_dims.len()),
            ));
        }
        let mut cols = cols.into_iter();
        let mut next = || cols.next().expect("length checked");
        let dialog_id = next();
        let index: usize = next()
            .parse()
            .map_err(|_| err(n, "bad segment index".into()))?;
        let speaker = next();
        let label = next();
        let raw_text = next();
        let aux_labels: BTreeMap<String, String> = aux_dims
            .iter()
            .map(|d| (d.clone(), next()))
            .filter(|(_, v)| !v.is_empty())
            .collect();

        if current.first().is_some_and(|s| s.dialog_id != dialog_id) {
            let id = current[0].dialog_id.clone();
            dialogs.push(Dialog::new(id, std::mem::take(&mut current))?);
        }
        if index != current.len() {
            return Err(err(n, format!("segment index {index} out of sequence")));
        }
        current.push(Segment {
            dialog_id,
            speaker,
            index,
            raw_text,
            label,
            aux_labels,
        });
    }
    if let Some(first) = current.first() {
        let id = first.dialog_id.clone();
        dialogs.push(Dialog::new(id, current)?);
    }
    let variant = variant.ok_or_else(|| err(1, "missing #variant line".into()))?;
    let labels = labels.ok_or_else(|| err(1, "missing #labels line".into()))?;
    Corpus::new(dialogs, labels, variant, dims.unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn corpus_strategy() -> impl Strategy<Value = Corpus> {
        let text = "[a-zA-Z {}\\[\\]+/\\-.,?!<>\\\\\t\n]{0,20}";
        let seg = (text, 0usize..3, prop::option::of("[a-z]{1,5}"));
        prop::collection::vec(prop::collection::vec(seg, 1..5), 0..4).prop_map(|dialogs| {
            let labels = ["sd", "qy", "b"];
            let dialogs = dialogs
                .into_iter()
                .enumerate()
                .map(|(di, segs)| {
                    let id = format!("dlg {di}");
                    let segs = segs
                        .into_iter()
                        .enumerate()
                        .map(|(i, (text, l, aux))| {
                            let mut s = Segment::new(&id, ["A", "B"][i % 2], i, text, labels[l]);
                            if let Some(a) = aux {
                                s.aux_labels.insert("feedback".into(), a);
                            }
                            s
                        })
                        .collect();
                    Dialog::new(id, segs).unwrap()
                })
                .collect();
            Corpus::new(
                dialogs,
                labels.iter().map(|s| s.to_string()).collect(),
                TagsetVariant::Iso,
                vec!["feedback".into()],
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn round_trip(c in corpus_strategy()) {
            let mut buf = Vec::new();
            write_segments(&c, &mut buf).unwrap();
            let back = read_segments(buf.as_slice(), "mem").unwrap();
            prop_assert_eq!(back, c);
        }
    }

    #[test]
    fn rejects_missing_magic() {
        assert!(read_segments("dialog_id\tindex\n".as_bytes(), "x").is_err());
    }
}
