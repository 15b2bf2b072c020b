//! Switchboard Dialog Act Corpus transcripts and SWBD-DAMSL tag-set variants.
//!
//! Utterance lines look like
//!
//! ```text
//! qy          A.1 utt1:  Does it say something? /
//! ```
//!
//! i.e. `<label> <speaker>.<turn> utt<k>: <text>`. Anything up to a line made
//! only of `=` characters is file header; blank lines and `#` comments are ignored.

use std::io::BufRead;
use std::path::Path;

use walkdir::WalkDir;

use super::{Corpus, Dialog, Segment, TagsetVariant};
use crate::error::{Error, Result};

/// Continuation marker: the segment continues the speaker's previous segment.
pub const SEGMENT_LABEL: &str = "+";
pub const ABANDONED_LABEL: &str = "%-";
/// Uninterpretable, and the merged disruption class in the 42/41-label sets.
pub const UNINTERPRETABLE_LABEL: &str = "%";
pub const STATEMENT_NON_OPINION: &str = "sd";
pub const STATEMENT_OPINION: &str = "sv";

/// The 44 cluster codes with display names, most frequent first.
pub const SWDA44_LABELS: [(&str, &str); 44] = [
    ("sd", "Statement-non-opinion"),
    ("b", "Acknowledgement"),
    ("sv", "Statement-opinion"),
    ("aa", "Agreement"),
    ("%-", "Abandoned"),
    ("ba", "Appreciation"),
    ("qy", "Yes-No-Question"),
    ("x", "Non-verbal"),
    ("ny", "Yes Answer"),
    ("fc", "Conventional Closing"),
    ("%", "Uninterpretable"),
    ("qw", "Wh-Question"),
    ("nn", "No Answer"),
    ("bk", "Response Acknowledge"),
    ("h", "Hedge"),
    ("qy^d", "Decl-Yes-No-Question"),
    ("fo_o_fw_\"_by_bc", "Other"),
    ("bh", "Backchannel-Question"),
    ("^q", "Quotation"),
    ("bf", "Summarize"),
    ("na", "Aff Non-yes Answer"),
    ("ad", "Action Directive"),
    ("^2", "Collab Completion"),
    ("b^m", "Repeat-Phrase"),
    ("qo", "Open-Question"),
    ("qh", "Rhetorical-Question"),
    ("^h", "Hold"),
    ("ar", "Reject"),
    ("ng", "Neg Non-no Answer"),
    ("br", "Non-understanding"),
    ("no", "Other Answer"),
    ("fp", "Conventional Opening"),
    ("qrr", "Or-Clause"),
    ("arp_nd", "Dispreferred Answers"),
    ("t3", "3rd-party-talk"),
    ("oo_co_cc", "Offers / Options"),
    ("t1", "Self-talk"),
    ("bd", "Downplayer"),
    ("aap_am", "Maybe"),
    ("^g", "Tag-Question"),
    ("qw^d", "Decl-Wh-Question"),
    ("fa", "Apology"),
    ("ft", "Thanking"),
    (SEGMENT_LABEL, "Segment"),
];

/// Display name for a cluster code under the given variant.
pub fn display_name(code: &str, variant: TagsetVariant) -> Option<&'static str> {
    match (code, variant) {
        (UNINTERPRETABLE_LABEL, TagsetVariant::Swda42 | TagsetVariant::Swda41) => {
            Some("Abandoned/Uninterpretable")
        }
        (STATEMENT_NON_OPINION, TagsetVariant::Swda41) => Some("Statement"),
        _ => SWDA44_LABELS
            .iter()
            .find(|(c, _)| *c == code)
            .map(|(_, n)| *n),
    }
}

/// Ordered label set of a SWBD-DAMSL variant.
pub fn variant_labels(variant: TagsetVariant) -> Vec<String> {
    let drop: &[&str] = match variant {
        TagsetVariant::Swda44 | TagsetVariant::Iso => &[],
        TagsetVariant::Swda43 => &[SEGMENT_LABEL],
        TagsetVariant::Swda42 => &[SEGMENT_LABEL, ABANDONED_LABEL],
        TagsetVariant::Swda41 => &[SEGMENT_LABEL, ABANDONED_LABEL, STATEMENT_OPINION],
    };
    SWDA44_LABELS
        .iter()
        .map(|(c, _)| *c)
        .filter(|c| !drop.contains(c))
        .map(str::to_string)
        .collect()
}

/// Reduces a full SWBD-DAMSL tag (e.g. `sd^e`, `qy^d`, `b@`) to its 44-set
/// cluster code. Multi-tag annotations keep the first tag.
pub fn cluster_damsl_tag(raw: &str) -> String {
    let first = raw
        .split([',', ';'])
        .map(str::trim)
        .find(|t| !t.is_empty())
        .unwrap_or("");
    match first {
        "qy^d" | "qw^d" | "b^m" => return first.to_string(),
        "nn^e" => return "ng".to_string(),
        "ny^e" => return "na".to_string(),
        _ => {}
    }
    // Drop any `^suffix` that follows at least one character.
    let mut tag: String = match first.char_indices().skip(1).find(|&(_, c)| c == '^') {
        Some((i, _)) => first[..i].to_string(),
        None => first.to_string(),
    };
    tag.retain(|c| !matches!(c, '(' | ')' | '@' | '*'));
    match tag.as_str() {
        "qr" | "qy" => "qy".into(),
        "fe" | "ba" => "ba".into(),
        "oo" | "co" | "cc" => "oo_co_cc".into(),
        "fx" | "sv" => "sv".into(),
        "aap" | "am" => "aap_am".into(),
        "arp" | "nd" => "arp_nd".into(),
        "fo" | "o" | "fw" | "\"" | "by" | "bc" => "fo_o_fw_\"_by_bc".into(),
        _ => tag,
    }
}

/// Parses one transcript into a dialog. Labels are kept exactly as written.
pub fn parse_switchboard(reader: impl BufRead, dialog_id: &str) -> Result<Dialog> {
    let lines: Vec<String> = reader.lines().collect::<std::io::Result<_>>()?;
    let body_start = lines
        .iter()
        .position(|l| {
            let t = l.trim();
            t.len() >= 3 && t.chars().all(|c| c == '=')
        })
        .map_or(0, |i| i + 1);

    let mut segments = Vec::new();
    for (lineno, line) in lines.iter().enumerate().skip(body_start) {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (label, speaker, text) =
            parse_utterance_line(trimmed).map_err(|m| Error::parse(dialog_id, lineno + 1, m))?;
        segments.push(Segment::new(
            dialog_id,
            speaker,
            segments.len(),
            text,
            label,
        ));
    }
    Dialog::new(dialog_id, segments)
}

fn parse_utterance_line(line: &str) -> std::result::Result<(&str, &str, &str), String> {
    let (label, rest) = split_field(line).ok_or("missing label")?;
    let (speaker_turn, rest) = split_field(rest).ok_or("missing speaker.turn field")?;
    let (speaker, turn) = speaker_turn
        .split_once('.')
        .ok_or_else(|| format!("expected `<speaker>.<turn>`, found `{speaker_turn}`"))?;
    if speaker.is_empty() || turn.is_empty() || !turn.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!(
            "expected `<speaker>.<turn>`, found `{speaker_turn}`"
        ));
    }
    let rest = rest.trim_start();
    let after_utt = rest
        .strip_prefix("utt")
        .ok_or_else(|| "missing `utt<k>:` field".to_string())?;
    let digits = after_utt.bytes().take_while(u8::is_ascii_digit).count();
    if digits == 0 || !after_utt[digits..].starts_with(':') {
        return Err("malformed `utt<k>:` field".into());
    }
    let text = after_utt[digits + 1..].trim();
    Ok((label, speaker, text))
}

fn split_field(s: &str) -> Option<(&str, &str)> {
    let s = s.trim_start();
    if s.is_empty() {
        return None;
    }
    match s.find(char::is_whitespace) {
        Some(i) => Some((&s[..i], &s[i..])),
        None => Some((s, "")),
    }
}

/// Loads a transcript file, or every `*.utt` file below a directory (sorted by
/// path), clustering tags to the 44-label set.
pub fn load_switchboard(path: &Path) -> Result<Corpus> {
    let mut files = Vec::new();
    if path.is_dir() {
        for entry in WalkDir::new(path).sort_by_file_name() {
            let entry = entry.map_err(|e| Error::InvalidInput(e.to_string()))?;
            if entry.file_type().is_file() && entry.path().extension().is_some_and(|e| e == "utt") {
                files.push(entry.into_path());
            }
        }
        if files.is_empty() {
            return Err(Error::InvalidInput(format!(
                "no .utt transcripts found under {}",
                path.display()
            )));
        }
    } else {
        files.push(path.to_path_buf());
    }

    let mut dialogs = Vec::with_capacity(files.len());
    for file in files {
        let id = file
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| file.display().to_string());
        let reader = std::fs::File::open(&file).map_err(|e| Error::file(&file, e))?;
        let mut dialog = parse_switchboard(std::io::BufReader::new(reader), &id)?;
        for seg in &mut dialog.segments {
            seg.label = cluster_damsl_tag(&seg.label);
        }
        dialogs.push(dialog);
    }
    Corpus::new(
        dialogs,
        variant_labels(TagsetVariant::Swda44),
        TagsetVariant::Swda44,
        vec![],
    )
}

fn granularity(v: TagsetVariant) -> u8 {
    match v {
        TagsetVariant::Swda44 => 44,
        TagsetVariant::Swda43 => 43,
        TagsetVariant::Swda42 => 42,
        TagsetVariant::Swda41 => 41,
        TagsetVariant::Iso => 0,
    }
}

/// Rewrites a SWBD-DAMSL corpus into a coarser variant.
///
/// * 43: `+` segments are appended to the nearest earlier segment by the same
///   speaker (across other speakers' segments) and removed. A `+` with no such
///   predecessor is relabelled Uninterpretable.
/// * 42: additionally Abandoned merges into Uninterpretable.
/// * 41: additionally Statement-opinion merges into Statement-non-opinion.
///
/// Converting to the corpus's own variant returns it unchanged.
pub fn apply_tagset_variant(corpus: &Corpus, target: TagsetVariant) -> Result<Corpus> {
    if !corpus.variant.is_swda() || !target.is_swda() {
        return Err(Error::Config(format!(
            "cannot convert tag set {} to {target}",
            corpus.variant
        )));
    }
    if granularity(target) > granularity(corpus.variant) {
        return Err(Error::Config(format!(
            "cannot expand tag set {} into {target}",
            corpus.variant
        )));
    }
    let valid = variant_labels(corpus.variant);
    for seg in corpus.segments() {
        if !valid.contains(&seg.label) {
            return Err(Error::UnknownLabel {
                label: seg.label.clone(),
                variant: corpus.variant.to_string(),
            });
        }
    }
    if target == corpus.variant {
        return Ok(corpus.clone());
    }

    let merge_plus = granularity(target) <= 43;
    let relabel = |label: &str| -> String {
        match label {
            ABANDONED_LABEL if granularity(target) <= 42 => UNINTERPRETABLE_LABEL.into(),
            STATEMENT_OPINION if granularity(target) <= 41 => STATEMENT_NON_OPINION.into(),
            other => other.into(),
        }
    };

    let mut dialogs = Vec::with_capacity(corpus.dialogs.len());
    for dialog in &corpus.dialogs {
        let mut out: Vec<Segment> = Vec::with_capacity(dialog.len());
        for seg in &dialog.segments {
            if merge_plus && seg.label == SEGMENT_LABEL {
                if let Some(host) = out.iter_mut().rev().find(|s| s.speaker == seg.speaker) {
                    if !seg.raw_text.is_empty() {
                        if !host.raw_text.is_empty() {
                            host.raw_text.push(' ');
                        }
                        host.raw_text.push_str(&seg.raw_text);
                    }
                } else {
                    let mut orphan = seg.clone();
                    orphan.label = UNINTERPRETABLE_LABEL.into();
                    out.push(orphan);
                }
                continue;
            }
            let mut s = seg.clone();
            s.label = relabel(&s.label);
            out.push(s);
        }
        dialogs.push(Dialog::new(dialog.id.clone(), out)?);
    }
    Corpus::new(
        dialogs,
        variant_labels(target),
        target,
        corpus.aux_dimensions.clone(),
    )
}
