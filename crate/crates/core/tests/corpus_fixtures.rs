mod common;

use dactx::corpus::{
    apply_tagset_variant, load_corpus, load_switchboard, Corpus, CorpusFormat, LabelMapping,
    TagsetVariant,
};
use dactx::features::{normalize, MarkupMode};

fn labels(c: &Corpus) -> Vec<&str> {
    c.segments().map(|s| s.label.as_str()).collect()
}

#[test]
fn excerpt_speakers() {
    let c = load_switchboard(&common::fixture("excerpt.utt")).unwrap();
    assert_eq!(c.segment_count(), 12);
    let speakers: String = c.segments().map(|s| s.speaker.as_str()).collect();
    assert_eq!(speakers, "AABABABBBBBA");
    assert_eq!(c.dialogs[0].id, "excerpt");
    assert_eq!(
        c.dialogs[0].segments[3].raw_text,
        "What kind of experience [ do you, + do you ] have, then with child care?"
    );
}

#[test]
fn excerpt_variants() {
    let c44 = load_switchboard(&common::fixture("excerpt.utt")).unwrap();
    // Three continuation segments, each with an earlier segment by its speaker.
    let c43 = apply_tagset_variant(&c44, TagsetVariant::Swda43).unwrap();
    assert_eq!(
        labels(&c43),
        ["b", "qw", "sd", "qy", "sv", "ad", "h", "%-", "b"]
    );
    assert_eq!(
        c43.dialogs[0].segments[1].raw_text,
        "{D So, } What kind of experience [ do you, + do you ] have, then with child care?"
    );
    assert_eq!(
        c43.dialogs[0].segments[6].raw_text,
        "I don't know, / hold it down a little longer, /"
    );
    let c42 = apply_tagset_variant(&c44, TagsetVariant::Swda42).unwrap();
    assert_eq!(
        labels(&c42),
        ["b", "qw", "sd", "qy", "sv", "ad", "h", "%", "b"]
    );
    let c41 = apply_tagset_variant(&c44, TagsetVariant::Swda41).unwrap();
    assert_eq!(
        labels(&c41),
        ["b", "qw", "sd", "qy", "sd", "ad", "h", "%", "b"]
    );
    assert_eq!(c43.label_set.len(), 43);
    assert_eq!(c42.label_set.len(), 42);
    assert_eq!(c41.label_set.len(), 41);
    assert_eq!(
        apply_tagset_variant(&c42, TagsetVariant::Swda42).unwrap(),
        c42
    );
    assert!(apply_tagset_variant(&c42, TagsetVariant::Swda44).is_err());
}

#[test]
fn orphan_continuation() {
    let c44 = load_switchboard(&common::fixture("orphan.utt")).unwrap();
    assert_eq!(c44.segment_count(), 4);
    let c43 = apply_tagset_variant(&c44, TagsetVariant::Swda43).unwrap();
    assert_eq!(labels(&c43), ["%", "sd", "sv"]);
    let c41 = apply_tagset_variant(&c44, TagsetVariant::Swda41).unwrap();
    assert_eq!(labels(&c41), ["%", "sd", "sd"]);
}

#[test]
fn lego_with_default_mapping() {
    let mapping = LabelMapping::default_lego();
    let c = load_corpus(
        &common::fixture("lego.csv"),
        CorpusFormat::Lego,
        TagsetVariant::Iso,
        Some(&mapping),
    )
    .unwrap();
    assert_eq!(c.dialogs.len(), 2);
    assert_eq!(
        labels(&c),
        [
            "Set Question",
            "Answer",
            "Confirm",
            "Check Question",
            "Confirm",
            "Set Question",
            "Answer"
        ]
    );
    let speakers: Vec<&str> = c.segments().map(|s| s.speaker.as_str()).collect();
    assert_eq!(
        speakers,
        ["System", "User", "System", "System", "User", "System", "User"]
    );
}

#[test]
fn dialogbank_dimensions() {
    let c = load_corpus(
        &common::fixture("dialogbank.tsv"),
        CorpusFormat::Dialogbank,
        TagsetVariant::Iso,
        None,
    )
    .unwrap();
    assert_eq!(c.aux_dimensions, ["feedback", "turn"]);
    assert_eq!(c.segment_count(), 6);
    let third = &c.dialogs[0].segments[2];
    assert_eq!(third.label, dactx::corpus::NO_TASK_LABEL);
    assert_eq!(third.aux_labels["feedback"], "autoPositive");
    assert_eq!(third.aux_labels["turn"], "turnTake");
}

#[test]
fn markup_modes_on_excerpt() {
    let c = load_switchboard(&common::fixture("excerpt.utt")).unwrap();
    let seg = &c.dialogs[0].segments[10].raw_text;
    let split = normalize(seg, MarkupMode::Split).to_string();
    assert!(!split.contains("{C"));
    let atomic = normalize(seg, MarkupMode::Atomic);
    assert!(atomic.inner().iter().any(|t| t == "{C"));
    assert!(atomic.inner().iter().any(|t| t == "-/"));
}
