use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub const START: &str = "<s>";
pub const END: &str = "</s>";

/// Characters always separated from words.
const PUNCTUATION: &[char] = &['.', ',', '?', '!', ';', ':', '"', '(', ')'];
/// Transcription markup characters.
const MARKUP: &[char] = &['{', '}', '[', ']', '<', '>', '+', '/'];

/// How transcription markup (`{F`, `[`, `-/`, `<laughter>` ...) is tokenized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MarkupMode {
    /// Markup is taken apart like any other punctuation.
    #[default]
    Split,
    /// Disfluency markers and angle-bracket units stay single tokens.
    Atomic,
}

impl FromStr for MarkupMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "split" => Ok(MarkupMode::Split),
            "atomic" => Ok(MarkupMode::Atomic),
            other => Err(Error::Config(format!("unknown markup mode `{other}`"))),
        }
    }
}

impl fmt::Display for MarkupMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MarkupMode::Split => "split",
            MarkupMode::Atomic => "atomic",
        })
    }
}

/// Normalized tokens of one segment, framed by `<s>` and `</s>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TokenSequence(Vec<String>);

impl TokenSequence {
    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    /// Tokens between the sentinels.
    pub fn inner(&self) -> &[String] {
        &self.0[1..self.0.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Space-joined inner tokens.
    pub fn detokenize(&self) -> String {
        self.inner().join(" ")
    }
}

impl fmt::Display for TokenSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join(" "))
    }
}

/// Lowercases, separates punctuation from words and frames the result with
/// sentinels. Apostrophes stay inside words, as do hyphens between letters.
pub fn normalize(raw_text: &str, mode: MarkupMode) -> TokenSequence {
    let mut tokens = vec![START.to_string()];
    for chunk in raw_text.split_whitespace() {
        tokenize_chunk(chunk, mode, &mut tokens);
    }
    tokens.push(END.to_string());
    TokenSequence(tokens)
}

fn tokenize_chunk(chunk: &str, mode: MarkupMode, out: &mut Vec<String>) {
    let chars: Vec<char> = chunk.chars().collect();
    let mut word = String::new();
    let flush = |word: &mut String, out: &mut Vec<String>| {
        if !word.is_empty() {
            out.push(word.to_lowercase());
            word.clear();
        }
    };
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if mode == MarkupMode::Atomic {
            if let Some(len) = atomic_marker_len(&chars[i..]) {
                flush(&mut word, out);
                let marker: String = chars[i..i + len].iter().collect();
                // Keep sentinels unique even if the transcript spells them out.
                out.push(if marker == START || marker == END {
                    format!("{}_>", &marker[..marker.len() - 1])
                } else {
                    marker
                });
                i += len;
                continue;
            }
        }
        if PUNCTUATION.contains(&c) || MARKUP.contains(&c) {
            flush(&mut word, out);
            out.push(c.to_string());
        } else if c == '-' {
            let inner = i > 0
                && i + 1 < chars.len()
                && chars[i - 1].is_alphanumeric()
                && chars[i + 1].is_alphanumeric();
            if inner {
                word.push(c);
            } else {
                flush(&mut word, out);
                out.push("-".into());
            }
        } else {
            word.push(c);
        }
        i += 1;
    }
    flush(&mut word, out);
}

/// Length of the marker starting at `s[0]` in atomic mode: `{X` with an
/// uppercase letter, `-/`, or a whole `<...>` unit.
fn atomic_marker_len(s: &[char]) -> Option<usize> {
    match s {
        ['{', x, ..] if x.is_ascii_uppercase() => Some(2),
        ['-', '/', ..] => Some(2),
        ['<', rest @ ..] => rest.iter().position(|&c| c == '>').map(|p| p + 2),
        _ => None,
    }
}
