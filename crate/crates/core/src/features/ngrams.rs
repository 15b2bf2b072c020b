use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::normalize::TokenSequence;
use crate::error::{Error, Result};

/// Which n-gram orders are extracted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NGramSpec {
    pub max_n: usize,
    /// All orders `1..=max_n` when set, only `max_n` otherwise.
    pub cumulative: bool,
}

impl Default for NGramSpec {
    fn default() -> Self {
        NGramSpec {
            max_n: 2,
            cumulative: true,
        }
    }
}

impl NGramSpec {
    pub fn new(max_n: usize, cumulative: bool) -> Result<Self> {
        if !(1..=5).contains(&max_n) {
            return Err(Error::Config(format!("n-gram order {max_n} outside 1..=5")));
        }
        Ok(NGramSpec { max_n, cumulative })
    }

    pub fn orders(&self) -> std::ops::RangeInclusive<usize> {
        if self.cumulative {
            1..=self.max_n
        } else {
            self.max_n..=self.max_n
        }
    }
}

/// Feature key of an n-gram: its order, a colon, and the space-joined tokens.
pub fn ngram_key(window: &[String]) -> String {
    format!("{}:{}", window.len(), window.join(" "))
}

/// Counts every contiguous window of each included order.
pub fn extract_ngrams(tokens: &TokenSequence, spec: NGramSpec) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    let toks = tokens.tokens();
    for n in spec.orders() {
        if n > toks.len() {
            continue;
        }
        for window in toks.windows(n) {
            *counts.entry(ngram_key(window)).or_insert(0) += 1;
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::normalize::{normalize, MarkupMode};
    use proptest::prelude::*;

    fn seq(text: &str) -> TokenSequence {
        normalize(text, MarkupMode::Split)
    }

    #[test]
    fn unigrams() {
        let got = extract_ngrams(&seq("a b a"), NGramSpec::new(1, false).unwrap());
        let want: BTreeMap<String, usize> = [("1:<s>", 1), ("1:a", 2), ("1:b", 1), ("1:</s>", 1)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn cumulative_bigrams() {
        let got = extract_ngrams(&seq("a b a"), NGramSpec::new(2, true).unwrap());
        assert_eq!(got.len(), 8);
        for k in ["2:<s> a", "2:a b", "2:b a", "2:a </s>"] {
            assert_eq!(got[k], 1, "{k}");
        }
        assert_eq!(got["1:a"], 2);
    }

    #[test]
    fn specific_order_only() {
        let got = extract_ngrams(&seq("a b"), NGramSpec::new(3, false).unwrap());
        assert!(got.keys().all(|k| k.starts_with("3:")));
        assert_eq!(got.len(), 2);
        assert!(extract_ngrams(&seq(""), NGramSpec::new(3, false).unwrap()).is_empty());
    }

    #[test]
    fn order_bounds() {
        assert!(NGramSpec::new(0, true).is_err());
        assert!(NGramSpec::new(6, true).is_err());
    }

    proptest! {
        #[test]
        fn window_count_law(words in prop::collection::vec("[a-c]", 0..12), n in 1usize..=5) {
            let t = seq(&words.join(" "));
            let got = extract_ngrams(&t, NGramSpec::new(n, false).unwrap());
            let total: usize = got.values().sum();
            prop_assert_eq!(total, (t.len() + 1).saturating_sub(n));
        }
    }
}
