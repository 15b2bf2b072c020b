//! Interned feature keys.
//!
//! Keys render to strings as follows:
//!
//! | key                     | rendering                 |
//! |-------------------------|---------------------------|
//! | n-gram / indicator term | `2:<s> yes`, `wh:what`    |
//! | offset-tagged term      | `1|2:<s> yes`             |
//! | dialog act label        | `da|1|task|sd`            |

use std::collections::HashMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct Interner {
    ids: HashMap<String, u32>,
    strings: Vec<String>,
}

impl Interner {
    pub fn intern(&mut self, s: &str) -> u32 {
        if let Some(&id) = self.ids.get(s) {
            return id;
        }
        let id = self.strings.len() as u32;
        self.strings.push(s.to_string());
        self.ids.insert(s.to_string(), id);
        id
    }

    pub fn get(&self, s: &str) -> Option<u32> {
        self.ids.get(s).copied()
    }

    pub fn resolve(&self, id: u32) -> &str {
        &self.strings[id as usize]
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FeatureKey {
    /// An n-gram or indicator of the segment itself (or untagged context).
    Base(u32),
    /// An n-gram from the segment `offset` positions back.
    Tagged { offset: u8, term: u32 },
    /// The label, in one dimension, of the segment `offset` positions back.
    Label { offset: u8, dim: u16, label: u32 },
}

/// String tables behind [`FeatureKey`]s.
#[derive(Debug, Clone, Default)]
pub struct KeySpace {
    pub terms: Interner,
    pub labels: Interner,
    pub dims: Interner,
}

impl KeySpace {
    pub fn render(&self, key: FeatureKey) -> String {
        match key {
            FeatureKey::Base(t) => self.terms.resolve(t).to_string(),
            FeatureKey::Tagged { offset, term } => {
                format!("{offset}|{}", self.terms.resolve(term))
            }
            FeatureKey::Label { offset, dim, label } => format!(
                "da|{offset}|{}|{}",
                self.dims.resolve(dim as u32),
                self.labels.resolve(label)
            ),
        }
    }

    /// Inverse of [`KeySpace::render`], interning any unseen strings.
    pub fn parse(&mut self, s: &str) -> Result<FeatureKey> {
        let bad = || Error::InvalidInput(format!("malformed feature key `{s}`"));
        if let Some(rest) = s.strip_prefix("da|") {
            let mut parts = rest.splitn(3, '|');
            let offset = parts.next().and_then(|o| o.parse().ok()).ok_or_else(bad)?;
            let dim = parts.next().ok_or_else(bad)?;
            let label = parts.next().ok_or_else(bad)?;
            let dim = u16::try_from(self.dims.intern(dim)).map_err(|_| bad())?;
            return Ok(FeatureKey::Label {
                offset,
                dim,
                label: self.labels.intern(label),
            });
        }
        let digits = s.bytes().take_while(u8::is_ascii_digit).count();
        if digits > 0 && s.as_bytes().get(digits) == Some(&b'|') {
            let offset = s[..digits].parse().map_err(|_| bad())?;
            return Ok(FeatureKey::Tagged {
                offset,
                term: self.terms.intern(&s[digits + 1..]),
            });
        }
        if s.is_empty() {
            return Err(bad());
        }
        Ok(FeatureKey::Base(self.terms.intern(s)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_parse_round_trip() {
        let mut space = KeySpace::default();
        for s in [
            "2:<s> yes",
            "wh:what",
            "1|1:yes",
            "3|2:a |",
            "da|2|task|<pad>",
            "da|1|task|Set Question",
        ] {
            let key = space.parse(s).unwrap();
            assert_eq!(space.render(key), s);
        }
        assert!(matches!(
            space.parse("1|1:x").unwrap(),
            FeatureKey::Tagged { offset: 1, .. }
        ));
        assert!(matches!(space.parse("1:x").unwrap(), FeatureKey::Base(_)));
        assert!(space.parse("da|x|task|a").is_err());
        assert!(space.parse("").is_err());
    }
}
