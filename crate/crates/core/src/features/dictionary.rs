use std::collections::HashMap;

use super::keys::{FeatureKey, KeySpace};
use super::sparse::SparseVector;
use super::KeyedVector;

/// Maps feature keys to dense ids `0..len` in first-encounter order.
/// Once frozen it never grows; unseen keys are skipped when vectorizing.
#[derive(Debug, Clone, Default)]
pub struct FeatureDictionary {
    keys: Vec<FeatureKey>,
    index: HashMap<FeatureKey, u32>,
    frozen: bool,
}

impl FeatureDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds and freezes a dictionary over samples in iteration order.
    pub fn build<'a>(samples: impl IntoIterator<Item = &'a KeyedVector>) -> Self {
        let mut dict = Self::new();
        for sample in samples {
            dict.extend(sample);
        }
        dict.freeze();
        dict
    }

    pub fn insert(&mut self, key: FeatureKey) -> Option<u32> {
        if let Some(&id) = self.index.get(&key) {
            return Some(id);
        }
        if self.frozen {
            return None;
        }
        let id = self.keys.len() as u32;
        self.keys.push(key);
        self.index.insert(key, id);
        Some(id)
    }

    pub fn extend(&mut self, sample: &KeyedVector) {
        for &(key, _) in sample.entries() {
            self.insert(key);
        }
    }

    pub fn freeze(&mut self) {
        self.frozen = true;
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    pub fn id(&self, key: &FeatureKey) -> Option<u32> {
        self.index.get(key).copied()
    }

    pub fn key(&self, id: u32) -> FeatureKey {
        self.keys[id as usize]
    }

    pub fn keys(&self) -> &[FeatureKey] {
        &self.keys
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Maps a keyed sample to ids, silently skipping keys outside the dictionary.
    pub fn vectorize(&self, sample: &KeyedVector) -> SparseVector {
        let mut pairs: Vec<(u32, f64)> = sample
            .entries()
            .iter()
            .filter_map(|(k, v)| self.id(k).map(|id| (id, *v)))
            .collect();
        pairs.sort_unstable_by_key(|&(id, _)| id);
        SparseVector::from_sorted_unchecked(pairs)
    }

    pub fn render(&self, space: &KeySpace) -> Vec<String> {
        self.keys.iter().map(|&k| space.render(k)).collect()
    }

    /// Rebuilds a frozen dictionary from rendered keys, in id order.
    pub fn from_rendered(keys: &[String], space: &mut KeySpace) -> crate::Result<Self> {
        let mut dict = Self::new();
        for k in keys {
            let key = space.parse(k)?;
            if dict.index.contains_key(&key) {
                return Err(crate::Error::InvalidInput(format!(
                    "duplicate feature key `{k}`"
                )));
            }
            dict.insert(key);
        }
        dict.freeze();
        Ok(dict)
    }
}
