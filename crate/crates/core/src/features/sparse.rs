use crate::error::{Error, Result};

/// Sparse sample: `(feature id, value)` pairs sorted by id, ids unique, values positive.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseVector {
    entries: Vec<(u32, f64)>,
}

impl SparseVector {
    /// Builds a vector from unsorted pairs, summing duplicates and dropping zeros.
    pub fn from_pairs(mut pairs: Vec<(u32, f64)>) -> Result<Self> {
        if let Some(&(id, v)) = pairs.iter().find(|(_, v)| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidInput(format!(
                "feature {id} has invalid value {v}"
            )));
        }
        pairs.sort_unstable_by_key(|&(id, _)| id);
        let mut entries: Vec<(u32, f64)> = Vec::with_capacity(pairs.len());
        for (id, v) in pairs {
            match entries.last_mut() {
                Some(last) if last.0 == id => last.1 += v,
                _ => entries.push((id, v)),
            }
        }
        entries.retain(|&(_, v)| v > 0.0);
        Ok(SparseVector { entries })
    }

    /// Wraps pairs that already satisfy the invariants.
    pub(crate) fn from_sorted_unchecked(entries: Vec<(u32, f64)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        SparseVector { entries }
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_id(&self) -> Option<u32> {
        self.entries.last().map(|&(id, _)| id)
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|&(_, v)| v * v).sum()
    }

    /// Dot product with a dense vector; ids past its end contribute nothing.
    pub fn dot(&self, dense: &[f64]) -> f64 {
        self.entries
            .iter()
            .filter_map(|&(id, v)| dense.get(id as usize).map(|w| w * v))
            .sum()
    }

    /// `dense += scale * self`
    pub fn axpy(&self, scale: f64, dense: &mut [f64]) {
        for &(id, v) in &self.entries {
            dense[id as usize] += scale * v;
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        SparseVector {
            entries: self
                .entries
                .iter()
                .map(|&(id, v)| (id, v * factor))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_and_sorts() {
        let v = SparseVector::from_pairs(vec![(3, 1.0), (1, 2.0), (3, 0.5), (2, 0.0)]).unwrap();
        assert_eq!(v.entries(), &[(1, 2.0), (3, 1.5)]);
        assert_eq!(v.dot(&[0.0, 1.0, 5.0, 2.0]), 5.0);
        assert_eq!(v.dot(&[1.0]), 0.0);
        assert!(SparseVector::from_pairs(vec![(0, f64::NAN)]).is_err());
        assert!(SparseVector::from_pairs(vec![(0, -1.0)]).is_err());
    }
}
