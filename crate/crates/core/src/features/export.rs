use std::io::Write;

use super::sparse::SparseVector;
use crate::error::Result;

/// Writes samples as `label qid:<dialog-id> id:value ...`, one per line, ids ascending.
/// Labels are class indices.
pub fn write_sparse_dataset<'a>(
    samples: impl IntoIterator<Item = (usize, &'a str, &'a SparseVector)>,
    mut out: impl Write,
) -> Result<()> {
    for (label, qid, x) in samples {
        write!(out, "{label} qid:{qid}")?;
        for &(id, v) in x.entries() {
            write!(out, " {id}:{v}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_format() {
        let x = SparseVector::from_pairs(vec![(4, 2.0), (1, 1.0)]).unwrap();
        let mut buf = Vec::new();
        write_sparse_dataset([(3, "sw2005", &x)], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "3 qid:sw2005 1:1 4:2\n");
    }
}
