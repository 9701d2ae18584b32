//! Set partitions of the public alphabet, stored as restricted growth strings.
//!
//! A deterministic privacy mapping sends every public symbol to exactly one
//! output symbol, so it is fully described by the partition of the public
//! alphabet into preimages. The canonical representation labels element `i`
//! with the index of its block, blocks numbered in order of their smallest
//! element (`labels[0] == 0` and every label is at most one more than the
//! largest label before it).

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    labels: Vec<usize>,
}

impl Partition {
    /// Builds a partition from a restricted growth string.
    pub fn from_rgs(labels: Vec<usize>) -> Result<Self> {
        let mut next = 0usize;
        for (i, &l) in labels.iter().enumerate() {
            if l > next {
                return Err(Error::InvalidParameter(format!(
                    "label {l} at position {i} is not a restricted growth string"
                )));
            }
            if l == next {
                next += 1;
            }
        }
        Ok(Self { labels })
    }

    /// Builds the canonical partition from arbitrary blocks covering `0..n`.
    pub fn from_blocks<B: AsRef<[usize]>>(blocks: &[B], n: usize) -> Result<Self> {
        let mut owner = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            let block = block.as_ref();
            if block.is_empty() {
                return Err(Error::InvalidParameter(format!("block {b} is empty")));
            }
            for &x in block {
                if x >= n {
                    return Err(Error::InvalidParameter(format!(
                        "element {x} outside alphabet of size {n}"
                    )));
                }
                if owner[x] != usize::MAX {
                    return Err(Error::InvalidParameter(format!(
                        "element {x} appears in more than one block"
                    )));
                }
                owner[x] = b;
            }
        }
        if let Some(x) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::InvalidParameter(format!(
                "element {x} is not covered by any block"
            )));
        }
        Ok(Self::canonicalize(&owner))
    }

    /// Relabels arbitrary block ids into restricted growth order.
    pub(crate) fn canonicalize(owner: &[usize]) -> Self {
        let mut remap = std::collections::HashMap::new();
        let labels = owner
            .iter()
            .map(|o| {
                let fresh = remap.len();
                *remap.entry(*o).or_insert(fresh)
            })
            .collect();
        Self { labels }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            labels: (0..n).collect(),
        }
    }

    pub fn single_block(n: usize) -> Self {
        Self { labels: vec![0; n] }
    }

    /// Number of partitioned elements.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_blocks(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    /// Block index of element `x`.
    pub fn block_of(&self, x: usize) -> usize {
        self.labels[x]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Blocks in canonical order, each sorted ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (x, &b) in self.labels.iter().enumerate() {
            blocks[b].push(x);
        }
        blocks
    }
}

impl fmt::Display for Partition {
    /// `{0 2}{1}` style listing without commas so it can sit in a CSV cell.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in self.blocks() {
            write!(f, "{{")?;
            for (k, x) in block.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_from_blocks() {
        let p = Partition::from_blocks(&[vec![3, 1], vec![0, 2]], 4).unwrap();
        assert_eq!(p.labels(), &[0, 1, 0, 1]);
        assert_eq!(p.blocks(), vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(p.to_string(), "{0 2}{1 3}");
    }

    #[test]
    fn rejects_bad_blocks() {
        assert!(Partition::from_blocks(&[vec![0], vec![0, 1]], 2).is_err());
        assert!(Partition::from_blocks(&[vec![0]], 2).is_err());
        assert!(Partition::from_blocks(&[vec![0, 5]], 2).is_err());
        assert!(Partition::from_rgs(vec![0, 2]).is_err());
        assert!(Partition::from_rgs(vec![1]).is_err());
    }

    #[test]
    fn extremes() {
        assert_eq!(Partition::identity(3).num_blocks(), 3);
        assert_eq!(Partition::single_block(3).num_blocks(), 1);
        assert_eq!(Partition::single_block(3).to_string(), "{0 1 2}");
    }
}
