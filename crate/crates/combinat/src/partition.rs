use std::fmt;

use crate::PartitionError;

/// A set partition of `{0, .., ground_size-1}`.
///
/// `labels[v]` is the index of the block holding `v`, blocks being numbered by
/// first occurrence (a restricted growth string).  This is equivalent to the
/// "blocks sorted by least element" canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    labels: Vec<usize>,
    n_blocks: usize,
}

impl Partition {
    /// The finest partition (all singletons).
    #[must_use]
    pub fn bottom(n: usize) -> Self {
        Partition {
            labels: (0..n).collect(),
            n_blocks: n,
        }
    }

    /// The one-block partition.  For `n = 0` this is the empty partition.
    #[must_use]
    pub fn top(n: usize) -> Self {
        Partition {
            labels: vec![0; n],
            n_blocks: usize::from(n > 0),
        }
    }

    /// Builds a partition from explicit blocks, checking disjointness and cover.
    pub fn from_blocks<B, I>(n: usize, blocks: B) -> Result<Self, PartitionError>
    where
        B: IntoIterator<Item = I>,
        I: IntoIterator<Item = usize>,
    {
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.into_iter().enumerate() {
            let mut empty = true;
            for v in block {
                empty = false;
                if v >= n {
                    return Err(PartitionError::InvalidBlocks(format!(
                        "element {v} out of range 0..{n}"
                    )));
                }
                if labels[v] != usize::MAX {
                    return Err(PartitionError::InvalidBlocks(format!(
                        "element {v} appears twice"
                    )));
                }
                labels[v] = b;
            }
            if empty {
                return Err(PartitionError::InvalidBlocks("empty block".into()));
            }
        }
        if let Some(v) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(PartitionError::InvalidBlocks(format!(
                "element {v} not covered"
            )));
        }
        Ok(Self::from_labels(&labels))
    }

    /// Partition whose blocks are the level sets of `labels` (any values).
    #[must_use]
    pub fn from_labels<T: PartialEq>(labels: &[T]) -> Self {
        let mut out = Vec::with_capacity(labels.len());
        let mut reps: Vec<usize> = Vec::new();
        for (v, l) in labels.iter().enumerate() {
            match reps.iter().position(|&r| labels[r] == *l) {
                Some(b) => out.push(b),
                None => {
                    out.push(reps.len());
                    reps.push(v);
                }
            }
        }
        Partition {
            n_blocks: reps.len(),
            labels: out,
        }
    }

    /// Fast path for labels that are small integers (e.g. union-find roots).
    pub(crate) fn from_usize_labels(labels: &[usize]) -> Self {
        let bound = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut relabel = vec![usize::MAX; bound];
        let mut next = 0;
        let out = labels
            .iter()
            .map(|&l| {
                if relabel[l] == usize::MAX {
                    relabel[l] = next;
                    next += 1;
                }
                relabel[l]
            })
            .collect();
        Partition {
            labels: out,
            n_blocks: next,
        }
    }

    #[must_use]
    pub fn ground_size(&self) -> usize {
        self.labels.len()
    }

    #[must_use]
    pub fn n_blocks(&self) -> usize {
        self.n_blocks
    }

    /// Block index of element `v` (blocks numbered by least element).
    #[must_use]
    pub fn block_of(&self, v: usize) -> usize {
        self.labels[v]
    }

    /// The canonical label vector.
    #[must_use]
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    #[must_use]
    pub fn same_block(&self, v: usize, w: usize) -> bool {
        self.labels[v] == self.labels[w]
    }

    /// Blocks in canonical order, elements ascending.
    #[must_use]
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_blocks];
        for (v, &b) in self.labels.iter().enumerate() {
            out[b].push(v);
        }
        out
    }

    #[must_use]
    pub fn is_bottom(&self) -> bool {
        self.n_blocks == self.labels.len()
    }

    fn check(&self, other: &Partition) -> Result<(), PartitionError> {
        if self.ground_size() == other.ground_size() {
            Ok(())
        } else {
            Err(PartitionError::GroundSizeMismatch {
                left: self.ground_size(),
                right: other.ground_size(),
            })
        }
    }

    /// Coarsest common refinement.
    pub fn meet(&self, other: &Partition) -> Result<Partition, PartitionError> {
        self.check(other)?;
        let pairs: Vec<(usize, usize)> = self
            .labels
            .iter()
            .copied()
            .zip(other.labels.iter().copied())
            .collect();
        Ok(Partition::from_labels(&pairs))
    }

    /// Finest common coarsening.
    pub fn join(&self, other: &Partition) -> Result<Partition, PartitionError> {
        self.check(other)?;
        let mut uf = UnionFind::new(self.ground_size());
        for part in [self, other] {
            let mut first = vec![usize::MAX; part.n_blocks];
            for (v, &b) in part.labels.iter().enumerate() {
                if first[b] == usize::MAX {
                    first[b] = v;
                } else {
                    uf.union(first[b], v);
                }
            }
        }
        Ok(uf.into_partition())
    }

    /// `self <= other` in reverse refinement: every block of `other` is a union
    /// of blocks of `self`.
    pub fn leq(&self, other: &Partition) -> Result<bool, PartitionError> {
        self.check(other)?;
        let mut image = vec![usize::MAX; self.n_blocks];
        for (v, &b) in self.labels.iter().enumerate() {
            let target = other.labels[v];
            if image[b] == usize::MAX {
                image[b] = target;
            } else if image[b] != target {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// For `self <= coarse`, the partition of the blocks of `self` induced by
    /// `coarse` (ground set = blocks of `self`).
    pub fn relative_to(&self, coarse: &Partition) -> Result<Partition, PartitionError> {
        if !self.leq(coarse)? {
            return Err(PartitionError::NotComparable);
        }
        let mut labels = vec![0; self.n_blocks];
        for (v, &b) in self.labels.iter().enumerate() {
            labels[b] = coarse.labels[v];
        }
        Ok(Partition::from_usize_labels(&labels))
    }

    /// Inverse of [`Partition::relative_to`]: lift a partition of the blocks of
    /// `self` back to the ground set.
    pub fn lift(&self, of_blocks: &Partition) -> Result<Partition, PartitionError> {
        if of_blocks.ground_size() != self.n_blocks {
            return Err(PartitionError::GroundSizeMismatch {
                left: self.n_blocks,
                right: of_blocks.ground_size(),
            });
        }
        let labels: Vec<usize> = self.labels.iter().map(|&b| of_blocks.labels[b]).collect();
        Ok(Partition::from_usize_labels(&labels))
    }
}

/// The partition `v ~ w  iff  map[v] == map[w]`.
#[must_use]
pub fn kernel_of<T: PartialEq>(map: &[T]) -> Partition {
    Partition::from_labels(map)
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, block) in self.blocks().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (j, v) in block.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One partition per string, all over the same ground set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionTuple {
    parts: Vec<Partition>,
}

impl PartitionTuple {
    pub fn new(parts: Vec<Partition>) -> Result<Self, PartitionError> {
        let Some(first) = parts.first() else {
            return Err(PartitionError::InvalidTuple);
        };
        let n = first.ground_size();
        if parts.iter().any(|p| p.ground_size() != n) {
            return Err(PartitionError::InvalidTuple);
        }
        Ok(PartitionTuple { parts })
    }

    #[must_use]
    pub fn parts(&self) -> &[Partition] {
        &self.parts
    }

    #[must_use]
    pub fn get(&self, s: usize) -> &Partition {
        &self.parts[s]
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    #[must_use]
    pub fn ground_size(&self) -> usize {
        self.parts[0].ground_size()
    }

    /// Meet of all coordinates.
    #[must_use]
    pub fn meet_all(&self) -> Partition {
        self.parts
            .iter()
            .skip(1)
            .fold(self.parts[0].clone(), |acc, p| {
                acc.meet(p).expect("sizes checked")
            })
    }
}

impl fmt::Display for PartitionTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller root so labels stay stable
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    pub(crate) fn into_partition(mut self) -> Partition {
        let roots: Vec<usize> = (0..self.parent.len()).map(|v| self.find(v)).collect();
        Partition::from_usize_labels(&roots)
    }
}
