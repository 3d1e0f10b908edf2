use crate::Partition;

/// Lazily enumerates all set partitions of `{0, .., n-1}` as restricted growth
/// strings, in lexicographic order of the string.
#[derive(Clone, Debug)]
pub struct SetPartitions {
    rgs: Vec<usize>,
    // max_prefix[i] = max(rgs[0..i])
    max_prefix: Vec<usize>,
    done: bool,
}

impl SetPartitions {
    #[must_use]
    pub fn new(n: usize) -> Self {
        SetPartitions {
            rgs: vec![0; n],
            max_prefix: vec![0; n],
            done: false,
        }
    }

    fn advance(&mut self) {
        let n = self.rgs.len();
        // find the rightmost position that can be incremented
        let mut i = n;
        while i > 1 {
            i -= 1;
            if self.rgs[i] <= self.max_prefix[i] {
                self.rgs[i] += 1;
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.max_prefix[j] = self.max_prefix[j - 1].max(self.rgs[j - 1]);
                }
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for SetPartitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let out = Partition::from_usize_labels(&self.rgs);
        if self.rgs.len() <= 1 {
            self.done = true;
        } else {
            self.advance();
        }
        Some(out)
    }
}

/// All partitions `p` with `floor <= p`, produced lazily.
#[derive(Clone, Debug)]
pub struct AbovePartitions {
    floor: Partition,
    inner: SetPartitions,
}

impl Iterator for AbovePartitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let of_blocks = self.inner.next()?;
        Some(self.floor.lift(&of_blocks).expect("block count matches"))
    }
}

impl Partition {
    /// Every partition above `self`, each exactly once.
    #[must_use]
    pub fn enumerate_above(&self) -> AbovePartitions {
        AbovePartitions {
            floor: self.clone(),
            inner: SetPartitions::new(self.n_blocks()),
        }
    }
}

/// Bell number `B(n)` via the Bell triangle.
#[must_use]
pub fn bell(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().expect("nonempty"));
        for &x in &row {
            let last = *next.last().expect("nonempty");
            next.push(last + x);
        }
        row = next;
    }
    row[0]
}
