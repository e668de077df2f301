use std::fmt;

/// Occupation label `(n1, n2)` of a two-mode Fock state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockIndex {
    pub n1: usize,
    pub n2: usize,
}

impl FockIndex {
    pub const fn new(n1: usize, n2: usize) -> Self {
        FockIndex { n1, n2 }
    }

    /// Largest occupation among the two modes; the truncation edge is at `n_max`.
    pub fn shell(&self) -> usize {
        self.n1.max(self.n2)
    }

    pub fn total(&self) -> usize {
        self.n1 + self.n2
    }
}

impl fmt::Display for FockIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n1, self.n2)
    }
}

/// Box-truncated two-mode Fock basis: all `(n1, n2)` with `n1, n2 <= n_max`.
///
/// States are ordered row-major, `index = n1 * (n_max + 1) + n2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FockBasis {
    n_max: usize,
}

impl FockBasis {
    pub fn new(n_max: usize) -> Self {
        FockBasis { n_max }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Levels per mode.
    pub fn levels(&self) -> usize {
        self.n_max + 1
    }

    pub fn dim(&self) -> usize {
        self.levels() * self.levels()
    }

    pub fn contains(&self, idx: FockIndex) -> bool {
        idx.n1 <= self.n_max && idx.n2 <= self.n_max
    }

    pub fn index_of(&self, idx: FockIndex) -> Option<usize> {
        self.contains(idx).then(|| idx.n1 * self.levels() + idx.n2)
    }

    pub fn fock_of(&self, k: usize) -> Option<FockIndex> {
        (k < self.dim()).then(|| FockIndex::new(k / self.levels(), k % self.levels()))
    }

    /// Iterates labels in linear-index order.
    pub fn iter(&self) -> impl Iterator<Item = FockIndex> + '_ {
        (0..self.dim()).map(move |k| FockIndex::new(k / self.levels(), k % self.levels()))
    }

    /// Index of a label known to be inside the basis.
    pub(crate) fn idx(&self, n1: usize, n2: usize) -> usize {
        debug_assert!(n1 <= self.n_max && n2 <= self.n_max);
        n1 * self.levels() + n2
    }
}

/// Sub-basis away from the truncation cap: `n1, n2 <= n_max - margin`.
///
/// Operator identities of the untruncated theory hold on this block; entries
/// touching the excluded levels carry truncation artifacts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InteriorBlock {
    pub margin: usize,
}

impl InteriorBlock {
    pub const fn new(margin: usize) -> Self {
        InteriorBlock { margin }
    }

    /// Highest interior level, or `None` when the margin swallows the basis.
    pub fn top(&self, basis: &FockBasis) -> Option<usize> {
        basis.n_max().checked_sub(self.margin)
    }

    pub fn contains(&self, basis: &FockBasis, idx: FockIndex) -> bool {
        match self.top(basis) {
            Some(top) => idx.n1 <= top && idx.n2 <= top,
            None => false,
        }
    }

    /// Linear indices of the interior states, ascending.
    pub fn indices(&self, basis: &FockBasis) -> Vec<usize> {
        basis
            .iter()
            .enumerate()
            .filter(|(_, idx)| self.contains(basis, *idx))
            .map(|(k, _)| k)
            .collect()
    }
}
