use crate::error::{Error, Result};

/// A subset `w ⊆ {0, …, n-1}` of variable indices: the coordinates that
/// vanish on the stratum. Indices are 0-based internally; the file formats
/// use 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Stratum {
    n: usize,
    members: Vec<usize>,
}

impl Stratum {
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        if let Some(&index) = members.iter().find(|&&i| i >= n) {
            return Err(Error::InvalidStratum { index, n });
        }
        members.sort_unstable();
        members.dedup();
        Ok(Stratum { n, members })
    }

    pub fn empty(n: usize) -> Self {
        Stratum { n, members: vec![] }
    }

    pub fn full(n: usize) -> Self {
        Stratum {
            n,
            members: (0..n).collect(),
        }
    }

    /// Bit `i` of `mask` set means `i ∈ w`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Stratum {
            n,
            members: (0..n).filter(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn from_one_based(n: usize, indices: &[usize]) -> Result<Self> {
        let mut members = Vec::with_capacity(indices.len());
        for &i in indices {
            if i == 0 || i > n {
                return Err(Error::InvalidStratum { index: i, n });
            }
            members.push(i - 1);
        }
        Self::new(n, members)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Indices outside `w`, in increasing order.
    pub fn complement(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| !self.contains(i)).collect()
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.members.iter().map(|i| i + 1).collect()
    }

    pub fn is_subset_of(&self, other: &Stratum) -> bool {
        self.members.iter().all(|&i| other.contains(i))
    }
}
