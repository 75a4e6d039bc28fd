use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Disjoint sets of ancilla indices covering `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct Partition {
    sets: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(sets: Vec<Vec<usize>>) -> Result<Self> {
        let n: usize = sets.iter().map(Vec::len).sum();
        let mut seen = vec![false; n];
        for &k in sets.iter().flatten() {
            if k >= n || seen[k] {
                return Err(Error::InvalidArgument(format!(
                    "partition sets must be disjoint and cover 0..{n}"
                )));
            }
            seen[k] = true;
        }
        if sets.iter().any(Vec::is_empty) {
            return Err(Error::InvalidArgument("partition contains an empty set".into()));
        }
        Ok(Self { sets })
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            sets: (0..n).map(|k| vec![k]).collect(),
        }
    }

    pub fn trivial(n: usize) -> Self {
        Self {
            sets: vec![(0..n).collect()],
        }
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// Size of the covered index set.
    pub fn size(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }

    pub fn is_singletons(&self) -> bool {
        self.sets.iter().all(|s| s.len() == 1)
    }
}

impl TryFrom<Vec<Vec<usize>>> for Partition {
    type Error = Error;

    fn try_from(sets: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(sets)
    }
}

impl From<Partition> for Vec<Vec<usize>> {
    fn from(p: Partition) -> Self {
        p.sets
    }
}

/// All set partitions of `0..n` (Bell-number many), singletons first.
pub fn set_partitions(n: usize) -> Vec<Partition> {
    // Restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[..i]).
    fn grow(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let max = prefix.iter().copied().max().map_or(0, |m| m + 1);
        for b in (0..=max).rev() {
            prefix.push(b);
            grow(prefix, n, out);
            prefix.pop();
        }
    }
    if n == 0 {
        return Vec::new();
    }
    let mut strings = Vec::new();
    grow(&mut vec![0], n, &mut strings);
    strings.sort_by_key(|s| std::cmp::Reverse(s.iter().copied().max().unwrap_or(0)));
    strings
        .into_iter()
        .map(|s| {
            let blocks = s.iter().copied().max().unwrap_or(0) + 1;
            let mut sets = vec![Vec::new(); blocks];
            for (k, &b) in s.iter().enumerate() {
                sets[b].push(k);
            }
            Partition { sets }
        })
        .collect()
}

/// Partitions searched when none are supplied: every set partition for ancillas of
/// size at most 3, otherwise singletons and the trivial partition.
pub fn default_partitions(ancilla_dim: usize) -> Vec<Partition> {
    if ancilla_dim <= 3 {
        set_partitions(ancilla_dim)
    } else {
        vec![Partition::singletons(ancilla_dim), Partition::trivial(ancilla_dim)]
    }
}
