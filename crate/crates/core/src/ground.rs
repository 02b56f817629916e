//! Ground sets and subsets-as-bitmasks.

use std::fmt;

use crate::error::{Error, Result};

/// Hard cap on ground-set size; subsets index dense arrays of length 2^n.
pub const MAX_GROUND: usize = 16;

/// Cap for tight-span operations (the cover DP is Theta(5^n)).
pub const MAX_TIGHT: usize = 10;

/// An ordered set of distinct element names. Iteration order is the
/// declared order and fixes the bit order of all masks.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundSet {
    labels: Vec<String>,
}

impl GroundSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::Input("ground set is empty".into()));
        }
        if labels.len() > MAX_GROUND {
            return Err(Error::SizeCap {
                n: labels.len(),
                cap: MAX_GROUND,
            });
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].contains(a) {
                return Err(Error::Input(format!("duplicate element `{a}`")));
            }
        }
        Ok(GroundSet { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor rejects empty ground sets
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    /// Number of subsets, `2^n`.
    pub fn subset_count(&self) -> usize {
        1usize << self.labels.len()
    }

    pub fn full_mask(&self) -> SubsetMask {
        SubsetMask::full(self.labels.len())
    }

    /// All masks in ascending numeric order (the empty set first).
    pub fn masks(&self) -> impl Iterator<Item = SubsetMask> {
        (0..self.subset_count() as u32).map(SubsetMask)
    }

    /// Converts a list of element names to a mask.
    pub fn mask_of(&self, names: &[String]) -> Result<SubsetMask> {
        let mut m = SubsetMask::EMPTY;
        for name in names {
            let i = self.index(name)?;
            if m.contains(i) {
                return Err(Error::Input(format!("repeated element `{name}` in subset")));
            }
            m = m.with(i);
        }
        Ok(m)
    }

    /// Element names of a mask, sorted lexicographically.
    pub fn names_of(&self, mask: SubsetMask) -> Vec<String> {
        let mut names: Vec<String> = mask.iter().map(|i| self.labels[i].clone()).collect();
        names.sort();
        names
    }
}

/// A subset of the ground set, one bit per element in declared order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SubsetMask(pub u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_GROUND);
        SubsetMask(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(i: usize) -> Self {
        SubsetMask(1 << i)
    }

    pub fn bits(&self) -> u32 {
        self.0
    }

    pub fn index(&self) -> usize {
        self.0 as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn card(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(&self, i: usize) -> Self {
        SubsetMask(self.0 | 1 << i)
    }

    pub fn union(&self, other: SubsetMask) -> Self {
        SubsetMask(self.0 | other.0)
    }

    pub fn inter(&self, other: SubsetMask) -> Self {
        SubsetMask(self.0 & other.0)
    }

    pub fn diff(&self, other: SubsetMask) -> Self {
        SubsetMask(self.0 & !other.0)
    }

    pub fn is_subset_of(&self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    /// Lowest set element, if any.
    pub fn lowest(&self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Indices of the elements, ascending.
    pub fn iter(&self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |i| bits >> i & 1 == 1)
    }

    /// All subsets of `self`, ascending (empty set first, `self` last).
    pub fn subsets(&self) -> SubsetsOf {
        SubsetsOf {
            universe: self.0,
            next: Some(0),
        }
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Iterator over subsets of a fixed mask in ascending numeric order.
pub struct SubsetsOf {
    universe: u32,
    next: Option<u32>,
}

impl Iterator for SubsetsOf {
    type Item = SubsetMask;
    fn next(&mut self) -> Option<SubsetMask> {
        let cur = self.next?;
        self.next = if cur == self.universe {
            None
        } else {
            // Next subset of `universe` above `cur`.
            Some((cur.wrapping_sub(self.universe)) & self.universe)
        };
        Some(SubsetMask(cur))
    }
}

/// All masks of size n ordered by cardinality, then numeric value. This is
/// the sweep order used by coordinate minimization.
pub fn masks_by_cardinality(n: usize) -> Vec<SubsetMask> {
    let mut all: Vec<SubsetMask> = (0..(1u32 << n)).map(SubsetMask).collect();
    all.sort_by_key(|m| (m.card(), m.bits()));
    all
}
