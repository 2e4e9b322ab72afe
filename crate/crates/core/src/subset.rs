//! Fixed-width element subsets.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ring::Elem;

/// A set of ring elements stored as a 64-bit mask indexed by element index.
///
/// Ordering is the numeric order of the mask, which gives every enumeration
/// in this crate a canonical, reproducible order.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// All indices `0..order`.
    pub fn full(order: usize) -> Self {
        if order >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << order) - 1)
        }
    }

    pub fn singleton(a: Elem) -> Self {
        Subset(1u64 << a)
    }

    pub fn contains(self, a: Elem) -> bool {
        (self.0 >> a) & 1 == 1
    }

    pub fn insert(&mut self, a: Elem) -> bool {
        let fresh = !self.contains(a);
        self.0 |= 1u64 << a;
        fresh
    }

    pub fn with(mut self, a: Elem) -> Self {
        self.insert(a);
        self
    }

    pub fn union(self, other: Subset) -> Self {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Self {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Self {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> SubsetIter {
        SubsetIter(self.0)
    }

    pub fn to_vec(self) -> Vec<Elem> {
        self.iter().collect()
    }
}

impl FromIterator<Elem> for Subset {
    fn from_iter<T: IntoIterator<Item = Elem>>(iter: T) -> Self {
        let mut s = Subset::EMPTY;
        for a in iter {
            s.insert(a);
        }
        s
    }
}

pub struct SubsetIter(u64);

impl Iterator for SubsetIter {
    type Item = Elem;

    fn next(&mut self) -> Option<Elem> {
        if self.0 == 0 {
            return None;
        }
        let a = self.0.trailing_zeros() as Elem;
        self.0 &= self.0 - 1;
        Some(a)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let elems = Vec::<u32>::deserialize(deserializer)?;
        let mut s = Subset::EMPTY;
        for a in elems {
            if a >= 64 {
                return Err(serde::de::Error::custom(format!("element index {a} out of range")));
            }
            s.insert(a as Elem);
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let s: Subset = [0u8, 2, 5].into_iter().collect();
        assert_eq!(s.len(), 3);
        assert!(s.contains(2) && !s.contains(1));
        assert_eq!(s.to_vec(), vec![0, 2, 5]);
        assert!(Subset::singleton(2).is_subset(s));
        assert_eq!(Subset::full(4).bits(), 0b1111);
        assert_eq!(Subset::full(64).len(), 64);
    }

    #[test]
    fn serde_as_element_list() {
        let s: Subset = [1u8, 3].into_iter().collect();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, "[1,3]");
        let back: Subset = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
