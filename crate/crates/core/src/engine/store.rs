//! Sets of matrices keyed by their canonical encoding.

use std::hash::BuildHasherDefault;

use indexmap::IndexSet;
use rustc_hash::FxHasher;

use crate::matrix::{Key, KeyCodec, UMatrix};

pub type KeySet = IndexSet<Key, BuildHasherDefault<FxHasher>>;

/// Enumerated element set in insertion order.
#[derive(Clone, Debug)]
pub struct Store {
    codec: KeyCodec,
    keys: KeySet,
}

impl Store {
    pub fn new(codec: KeyCodec) -> Self {
        Store { codec, keys: KeySet::default() }
    }

    pub fn from_keys(codec: KeyCodec, keys: impl IntoIterator<Item = Key>) -> Self {
        Store { codec, keys: keys.into_iter().collect() }
    }

    pub(crate) fn from_set(codec: KeyCodec, keys: KeySet) -> Self {
        Store { codec, keys }
    }

    pub fn codec(&self) -> &KeyCodec {
        &self.codec
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn contains(&self, m: &UMatrix) -> bool {
        self.keys.contains(&self.codec.encode(m))
    }

    pub fn contains_key(&self, k: &Key) -> bool {
        self.keys.contains(k)
    }

    pub fn insert(&mut self, m: &UMatrix) -> bool {
        self.keys.insert(self.codec.encode(m))
    }

    pub fn keys(&self) -> impl Iterator<Item = &Key> + '_ {
        self.keys.iter()
    }

    pub fn get(&self, index: usize) -> Option<UMatrix> {
        self.keys.get_index(index).map(|k| self.codec.decode(k))
    }

    pub fn iter(&self) -> impl Iterator<Item = UMatrix> + '_ {
        self.keys.iter().map(|k| self.codec.decode(k))
    }

    pub fn is_subset(&self, other: &Store) -> bool {
        self.len() <= other.len() && self.keys.iter().all(|k| other.keys.contains(k))
    }

    /// Same elements, regardless of insertion order.
    pub fn same_elements(&self, other: &Store) -> bool {
        self.len() == other.len() && self.is_subset(other)
    }

    /// First element (in insertion order) missing from `other`.
    pub fn first_missing_from(&self, other: &Store) -> Option<UMatrix> {
        self.keys.iter().find(|k| !other.keys.contains(*k)).map(|k| self.codec.decode(k))
    }
}
