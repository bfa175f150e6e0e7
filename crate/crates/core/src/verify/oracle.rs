//! Reference priority queue: a flat table scanned on every query.

use std::collections::HashMap;

use crate::common::{HeapError, ItemId};

#[derive(Debug, Clone, Default)]
pub struct OracleHeap<K> {
    entries: Vec<(K, ItemId)>,
    pos: HashMap<ItemId, usize>,
}

impl<K: Ord + Clone> OracleHeap<K> {
    pub fn new() -> Self {
        OracleHeap { entries: Vec::new(), pos: HashMap::new() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.pos.contains_key(&item)
    }

    pub fn key_of(&self, item: ItemId) -> Option<&K> {
        self.pos.get(&item).map(|&i| &self.entries[i].0)
    }

    pub fn insert(&mut self, item: ItemId, key: K) -> Result<(), HeapError> {
        if self.pos.contains_key(&item) {
            return Err(HeapError::DuplicateItem(item));
        }
        self.pos.insert(item, self.entries.len());
        self.entries.push((key, item));
        Ok(())
    }

    /// Minimum key; among equal keys the lowest item id.
    pub fn find_min(&self) -> Option<(ItemId, &K)> {
        let mut best: Option<&(K, ItemId)> = None;
        for e in &self.entries {
            if best.is_none_or(|b| e < b) {
                best = Some(e);
            }
        }
        best.map(|(k, it)| (*it, k))
    }

    pub fn delete_min(&mut self) -> Result<(ItemId, K), HeapError> {
        let item = self.find_min().ok_or(HeapError::Empty)?.0;
        let key = self.remove(item).expect("present");
        Ok((item, key))
    }

    pub fn decrease_key(&mut self, item: ItemId, key: K) -> Result<(), HeapError> {
        let &i = self.pos.get(&item).ok_or(HeapError::UnknownItem(item))?;
        if key >= self.entries[i].0 {
            return Err(HeapError::KeyNotDecreased(item));
        }
        self.entries[i].0 = key;
        Ok(())
    }

    pub fn delete(&mut self, item: ItemId) -> Result<(), HeapError> {
        self.remove(item).map(|_| ()).ok_or(HeapError::UnknownItem(item))
    }

    pub fn meld(&mut self, other: OracleHeap<K>) -> Result<(), HeapError> {
        if let Some(it) = other.entries.iter().map(|e| e.1).find(|it| self.pos.contains_key(it)) {
            return Err(HeapError::DuplicateItem(it));
        }
        for (k, it) in other.entries {
            self.pos.insert(it, self.entries.len());
            self.entries.push((k, it));
        }
        Ok(())
    }

    fn remove(&mut self, item: ItemId) -> Option<K> {
        let i = self.pos.remove(&item)?;
        let (k, _) = self.entries.swap_remove(i);
        if let Some(moved) = self.entries.get(i) {
            self.pos.insert(moved.1, i);
        }
        Some(k)
    }
}
