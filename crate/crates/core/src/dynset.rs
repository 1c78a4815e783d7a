use rand::Rng;

const ABSENT: usize = usize::MAX;

/// Subset of `0..universe` with O(1) insert, remove, membership and
/// uniform sampling. Removal swaps the last element into the hole, so
/// iteration order is not stable.
#[derive(Clone, Debug)]
pub struct IndexedSet {
    items: Vec<usize>,
    pos: Vec<usize>,
}

impl IndexedSet {
    pub fn new(universe: usize) -> Self {
        IndexedSet {
            items: Vec::new(),
            pos: vec![ABSENT; universe],
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.items.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.pos[x] != ABSENT
    }

    /// Returns false if `x` was already present.
    pub fn insert(&mut self, x: usize) -> bool {
        if self.contains(x) {
            return false;
        }
        self.pos[x] = self.items.len();
        self.items.push(x);
        true
    }

    /// Returns false if `x` was absent.
    pub fn remove(&mut self, x: usize) -> bool {
        let p = self.pos[x];
        if p == ABSENT {
            return false;
        }
        let last = self.items.pop().unwrap();
        if last != x {
            self.items[p] = last;
            self.pos[last] = p;
        }
        self.pos[x] = ABSENT;
        true
    }

    #[inline]
    pub fn get(&self, i: usize) -> usize {
        self.items[i]
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        if self.items.is_empty() {
            None
        } else {
            Some(self.items[rng.gen_range(0..self.items.len())])
        }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.items
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.items.iter().copied()
    }
}
