//! Disjoint sets with path compression, union by size and a per-set label.
//!
//! The label lets the merged set keep an arbitrary representative (the bud)
//! while the tree itself stays shallow.

#[derive(Debug, Clone)]
pub struct LabeledDsu {
    parent: Vec<u32>,
    size: Vec<u32>,
    label: Vec<u32>,
}

impl LabeledDsu {
    pub fn new(n: usize) -> Self {
        LabeledDsu {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            label: (0..n as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x as u32;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = x as u32;
        while cur != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root as usize
    }

    /// Root lookup without compression, for read-only callers.
    pub fn find_peek(&self, x: usize) -> usize {
        let mut root = x as u32;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        root as usize
    }

    pub fn label(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.label[r] as usize
    }

    pub fn label_peek(&self, x: usize) -> usize {
        self.label[self.find_peek(x)] as usize
    }

    /// Merges the set of `absorbed` into the set of `keeper`; the merged set
    /// carries `keeper`'s label. Returns false if they were already joined.
    pub fn absorb(&mut self, absorbed: usize, keeper: usize) -> bool {
        let a = self.find(absorbed);
        let k = self.find(keeper);
        if a == k {
            return false;
        }
        let label = self.label[k];
        let (big, small) = if self.size[a] > self.size[k] { (a, k) } else { (k, a) };
        self.parent[small] = big as u32;
        self.size[big] += self.size[small];
        self.label[big] = label;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_sets_are_singletons() {
        let mut d = LabeledDsu::new(4);
        for v in 0..4 {
            assert_eq!(d.label(v), v);
        }
    }

    #[test]
    fn label_follows_keeper_regardless_of_size() {
        let mut d = LabeledDsu::new(6);
        d.absorb(1, 0);
        d.absorb(2, 0);
        d.absorb(3, 0);
        // The big set {0,1,2,3} is absorbed into 5.
        d.absorb(0, 5);
        for v in [0, 1, 2, 3, 5] {
            assert_eq!(d.label(v), 5);
        }
        assert_eq!(d.label(4), 4);
        assert!(!d.absorb(2, 5));
    }

    #[test]
    fn peek_matches_find() {
        let mut d = LabeledDsu::new(8);
        for v in 1..8 {
            d.absorb(v, v - 1);
        }
        for v in 0..8 {
            assert_eq!(d.label_peek(v), 0);
            assert_eq!(d.label(v), 0);
        }
    }
}
