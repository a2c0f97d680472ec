/// Union-find with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] as usize != v {
            let gp = self.parent[self.parent[v] as usize];
            self.parent[v] = gp;
            v = gp as usize;
        }
        v
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn connected(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;

    #[test]
    fn insertion_order_invariance() {
        // counts invariant under edge-insertion order permutation
        let edges: Vec<(usize, usize)> = vec![(0, 1), (2, 3), (3, 4), (6, 7), (1, 2)];
        let count = |order: &[(usize, usize)]| {
            let mut uf = UnionFind::new(8);
            for &(a, b) in order {
                uf.union(a, b);
            }
            (0..8).filter(|&v| uf.find(v) == v).count()
        };
        let base = count(&edges);
        let mut rng = crate::rng::job_rng(5, 0);
        for _ in 0..10 {
            let mut shuffled = edges.clone();
            shuffled.shuffle(&mut rng);
            assert_eq!(count(&shuffled), base);
        }
        assert_eq!(base, 3); // {0..4}, {5}, {6,7}
    }
}
