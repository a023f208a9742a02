use crate::error::Result;
use crate::sieve::{primes_up_to, SquarefreeTable};

/// Fixed-width bitset over vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Bits {
    words: Vec<u64>,
}

impl Bits {
    pub fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut b = Self::new(len);
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn and(&self, other: &Bits) -> Bits {
        Bits {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn and_not_assign(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

/// Complement of the squarefree graph: squarefree vertices `≤ n`, adjacent
/// when they share a prime. Vertex 1 is isolated and no vertex is adjacent
/// to itself.
#[derive(Debug, Clone)]
pub struct ShareFactorGraph {
    n: u64,
    vertices: Vec<u64>,
    adjacency: Vec<Bits>,
}

impl ShareFactorGraph {
    pub fn new(n: u64) -> Result<Self> {
        let vertices: Vec<u64> = SquarefreeTable::build(1, n.max(1))?.iter().collect();
        let mut adjacency = vec![Bits::new(vertices.len()); vertices.len()];
        for p in primes_up_to(n) {
            let members: Vec<usize> = (0..vertices.len()).filter(|&i| vertices[i] % p == 0).collect();
            for &a in &members {
                for &b in &members {
                    if a != b {
                        adjacency[a].insert(b);
                    }
                }
            }
        }
        Ok(Self { n, vertices, adjacency })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Squarefree vertices, ascending.
    pub fn vertices(&self) -> &[u64] {
        &self.vertices
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].count()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains(b)
    }

    /// Neighbours of vertex index `i`, ascending.
    pub fn neighbours(&self, i: usize) -> Vec<usize> {
        self.adjacency[i].iter().collect()
    }

    pub(crate) fn adjacency(&self) -> &[Bits] {
        &self.adjacency
    }

    pub fn index_of(&self, v: u64) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::gcd;

    #[test]
    fn adjacency_is_shared_factor() {
        let g = ShareFactorGraph::new(60).unwrap();
        let vs = g.vertices().to_vec();
        for (i, &a) in vs.iter().enumerate() {
            for (j, &b) in vs.iter().enumerate() {
                assert_eq!(g.adjacent(i, j), i != j && gcd(a, b) > 1, "{a} {b}");
            }
        }
        assert_eq!(g.degree(g.index_of(1).unwrap()), 0);
        assert_eq!(g.degree(g.index_of(59).unwrap()), 0);
        assert!(g.index_of(4).is_none());
    }

    #[test]
    fn bits_ops() {
        let mut a = Bits::full(130);
        assert_eq!(a.count(), 130);
        a.remove(0);
        a.remove(129);
        assert_eq!(a.first(), Some(1));
        let mut b = Bits::new(130);
        b.insert(5);
        b.insert(128);
        assert_eq!(a.and(&b).iter().collect::<Vec<_>>(), vec![5, 128]);
        a.and_not_assign(&b);
        assert!(!a.contains(5) && a.contains(6));
        assert!(Bits::new(10).is_empty());
    }
}
