use serde::{Deserialize, Serialize};

use super::graph::{Bits, ShareFactorGraph};
use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::sieve::{count_even_squarefree, SquarefreeTable};

/// Work limits; exceeding one is a refusal, never a partial answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    pub max_n: u64,
    pub max_nodes: u64,
    pub max_witnesses: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self {
            max_n: 5000,
            max_nodes: 200_000_000,
            max_witnesses: 100_000,
        }
    }
}

/// Initial vertex order for the coloring bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexOrder {
    /// Even vertices ascending, then odd vertices ascending.
    EvensFirst,
    /// Reverse of the min-degree removal order.
    Degeneracy,
}

/// A maximum independent set of the squarefree graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependentSet {
    pub n: u64,
    pub size: u64,
    pub witness: Vec<u64>,
    /// Branch-and-bound nodes expanded.
    pub nodes: u64,
}

struct Search<'a> {
    adj: &'a [Bits],
    best: usize,
    best_set: Vec<usize>,
    nodes: u64,
    limits: SearchLimits,
    enumerate: bool,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Greedy sequential coloring of `p` in index order; returns the
    /// vertices with their (nondecreasing) colors.
    fn color(&self, p: &Bits) -> (Vec<usize>, Vec<usize>) {
        let mut uncolored = p.clone();
        let mut order = Vec::new();
        let mut colors = Vec::new();
        let mut k = 0;
        while !uncolored.is_empty() {
            k += 1;
            let mut q = uncolored.clone();
            while let Some(v) = q.first() {
                uncolored.remove(v);
                q.remove(v);
                q.and_not_assign(&self.adj[v]);
                order.push(v);
                colors.push(k);
            }
        }
        (order, colors)
    }

    fn record(&mut self, r: &[usize]) -> Result<()> {
        if self.enumerate {
            if r.len() == self.best {
                if self.found.len() >= self.limits.max_witnesses {
                    return Err(Error::ResourceLimit(format!(
                        "more than {} maximum witnesses",
                        self.limits.max_witnesses
                    )));
                }
                let mut c = r.to_vec();
                c.sort_unstable();
                self.found.push(c);
            }
        } else if r.len() > self.best {
            self.best = r.len();
            self.best_set = r.to_vec();
        }
        Ok(())
    }

    fn expand(&mut self, r: &mut Vec<usize>, mut p: Bits) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            return Err(Error::ResourceLimit(format!(
                "branch and bound exceeded {} nodes",
                self.limits.max_nodes
            )));
        }
        let (order, colors) = self.color(&p);
        for i in (0..order.len()).rev() {
            let bound = r.len() + colors[i];
            if bound < self.best || (!self.enumerate && bound == self.best) {
                return Ok(());
            }
            let v = order[i];
            let next = p.and(&self.adj[v]);
            r.push(v);
            if next.is_empty() {
                self.record(r)?;
            } else {
                self.expand(r, next)?;
            }
            r.pop();
            p.remove(v);
        }
        Ok(())
    }
}

/// Non-isolated vertices of the share-factor graph in search order, with
/// their adjacency re-indexed to that order.
struct Core {
    values: Vec<u64>,
    adj: Vec<Bits>,
}

fn build_core(g: &ShareFactorGraph, order: VertexOrder) -> Core {
    let active: Vec<usize> = (0..g.vertices().len()).filter(|&i| g.degree(i) > 0).collect();
    let ordered: Vec<usize> = match order {
        VertexOrder::EvensFirst => {
            let (mut even, odd): (Vec<usize>, Vec<usize>) =
                active.iter().partition(|&&i| g.vertices()[i] % 2 == 0);
            even.extend(odd);
            even
        }
        VertexOrder::Degeneracy => {
            let mut degree: Vec<usize> = (0..g.vertices().len()).map(|i| g.degree(i)).collect();
            let mut alive = active.clone();
            let mut removed = Vec::with_capacity(active.len());
            while !alive.is_empty() {
                let (pos, &v) = alive
                    .iter()
                    .enumerate()
                    .min_by_key(|(_, &v)| (degree[v], v))
                    .expect("nonempty");
                alive.swap_remove(pos);
                removed.push(v);
                for &u in &alive {
                    if g.adjacent(u, v) {
                        degree[u] -= 1;
                    }
                }
            }
            removed.reverse();
            removed
        }
    };
    let mut position = vec![usize::MAX; g.vertices().len()];
    for (k, &i) in ordered.iter().enumerate() {
        position[i] = k;
    }
    let adj = ordered
        .iter()
        .map(|&i| {
            let mut b = Bits::new(ordered.len());
            for j in g.adjacency()[i].iter() {
                b.insert(position[j]);
            }
            b
        })
        .collect();
    Core {
        values: ordered.iter().map(|&i| g.vertices()[i]).collect(),
        adj,
    }
}

/// Greedy clique from the highest-degree vertices, used as the initial
/// lower bound.
fn heuristic_clique(adj: &[Bits]) -> Vec<usize> {
    let mut starts: Vec<usize> = (0..adj.len()).collect();
    starts.sort_by_key(|&v| std::cmp::Reverse(adj[v].count()));
    let mut best = Vec::new();
    for &s in starts.iter().take(20) {
        let mut clique = vec![s];
        let mut cand = adj[s].clone();
        while !cand.is_empty() {
            let u = cand
                .iter()
                .max_by_key(|&u| (adj[u].and(&cand).count(), std::cmp::Reverse(u)))
                .expect("nonempty");
            clique.push(u);
            cand = cand.and(&adj[u]);
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best
}

fn check_n(n: u64, limits: &SearchLimits) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("oracle needs n >= 2, got {n}")));
    }
    if n > limits.max_n {
        return Err(Error::ResourceLimit(format!(
            "exact search limited to n <= {}",
            limits.max_n
        )));
    }
    Ok(())
}

fn max_clique(core: &Core, limits: SearchLimits) -> Result<(Vec<usize>, u64)> {
    let seed = heuristic_clique(&core.adj);
    let mut s = Search {
        adj: &core.adj,
        best: seed.len(),
        best_set: seed,
        nodes: 0,
        limits,
        enumerate: false,
        found: Vec::new(),
    };
    if !core.adj.is_empty() {
        s.expand(&mut Vec::new(), Bits::full(core.adj.len()))?;
    }
    Ok((s.best_set, s.nodes))
}

/// Exact independence number of the squarefree graph at `n`, with one
/// witness, found as a maximum clique of the share-factor graph.
pub fn max_independent_set_exact(n: u64) -> Result<IndependentSet> {
    max_independent_set_with(n, VertexOrder::EvensFirst, SearchLimits::default())
}

pub fn max_independent_set_with(
    n: u64,
    order: VertexOrder,
    limits: SearchLimits,
) -> Result<IndependentSet> {
    check_n(n, &limits)?;
    let g = ShareFactorGraph::new(n)?;
    let core = build_core(&g, order);
    let (best, nodes) = max_clique(&core, limits)?;
    let mut witness: Vec<u64> = if best.is_empty() {
        // only isolated vertices: any single vertex other than 1
        vec![2]
    } else {
        best.iter().map(|&i| core.values[i]).collect()
    };
    witness.sort_unstable();
    Ok(IndependentSet {
        n,
        size: witness.len() as u64,
        witness,
        nodes,
    })
}

/// One maximum independent set, labelled with `p` when it is exactly the
/// set of squarefree multiples of the prime `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFamily {
    pub members: Vec<u64>,
    pub prime: Option<u64>,
}

/// Every maximum independent set at `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFamilies {
    pub n: u64,
    pub size: u64,
    pub even_count: u64,
    /// Whether the even vertices form a maximum independent set.
    pub evens_maximum: bool,
    /// The even vertices are the only maximum independent set.
    pub unique: bool,
    pub families: Vec<WitnessFamily>,
}

impl WitnessFamilies {
    /// Maximum independent sets other than the even vertices.
    pub fn alternatives(&self) -> impl Iterator<Item = &WitnessFamily> {
        self.families.iter().filter(|f| f.prime != Some(2))
    }
}

fn label(members: &[u64], multiples: impl Fn(u64) -> Vec<u64>) -> Option<u64> {
    let g = members.iter().fold(0, |acc, &m| gcd(acc, m));
    if g <= 1 {
        return None;
    }
    let p = (2..=g).find(|d| g % d == 0).expect("g > 1");
    (multiples(p) == members).then_some(p)
}

/// Enumerates all maximum independent sets at `n`. The vertex 1 is not
/// counted as a one-element independent set, so at `n = 2` the answer is
/// `{2}` alone.
pub fn count_maximum_witness_families(n: u64) -> Result<WitnessFamilies> {
    let limits = SearchLimits {
        max_n: 200,
        ..SearchLimits::default()
    };
    check_n(n, &limits)?;
    let g = ShareFactorGraph::new(n)?;
    let core = build_core(&g, VertexOrder::EvensFirst);
    let (best, nodes) = max_clique(&core, limits)?;
    let mut raw: Vec<Vec<u64>> = if best.len() <= 1 {
        g.vertices().iter().filter(|&&v| v != 1).map(|&v| vec![v]).collect()
    } else {
        let mut s = Search {
            adj: &core.adj,
            best: best.len(),
            best_set: best,
            nodes,
            limits,
            enumerate: true,
            found: Vec::new(),
        };
        s.expand(&mut Vec::new(), Bits::full(core.adj.len()))?;
        s.found
            .into_iter()
            .map(|c| {
                let mut v: Vec<u64> = c.iter().map(|&i| core.values[i]).collect();
                v.sort_unstable();
                v
            })
            .collect()
    };
    raw.sort();
    let table = SquarefreeTable::build(1, n)?;
    let multiples = |p: u64| table.iter().filter(|m| m % p == 0).collect::<Vec<u64>>();
    let families: Vec<WitnessFamily> = raw
        .into_iter()
        .map(|members| WitnessFamily {
            prime: label(&members, multiples),
            members,
        })
        .collect();
    let size = families[0].members.len() as u64;
    let even_count = count_even_squarefree(n);
    let evens_maximum = families.iter().any(|f| f.prime == Some(2));
    Ok(WitnessFamilies {
        n,
        size,
        even_count,
        evens_maximum,
        unique: evens_maximum && families.len() == 1,
        families,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn primes_of(w: &WitnessFamilies) -> Vec<Option<u64>> {
        w.families.iter().map(|f| f.prime).collect()
    }

    #[test]
    fn small_examples() {
        let s = max_independent_set_exact(15).unwrap();
        assert_eq!(s.size, 4);
        let s = max_independent_set_exact(2).unwrap();
        assert_eq!((s.size, s.witness.clone()), (1, vec![2]));
        let s = max_independent_set_exact(21).unwrap();
        assert_eq!(s.size, count_even_squarefree(21));
        assert!(max_independent_set_exact(1).is_err());
        assert!(matches!(max_independent_set_exact(10_000), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn witness_is_pairwise_sharing() {
        for n in [30u64, 77, 150] {
            let s = max_independent_set_exact(n).unwrap();
            for (i, &a) in s.witness.iter().enumerate() {
                for &b in &s.witness[i + 1..] {
                    assert!(gcd(a, b) > 1);
                }
            }
        }
    }

    #[test]
    fn orders_agree() {
        for n in 2..=90 {
            let a = max_independent_set_with(n, VertexOrder::EvensFirst, SearchLimits::default()).unwrap();
            let b = max_independent_set_with(n, VertexOrder::Degeneracy, SearchLimits::default()).unwrap();
            assert_eq!(a.size, b.size, "n={n}");
            assert_eq!(a.size, count_even_squarefree(n), "n={n}");
        }
    }

    #[test]
    fn node_limit_refuses() {
        let tight = SearchLimits {
            max_nodes: 0,
            ..SearchLimits::default()
        };
        let r = max_independent_set_with(200, VertexOrder::Degeneracy, tight);
        assert!(matches!(r, Err(Error::ResourceLimit(_))), "{r:?}");
        assert!(max_independent_set_with(200, VertexOrder::Degeneracy, SearchLimits::default()).is_ok());
    }

    #[test]
    fn witness_families() {
        let w = count_maximum_witness_families(5).unwrap();
        assert!(!w.unique);
        assert_eq!(primes_of(&w), vec![Some(2), Some(3), Some(5)]);
        let w = count_maximum_witness_families(10).unwrap();
        assert!(w.unique);
        let w = count_maximum_witness_families(21).unwrap();
        assert!(!w.unique);
        assert!(w.alternatives().any(|f| f.prime == Some(3)));
        assert!(count_maximum_witness_families(2).unwrap().unique);
        assert_eq!(count_maximum_witness_families(3).unwrap().families.len(), 2);
    }
}
