use super::{finish, PartState, StrategyConfig, StrategyOutcome};
use crate::arith::even_coprime_counts_all;
use crate::sieve::{stream_squarefree, FactorList, DEFAULT_SEGMENT};

/// Odd vertices `≤ n` in most-constrained-first order: ascending number of
/// coprime even vertices `C(ℓ, n)`, ties by ascending vertex. Returns
/// `(ℓ, C(ℓ, n))` pairs.
pub fn mcf_order(n: u64) -> Vec<(u64, u64)> {
    sorted_counts(n)
        .into_iter()
        .map(|(f, c)| (f.value(), c))
        .collect()
}

fn sorted_counts(n: u64) -> Vec<(FactorList, u64)> {
    let mut counts = even_coprime_counts_all(n);
    counts.sort_by_key(|(f, c)| (*c, f.value()));
    counts
}

/// Most-constrained-first cover: odd vertices in [`mcf_order`], each to the
/// least admissible even vertex.
pub fn run_mcf(n: u64) -> StrategyOutcome {
    assert!(n >= 2, "clique covers need n >= 2");
    let mut evens: Vec<PartState> = stream_squarefree(2, n, DEFAULT_SEGMENT)
        .filter(|f| f.is_even())
        .map(|f| PartState::new(&f))
        .collect();
    let mut unassigned = Vec::new();
    for (ell, _) in sorted_counts(n) {
        match evens.iter_mut().find(|p| p.admits(ell.primes())) {
            Some(part) => part.assign(&ell),
            None => unassigned.push(ell.value()),
        }
    }
    unassigned.sort_unstable();
    let parts = evens.into_iter().map(PartState::into_part).collect();
    finish(n, StrategyConfig::most_constrained_first(), parts, unassigned)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::validate_cover;

    #[test]
    fn fifteen_order_and_assignment() {
        let order: Vec<u64> = mcf_order(15).into_iter().map(|(l, _)| l).collect();
        assert_eq!(order, vec![15, 3, 5, 7, 1, 11, 13]);
        let counts: Vec<u64> = mcf_order(15).into_iter().map(|(_, c)| c).collect();
        assert_eq!(counts, vec![2, 3, 3, 3, 4, 4, 4]);

        let cover = run_mcf(15).unwrap();
        let a = cover.assignment();
        let expected = [(15, 2), (3, 10), (5, 6), (7, 2), (1, 2), (11, 2), (13, 2)];
        for (ell, m) in expected {
            assert_eq!(a[&ell], m, "ell = {ell}");
        }
        assert_eq!(a.len(), 7);
    }

    #[test]
    fn two_vertices() {
        let cover = run_mcf(2).unwrap();
        assert_eq!(cover.parts()[0].vertices(), vec![1, 2]);
    }

    #[test]
    fn valid_for_small_n() {
        for n in 2..=1500 {
            let cover = run_mcf(n).unwrap_or_else(|f| panic!("{f}"));
            assert!(validate_cover(&cover).unwrap().pass, "n = {n}");
        }
    }
}
