use super::{finish, PartState, StrategyConfig, StrategyOutcome};
use crate::sieve::{stream_squarefree, FactorList, DEFAULT_SEGMENT};

/// Greedy cover: odd vertices in increasing order, each to the least even
/// vertex still admitting it. Parts grow without limit.
pub fn run_greedy(n: u64) -> StrategyOutcome {
    assert!(n >= 2, "clique covers need n >= 2");
    let mut evens: Vec<PartState> = Vec::new();
    let mut odds: Vec<FactorList> = Vec::new();
    for f in stream_squarefree(1, n, DEFAULT_SEGMENT) {
        if f.is_even() {
            evens.push(PartState::new(&f));
        } else {
            odds.push(f);
        }
    }
    let mut unassigned = Vec::new();
    for ell in &odds {
        match evens.iter_mut().find(|p| p.admits(ell.primes())) {
            Some(part) => part.assign(ell),
            None => unassigned.push(ell.value()),
        }
    }
    let parts = evens.into_iter().map(PartState::into_part).collect();
    finish(n, StrategyConfig::greedy(), parts, unassigned)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::validate_cover;

    #[test]
    fn two_vertices() {
        let cover = run_greedy(2).unwrap();
        assert_eq!(cover.part_count(), 1);
        assert_eq!(cover.parts()[0].vertices(), vec![1, 2]);
    }

    #[test]
    fn hundred_rows() {
        let cover = run_greedy(100).unwrap();
        assert_eq!(cover.part(6).unwrap().vertices(), vec![6, 35]);
        assert_eq!(cover.part(14).unwrap().vertices(), vec![14, 15]);
        assert_eq!(cover.part(34).unwrap().vertices(), vec![34, 55, 57, 91]);
        let two = cover.part(2).unwrap();
        assert_eq!(two.members[0], 1);
        assert_eq!(two.members.len(), 1 + 24);
    }

    #[test]
    fn valid_up_to_two_thousand() {
        for n in 2..=2000 {
            let cover = run_greedy(n).unwrap_or_else(|f| panic!("{f}"));
            assert!(validate_cover(&cover).unwrap().pass, "n = {n}");
        }
    }
}
