use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{density_factor, expected_vertices, DegreeCounter};
use crate::error::{Error, Result};
use crate::report::VerificationReport;
use crate::sieve::{FactorList, SmallestPrimeFactor};

/// `2√n·∏_{p|ℓ}(1 + 1/√p) + 2^{ω(ℓ)}/2`.
pub fn degree_error_bound(ell: &FactorList, n: f64) -> f64 {
    let prod: f64 = ell.primes().iter().map(|&p| 1.0 + 1.0 / (p as f64).sqrt()).product();
    2.0 * n.sqrt() * prod + 0.5 * f64::from(1u32 << ell.omega())
}

/// One sampled `(ℓ, n)` with its error and bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeTrial {
    pub ell: u64,
    pub n: f64,
    pub error: f64,
    pub bound: f64,
}

impl DegreeTrial {
    pub fn evaluate(counter: &DegreeCounter, ell: &FactorList, n: f64) -> Result<Self> {
        let deg = counter.degree(ell, n).value as f64;
        let main = density_factor(ell)?.to_f64() * expected_vertices(n);
        Ok(Self {
            ell: ell.value(),
            n,
            error: (deg - main).abs(),
            bound: degree_error_bound(ell, n),
        })
    }
}

/// Checks the degree error bound on `trials` seeded random pairs: `n` is an
/// integer or half-integer in `[1, n_max]`, `ℓ` a squarefree number `≤ n`.
/// Reports the trial of least slack.
pub fn verify_degree_error(trials: usize, n_max: u64, seed: u64) -> Result<VerificationReport> {
    if trials == 0 || n_max < 1 {
        return Err(Error::InvalidArgument("need trials >= 1 and n_max >= 1".into()));
    }
    let spf = SmallestPrimeFactor::new(n_max.max(2))?;
    let counter = DegreeCounter::new(n_max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(trials);
    while pairs.len() < trials {
        let whole = rng.random_range(1..=n_max);
        let n = if whole < n_max && rng.random_bool(0.5) { whole as f64 + 0.5 } else { whole as f64 };
        let ell = rng.random_range(1..=whole);
        let (f, squarefree) = spf.factor(ell);
        if squarefree {
            pairs.push((f, n));
        }
    }
    let results: Vec<DegreeTrial> = pairs
        .par_iter()
        .map(|(ell, n)| DegreeTrial::evaluate(&counter, ell, *n))
        .collect::<Result<_>>()?;
    let worst = results
        .iter()
        .min_by(|a, b| (a.bound - a.error).total_cmp(&(b.bound - b.error)))
        .expect("trials >= 1");
    Ok(VerificationReport::new("degree-error", Some(n_max), worst.error, worst.bound)
        .witness(worst.ell)
        .witness(worst.n)
        .detail(format!("{trials} trials, seed {seed}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::{primes_up_to, factor_distinct, SquarefreeTable};

    fn fl(m: u64) -> FactorList {
        factor_distinct(m, &primes_up_to(1000))
    }

    #[test]
    fn examples() {
        let counter = DegreeCounter::new(20_000);
        let one = DegreeTrial::evaluate(&counter, &fl(1), 100.0).unwrap();
        assert_eq!(one.bound, 20.5);
        assert!(one.error <= one.bound);
        let t = DegreeTrial::evaluate(&counter, &fl(15), 10_000.0).unwrap();
        assert!(t.error <= t.bound);
        let table = SquarefreeTable::build(1, 10_000).unwrap();
        let direct = table.iter().filter(|m| m % 3 != 0 && m % 5 != 0).count() as u64;
        assert_eq!(counter.degree(&fl(15), 10_000.0).value, direct);
        let half = DegreeTrial::evaluate(&counter, &fl(2), 15.5).unwrap();
        assert!((half.error - (7.0 - 2.0 / 3.0 * expected_vertices(15.5))).abs() < 1e-12);
        assert!(half.error <= half.bound);
    }

    #[test]
    fn random_trials_hold() {
        let r = verify_degree_error(2000, 100_000, 11).unwrap();
        assert!(r.pass, "{}", r.summary());
        assert_eq!(r, verify_degree_error(2000, 100_000, 11).unwrap());
        assert!(verify_degree_error(0, 10, 1).is_err());
    }
}
