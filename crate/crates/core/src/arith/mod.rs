//! Exact and closed-form evaluation of the degree-type quantities of the
//! squarefree graph.
//!
//! Naming used throughout:
//!
//! * density factor `f(ℓ) = ∏_{p|ℓ} p/(p+1)`;
//! * expected vertex count `v(n) = 6n/π²`;
//! * degree `deg(ℓ, n)`: squarefree `m ≤ ⌊n⌋` coprime to `ℓ`;
//! * even-coprime count `C(ℓ, n)`: even squarefree `m ≤ n` coprime to odd `ℓ`,
//!   with estimate `c(ℓ, n) = f(ℓ)v(n)/3` and ratio `F(ℓ, n) = C(ℓ,n)/c(1,n)`.
//!
//! `deg` counts `ℓ` itself when `ℓ = 1` (1 is coprime to everything); the
//! literal count of coprime squarefree `m` is used everywhere.

mod rational;

pub use rational::ExactRational;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sieve::{self, FactorList, MobiusTable, DEFAULT_SEGMENT};

/// `π²` in double precision.
pub const PI_SQUARED: f64 = std::f64::consts::PI * std::f64::consts::PI;

/// Above this `n`, [`even_coprime_counts_all`] switches from the shared
/// divisor-count table to independent per-vertex evaluations.
pub const ALL_COUNTS_TABLE_LIMIT: u64 = 1 << 28;

/// `f(ℓ) = ∏_{p|ℓ} (1 − 1/(p+1))`, exactly.
pub fn density_factor(factors: &FactorList) -> Result<ExactRational> {
    let mut acc = ExactRational::ONE;
    for &p in factors.primes() {
        let term = ExactRational::new(u128::from(p), u128::from(p) + 1)?;
        acc = acc.checked_mul(&term)?;
    }
    Ok(acc)
}

/// `v(n) = 6n/π²`.
pub fn expected_vertices(n: f64) -> f64 {
    6.0 * n / PI_SQUARED
}

/// `c(ℓ, n) = f(ℓ)·v(n)/3` for a precomputed `f(ℓ)`.
pub fn expected_even_coprime(f: &ExactRational, n: f64) -> f64 {
    f.to_f64() * expected_vertices(n) / 3.0
}

/// Exact degree of a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeResult {
    pub ell: u64,
    pub n_floor: u64,
    pub value: u64,
}

/// Inclusion–exclusion degree counter with a reusable Möbius table.
///
/// `deg(ℓ, n) = Σ_{a|ℓ} Σ_{(b,ℓ)=1} μ(a)μ(b)⌊n/(ab²)⌋`, where the inner sum
/// stops at `b ≤ √(n/a)` because the floor vanishes beyond it.
#[derive(Debug, Clone)]
pub struct DegreeCounter {
    mobius: MobiusTable,
}

impl DegreeCounter {
    /// Counter able to evaluate any `n ≤ max_n`.
    pub fn new(max_n: u64) -> Self {
        Self {
            mobius: MobiusTable::new(max_n.isqrt().max(1)),
        }
    }

    pub fn max_n(&self) -> u64 {
        let r = self.mobius.limit();
        (r + 1) * (r + 1) - 1
    }

    /// Degree for integer `n` (already floored).
    pub fn count(&self, ell: &FactorList, n: u64) -> u64 {
        if n == 0 {
            return 0;
        }
        assert!(n <= self.max_n(), "degree counter built for n <= {}", self.max_n());
        let ell_value = ell.value();
        let root = n.isqrt();
        // squarefree b ≤ √n coprime to ℓ, with μ(b)
        let mut bs: Vec<(u64, i8)> = Vec::with_capacity(root as usize);
        for b in 1..=root {
            let mu = self.mobius.mu(b);
            if mu != 0 && gcd(b, ell_value) == 1 {
                bs.push((b, mu));
            }
        }
        let mut total: i128 = 0;
        for (a, mu_a) in ell.divisors_with_mobius() {
            if a > n {
                continue;
            }
            let na = n / a;
            let mut inner: i128 = 0;
            for &(b, mu_b) in &bs {
                let b2 = b * b;
                if b2 > na {
                    break;
                }
                inner += i128::from(mu_b) * i128::from(na / b2);
            }
            total += i128::from(mu_a) * inner;
        }
        debug_assert!(total >= 0);
        total as u64
    }

    /// Degree for real `n`, flooring once: counts use `⌊n⌋`.
    pub fn degree(&self, ell: &FactorList, n: f64) -> DegreeResult {
        let n_floor = floor_count(n);
        DegreeResult {
            ell: ell.value(),
            n_floor,
            value: self.count(ell, n_floor),
        }
    }

    /// `C(ℓ, n) = deg(2ℓ, ⌊n/2⌋)` for odd squarefree `ℓ`.
    pub fn even_coprime(&self, ell: &FactorList, n: u64) -> Result<u64> {
        if ell.is_even() {
            return Err(Error::InvalidArgument(format!(
                "even-coprime count needs odd ell, got {}",
                ell.value()
            )));
        }
        Ok(self.count(&ell.doubled(), n / 2))
    }
}

fn floor_count(n: f64) -> u64 {
    assert!(n.is_finite() && n >= 0.0, "vertex bound must be finite and >= 0");
    n.floor() as u64
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `deg(ℓ, n)`: number of squarefree `m ≤ ⌊n⌋` coprime to `ℓ`.
pub fn degree(ell: &FactorList, n: f64) -> DegreeResult {
    let n_floor = floor_count(n);
    DegreeCounter::new(n_floor).degree(ell, n)
}

/// `C(ℓ, n)`, the number of even squarefree `m ≤ n` coprime to odd `ℓ`.
pub fn even_coprime_count(ell: &FactorList, n: u64) -> Result<u64> {
    DegreeCounter::new(n / 2).even_coprime(ell, n)
}

/// `C(ℓ, n)` by scanning every even squarefree `m ≤ n`. Cross-check only.
pub fn even_coprime_count_direct(ell: &FactorList, n: u64) -> Result<u64> {
    if ell.is_even() {
        return Err(Error::InvalidArgument(format!(
            "even-coprime count needs odd ell, got {}",
            ell.value()
        )));
    }
    if n < 2 {
        return Ok(0);
    }
    let table = sieve::SquarefreeTable::build(1, n)?;
    Ok(table
        .iter()
        .filter(|&m| m % 2 == 0 && gcd(m, ell.value()) == 1)
        .count() as u64)
}

/// `F(ℓ, n) = C(ℓ, n)/c(1, n)` where `c(1, n) = 2n/π²`.
pub fn even_coprime_ratio(ell: &FactorList, n: u64) -> Result<f64> {
    Ok(ratio_from_count(even_coprime_count(ell, n)?, n as f64))
}

/// `C/c(1, n)` for an already-computed count.
pub fn ratio_from_count(count: u64, n: f64) -> f64 {
    if count == 0 {
        return 0.0;
    }
    count as f64 / (expected_vertices(n) / 3.0)
}

/// Running table of `E_d = #{even squarefree m seen so far : d | m}` over
/// odd squarefree `d`, from which `C` follows by Möbius inversion:
/// `C(ℓ) = Σ_{d|ℓ} μ(d)·E_d`.
#[derive(Debug, Clone)]
pub struct EvenDivisorCounts {
    counts: Vec<u32>,
    evens: u64,
}

impl EvenDivisorCounts {
    /// Table for odd `ℓ ≤ max_ell`.
    pub fn new(max_ell: u64) -> Self {
        Self {
            counts: vec![0; max_ell as usize + 1],
            evens: 0,
        }
    }

    /// Records one even squarefree vertex.
    pub fn add_even(&mut self, m: &FactorList) {
        debug_assert!(m.is_even() && m.primes()[0] == 2);
        let odd = FactorList::from_parts(m.value() / 2, &m.primes()[1..]);
        let limit = self.counts.len() as u64;
        for (d, _) in odd.divisors_with_mobius() {
            if d < limit {
                self.counts[d as usize] += 1;
            }
        }
        self.evens += 1;
    }

    /// Number of even vertices recorded.
    pub fn evens(&self) -> u64 {
        self.evens
    }

    /// `C(ℓ)` against the even vertices recorded so far.
    pub fn coprime_count(&self, ell: &FactorList) -> u64 {
        let mut total: i64 = 0;
        for (d, mu) in ell.divisors_with_mobius() {
            total += i64::from(mu) * i64::from(self.counts[d as usize]);
        }
        debug_assert!(total >= 0);
        total as u64
    }
}

/// `(ℓ, C(ℓ, n))` for every odd squarefree `ℓ ≤ n`, ascending in `ℓ`.
///
/// One streaming pass over the even vertices fills an [`EvenDivisorCounts`];
/// a second pass evaluates each odd vertex. Past
/// [`ALL_COUNTS_TABLE_LIMIT`] the per-vertex inclusion–exclusion is used
/// instead, in parallel.
pub fn even_coprime_counts_all(n: u64) -> Vec<(FactorList, u64)> {
    let odds: Vec<FactorList> = sieve::stream_squarefree(1, n, DEFAULT_SEGMENT)
        .filter(|f| !f.is_even())
        .collect();
    if n > ALL_COUNTS_TABLE_LIMIT {
        let counter = DegreeCounter::new(n / 2);
        return odds
            .into_par_iter()
            .map(|ell| {
                let c = counter.even_coprime(&ell, n).expect("odd by construction");
                (ell, c)
            })
            .collect();
    }
    let mut table = EvenDivisorCounts::new(n);
    for m in sieve::stream_squarefree(2, n, DEFAULT_SEGMENT).filter(|f| f.is_even()) {
        table.add_even(&m);
    }
    odds.into_iter()
        .map(|ell| {
            let c = table.coprime_count(&ell);
            (ell, c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::{primes_up_to, SquarefreeTable};

    fn fl(m: u64) -> FactorList {
        sieve::factor_distinct(m, &primes_up_to(100_000))
    }

    #[test]
    fn density_factor_examples() {
        assert_eq!(density_factor(&fl(2)).unwrap(), ExactRational::new(2, 3).unwrap());
        assert_eq!(density_factor(&fl(1)).unwrap(), ExactRational::ONE);
        assert_eq!(density_factor(&fl(15)).unwrap(), ExactRational::new(5, 8).unwrap());
        let big = FactorList::from_primes(&[3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53]);
        assert!(density_factor(&big).is_ok());
    }

    #[test]
    fn expected_vertices_examples() {
        assert_eq!(expected_vertices(0.0), 0.0);
        assert!((expected_vertices(PI_SQUARED) - 6.0).abs() < 1e-12);
        assert!((expected_vertices(15.0) - 9.118_906_527_810_4).abs() < 1e-10);
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree(&fl(2), 15.0).value, 7);
        assert_eq!(degree(&fl(1), 15.0).value, 11);
        let d = degree(&fl(2), 15.5);
        assert_eq!((d.n_floor, d.value), (15, 7));
        // ℓ = 6, n = 100: squarefree m ≤ 100 coprime to 6, enumerated directly
        let table = SquarefreeTable::build(1, 100).unwrap();
        let direct = table.iter().filter(|m| gcd(*m, 6) == 1).count() as u64;
        assert_eq!(degree(&fl(6), 100.0).value, direct);
        assert_eq!(direct, 31);
        assert_eq!(degree(&fl(6), 0.5).value, 0);
    }

    #[test]
    fn even_coprime_examples() {
        assert_eq!(even_coprime_count(&fl(15), 15).unwrap(), 2);
        assert_eq!(even_coprime_count(&fl(3), 15).unwrap(), 3);
        assert_eq!(even_coprime_count(&fl(1), 15).unwrap(), 4);
        assert!(matches!(
            even_coprime_count(&fl(6), 15),
            Err(Error::InvalidArgument(_))
        ));
        assert!(even_coprime_count_direct(&fl(4), 15).is_err());
        assert_eq!(even_coprime_count_direct(&fl(15), 15).unwrap(), 2);
    }

    #[test]
    fn ratio_examples() {
        let one = even_coprime_ratio(&fl(1), 15).unwrap();
        assert!((one - 4.0 / (30.0 / PI_SQUARED)).abs() < 1e-12);
        assert!((one - 1.315_947_253_478_581).abs() < 1e-9);
        let fifteen = even_coprime_ratio(&fl(15), 15).unwrap();
        assert!((fifteen - 0.657_973_626_739_290_6).abs() < 1e-9);
        assert_eq!(ratio_from_count(0, 15.0), 0.0);
    }

    #[test]
    fn scaling_identity() {
        for n in [1.0, 7.5, 1e6, 1e10] {
            let c1 = expected_vertices(n) / 3.0;
            let c2 = expected_vertices(2.0 * n) / 3.0;
            assert!((c2 - 2.0 * c1).abs() <= 1e-12 * c2);
        }
    }

    #[test]
    fn doubling_factor_identity() {
        let two_thirds = ExactRational::new(2, 3).unwrap();
        let table = SquarefreeTable::build(1, 2001).unwrap();
        for ell in table.iter().filter(|m| m % 2 == 1) {
            let f = density_factor(&fl(ell)).unwrap();
            let f2 = density_factor(&fl(2 * ell)).unwrap();
            assert_eq!(f2, f.checked_mul(&two_thirds).unwrap());
        }
    }

    #[test]
    fn multiplicativity_on_coprime_pairs() {
        let table = SquarefreeTable::build(1, 10_000).unwrap();
        let sf: Vec<u64> = table.iter().collect();
        let mut checked = 0;
        for (i, &a) in sf.iter().enumerate().step_by(37) {
            for &b in sf[i..].iter().step_by(53) {
                if gcd(a, b) != 1 {
                    continue;
                }
                let lhs = density_factor(&fl(a * b)).unwrap();
                let rhs = density_factor(&fl(a))
                    .unwrap()
                    .checked_mul(&density_factor(&fl(b)).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs, "{a} * {b}");
                checked += 1;
            }
        }
        assert!(checked > 500);
    }

    #[test]
    fn all_counts_agree_with_single_evaluations() {
        for n in [2u64, 3, 15, 100, 999, 4096] {
            let all = even_coprime_counts_all(n);
            for (ell, c) in &all {
                assert_eq!(*c, even_coprime_count(ell, n).unwrap(), "ell={} n={n}", ell.value());
            }
            assert_eq!(all.len() as u64, sieve::count_squarefree(n) - sieve::count_even_squarefree(n));
        }
    }
}
