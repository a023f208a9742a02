use serde::{Deserialize, Serialize};

use crate::arith::{expected_vertices, EvenDivisorCounts};
use crate::report::VerificationReport;
use crate::sieve::{stream_squarefree, FactorList, DEFAULT_SEGMENT};

/// Fraction of `c(1, n)` used as the low-degree threshold.
pub const K_FACTOR: f64 = 0.672;

/// `K = 0.672·c(1, n) = 0.672·2n/π²`.
pub fn k_threshold(n: u64) -> f64 {
    K_FACTOR * expected_vertices(n as f64) / 3.0
}

/// `C(ℓ, n)` and `C(ℓ, 2n)` for every odd squarefree `ℓ ≤ n`, plus the
/// number of odd vertices. Shared by both halves of the slot check.
#[derive(Debug, Clone)]
pub struct SlotCounts {
    pub n: u64,
    pub odd_vertices: u64,
    /// `(ℓ, C(ℓ, n), C(ℓ, 2n))`, ascending in `ℓ`.
    pub rows: Vec<(u64, u64, u64)>,
}

impl SlotCounts {
    pub fn compute(n: u64) -> Self {
        let mut at_n = EvenDivisorCounts::new(n);
        let mut at_2n = EvenDivisorCounts::new(n);
        let mut odds = Vec::new();
        for m in stream_squarefree(1, 2 * n, DEFAULT_SEGMENT) {
            if m.is_even() {
                if m.value() <= n {
                    at_n.add_even(&m);
                }
                at_2n.add_even(&m);
            } else if m.value() <= n {
                odds.push(m);
            }
        }
        Self::from_tables(n, &odds, &at_n, &at_2n)
    }

    fn from_tables(
        n: u64,
        odds: &[FactorList],
        at_n: &EvenDivisorCounts,
        at_2n: &EvenDivisorCounts,
    ) -> Self {
        let rows = odds
            .iter()
            .map(|ell| (ell.value(), at_n.coprime_count(ell), at_2n.coprime_count(ell)))
            .collect();
        Self {
            n,
            odd_vertices: odds.len() as u64,
            rows,
        }
    }

    /// For each integer `1 ≤ k ≤ ⌊K⌋`, `#{ℓ : C(ℓ,n) ≤ k} ≤ k`. Returns the
    /// report for the tightest `k` (ties to the smallest).
    pub fn check_a(&self, k: f64) -> VerificationReport {
        let kmax = if k >= 1.0 { k.floor() as u64 } else { 0 };
        if kmax == 0 {
            return VerificationReport::new("main-a", Some(self.n), 0.0, 0.0)
                .detail("vacuous: no integer k in [1, K]");
        }
        let mut hist = vec![0u64; kmax as usize + 1];
        for &(_, c, _) in &self.rows {
            if c <= kmax {
                hist[c as usize] += 1;
            }
        }
        let mut best: Option<(i64, u64, u64)> = None;
        let mut running = hist[0];
        for k in 1..=kmax {
            running += hist[k as usize];
            let margin = k as i64 - running as i64;
            if best.is_none_or(|(m, _, _)| margin < m) {
                best = Some((margin, k, running));
            }
        }
        let (margin, k, count) = best.expect("kmax >= 1");
        VerificationReport::with_margin("main-a", Some(self.n), count as f64, k as f64, margin as f64)
            .witness(k)
            .detail(format!("k={k} count={count} K={kmax}"))
    }

    /// Integer thresholds `K` for which both checks pass, as an inclusive
    /// range `(lo, hi)`, with `hi = u64::MAX` when unbounded; empty when
    /// `lo > hi`. Check (a) holds exactly for
    /// `K` below the first `k` with `#{ℓ : C ≤ k} > k`; check (b) holds
    /// exactly for `K` at least the largest `C(ℓ, n)` among vertices whose
    /// share-count exceeds `C(ℓ, n)`.
    pub fn feasible_thresholds(&self) -> (u64, u64) {
        let total = self.rows.len();
        let mut hist = vec![0u64; total + 2];
        for &(_, c, _) in &self.rows {
            hist[(c as usize).min(total + 1)] += 1;
        }
        let mut hi = u64::MAX;
        let mut running = hist[0];
        for k in 1..=total {
            running += hist[k];
            if running > k as u64 {
                hi = k as u64 - 1;
                break;
            }
        }
        let lo = self
            .rows
            .iter()
            .filter(|&&(_, c, c2)| self.odd_vertices - c2 > c)
            .map(|&(_, c, _)| c)
            .max()
            .unwrap_or(0);
        (lo, hi)
    }

    /// For each `ℓ` with `C(ℓ, n) > K`: `#odd − C(ℓ, 2n) ≤ C(ℓ, n)`.
    pub fn check_b(&self, k: f64) -> VerificationReport {
        let mut best: Option<(i64, u64, u64, u64)> = None;
        for &(ell, c, c2) in &self.rows {
            if (c as f64) <= k {
                continue;
            }
            let share = self.odd_vertices - c2;
            let margin = c as i64 - share as i64;
            if best.is_none_or(|(m, _, _, _)| margin < m) {
                best = Some((margin, ell, share, c));
            }
        }
        match best {
            None => VerificationReport::new("main-b", Some(self.n), 0.0, 0.0)
                .detail("vacuous: no odd vertex with C > K"),
            Some((margin, ell, share, c)) => VerificationReport::with_margin(
                "main-b",
                Some(self.n),
                share as f64,
                c as f64,
                margin as f64,
            )
            .witness(ell)
            .detail(format!("ell={ell} share={share} C={c}")),
        }
    }
}

/// Low-degree count check at `n` with threshold `k`.
pub fn verify_main_a(n: u64, k: f64) -> VerificationReport {
    SlotCounts::compute(n).check_a(k)
}

/// Shared-factor count check at `n` with threshold `k`.
pub fn verify_main_b(n: u64, k: f64) -> VerificationReport {
    SlotCounts::compute(n).check_b(k)
}

/// Summary of [`sweep_main`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MainSweep {
    pub n_max: u64,
    pub checked: u64,
    /// Reports of least margin over all `n`, with `K = k_threshold(n)`.
    pub worst_a: VerificationReport,
    pub worst_b: VerificationReport,
    /// Failing reports with `K = k_threshold(n)`.
    pub failures: Vec<VerificationReport>,
    /// `n` at which no integer threshold makes both checks pass.
    pub infeasible: Vec<u64>,
}

impl MainSweep {
    /// Both checks pass at every `n` with `K = k_threshold(n)`.
    pub fn pass_fixed(&self) -> bool {
        self.failures.is_empty()
    }

    /// At every `n` some threshold makes both checks pass.
    pub fn pass_some_threshold(&self) -> bool {
        self.infeasible.is_empty()
    }

    /// Distinct `n` at which the fixed threshold fails.
    pub fn failing_n(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.failures.iter().filter_map(|r| r.n).collect();
        v.dedup();
        v
    }
}

/// Runs both checks with `K = k_threshold(n)` at every `1 ≤ n ≤ n_max`, and
/// records whether any integer threshold works, growing the divisor-count
/// tables incrementally.
pub fn sweep_main(n_max: u64) -> MainSweep {
    let mut at_n = EvenDivisorCounts::new(n_max);
    let mut at_2n = EvenDivisorCounts::new(n_max);
    let mut odds: Vec<FactorList> = Vec::new();
    let mut all: Vec<Option<FactorList>> = vec![None; 2 * n_max as usize + 1];
    for m in stream_squarefree(1, 2 * n_max, DEFAULT_SEGMENT) {
        let v = m.value() as usize;
        all[v] = Some(m);
    }
    let mut worst_a: Option<VerificationReport> = None;
    let mut worst_b: Option<VerificationReport> = None;
    let mut failures = Vec::new();
    let mut infeasible = Vec::new();
    for n in 1..=n_max {
        if let Some(m) = &all[n as usize] {
            if m.is_even() {
                at_n.add_even(m);
            } else {
                odds.push(m.clone());
            }
        }
        if let Some(m) = &all[2 * n as usize] {
            at_2n.add_even(m);
        }
        let counts = SlotCounts::from_tables(n, &odds, &at_n, &at_2n);
        let k = k_threshold(n);
        let (lo, hi) = counts.feasible_thresholds();
        if lo > hi {
            infeasible.push(n);
        }
        for (report, worst) in [(counts.check_a(k), &mut worst_a), (counts.check_b(k), &mut worst_b)] {
            if !report.pass {
                failures.push(report.clone());
            }
            let has_witness = !report.witnesses.is_empty();
            if has_witness && worst.as_ref().is_none_or(|w| report.margin < w.margin) {
                *worst = Some(report);
            }
        }
    }
    let placeholder = |s: &str| VerificationReport::new(s, Some(n_max), 0.0, 0.0).detail("vacuous");
    MainSweep {
        n_max,
        checked: n_max,
        worst_a: worst_a.unwrap_or_else(|| placeholder("main-a")),
        worst_b: worst_b.unwrap_or_else(|| placeholder("main-b")),
        failures,
        infeasible,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::gcd;
    use crate::sieve::SquarefreeTable;

    #[test]
    fn threshold_examples() {
        assert!((k_threshold(15) - 2.0426).abs() < 1e-4);
        assert_eq!(k_threshold(0), 0.0);
    }

    #[test]
    fn small_n_examples() {
        let counts = SlotCounts::compute(15);
        let a = counts.check_a(k_threshold(15));
        assert!(a.pass);
        assert_eq!(a.detail.as_deref().unwrap().split_whitespace().next(), Some("k=1"));
        // one odd vertex (15) with C ≤ 2
        assert_eq!(counts.rows.iter().filter(|r| r.1 <= 2).map(|r| r.0).collect::<Vec<_>>(), vec![15]);
        let b = counts.check_b(k_threshold(15));
        assert!(b.pass, "{}", b.summary());
        let three = counts.rows.iter().find(|r| r.0 == 3).unwrap();
        assert_eq!((three.1, counts.odd_vertices - three.2), (3, 2));
        assert!(verify_main_a(2, k_threshold(2)).pass);
        assert!(verify_main_b(2, k_threshold(2)).pass);
    }

    #[test]
    fn fixed_threshold_fails_at_22_but_three_works() {
        let counts = SlotCounts::compute(22);
        let b = counts.check_b(k_threshold(22));
        assert!(!b.pass);
        assert_eq!(b.witnesses, vec![crate::report::Witness::Int(15)]);
        assert_eq!((b.measured, b.bound), (4.0, 3.0));
        let (lo, hi) = counts.feasible_thresholds();
        assert!(lo <= 3 && 3 <= hi, "{lo}..{hi}");
        assert!(counts.check_a(3.0).pass && counts.check_b(3.0).pass);
        // ℓ = 15 shares a factor with 3, 5 and itself, so K must reach C(15, 15) = 2
        assert_eq!(SlotCounts::compute(15).feasible_thresholds().0, 2);
    }

    #[test]
    fn feasible_range_matches_brute_force() {
        for n in 2..200u64 {
            let counts = SlotCounts::compute(n);
            let (lo, hi) = counts.feasible_thresholds();
            for k in 0..=counts.rows.len() as u64 + 1 {
                let ok = counts.check_a(k as f64).pass && counts.check_b(k as f64).pass;
                assert_eq!(ok, lo <= k && k <= hi, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn doubling_identity_matches_direct_enumeration() {
        for n in [1u64, 2, 3, 10, 77, 500, 2000] {
            let table = SquarefreeTable::build(1, n).unwrap();
            let odd: Vec<u64> = table.iter().filter(|m| m % 2 == 1).collect();
            let counts = SlotCounts::compute(n);
            assert_eq!(counts.odd_vertices, odd.len() as u64);
            for &(ell, _, c2) in &counts.rows {
                let direct = odd.iter().filter(|&&m| gcd(m, ell) > 1).count() as u64;
                assert_eq!(counts.odd_vertices - c2, direct, "n={n} ell={ell}");
            }
        }
        // ℓ = 1 shares a factor with nothing
        let c = SlotCounts::compute(50);
        assert_eq!(c.odd_vertices - c.rows[0].2, 0);
    }

    #[test]
    fn even_vertices_below_2n_biject_with_odd_below_n() {
        for n in 1..300u64 {
            let t = SquarefreeTable::build(1, 2 * n).unwrap();
            let even = t.iter().filter(|m| m % 2 == 0).count();
            let odd = t.iter().filter(|&m| m <= n && m % 2 == 1).count();
            assert_eq!(even, odd);
        }
    }

    #[test]
    fn sweep_agrees_with_single_runs() {
        let sweep = sweep_main(600);
        assert!(sweep.pass_some_threshold(), "{:?}", sweep.infeasible);
        for n in [15u64, 22, 100, 377, 600] {
            let counts = SlotCounts::compute(n);
            let k = k_threshold(n);
            let fixed = counts.check_a(k).pass && counts.check_b(k).pass;
            assert_eq!(fixed, !sweep.failing_n().contains(&n), "n={n}");
        }
        assert_eq!(sweep.worst_b.margin < 0.0, !sweep.failures.is_empty());
    }
}
