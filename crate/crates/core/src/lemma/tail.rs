use serde::{Deserialize, Serialize};

use super::{EpsilonSet, ZETA3};
use crate::arith::PI_SQUARED;
use crate::error::{Error, Result};
use crate::report::VerificationReport;

/// Largest `t` at which the tail inequality is claimed.
pub const TAIL_T_MAX: f64 = 0.672;

/// Markov bound on `P{X ≤ s}` for `0 < X ≤ b` from `e_inv = E[1/X]`:
/// `(e_inv − 1/b)/(1/s − 1/b)`.
pub fn negative_moment_bound(e_inv: f64, b: f64, s: f64) -> Result<f64> {
    if !(s > 0.0 && s < b) {
        return Err(Error::Domain(format!("need 0 < s < b, got s={s}, b={b}")));
    }
    Ok((e_inv - 1.0 / b) / (1.0 / s - 1.0 / b))
}

/// Upper bound on the fraction of odd vertices with `F(ℓ, n) ≤ t`, split
/// over `3 | ℓ` and `3 ∤ ℓ`.
pub fn combined_tail_bound(t: f64, eps: &EpsilonSet) -> Result<f64> {
    let z = 91.0 * ZETA3;
    let a = (1.0 + eps.e) / ((1.0 - eps.c) * (1.0 - 4.0 * eps.a - 3.0 * eps.b)) * 16.0 * PI_SQUARED / z;
    let b = (1.0 + eps.d) / ((1.0 - eps.c) * (1.0 - eps.b)) * 12.0 * PI_SQUARED / z;
    let s3 = 0.75 * (1.0 + eps.c);
    let s1 = 1.0;
    let (den3, den1) = (1.0 / t - 1.0 / s3, 1.0 / t - 1.0 / s1);
    if !(t > 0.0) || den3 <= 0.0 || den1 <= 0.0 {
        return Err(Error::Domain(format!("t={t} outside the tail-bound domain")));
    }
    let w3 = 1.0 - 3.0 * (1.0 - eps.b) / (4.0 * (1.0 + eps.a));
    let w1 = 3.0 * (1.0 + eps.b) / (4.0 * (1.0 - eps.a));
    Ok((a - 1.0 / s3) / den3 * w3 + (b - 1.0) / den1 * w1)
}

/// Right-hand side the tail bound must stay below.
fn tail_limit(t: f64, eps: &EpsilonSet) -> f64 {
    t / (2.0 * (1.0 + eps.a))
}

/// Result of the two-pass grid check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailGrid {
    pub points: usize,
    /// Grid point of smallest relative margin `1 − bound/limit`.
    pub worst_t: f64,
    pub worst_value: f64,
    pub worst_limit: f64,
    pub worst_relative_margin: f64,
    /// Smallest absolute margin `limit − bound` and where it occurs.
    pub min_absolute_margin: f64,
    pub min_absolute_t: f64,
    pub monotone: bool,
}

/// Evaluates the tail inequality on `t = k/1000` for `k = 1..=672`, then on
/// step `10⁻⁵` within `10⁻³` of the worst coarse point.
pub fn tail_grid(eps: &EpsilonSet) -> Result<TailGrid> {
    let coarse: Vec<f64> = (1..=672).map(|k| f64::from(k) / 1000.0).collect();
    let mut g = TailGrid {
        points: 0,
        worst_t: 0.0,
        worst_value: 0.0,
        worst_limit: 0.0,
        worst_relative_margin: f64::INFINITY,
        min_absolute_margin: f64::INFINITY,
        min_absolute_t: 0.0,
        monotone: true,
    };
    let mut prev = 0.0;
    let mut eval = |g: &mut TailGrid, t: f64, check_monotone: bool| -> Result<()> {
        let value = combined_tail_bound(t, eps)?;
        let limit = tail_limit(t, eps);
        let rel = 1.0 - value / limit;
        g.points += 1;
        if rel < g.worst_relative_margin {
            (g.worst_t, g.worst_value, g.worst_limit, g.worst_relative_margin) = (t, value, limit, rel);
        }
        if limit - value < g.min_absolute_margin {
            (g.min_absolute_margin, g.min_absolute_t) = (limit - value, t);
        }
        if check_monotone {
            g.monotone &= value > prev;
            prev = value;
        }
        Ok(())
    };
    for &t in &coarse {
        eval(&mut g, t, true)?;
    }
    let centre = (g.worst_t * 1e5).round() as i64;
    for k in (centre - 100)..=(centre + 100) {
        let t = k as f64 / 1e5;
        if t > 0.0 && t <= TAIL_T_MAX + 1e-12 {
            eval(&mut g, t, false)?;
        }
    }
    Ok(g)
}

/// Tail-grid verdict as a report: `measured` is `bound/limit` at the worst
/// point, `bound` is 1, and the margin is the relative slack. The check is
/// strict, so a zero margin fails.
pub fn verify_tail_grid(eps: &EpsilonSet) -> Result<VerificationReport> {
    let g = tail_grid(eps)?;
    let ratio = g.worst_value / g.worst_limit;
    let mut r = VerificationReport::with_margin("tail-grid", None, ratio, 1.0, g.worst_relative_margin)
        .witness(g.worst_t)
        .detail(format!(
            "{} points; worst t={} value={:.9} limit={:.9}; min absolute margin {:.3e} at t={}; monotone={}",
            g.points, g.worst_t, g.worst_value, g.worst_limit, g.min_absolute_margin, g.min_absolute_t, g.monotone
        ));
    if g.worst_relative_margin <= 0.0 || g.min_absolute_margin <= 0.0 {
        r = r.fail();
    }
    Ok(r)
}

/// `2(1 + ε_a − (1−ε_c)/(1+ε_c)·0.672) ≤ 0.672`.
pub fn verify_main_b_margin(eps: &EpsilonSet) -> VerificationReport {
    let lhs = 2.0 * (1.0 + eps.a - (1.0 - eps.c) / (1.0 + eps.c) * TAIL_T_MAX);
    VerificationReport::new("b-margin", None, lhs, TAIL_T_MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn moment_examples() {
        assert_eq!(negative_moment_bound(0.5, 2.0, 1.0).unwrap(), 0.0);
        assert!((negative_moment_bound(0.75, 2.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(negative_moment_bound(1.0, 2.0, 2.0).is_err());
        assert!(negative_moment_bound(1.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn moment_bound_dominates_random_distributions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let b: f64 = rng.random_range(0.5..10.0);
            let xs: Vec<f64> = (0..10).map(|_| rng.random_range(1e-3..=1.0) * b).collect();
            let ws: Vec<f64> = (0..10).map(|_| rng.random_range(0.0..1.0)).collect();
            let total: f64 = ws.iter().sum();
            let e_inv: f64 = xs.iter().zip(&ws).map(|(x, w)| w / total / x).sum();
            let s = rng.random_range(0.01..0.99) * b;
            let tail: f64 = xs.iter().zip(&ws).filter(|(x, _)| **x <= s).map(|(_, w)| w / total).sum();
            assert!(negative_moment_bound(e_inv, b, s).unwrap() >= tail - 1e-12);
        }
    }

    #[test]
    fn tail_bound_values() {
        let eps = EpsilonSet::LEMMA;
        let v = combined_tail_bound(0.672, &eps).unwrap();
        assert!((v - 0.332_140).abs() < 1e-5, "{v}");
        assert!(v < tail_limit(0.672, &eps));
        assert!(combined_tail_bound(1e-9, &eps).unwrap() < 1e-8);
        assert!(combined_tail_bound(0.9, &eps).is_err());
        assert!(combined_tail_bound(0.0, &eps).is_err());
    }

    #[test]
    fn grid_passes() {
        let g = tail_grid(&EpsilonSet::LEMMA).unwrap();
        assert!(g.monotone);
        assert_eq!(g.worst_t, 0.672);
        assert!(g.worst_relative_margin > 0.01);
        assert!((g.min_absolute_margin - 4.02e-4).abs() < 1e-5);
        assert!(verify_tail_grid(&EpsilonSet::LEMMA).unwrap().pass);
    }

    #[test]
    fn b_margin() {
        let r = verify_main_b_margin(&EpsilonSet::LEMMA);
        assert!(r.pass);
        assert!((r.measured - 0.666_346).abs() < 1e-5);
        let zero = EpsilonSet { a: 0.0, c: 0.0, ..EpsilonSet::LEMMA };
        assert!((verify_main_b_margin(&zero).measured - 0.656).abs() < 1e-12);
        let loose = EpsilonSet { c: 0.1, ..EpsilonSet::LEMMA };
        assert!(!verify_main_b_margin(&loose).pass);
    }

    proptest! {
        #[test]
        fn increasing_in_t(a in 0.0005f64..0.672, d in 1e-4f64..0.1) {
            let eps = EpsilonSet::LEMMA;
            let b = (a + d).min(0.672);
            prop_assume!(b > a);
            prop_assert!(combined_tail_bound(b, &eps).unwrap() > combined_tail_bound(a, &eps).unwrap());
        }
    }
}
