use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::VerificationReport;
use crate::sieve::{stream_squarefree, FactorList, DEFAULT_SEGMENT};

/// Product of the odd primes below 31.
pub const SIGMA_PRIMORIAL: u64 = 3_234_846_615;

const SMALL_ODD_PRIMES: [u64; 9] = [3, 5, 7, 11, 13, 17, 19, 23, 29];

/// Constants with `∏_{p|ℓ}(1 + p^−δ) ≤ α·ℓ^β` for every odd squarefree `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaConstants {
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl SigmaConstants {
    /// `α·ℓ^β`.
    pub fn rhs(&self, ell: u64) -> f64 {
        self.alpha * (ell as f64).powf(self.beta)
    }

    /// `∏_{p|ℓ}(1 + p^−δ)`.
    pub fn lhs(&self, ell: &FactorList) -> f64 {
        ell.primes()
            .iter()
            .map(|&p| 1.0 + (p as f64).powf(-self.delta))
            .product()
    }
}

/// `β = ln(1 + 31^−δ)/ln 31` and `α = 3234846615^−β·∏_{2<p<31}(1 + p^−δ)`.
pub fn sigma_constants(delta: f64) -> Result<SigmaConstants> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::Domain(format!("delta must be >= 0, got {delta}")));
    }
    let beta = (31f64.powf(-delta)).ln_1p() / 31f64.ln();
    let prod: f64 = SMALL_ODD_PRIMES
        .iter()
        .map(|&p| 1.0 + (p as f64).powf(-delta))
        .product();
    let alpha = prod * (SIGMA_PRIMORIAL as f64).powf(-beta);
    Ok(SigmaConstants { delta, alpha, beta })
}

/// Checks the product inequality for every odd squarefree `ℓ ≤ n_max` and
/// at `ℓ = 3234846615`, reporting the `ℓ` of least slack.
pub fn verify_sigma(n_max: u64, delta: f64) -> Result<VerificationReport> {
    if n_max < 3 {
        return Err(Error::InvalidArgument(format!("n_max must be >= 3, got {n_max}")));
    }
    let k = sigma_constants(delta)?;
    let mut worst = (f64::INFINITY, 0u64, 0.0, 0.0);
    let mut consider = |ell: &FactorList| {
        let (lhs, rhs) = (k.lhs(ell), k.rhs(ell.value()));
        if rhs - lhs < worst.0 {
            worst = (rhs - lhs, ell.value(), lhs, rhs);
        }
    };
    for ell in stream_squarefree(1, n_max, DEFAULT_SEGMENT).filter(|f| !f.is_even()) {
        consider(&ell);
    }
    consider(&FactorList::from_primes(&SMALL_ODD_PRIMES));
    let (margin, ell, lhs, rhs) = worst;
    Ok(
        VerificationReport::with_margin("sigma", Some(n_max), lhs, rhs, margin)
            .witness(ell)
            .detail(format!("delta={delta} alpha={} beta={}", k.alpha, k.beta)),
    )
}

/// Displayed upper bounds on `(α, β)` for `δ = 0, 1/2, 1`.
pub(crate) const SIGMA_DISPLAY: [(f64, f64, f64); 3] =
    [(0.0, 6.1620, 0.2019), (0.5, 3.9926, 0.0482), (1.0, 2.1110, 0.0093)];

/// One report per displayed constant: the computed value must not exceed
/// the rounded-up display.
pub fn verify_sigma_display() -> Vec<VerificationReport> {
    let mut out = Vec::new();
    for (delta, alpha, beta) in SIGMA_DISPLAY {
        let k = sigma_constants(delta).expect("valid delta");
        out.push(VerificationReport::new(format!("alpha[{delta}]"), None, k.alpha, alpha));
        out.push(VerificationReport::new(format!("beta[{delta}]"), None, k.beta, beta));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primorial() {
        assert_eq!(SMALL_ODD_PRIMES.iter().product::<u64>(), SIGMA_PRIMORIAL);
    }

    #[test]
    fn known_constants() {
        let k0 = sigma_constants(0.0).unwrap();
        assert!((k0.beta - 0.201_849).abs() < 1e-6);
        assert!((k0.alpha - 6.161_90).abs() < 1e-4);
        // δ = 0: α = 512·P^−β
        assert!((k0.alpha - 512.0 * (SIGMA_PRIMORIAL as f64).powf(-k0.beta)).abs() < 1e-12);
        let k1 = sigma_constants(1.0).unwrap();
        assert!((k1.alpha - 2.110_907).abs() < 1e-5);
        assert!((k1.beta - 0.009_245_43).abs() < 1e-7);
        assert!(verify_sigma_display().iter().all(|r| r.pass));
        assert!(sigma_constants(-1.0).is_err());
    }

    #[test]
    fn beta_decreasing_and_alpha_at_least_one() {
        let mut prev = f64::INFINITY;
        for i in 0..=40 {
            let k = sigma_constants(f64::from(i) * 0.025).unwrap();
            assert!(k.beta < prev);
            assert!(k.alpha >= 1.0);
            prev = k.beta;
        }
    }

    #[test]
    fn extremal_primorial_is_tight_at_zero() {
        let k = sigma_constants(0.0).unwrap();
        let ell = FactorList::from_primes(&SMALL_ODD_PRIMES);
        let slack = k.rhs(ell.value()) - k.lhs(&ell);
        assert!(slack.abs() < 1e-9, "{slack}");
    }

    #[test]
    fn odd_primorials_hold() {
        let primes = [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31];
        for delta in [0.0, 0.5, 1.0] {
            let k = sigma_constants(delta).unwrap();
            for len in 0..=primes.len() {
                let ell = FactorList::from_primes(&primes[..len]);
                if ell.value() > 10_000_000_000 {
                    break;
                }
                assert!(k.rhs(ell.value()) - k.lhs(&ell) >= -1e-9, "delta={delta} ell={}", ell.value());
            }
        }
    }

    #[test]
    fn sweep_small() {
        for delta in [0.0, 0.5, 1.0] {
            let r = verify_sigma(20_000, delta).unwrap();
            assert!(r.pass, "{}", r.summary());
        }
        assert!(verify_sigma(2, 0.0).is_err());
    }
}
