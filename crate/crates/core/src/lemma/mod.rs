//! Mechanical checks of the counting lemmas, the explicit constants, and
//! the tail-bound inequality behind the most-constrained-first strategy.
//!
//! Every check returns a [`VerificationReport`](crate::VerificationReport)
//! carrying the raw margin; verdicts allow [`FLOAT_SLACK`](crate::report::FLOAT_SLACK).

mod degree;
mod estimates;
mod sigma;
mod slots;
mod tail;
mod zeta;

pub use degree::{degree_error_bound, verify_degree_error, DegreeTrial};
pub use estimates::{
    c_closed_form_bound, d_error_bound, de_sums, displayed_constants, e_error_bound,
    is_informational, verify_estimate_c,
    verify_estimate_c_closed_form, verify_estimates_ab, verify_estimates_de,
    verify_estimates_de_closed_form, DisplayedConstant, EllSample, ESTIMATE_THRESHOLD,
};
pub use sigma::{sigma_constants, verify_sigma, verify_sigma_display, SigmaConstants, SIGMA_PRIMORIAL};
pub use slots::{
    k_threshold, sweep_main, verify_main_a, verify_main_b, MainSweep, SlotCounts, K_FACTOR,
};
pub use tail::{
    combined_tail_bound, negative_moment_bound, tail_grid, verify_main_b_margin, verify_tail_grid,
    TailGrid, TAIL_T_MAX,
};
pub use zeta::zeta;

use serde::{Deserialize, Serialize};

/// `ζ(3)` to 20 significant digits.
#[allow(clippy::excessive_precision)]
pub const ZETA3: f64 = 1.2020569031595942854;

/// Relative-error bounds of the five counting estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsilonSet {
    /// odd vertices vs `(2/3)v(n)`
    pub a: f64,
    /// vertices coprime to 6 vs `(1/2)v(n)`
    pub b: f64,
    /// `F(ℓ, n)` vs `f(ℓ)`
    pub c: f64,
    /// `Σ f(ℓ)⁻¹` over `ℓ` coprime to 6
    pub d: f64,
    /// `Σ f(ℓ)⁻¹` over odd `ℓ` divisible by 3
    pub e: f64,
}

impl EpsilonSet {
    pub const LEMMA: EpsilonSet = EpsilonSet {
        a: 8.5e-5,
        b: 1.8e-4,
        c: 3.8e-3,
        d: 1.3e-3,
        e: 2.2e-3,
    };
}

impl Default for EpsilonSet {
    fn default() -> Self {
        Self::LEMMA
    }
}
