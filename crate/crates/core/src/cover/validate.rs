use std::fmt;

use super::CliqueCover;
use crate::error::Result;
use crate::report::VerificationReport;
use crate::sieve::{count_even_squarefree, SmallestPrimeFactor};

/// A broken cover invariant, with witness vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverViolation {
    /// A listed vertex is outside `[1, n]` or not squarefree.
    NotAVertex { vertex: u64 },
    /// A vertex is listed in more than one place.
    Duplicate { vertex: u64 },
    /// A squarefree vertex `≤ n` is in no part.
    Missing { vertex: u64 },
    /// Two members of one part share a prime.
    SharedPrime { key: u64, prime: u64, a: u64, b: u64 },
    /// A part whose even-vertex count is not exactly one.
    EvenCount { key: u64, evens: Vec<u64> },
    /// Number of parts differs from the number of even vertices.
    PartCount { parts: u64, expected: u64 },
}

impl CoverViolation {
    pub fn witnesses(&self) -> Vec<u64> {
        match self {
            CoverViolation::NotAVertex { vertex }
            | CoverViolation::Duplicate { vertex }
            | CoverViolation::Missing { vertex } => vec![*vertex],
            CoverViolation::SharedPrime { a, b, .. } => vec![*a, *b],
            CoverViolation::EvenCount { key, evens } => {
                let mut w = vec![*key];
                w.extend(evens.iter().filter(|&&e| e != *key));
                w
            }
            CoverViolation::PartCount { parts, expected } => vec![*parts, *expected],
        }
    }
}

impl fmt::Display for CoverViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverViolation::NotAVertex { vertex } => {
                write!(f, "{vertex} is not a squarefree vertex <= n")
            }
            CoverViolation::Duplicate { vertex } => write!(f, "{vertex} appears more than once"),
            CoverViolation::Missing { vertex } => {
                write!(f, "partition incomplete: {vertex} is in no part")
            }
            CoverViolation::SharedPrime { key, prime, a, b } => {
                write!(f, "part {key}: {a} and {b} share prime {prime}")
            }
            CoverViolation::EvenCount { key, evens } => {
                write!(f, "part {key} has {} even vertices {evens:?}", evens.len())
            }
            CoverViolation::PartCount { parts, expected } => {
                write!(f, "{parts} parts but {expected} even vertices")
            }
        }
    }
}

/// Checks every cover invariant exhaustively and returns all violations.
///
/// Factorizations come from a smallest-prime-factor table built here, so
/// the check does not reuse the strategies' own factor lists.
pub fn validate_cover_detailed(cover: &CliqueCover) -> Result<Vec<CoverViolation>> {
    let n = cover.n();
    let spf = SmallestPrimeFactor::new(n.max(2))?;
    let mut seen = vec![0u64; (n as usize + 64) / 64 + 1];
    let mut violations = Vec::new();

    let in_range = |v: u64| v >= 1 && v <= n;
    for part in cover.parts() {
        let vertices = part.vertices();
        let evens: Vec<u64> = vertices.iter().copied().filter(|v| v % 2 == 0).collect();
        if evens.len() != 1 || part.key % 2 != 0 {
            violations.push(CoverViolation::EvenCount {
                key: part.key,
                evens,
            });
        }
        // (prime, vertex) pairs; a repeated prime means two members share it
        let mut primes: Vec<(u64, u64)> = Vec::new();
        for &v in &vertices {
            if !in_range(v) {
                violations.push(CoverViolation::NotAVertex { vertex: v });
                continue;
            }
            let (f, squarefree) = spf.factor(v);
            if !squarefree {
                violations.push(CoverViolation::NotAVertex { vertex: v });
                continue;
            }
            let (w, b) = ((v / 64) as usize, v % 64);
            if seen[w] >> b & 1 == 1 {
                violations.push(CoverViolation::Duplicate { vertex: v });
                continue;
            }
            seen[w] |= 1 << b;
            primes.extend(f.primes().iter().map(|&p| (p, v)));
        }
        primes.sort_unstable();
        for pair in primes.windows(2) {
            if pair[0].0 == pair[1].0 {
                violations.push(CoverViolation::SharedPrime {
                    key: part.key,
                    prime: pair[0].0,
                    a: pair[0].1,
                    b: pair[1].1,
                });
            }
        }
    }
    for v in 1..=n {
        if seen[(v / 64) as usize] >> (v % 64) & 1 == 0 && spf.factor(v).1 {
            violations.push(CoverViolation::Missing { vertex: v });
        }
    }
    let expected = count_even_squarefree(n);
    if cover.part_count() as u64 != expected {
        violations.push(CoverViolation::PartCount {
            parts: cover.part_count() as u64,
            expected,
        });
    }
    Ok(violations)
}

/// Exhaustive cover check as a report: `measured` is the number of parts,
/// `bound` the number of even vertices, and `margin` minus the number of
/// violations. Witnesses are those of the first violation.
pub fn validate_cover(cover: &CliqueCover) -> Result<VerificationReport> {
    let violations = validate_cover_detailed(cover)?;
    let expected = count_even_squarefree(cover.n());
    let mut report = VerificationReport::with_margin(
        "cover",
        Some(cover.n()),
        cover.part_count() as f64,
        expected as f64,
        0.0 - violations.len() as f64,
    );
    if let Some(first) = violations.first() {
        report = report
            .witnesses(first.witnesses())
            .detail(format!("{first} ({} violations)", violations.len()));
    } else {
        report = report.detail(format!("{} parts", cover.part_count()));
    }
    Ok(report)
}
