//! Clique covers of the squarefree graph.
//!
//! A cover is a map from odd vertices to even vertices; each fiber (the
//! even key plus the odd vertices mapped to it) must be pairwise coprime.
//! Every strategy here assigns each odd vertex to the *least* admissible
//! even vertex, where admissible means coprime to the key and to every odd
//! vertex already placed there (and, for the capped strategy, holding fewer
//! than `cap` odd vertices). Even vertices that receive nothing form
//! singleton parts.

mod capped;
mod greedy;
mod mcf;
mod validate;

pub use capped::{run_capped_greedy, CappedGreedy, CappedStats, PartEvent};
pub use greedy::run_greedy;
pub use mcf::{mcf_order, run_mcf};
pub use validate::{validate_cover, validate_cover_detailed, CoverViolation};

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which assignment strategy built a cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyKind {
    Greedy,
    CappedGreedy,
    MostConstrainedFirst,
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StrategyKind::Greedy => "greedy",
            StrategyKind::CappedGreedy => "capped_greedy",
            StrategyKind::MostConstrainedFirst => "most_constrained_first",
        })
    }
}

/// Strategy plus its parameters. Ties are always broken by ascending
/// vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyConfig {
    pub kind: StrategyKind,
    /// Odd-member limit per part; only meaningful for the capped strategy.
    pub cap: Option<u32>,
}

impl StrategyConfig {
    pub const DEFAULT_CAP: u32 = 3;

    pub fn greedy() -> Self {
        Self {
            kind: StrategyKind::Greedy,
            cap: None,
        }
    }

    pub fn capped(cap: u32) -> Self {
        Self {
            kind: StrategyKind::CappedGreedy,
            cap: Some(cap),
        }
    }

    pub fn most_constrained_first() -> Self {
        Self {
            kind: StrategyKind::MostConstrainedFirst,
            cap: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind == StrategyKind::CappedGreedy && self.cap.is_none_or(|c| c == 0) {
            return Err(Error::InvalidArgument(
                "capped greedy needs cap >= 1".into(),
            ));
        }
        Ok(())
    }

    /// Runs the configured strategy at `n`.
    pub fn run(&self, n: u64) -> Result<std::result::Result<CliqueCover, StrategyFailure>> {
        self.validate()?;
        check_n(n)?;
        Ok(match self.kind {
            StrategyKind::Greedy => run_greedy(n),
            StrategyKind::CappedGreedy => run_capped_greedy(n, self.cap.unwrap_or(Self::DEFAULT_CAP)),
            StrategyKind::MostConstrainedFirst => run_mcf(n),
        })
    }
}

pub(crate) fn check_n(n: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("clique covers need n >= 2, got {n}")));
    }
    Ok(())
}

/// One clique: an even key and the odd vertices assigned to it, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Part {
    pub key: u64,
    pub members: Vec<u64>,
}

impl Part {
    /// Every vertex of the part, ascending.
    pub fn vertices(&self) -> Vec<u64> {
        let mut v = self.members.clone();
        v.push(self.key);
        v.sort_unstable();
        v
    }

    pub fn len(&self) -> usize {
        self.members.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A (claimed) partition of the squarefree vertices `≤ n` into parts keyed
/// by even vertices. Parts are kept in ascending key order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueCover {
    n: u64,
    parts: Vec<Part>,
}

impl CliqueCover {
    /// Builds a cover from explicit parts; no validity check is made (see
    /// [`validate_cover`]).
    pub fn from_parts(n: u64, parts: impl IntoIterator<Item = (u64, Vec<u64>)>) -> Self {
        let mut parts: Vec<Part> = parts
            .into_iter()
            .map(|(key, mut members)| {
                members.sort_unstable();
                Part { key, members }
            })
            .collect();
        parts.sort_by_key(|p| p.key);
        Self { n, parts }
    }

    pub(crate) fn from_sorted_parts(n: u64, parts: Vec<Part>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0].key < w[1].key));
        Self { n, parts }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn part_count(&self) -> usize {
        self.parts.len()
    }

    pub fn part(&self, key: u64) -> Option<&Part> {
        self.parts
            .binary_search_by_key(&key, |p| p.key)
            .ok()
            .map(|i| &self.parts[i])
    }

    /// Odd vertex → even key.
    pub fn assignment(&self) -> BTreeMap<u64, u64> {
        self.parts
            .iter()
            .flat_map(|p| p.members.iter().map(move |&m| (m, p.key)))
            .collect()
    }

    /// CSV with header `even_key,member`, one row per vertex (the key
    /// appears as its own member), sorted by `(even_key, member)`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "even_key,member")?;
        for part in &self.parts {
            for v in part.vertices() {
                writeln!(w, "{},{}", part.key, v)?;
            }
        }
        Ok(())
    }

    /// Reads the format written by [`CliqueCover::write_csv`].
    pub fn read_csv<R: BufRead>(n: u64, r: R) -> Result<Self> {
        let mut lines = r.lines();
        match lines.next() {
            Some(Ok(h)) if h.trim() == "even_key,member" => {}
            _ => return Err(Error::Format("missing header even_key,member".into())),
        }
        let mut parts: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for (i, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let (k, m) = line
                .split_once(',')
                .ok_or_else(|| Error::Format(format!("line {}: expected two columns", i + 2)))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|e| Error::Format(format!("line {}: {e}", i + 2)))
            };
            let (k, m) = (parse(k)?, parse(m)?);
            let members = parts.entry(k).or_default();
            if m != k {
                members.push(m);
            }
        }
        Ok(Self::from_parts(n, parts))
    }
}

/// A strategy run that left odd vertices unassigned. The run continues past
/// the first failure so that every unassignable vertex is listed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyFailure {
    pub n: u64,
    pub strategy: StrategyKind,
    pub cap: Option<u32>,
    pub unassigned: Vec<u64>,
    #[serde(skip)]
    pub partial: Option<Box<CliqueCover>>,
}

impl StrategyFailure {
    /// First odd vertex that found no admissible even vertex.
    pub fn first_unassigned(&self) -> u64 {
        self.unassigned[0]
    }

    /// JSON record `{n, strategy, cap, unassigned}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "strategy": self.strategy,
            "cap": self.cap,
            "unassigned": self.unassigned,
        })
    }
}

impl fmt::Display for StrategyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} strategy at n={} left {} odd vertices unassigned (first: {})",
            self.strategy,
            self.n,
            self.unassigned.len(),
            self.unassigned[0]
        )
    }
}

/// Outcome of one strategy run.
pub type StrategyOutcome = std::result::Result<CliqueCover, StrategyFailure>;

/// Per-part admissibility state used while building: the sorted set of
/// primes already used by the key and its members.
#[derive(Debug, Clone)]
pub(crate) struct PartState {
    pub key: u64,
    pub used: Vec<u64>,
    pub members: Vec<u64>,
}

impl PartState {
    pub fn new(key: &crate::sieve::FactorList) -> Self {
        Self {
            key: key.value(),
            used: key.primes().to_vec(),
            members: Vec::new(),
        }
    }

    pub fn admits(&self, primes: &[u64]) -> bool {
        primes.iter().all(|p| self.used.binary_search(p).is_err())
    }

    pub fn assign(&mut self, ell: &crate::sieve::FactorList) {
        for &p in ell.primes() {
            let at = self.used.partition_point(|&q| q < p);
            self.used.insert(at, p);
        }
        self.members.push(ell.value());
    }

    pub fn into_part(mut self) -> Part {
        self.members.sort_unstable();
        Part {
            key: self.key,
            members: self.members,
        }
    }
}

pub(crate) fn finish(
    n: u64,
    config: StrategyConfig,
    parts: Vec<Part>,
    unassigned: Vec<u64>,
) -> StrategyOutcome {
    let cover = CliqueCover::from_sorted_parts(n, parts);
    if unassigned.is_empty() {
        Ok(cover)
    } else {
        Err(StrategyFailure {
            n,
            strategy: config.kind,
            cap: config.cap,
            unassigned,
            partial: Some(Box::new(cover)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_roundtrip_and_order() {
        let cover = CliqueCover::from_parts(
            15,
            vec![(14, vec![15]), (2, vec![5, 1, 3]), (10, vec![]), (6, vec![13, 7, 11])],
        );
        let mut out = Vec::new();
        cover.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("even_key,member\n2,1\n2,2\n2,3\n2,5\n6,6\n6,7\n"));
        assert!(text.ends_with("10,10\n14,14\n14,15\n"));
        assert_eq!(text.lines().count(), 12);
        let back = CliqueCover::read_csv(15, text.as_bytes()).unwrap();
        assert_eq!(back, cover);
    }

    #[test]
    fn failure_json_shape() {
        let f = StrategyFailure {
            n: 5,
            strategy: StrategyKind::CappedGreedy,
            cap: Some(2),
            unassigned: vec![5],
            partial: None,
        };
        assert_eq!(
            f.to_json(),
            serde_json::json!({"n": 5, "strategy": "capped_greedy", "cap": 2, "unassigned": [5]})
        );
    }

    #[test]
    fn config_validation() {
        assert!(StrategyConfig::capped(0).validate().is_err());
        assert!(StrategyConfig::capped(1).validate().is_ok());
        assert!(StrategyConfig::greedy().run(1).is_err());
    }

    #[test]
    fn assignment_map() {
        let cover = CliqueCover::from_parts(6, vec![(2, vec![1, 3, 5]), (6, vec![])]);
        let a = cover.assignment();
        assert_eq!(a.get(&5), Some(&2));
        assert_eq!(a.len(), 3);
        assert_eq!(cover.part(6).unwrap().len(), 1);
    }
}
