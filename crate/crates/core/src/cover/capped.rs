use super::{finish, Part, PartState, StrategyConfig, StrategyOutcome};
use crate::sieve::{stream_squarefree, DEFAULT_SEGMENT};

/// Emitted by [`CappedGreedy::run`] as the sweep progresses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartEvent {
    /// A part that will receive no further members: it filled up, or the
    /// sweep ended. Not emitted in key order.
    Closed(Part),
    /// An odd vertex with no admissible even vertex.
    Unassigned(u64),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CappedStats {
    pub odd_vertices: u64,
    pub even_vertices: u64,
    /// Largest number of simultaneously open (touched, unfilled) parts.
    pub max_open_parts: usize,
    pub unassigned: u64,
}

/// Streaming capped-greedy sweep.
///
/// Odd vertices come from one squarefree stream over `[1, n]`; even
/// vertices `2k` come lazily from a second stream over odd `k ≤ n/2`, and
/// are pulled only once every already-open part has been tried. Only open
/// parts are held in memory, so working memory is the open set plus two
/// sieve windows.
#[derive(Debug, Clone)]
pub struct CappedGreedy {
    n: u64,
    cap: Option<u32>,
    segment: u64,
}

impl CappedGreedy {
    /// `cap = None` never closes a part early, which reproduces the
    /// uncapped greedy strategy.
    pub fn new(n: u64, cap: Option<u32>) -> Self {
        assert!(n >= 2, "clique covers need n >= 2");
        assert!(cap.is_none_or(|c| c >= 1), "cap must be >= 1");
        Self {
            n,
            cap,
            segment: DEFAULT_SEGMENT,
        }
    }

    pub fn segment(mut self, segment: u64) -> Self {
        assert!(segment >= 1);
        self.segment = segment;
        self
    }

    fn is_full(&self, part: &PartState) -> bool {
        self.cap.is_some_and(|c| part.members.len() >= c as usize)
    }

    pub fn run(&self, mut sink: impl FnMut(PartEvent)) -> CappedStats {
        let mut stats = CappedStats::default();
        let odds = stream_squarefree(1, self.n, self.segment).filter(|f| !f.is_even());
        let mut evens = stream_squarefree(1, self.n / 2, self.segment)
            .filter(|f| !f.is_even())
            .map(|k| k.doubled());
        let mut open: Vec<PartState> = Vec::new();

        for ell in odds {
            stats.odd_vertices += 1;
            let primes = ell.primes();
            let mut placed = false;
            if let Some(i) = open.iter().position(|p| p.admits(primes)) {
                open[i].assign(&ell);
                if self.is_full(&open[i]) {
                    sink(PartEvent::Closed(open.remove(i).into_part()));
                }
                placed = true;
            } else {
                for m in evens.by_ref() {
                    stats.even_vertices += 1;
                    let mut part = PartState::new(&m);
                    if part.admits(primes) {
                        part.assign(&ell);
                        if self.is_full(&part) {
                            sink(PartEvent::Closed(part.into_part()));
                        } else {
                            open.push(part);
                        }
                        placed = true;
                        break;
                    }
                    open.push(part);
                }
            }
            stats.max_open_parts = stats.max_open_parts.max(open.len());
            if !placed {
                stats.unassigned += 1;
                sink(PartEvent::Unassigned(ell.value()));
            }
        }
        for part in open {
            sink(PartEvent::Closed(part.into_part()));
        }
        for m in evens {
            stats.even_vertices += 1;
            sink(PartEvent::Closed(Part {
                key: m.value(),
                members: Vec::new(),
            }));
        }
        stats
    }
}

/// Capped greedy cover: like [`super::run_greedy`], but an even vertex only
/// admits new odd vertices while it holds fewer than `cap` of them.
pub fn run_capped_greedy(n: u64, cap: u32) -> StrategyOutcome {
    CappedGreedy::new(n, Some(cap)).collect()
}

impl CappedGreedy {
    /// Runs the sweep and gathers every part into a cover.
    pub fn collect(&self) -> StrategyOutcome {
        let config = match self.cap {
            Some(c) => StrategyConfig::capped(c),
            None => StrategyConfig::greedy(),
        };
        let mut parts = Vec::new();
        let mut unassigned = Vec::new();
        self.run(|event| match event {
            PartEvent::Closed(p) => parts.push(p),
            PartEvent::Unassigned(v) => unassigned.push(v),
        });
        parts.sort_unstable_by_key(|p| p.key);
        finish(self.n, config, parts, unassigned)
    }
}
