//! Squarefree flags, Möbius values, primes and distinct prime factors.
//!
//! Flags are produced by striking multiples of `p²` for every prime
//! `p ≤ √hi`; no factorization is needed for flags alone. Factor lists in
//! streaming mode come from a segmented sieve over the current window using
//! the same base primes, so working memory is `O(segment + √hi)`.

use std::io::{Read, Write};

use arrayvec::ArrayVec;

use crate::error::{Error, Result};

/// Largest number of entries [`SquarefreeTable::build`] will allocate.
pub const MAX_TABLE_ENTRIES: u64 = 1 << 33;

/// Default window length for [`stream_squarefree`].
pub const DEFAULT_SEGMENT: u64 = 1 << 16;

/// A squarefree `u64` has at most 15 distinct prime factors
/// (the product of the first 16 primes exceeds `u64::MAX`).
pub const MAX_DISTINCT_PRIMES: usize = 15;

/// All primes `≤ limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = usize::try_from(limit).expect("prime limit exceeds address space");
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// Sorted distinct prime factors of a single integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactorList {
    value: u64,
    primes: ArrayVec<u64, MAX_DISTINCT_PRIMES>,
}

impl FactorList {
    /// Builds a factor list from its parts. `primes` must be strictly
    /// increasing primes dividing `value`; this is checked in debug builds.
    pub fn from_parts(value: u64, primes: &[u64]) -> Self {
        debug_assert!(primes.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(primes.iter().all(|&p| p >= 2 && value % p == 0));
        let mut list = ArrayVec::new();
        list.try_extend_from_slice(primes)
            .expect("more than 15 distinct primes");
        Self {
            value,
            primes: list,
        }
    }

    /// Factor list of a product of distinct primes, given the primes.
    pub fn from_primes(primes: &[u64]) -> Self {
        let value = primes.iter().product();
        Self::from_parts(value, primes)
    }

    pub fn one() -> Self {
        Self {
            value: 1,
            primes: ArrayVec::new(),
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Number of distinct prime factors, ω.
    pub fn omega(&self) -> usize {
        self.primes.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.primes.iter().product::<u64>() == self.value
    }

    pub fn is_even(&self) -> bool {
        self.value % 2 == 0
    }

    /// True when no prime divides both.
    pub fn is_coprime_to(&self, other: &FactorList) -> bool {
        disjoint_sorted(&self.primes, &other.primes)
    }

    /// Factor list of `2·self` for odd `self`.
    pub fn doubled(&self) -> FactorList {
        assert!(!self.is_even(), "doubled() requires an odd value");
        let mut primes = ArrayVec::<u64, MAX_DISTINCT_PRIMES>::new();
        primes.push(2);
        primes
            .try_extend_from_slice(&self.primes)
            .expect("more than 15 distinct primes");
        FactorList {
            value: self.value.checked_mul(2).expect("doubled value overflows u64"),
            primes,
        }
    }

    /// All squarefree divisors `d | rad(value)` with `μ(d)`, by subset
    /// enumeration. The first item is `(1, 1)`.
    pub fn divisors_with_mobius(&self) -> impl Iterator<Item = (u64, i8)> + '_ {
        let k = self.primes.len();
        (0u32..(1u32 << k)).map(move |mask| {
            let mut d = 1u64;
            let mut sign = 1i8;
            for (i, &p) in self.primes.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    d *= p;
                    sign = -sign;
                }
            }
            (d, sign)
        })
    }
}

/// True when two ascending slices share no element.
pub fn disjoint_sorted(a: &[u64], b: &[u64]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

/// Sorted distinct prime factors of `m` by trial division.
///
/// `primes` must contain every prime `≤ √m`; whatever remains after
/// dividing those out is itself prime.
pub fn factor_distinct(m: u64, primes: &[u64]) -> FactorList {
    assert!(m >= 1, "factor_distinct requires m >= 1");
    let mut rem = m;
    let mut found = ArrayVec::<u64, MAX_DISTINCT_PRIMES>::new();
    for &p in primes {
        if p.saturating_mul(p) > rem {
            break;
        }
        if rem % p == 0 {
            found.push(p);
            while rem % p == 0 {
                rem /= p;
            }
        }
    }
    if rem > 1 {
        found.push(rem);
    }
    FactorList {
        value: m,
        primes: found,
    }
}

/// Bit-indexed squarefree flags over `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeTable {
    lo: u64,
    hi: u64,
    words: Vec<u64>,
}

impl SquarefreeTable {
    pub fn build(lo: u64, hi: u64) -> Result<Self> {
        if lo == 0 || lo > hi {
            return Err(Error::InvalidArgument(format!(
                "squarefree table needs 1 <= lo <= hi, got [{lo}, {hi}]"
            )));
        }
        let len = hi - lo + 1;
        if len > MAX_TABLE_ENTRIES {
            return Err(Error::RangeTooLarge {
                lo,
                hi,
                limit: MAX_TABLE_ENTRIES,
            });
        }
        let nwords = len.div_ceil(64) as usize;
        let mut words = vec![u64::MAX; nwords];
        let tail = len % 64;
        if tail != 0 {
            words[nwords - 1] = (1u64 << tail) - 1;
        }
        for p in primes_up_to(hi.isqrt()) {
            let sq = p * p;
            let mut m = lo.div_ceil(sq) * sq;
            while m <= hi {
                let i = m - lo;
                words[(i / 64) as usize] &= !(1u64 << (i % 64));
                match m.checked_add(sq) {
                    Some(next) => m = next,
                    None => break,
                }
            }
        }
        Ok(Self { lo, hi, words })
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn len(&self) -> u64 {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Flag for `m`; `None` outside `[lo, hi]`.
    pub fn get(&self, m: u64) -> Option<bool> {
        if m < self.lo || m > self.hi {
            return None;
        }
        let i = m - self.lo;
        Some(self.words[(i / 64) as usize] >> (i % 64) & 1 == 1)
    }

    pub fn is_squarefree(&self, m: u64) -> bool {
        self.get(m).expect("value outside table range")
    }

    /// Number of squarefree values in the table.
    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// Squarefree values in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(move |(wi, &w)| {
            let base = self.lo + wi as u64 * 64;
            BitIter(w).map(move |b| base + u64::from(b))
        })
    }

    /// Binary dump: little-endian `lo`, `hi`, then the flag bits packed
    /// LSB-first (bit `i` of byte `j` is the flag of `lo + 8j + i`),
    /// zero-padded to a byte boundary.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&self.lo.to_le_bytes())?;
        w.write_all(&self.hi.to_le_bytes())?;
        let nbytes = self.len().div_ceil(8) as usize;
        let mut bytes = Vec::with_capacity(self.words.len() * 8);
        for word in &self.words {
            bytes.extend_from_slice(&word.to_le_bytes());
        }
        w.write_all(&bytes[..nbytes])?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut buf = [0u8; 8];
        r.read_exact(&mut buf)?;
        let lo = u64::from_le_bytes(buf);
        r.read_exact(&mut buf)?;
        let hi = u64::from_le_bytes(buf);
        if lo == 0 || lo > hi || hi - lo + 1 > MAX_TABLE_ENTRIES {
            return Err(Error::Format(format!("bad table header [{lo}, {hi}]")));
        }
        let len = hi - lo + 1;
        let nbytes = len.div_ceil(8) as usize;
        let mut bytes = vec![0u8; nbytes];
        r.read_exact(&mut bytes)?;
        let tail = len % 8;
        if tail != 0 && bytes[nbytes - 1] >> tail != 0 {
            return Err(Error::Format("nonzero padding bits".into()));
        }
        bytes.resize(len.div_ceil(64) as usize * 8, 0);
        let words = bytes
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(Self { lo, hi, words })
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(b)
    }
}

/// Möbius values `μ(1..=limit)`.
#[derive(Debug, Clone)]
pub struct MobiusTable {
    values: Vec<i8>,
}

impl MobiusTable {
    /// Linear sieve; `values[0]` is unused and set to 0.
    pub fn new(limit: u64) -> Self {
        let limit = usize::try_from(limit).expect("mobius limit exceeds address space");
        let mut mu = vec![0i8; limit + 1];
        if limit >= 1 {
            mu[1] = 1;
        }
        let mut is_comp = vec![false; limit + 1];
        let mut primes: Vec<usize> = Vec::new();
        for i in 2..=limit {
            if !is_comp[i] {
                primes.push(i);
                mu[i] = -1;
            }
            for &p in &primes {
                let ip = i * p;
                if ip > limit {
                    break;
                }
                is_comp[ip] = true;
                if i % p == 0 {
                    mu[ip] = 0;
                    break;
                }
                mu[ip] = -mu[i];
            }
        }
        Self { values: mu }
    }

    pub fn limit(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    /// `μ(d)` for `1 ≤ d ≤ limit`.
    pub fn mu(&self, d: u64) -> i8 {
        assert!(d >= 1 && d <= self.limit(), "mu({d}) outside table");
        self.values[d as usize]
    }
}

/// Exact `#{m ≤ n : m squarefree}` as `Σ_{d ≤ √n} μ(d)⌊n/d²⌋`.
pub fn count_squarefree(n: u64) -> u64 {
    count_squarefree_with(n, &MobiusTable::new(n.isqrt()))
}

/// As [`count_squarefree`] with a caller-supplied table reaching `⌊√n⌋`.
pub fn count_squarefree_with(n: u64, mobius: &MobiusTable) -> u64 {
    let root = n.isqrt();
    assert!(mobius.limit() >= root, "mobius table too short for n = {n}");
    let mut total: i128 = 0;
    for d in 1..=root {
        let mu = mobius.mu(d);
        if mu != 0 {
            total += i128::from(mu) * i128::from(n / (d * d));
        }
    }
    total as u64
}

/// Number of even squarefree integers `≤ n`.
///
/// Even squarefree `m ≤ n` are exactly `2k` for odd squarefree `k ≤ n/2`,
/// so the count unrolls into an alternating sum of [`count_squarefree`].
pub fn count_even_squarefree(n: u64) -> u64 {
    let half = n / 2;
    // odd squarefree ≤ x  =  sf(x) − even sf(x), and even sf(x) = odd sf(x/2)
    let mut total = 0u64;
    let mut x = half;
    let mut sign = true;
    while x > 0 {
        let c = count_squarefree(x);
        if sign {
            total += c;
        } else {
            total -= c;
        }
        sign = !sign;
        x /= 2;
    }
    total
}

/// Smallest-prime-factor table up to `limit`, for fast full factorization
/// of arbitrary values below the limit.
#[derive(Debug, Clone)]
pub struct SmallestPrimeFactor {
    spf: Vec<u32>,
}

impl SmallestPrimeFactor {
    pub fn new(limit: u64) -> Result<Self> {
        if limit >= u64::from(u32::MAX) || limit > MAX_TABLE_ENTRIES {
            return Err(Error::RangeTooLarge {
                lo: 0,
                hi: limit,
                limit: MAX_TABLE_ENTRIES.min(u64::from(u32::MAX) - 1),
            });
        }
        let limit = limit as usize;
        let mut spf = vec![0u32; limit + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let ip = i * p as usize;
                if p > si || ip > limit {
                    break;
                }
                spf[ip] = p;
            }
        }
        Ok(Self { spf })
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Distinct prime factors of `m`, plus whether `m` is squarefree.
    pub fn factor(&self, m: u64) -> (FactorList, bool) {
        assert!(m >= 1 && m <= self.limit());
        let mut rem = m as usize;
        let mut primes = ArrayVec::<u64, MAX_DISTINCT_PRIMES>::new();
        let mut squarefree = true;
        while rem > 1 {
            let p = self.spf[rem] as usize;
            rem /= p;
            if rem % p == 0 {
                squarefree = false;
                while rem % p == 0 {
                    rem /= p;
                }
            }
            primes.push(p as u64);
        }
        (FactorList { value: m, primes }, squarefree)
    }
}

/// Streams the squarefree integers of `[lo, hi]` in ascending order, each
/// with its distinct prime factors, one window of `segment` integers at a
/// time.
pub fn stream_squarefree(lo: u64, hi: u64, segment: u64) -> SquarefreeStream {
    SquarefreeStream::new(lo, hi, segment)
}

/// Iterator returned by [`stream_squarefree`].
pub struct SquarefreeStream {
    next_start: u64,
    hi: u64,
    segment: u64,
    base_primes: Vec<u64>,
    squarefree: Vec<bool>,
    rem: Vec<u64>,
    factors: Vec<ArrayVec<u64, MAX_DISTINCT_PRIMES>>,
    window_start: u64,
    cursor: usize,
    done: bool,
}

impl SquarefreeStream {
    fn new(lo: u64, hi: u64, segment: u64) -> Self {
        assert!(segment >= 1, "segment must be positive");
        let lo = lo.max(1);
        let seg = usize::try_from(segment.min(hi.saturating_sub(lo) + 1)).unwrap_or(usize::MAX);
        Self {
            next_start: lo,
            hi,
            segment,
            base_primes: primes_up_to(hi.isqrt()),
            squarefree: Vec::with_capacity(seg),
            rem: Vec::with_capacity(seg),
            factors: Vec::with_capacity(seg),
            window_start: lo,
            cursor: 0,
            done: lo > hi,
        }
    }

    fn fill(&mut self) -> bool {
        if self.done || self.next_start > self.hi {
            self.done = true;
            return false;
        }
        let s = self.next_start;
        let e = s.saturating_add(self.segment - 1).min(self.hi);
        let len = (e - s + 1) as usize;
        self.squarefree.clear();
        self.squarefree.resize(len, true);
        self.rem.clear();
        self.rem.extend(s..=e);
        self.factors.clear();
        self.factors.resize_with(len, ArrayVec::new);

        for &p in &self.base_primes {
            let sq = p * p;
            if sq > e {
                break;
            }
            let mut m = s.div_ceil(sq) * sq;
            while m <= e {
                self.squarefree[(m - s) as usize] = false;
                match m.checked_add(sq) {
                    Some(next) => m = next,
                    None => break,
                }
            }
        }
        for &p in &self.base_primes {
            if p > e {
                break;
            }
            let mut m = s.div_ceil(p) * p;
            while m <= e {
                let i = (m - s) as usize;
                if self.squarefree[i] {
                    self.factors[i].push(p);
                    self.rem[i] /= p;
                }
                match m.checked_add(p) {
                    Some(next) => m = next,
                    None => break,
                }
            }
        }
        for i in 0..len {
            if self.squarefree[i] && self.rem[i] > 1 {
                let r = self.rem[i];
                self.factors[i].push(r);
            }
        }
        self.window_start = s;
        self.cursor = 0;
        match e.checked_add(1) {
            Some(next) => self.next_start = next,
            None => self.done = true,
        }
        true
    }
}

impl Iterator for SquarefreeStream {
    type Item = FactorList;

    fn next(&mut self) -> Option<FactorList> {
        loop {
            while self.cursor < self.squarefree.len() {
                let i = self.cursor;
                self.cursor += 1;
                if self.squarefree[i] {
                    return Some(FactorList {
                        value: self.window_start + i as u64,
                        primes: self.factors[i].clone(),
                    });
                }
            }
            if !self.fill() {
                return None;
            }
        }
    }
}
