//! Mergeable aggregates produced by exhaustive scans of Q_n.
//!
//! A census is built by recording every word of a rank range and merging
//! partial tables. Merge is associative and commutative, so any partition of
//! the rank space into disjoint ranges, scanned in any order or in parallel,
//! yields byte-identical results.

use std::collections::BTreeMap;
use std::ops::Range;
use std::thread;

use crate::enumeration::{self, EnumerationError};
use crate::model::{DisplacementComposition, LuckySet, StirlingWord};
use crate::parking;

/// One payload kind per census. `record` folds a word in; `merge` combines
/// tables from disjoint rank ranges.
pub trait CensusPayload: Send + Sized {
    const KIND: &'static str;

    fn empty(n: u32) -> Self;
    fn record(&mut self, rank: u64, w: &StirlingWord);
    fn merge(&mut self, other: Self);
}

/// A payload plus its scan bookkeeping: the order n and how many words were
/// folded in. A full scan of Q_n ends with `scanned == (2n-1)!!`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusTable<P> {
    order: u32,
    scanned: u64,
    payload: P,
}

impl<P: CensusPayload> CensusTable<P> {
    pub fn kind(&self) -> &'static str {
        P::KIND
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn scanned(&self) -> u64 {
        self.scanned
    }

    pub fn payload(&self) -> &P {
        &self.payload
    }

    /// Scans one rank range.
    pub fn scan_range(n: u32, ranks: Range<u64>) -> Result<Self, EnumerationError> {
        let mut payload = P::empty(n);
        let mut scanned = 0u64;
        for (rank, w) in (ranks.start..).zip(enumeration::range(n, ranks.start, ranks.end)?) {
            payload.record(rank, &w);
            scanned += 1;
        }
        Ok(Self {
            order: n,
            scanned,
            payload,
        })
    }

    /// Full sequential scan of Q_n.
    pub fn scan(n: u32) -> Result<Self, EnumerationError> {
        let size =
            enumeration::double_factorial_odd(n).ok_or(EnumerationError::OrderTooLarge { n })?;
        Self::scan_range(n, 0..size)
    }

    /// Full scan fanned out over `jobs` contiguous rank ranges. Results are
    /// identical to the sequential scan for any job count.
    pub fn scan_parallel(n: u32, jobs: usize) -> Result<Self, EnumerationError> {
        let size =
            enumeration::double_factorial_odd(n).ok_or(EnumerationError::OrderTooLarge { n })?;
        let jobs = jobs.max(1).min(size.max(1) as usize);
        if jobs == 1 {
            return Self::scan(n);
        }
        let chunk = size / jobs as u64;
        let remainder = size % jobs as u64;
        let mut bounds = Vec::with_capacity(jobs + 1);
        let mut at = 0u64;
        bounds.push(at);
        for j in 0..jobs as u64 {
            at += chunk + if j < remainder { 1 } else { 0 };
            bounds.push(at);
        }
        debug_assert_eq!(at, size);

        let parts: Vec<Result<Self, EnumerationError>> = thread::scope(|scope| {
            let handles: Vec<_> = bounds
                .windows(2)
                .map(|w| {
                    let (start, end) = (w[0], w[1]);
                    scope.spawn(move || Self::scan_range(n, start..end))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("scan worker panicked"))
                .collect()
        });

        let mut merged: Option<Self> = None;
        for part in parts {
            let part = part?;
            merged = Some(match merged {
                None => part,
                Some(acc) => acc.merge(part),
            });
        }
        Ok(merged.expect("at least one range"))
    }

    /// Combines tables over disjoint rank ranges of the same order.
    pub fn merge(mut self, other: Self) -> Self {
        assert_eq!(
            self.order, other.order,
            "cannot merge censuses of different orders"
        );
        self.scanned += other.scanned;
        self.payload.merge(other.payload);
        self
    }
}

/// Histogram of lucky counts: `counts[k-1]` words with exactly k lucky cars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LuckyHistogram {
    counts: Vec<u64>,
}

impl LuckyHistogram {
    /// a_k = number of scanned words with k lucky cars, for k in 1..=n.
    pub fn count(&self, k: u32) -> u64 {
        self.counts.get(k as usize - 1).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }
}

impl CensusPayload for LuckyHistogram {
    const KIND: &'static str = "lucky-polynomial";

    fn empty(n: u32) -> Self {
        Self {
            counts: vec![0; n as usize],
        }
    }

    fn record(&mut self, _rank: u64, w: &StirlingWord) {
        let k = parking::lucky_set(w).len();
        if k > 0 {
            self.counts[k - 1] += 1;
        }
    }

    fn merge(&mut self, other: Self) {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
    }
}

/// Census entry for one admissible lucky set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetRecord {
    /// Number of words realizing the set.
    pub count: u64,
    /// Rank of the witness (minimal over the scan).
    pub witness_rank: u64,
    /// The minimal-rank word realizing the set.
    pub witness: StirlingWord,
}

/// The family {Lucky(w) : w in the scanned range}, with a minimal-rank
/// witness and the fiber size per set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleSets {
    sets: BTreeMap<LuckySet, SetRecord>,
}

impl AdmissibleSets {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, s: &LuckySet) -> bool {
        self.sets.contains_key(s)
    }

    pub fn get(&self, s: &LuckySet) -> Option<&SetRecord> {
        self.sets.get(s)
    }

    /// Sets with records, sorted by (size, lexicographic members).
    pub fn by_size(&self) -> Vec<(&LuckySet, &SetRecord)> {
        let mut rows: Vec<_> = self.sets.iter().collect();
        rows.sort_by_key(|(s, _)| (s.len(), s.members().to_vec()));
        rows
    }

    /// Number of sets of each cardinality, indexed from 1.
    pub fn size_distribution(&self) -> Vec<u64> {
        let max = self.sets.keys().map(|s| s.len()).max().unwrap_or(0);
        let mut dist = vec![0u64; max];
        for s in self.sets.keys() {
            dist[s.len() - 1] += 1;
        }
        dist
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LuckySet, &SetRecord)> {
        self.sets.iter()
    }
}

impl CensusPayload for AdmissibleSets {
    const KIND: &'static str = "admissible-sets";

    fn empty(_n: u32) -> Self {
        Self {
            sets: BTreeMap::new(),
        }
    }

    fn record(&mut self, rank: u64, w: &StirlingWord) {
        let lucky = parking::lucky_set(w);
        self.sets
            .entry(lucky)
            .and_modify(|r| {
                r.count += 1;
                if rank < r.witness_rank {
                    r.witness_rank = rank;
                    r.witness = w.clone();
                }
            })
            .or_insert_with(|| SetRecord {
                count: 1,
                witness_rank: rank,
                witness: w.clone(),
            });
    }

    fn merge(&mut self, other: Self) {
        for (set, rec) in other.sets {
            match self.sets.entry(set) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(rec);
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let mine = o.get_mut();
                    mine.count += rec.count;
                    if rec.witness_rank < mine.witness_rank {
                        mine.witness_rank = rec.witness_rank;
                        mine.witness = rec.witness;
                    }
                }
            }
        }
    }
}

/// Map from displacement composition to its fiber, the rank-ordered list of
/// words sharing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisplacementFibers {
    fibers: BTreeMap<DisplacementComposition, Vec<(u64, StirlingWord)>>,
}

impl DisplacementFibers {
    /// Number of distinct compositions.
    pub fn len(&self) -> usize {
        self.fibers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fibers.is_empty()
    }

    pub fn fiber(&self, m: &DisplacementComposition) -> Option<&[(u64, StirlingWord)]> {
        self.fibers.get(m).map(|v| v.as_slice())
    }

    pub fn iter(
        &self,
    ) -> impl Iterator<Item = (&DisplacementComposition, &Vec<(u64, StirlingWord)>)> {
        self.fibers.iter()
    }

    /// Words per number of zero parts (lucky cars), indexed from 1.
    pub fn zero_part_histogram(&self, n: u32) -> Vec<u64> {
        let mut hist = vec![0u64; n as usize];
        for (comp, words) in &self.fibers {
            let zeros = comp.zero_parts();
            if zeros > 0 && zeros <= n as usize {
                hist[zeros - 1] += words.len() as u64;
            }
        }
        hist
    }

    /// Words per number of nonzero parts (unlucky cars).
    pub fn nonzero_part_histogram(&self) -> BTreeMap<usize, u64> {
        let mut hist = BTreeMap::new();
        for (comp, words) in &self.fibers {
            *hist.entry(comp.nonzero_parts()).or_insert(0) += words.len() as u64;
        }
        hist
    }
}

impl CensusPayload for DisplacementFibers {
    const KIND: &'static str = "disp-fibers";

    fn empty(_n: u32) -> Self {
        Self {
            fibers: BTreeMap::new(),
        }
    }

    fn record(&mut self, rank: u64, w: &StirlingWord) {
        let comp = parking::displacement_composition(w);
        let fiber = self.fibers.entry(comp).or_default();
        // Scans feed ranks in increasing order within a range.
        debug_assert!(fiber.last().is_none_or(|(r, _)| *r < rank));
        fiber.push((rank, w.clone()));
    }

    fn merge(&mut self, other: Self) {
        for (comp, words) in other.fibers {
            match self.fibers.entry(comp) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(words);
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    // Order-independent: keep the fiber sorted by rank.
                    let mine = o.get_mut();
                    mine.extend(words);
                    mine.sort_by_key(|(r, _)| *r);
                }
            }
        }
    }
}

/// The admissible lucky sets of order n: a full scan keyed by lucky set.
pub fn admissible_sets(n: u32) -> Result<CensusTable<AdmissibleSets>, EnumerationError> {
    CensusTable::scan(n)
}

/// The displacement-composition census of order n: every fiber, plus
/// histograms by zero and nonzero part counts.
pub fn displacement_census(n: u32) -> Result<CensusTable<DisplacementFibers>, EnumerationError> {
    CensusTable::scan(n)
}

/// Canonical text rendering of an admissible-set census: one set per line,
/// ordered by (size, lexicographic members).
pub fn render_admissible_sets(table: &CensusTable<AdmissibleSets>) -> String {
    let mut out = String::new();
    for (set, _) in table.payload().by_size() {
        out.push_str(&set.to_string());
        out.push('\n');
    }
    out
}

/// Canonical text rendering of a displacement census: one fiber per line,
/// compositions in lexicographic order, fiber words in rank order.
pub fn render_displacement_census(table: &CensusTable<DisplacementFibers>) -> String {
    let mut out = String::new();
    for (comp, words) in table.payload().iter() {
        out.push_str(&comp.to_string());
        out.push_str(": ");
        for (i, (_, w)) in words.iter().enumerate() {
            if i > 0 {
                out.push_str(" | ");
            }
            out.push_str(&w.to_string());
        }
        out.push('\n');
    }
    out
}
