//! Exhaustive enumeration of Stirling words with rank/unrank.
//!
//! Every Stirling word of order n arises uniquely by inserting the adjacent
//! pair "k k" into one of the 2k-1 gaps of a word of order k-1, for
//! k = 2..=n. Ranks are therefore mixed-radix integers with digits
//! c_2,...,c_n and radices 3,5,...,2n-1, c_2 least significant. Gaps are
//! numbered 0 (before the word) through 2k-2 (after the word), left to right.
//!
//! Iteration is pull-based and stateless across items, so disjoint rank
//! ranges can be scanned in parallel with no coordination.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{LuckySet, PreferenceWord, StirlingWord};
use crate::parking;

/// Default order ceiling for exhaustive scans; Q_8 already has 2,027,025
/// elements. The CLI requires an explicit override beyond this.
pub const DEFAULT_SCAN_CEILING: u32 = 8;

/// Default length ceiling for streaming all parking functions of a given
/// length ((n+1)^(n-1) of them among n^n candidates).
pub const DEFAULT_PF_CEILING: u32 = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("rank {rank} out of range: Q_{n} has {size} elements")]
    RankOutOfRange { n: u32, rank: u64, size: u64 },
    #[error("order {n} exceeds the 64-bit rank space")]
    OrderTooLarge { n: u32 },
    #[error("invalid filter: {0}")]
    InvalidFilter(String),
    #[error(
        "length {n} exceeds the enumeration ceiling {ceiling} (raise it explicitly to proceed)"
    )]
    BoundExceeded { n: u32, ceiling: u32 },
    #[error("insertion code digit {digit} at value {value} exceeds its radix bound {bound}")]
    DigitOutOfRange { value: u32, digit: u32, bound: u32 },
    #[error("insertion code for order {n} needs {expected} digits, got {got}")]
    WrongCodeLength { n: u32, expected: u32, got: usize },
}

/// (2n-1)!! = 1 * 3 * 5 * ... * (2n-1), the size of Q_n. `None` on u64
/// overflow (first at n = 18).
pub fn double_factorial_odd(n: u32) -> Option<u64> {
    let mut acc = 1u64;
    for k in 1..=n as u64 {
        acc = acc.checked_mul(2 * k - 1)?;
    }
    Some(acc)
}

fn q_size(n: u32) -> Result<u64, EnumerationError> {
    double_factorial_odd(n).ok_or(EnumerationError::OrderTooLarge { n })
}

/// Mixed-radix insertion code: digit c_k in [0, 2k-2] picks the gap for the
/// pair "k k", for k = 2..=n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InsertionCode {
    n: u32,
    /// digits[k - 2] = c_k
    digits: Vec<u32>,
}

impl InsertionCode {
    pub fn new(n: u32, digits: Vec<u32>) -> Result<Self, EnumerationError> {
        if digits.len() != n.saturating_sub(1) as usize {
            return Err(EnumerationError::WrongCodeLength {
                n,
                expected: n.saturating_sub(1),
                got: digits.len(),
            });
        }
        for (i, &d) in digits.iter().enumerate() {
            let k = i as u32 + 2;
            if d > 2 * k - 2 {
                return Err(EnumerationError::DigitOutOfRange {
                    value: k,
                    digit: d,
                    bound: 2 * k - 2,
                });
            }
        }
        Ok(Self { n, digits })
    }

    /// Decodes a rank, least-significant digit first (c_2, radix 3).
    pub fn from_rank(n: u32, rank: u64) -> Result<Self, EnumerationError> {
        let size = q_size(n)?;
        if rank >= size {
            return Err(EnumerationError::RankOutOfRange { n, rank, size });
        }
        let mut digits = Vec::with_capacity(n.saturating_sub(1) as usize);
        let mut r = rank;
        for k in 2..=n as u64 {
            let radix = 2 * k - 1;
            digits.push((r % radix) as u32);
            r /= radix;
        }
        debug_assert_eq!(r, 0);
        Ok(Self { n, digits })
    }

    pub fn rank(&self) -> u64 {
        let mut r = 0u64;
        for (i, &d) in self.digits.iter().enumerate().rev() {
            let k = i as u64 + 2;
            r = r * (2 * k - 1) + u64::from(d);
        }
        r
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// Builds the word: start from "1 1" and insert each pair at its gap.
    pub fn build(&self) -> StirlingWord {
        let mut word: Vec<u32> = if self.n == 0 { vec![] } else { vec![1, 1] };
        for (i, &gap) in self.digits.iter().enumerate() {
            let k = i as u32 + 2;
            let at = gap as usize;
            word.splice(at..at, [k, k]);
        }
        let word = PreferenceWord::new(word).expect("entries start at 1");
        StirlingWord::validate(word).expect("pair insertion preserves the Stirling condition")
    }
}

/// Word at `rank` in Q_n (0-based, rank order fixed by the insertion code).
pub fn unrank(n: u32, rank: u64) -> Result<StirlingWord, EnumerationError> {
    Ok(InsertionCode::from_rank(n, rank)?.build())
}

/// Inverse of [`unrank`]. Peels off the adjacent pair of the largest value;
/// its position is the gap digit.
pub fn rank(w: &StirlingWord) -> u64 {
    let mut word: Vec<u32> = w.as_slice().to_vec();
    let mut digits = Vec::with_capacity(w.order() as usize);
    for k in (2..=w.order()).rev() {
        let first = word
            .iter()
            .position(|&v| v == k)
            .expect("validated word contains every value");
        debug_assert_eq!(
            word.get(first + 1),
            Some(&k),
            "copies of the maximum are adjacent"
        );
        word.drain(first..first + 2);
        digits.push(first as u64);
    }
    let mut r = 0u64;
    for (i, &d) in digits.iter().enumerate() {
        let k = u64::from(w.order()) - i as u64;
        r = r * (2 * k - 1) + d;
    }
    r
}

/// Iterator over a rank range of Q_n, in increasing rank order.
#[derive(Debug, Clone)]
pub struct StirlingRange {
    n: u32,
    next: u64,
    end: u64,
}

impl Iterator for StirlingRange {
    type Item = StirlingWord;

    fn next(&mut self) -> Option<StirlingWord> {
        if self.next >= self.end {
            return None;
        }
        let w = unrank(self.n, self.next).expect("rank in range");
        self.next += 1;
        Some(w)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for StirlingRange {}

/// All of Q_n in rank order.
pub fn all(n: u32) -> Result<StirlingRange, EnumerationError> {
    let size = q_size(n)?;
    Ok(StirlingRange {
        n,
        next: 0,
        end: size,
    })
}

/// The slice of Q_n with ranks in [start, end).
pub fn range(n: u32, start: u64, end: u64) -> Result<StirlingRange, EnumerationError> {
    let size = q_size(n)?;
    if start > end || end > size {
        return Err(EnumerationError::RankOutOfRange { n, rank: end, size });
    }
    Ok(StirlingRange {
        n,
        next: start,
        end,
    })
}

/// Structural test for maximal luck: the subword of second appearances reads
/// n, n-1, ..., 1. Equivalent to having n lucky cars.
pub fn is_extremely_lucky(w: &StirlingWord) -> bool {
    let mut seen = vec![false; w.order() as usize + 1];
    let mut expected = w.order();
    for v in w.word().iter() {
        if seen[v as usize] {
            if v != expected {
                return false;
            }
            expected -= 1;
        } else {
            seen[v as usize] = true;
        }
    }
    true
}

/// Exactly one lucky car, decided by simulation.
pub fn is_extremely_unlucky(w: &StirlingWord) -> bool {
    parking::lucky_set(w).len() == 1
}

/// Post-hoc predicates for [`enumerate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Filter {
    All,
    ExtremelyLucky,
    ExtremelyUnlucky,
    LuckyCount(u32),
    LuckySet(LuckySet),
}

impl Filter {
    /// Filters are validated against the order before a scan starts.
    pub fn check_against(&self, n: u32) -> Result<(), EnumerationError> {
        match self {
            Filter::LuckyCount(k) if *k > n => Err(EnumerationError::InvalidFilter(format!(
                "lucky-count {k} exceeds the maximum of {n} lucky cars for order {n}"
            ))),
            Filter::LuckyCount(0) => Err(EnumerationError::InvalidFilter(
                "lucky-count must be at least 1 (car 1 is always lucky)".into(),
            )),
            Filter::LuckySet(s) if n > 0 && s.members().last().copied() > Some(2 * n) => {
                Err(EnumerationError::InvalidFilter(format!(
                    "lucky-set {s} names a car beyond 2n = {}",
                    2 * n
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn matches(&self, w: &StirlingWord) -> bool {
        match self {
            Filter::All => true,
            Filter::ExtremelyLucky => is_extremely_lucky(w),
            Filter::ExtremelyUnlucky => is_extremely_unlucky(w),
            Filter::LuckyCount(k) => parking::lucky_set(w).len() == *k as usize,
            Filter::LuckySet(s) => parking::lucky_set(w) == *s,
        }
    }
}

impl FromStr for Filter {
    type Err = EnumerationError;

    fn from_str(s: &str) -> Result<Self, EnumerationError> {
        match s {
            "all" => Ok(Filter::All),
            "extremely-lucky" => Ok(Filter::ExtremelyLucky),
            "extremely-unlucky" => Ok(Filter::ExtremelyUnlucky),
            _ => {
                if let Some(k) = s.strip_prefix("lucky-count=") {
                    let k: u32 = k
                        .parse()
                        .map_err(|_| EnumerationError::InvalidFilter(format!("bad count {k:?}")))?;
                    Ok(Filter::LuckyCount(k))
                } else if let Some(set) = s.strip_prefix("lucky-set=") {
                    let set: LuckySet = set
                        .parse()
                        .map_err(|e| EnumerationError::InvalidFilter(format!("bad set: {e}")))?;
                    Ok(Filter::LuckySet(set))
                } else {
                    Err(EnumerationError::InvalidFilter(format!(
                        "unknown filter {s:?} (expected all, extremely-lucky, extremely-unlucky, \
                         lucky-count=K, or lucky-set=S)"
                    )))
                }
            }
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Filter::All => write!(f, "all"),
            Filter::ExtremelyLucky => write!(f, "extremely-lucky"),
            Filter::ExtremelyUnlucky => write!(f, "extremely-unlucky"),
            Filter::LuckyCount(k) => write!(f, "lucky-count={k}"),
            Filter::LuckySet(s) => write!(f, "lucky-set={s}"),
        }
    }
}

/// Q_n filtered, in increasing rank order. Consumers may stop early.
pub fn enumerate(
    n: u32,
    filter: Filter,
) -> Result<impl Iterator<Item = StirlingWord>, EnumerationError> {
    filter.check_against(n)?;
    Ok(all(n)?.filter(move |w| filter.matches(w)))
}

/// Lexicographic stream of every parking function of length n (all alpha in
/// [n]^n passing the sorted test). Guarded by a ceiling because the
/// candidate space is n^n.
pub fn parking_functions(
    n: u32,
    ceiling: u32,
) -> Result<impl Iterator<Item = PreferenceWord>, EnumerationError> {
    if n > ceiling {
        return Err(EnumerationError::BoundExceeded { n, ceiling });
    }
    Ok(TupleOdometer::new(n).filter(|w| w.is_parking_function()))
}

/// Counts words of [n]^n in lexicographic order.
struct TupleOdometer {
    n: u32,
    current: Vec<u32>,
    done: bool,
}

impl TupleOdometer {
    fn new(n: u32) -> Self {
        Self {
            n,
            current: vec![1; n as usize],
            done: false,
        }
    }
}

impl Iterator for TupleOdometer {
    type Item = PreferenceWord;

    fn next(&mut self) -> Option<PreferenceWord> {
        if self.done {
            return None;
        }
        if self.n == 0 {
            self.done = true;
            return Some(PreferenceWord::new(vec![]).unwrap());
        }
        let item = PreferenceWord::new(self.current.clone()).unwrap();
        let mut i = self.current.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.current[i] < self.n {
                self.current[i] += 1;
                for slot in &mut self.current[i + 1..] {
                    *slot = 1;
                }
                break;
            }
        }
        Some(item)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_factorials() {
        let expected = [1u64, 1, 3, 15, 105, 945, 10395, 135135, 2027025];
        for (n, &want) in expected.iter().enumerate() {
            assert_eq!(double_factorial_odd(n as u32), Some(want));
        }
        assert_eq!(double_factorial_odd(17), Some(6332659870762850625));
        assert_eq!(double_factorial_odd(18), None);
    }

    #[test]
    fn unrank_order_two_table() {
        assert_eq!(unrank(2, 0).unwrap().as_slice(), &[2, 2, 1, 1]);
        assert_eq!(unrank(2, 1).unwrap().as_slice(), &[1, 2, 2, 1]);
        assert_eq!(unrank(2, 2).unwrap().as_slice(), &[1, 1, 2, 2]);
        assert!(matches!(
            unrank(2, 3),
            Err(EnumerationError::RankOutOfRange { .. })
        ));
    }

    #[test]
    fn unrank_smallest_orders() {
        assert_eq!(unrank(1, 0).unwrap().as_slice(), &[1, 1]);
        assert!(unrank(0, 0).unwrap().is_empty());
        let words: Vec<_> = all(3).unwrap().collect();
        assert_eq!(words.len(), 15);
        let mut distinct = words.clone();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct.len(), 15);
    }

    #[test]
    fn rank_inverts_unrank() {
        assert_eq!(rank(&StirlingWord::parse("1,1").unwrap()), 0);
        assert_eq!(rank(&StirlingWord::parse("1,1,2,2").unwrap()), 2);
        for r in 0..105 {
            assert_eq!(rank(&unrank(4, r).unwrap()), r);
        }
    }

    #[test]
    fn insertion_code_round_trip_and_bounds() {
        let code = InsertionCode::from_rank(4, 77).unwrap();
        assert_eq!(code.rank(), 77);
        assert!(matches!(
            InsertionCode::new(3, vec![3, 0]),
            Err(EnumerationError::DigitOutOfRange {
                value: 2,
                digit: 3,
                bound: 2
            })
        ));
        assert!(InsertionCode::new(3, vec![2, 4]).is_ok());
    }

    #[test]
    fn filters() {
        let unlucky: Vec<_> = enumerate(3, Filter::ExtremelyUnlucky)
            .unwrap()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(unlucky, vec!["1,1,2,3,3,2", "1,1,2,2,3,3"]);

        assert_eq!(enumerate(3, Filter::ExtremelyLucky).unwrap().count(), 5);
        assert_eq!(enumerate(2, Filter::All).unwrap().count(), 3);

        let with_set: Vec<_> = enumerate(2, Filter::LuckySet("{1,3}".parse().unwrap()))
            .unwrap()
            .collect();
        assert_eq!(with_set.len(), 1);
        assert_eq!(with_set[0].as_slice(), &[2, 2, 1, 1]);

        assert!(matches!(
            enumerate(3, Filter::LuckyCount(4)),
            Err(EnumerationError::InvalidFilter(_))
        ));
    }

    #[test]
    fn filter_parsing() {
        assert_eq!("all".parse::<Filter>().unwrap(), Filter::All);
        assert_eq!(
            "lucky-count=2".parse::<Filter>().unwrap(),
            Filter::LuckyCount(2)
        );
        assert_eq!(
            "lucky-set={1,3}".parse::<Filter>().unwrap(),
            Filter::LuckySet("{1,3}".parse().unwrap())
        );
        assert!("descents".parse::<Filter>().is_err());
    }

    #[test]
    fn structural_and_simulated_luck_tests() {
        let w = StirlingWord::parse("6,6,5,5,1,4,4,2,3,3,2,1").unwrap();
        assert!(is_extremely_lucky(&w));
        let w = StirlingWord::parse("1,1,2,2,3,5,5,4,6,6,4,3").unwrap();
        assert!(!is_extremely_lucky(&w));
        assert!(is_extremely_unlucky(&w));
    }

    #[test]
    fn parking_function_stream_counts() {
        assert_eq!(parking_functions(1, 7).unwrap().count(), 1);
        assert_eq!(parking_functions(3, 7).unwrap().count(), 16);
        assert_eq!(parking_functions(4, 7).unwrap().count(), 125);
        assert!(matches!(
            parking_functions(8, 7),
            Err(EnumerationError::BoundExceeded { n: 8, ceiling: 7 })
        ));
    }

    #[test]
    fn parking_function_stream_is_lexicographic() {
        let pfs: Vec<_> = parking_functions(2, 7).unwrap().collect();
        let texts: Vec<_> = pfs.iter().map(|w| w.to_string()).collect();
        assert_eq!(texts, vec!["1,1", "1,2", "2,1"]);
    }

    #[test]
    fn range_bounds() {
        assert_eq!(range(3, 0, 5).unwrap().count(), 5);
        assert_eq!(range(3, 15, 15).unwrap().count(), 0);
        assert!(range(3, 0, 16).is_err());
        assert!(range(3, 9, 5).is_err());
    }
}
