//! Value types for preference words, Stirling words, lucky sets, and
//! displacement compositions.
//!
//! Cars and spots are 1-indexed throughout the public API. All types are
//! immutable after construction, so they can be shared freely across threads.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Violations detected while validating words.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("preference at position {position} is zero; spot indices start at 1")]
    ZeroEntry { position: usize },
    #[error("word has odd length {0}; a Stirling word of order n has length 2n")]
    OddLength(usize),
    #[error("entries are not the multiset {{1,1,...,n,n}}: offending value {value}")]
    WrongMultiset { value: u32 },
    #[error("value {inner} appears between the two copies of {outer}")]
    StirlingViolation { outer: u32, inner: u32 },
}

/// Errors from parsing the text form of a word.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseWordError {
    #[error("empty input")]
    Empty,
    #[error("invalid token {0:?}")]
    BadToken(String),
    #[error("compact digit strings may not contain '0' (spot indices start at 1)")]
    ZeroDigit,
}

/// A sequence of spot preferences, one per car. Entries are 1-based spot
/// indices and every entry is at least 1. The word need not be a parking
/// function; [`crate::parking::park`] decides that.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PreferenceWord {
    prefs: Vec<u32>,
}

impl PreferenceWord {
    pub fn new(prefs: Vec<u32>) -> Result<Self, ValidationError> {
        if let Some(position) = prefs.iter().position(|&p| p == 0) {
            return Err(ValidationError::ZeroEntry {
                position: position + 1,
            });
        }
        Ok(Self { prefs })
    }

    pub fn len(&self) -> usize {
        self.prefs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefs.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.prefs
    }

    /// Preference of `car` (1-based).
    pub fn pref(&self, car: usize) -> u32 {
        self.prefs[car - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.prefs.iter().copied()
    }

    /// Classic test: the weakly increasing rearrangement b satisfies
    /// b_i <= i for every i. Total predicate; entries above the word length
    /// simply make it false.
    pub fn is_parking_function(&self) -> bool {
        let mut sorted = self.prefs.clone();
        sorted.sort_unstable();
        sorted
            .iter()
            .enumerate()
            .all(|(i, &b)| (b as usize) <= i + 1)
    }
}

/// Parses the text form of a word: comma- or whitespace-separated decimal
/// values ("3,3,1,4,4,2,2,1"). A separator-free token of two or more
/// characters is read as a compact digit string ("33144221"), one value per
/// digit; this form only exists for words over {1..9}.
impl FromStr for PreferenceWord {
    type Err = ParseWordError;

    fn from_str(s: &str) -> Result<Self, ParseWordError> {
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Err(ParseWordError::Empty);
        }
        let tokens: Vec<&str> = trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.is_empty() {
            return Err(ParseWordError::Empty);
        }
        let mut prefs = Vec::new();
        if tokens.len() == 1 && tokens[0].len() > 1 && tokens[0].chars().all(|c| c.is_ascii_digit())
        {
            // Compact form takes precedence for multi-digit separator-free input.
            for c in tokens[0].chars() {
                let d = c.to_digit(10).expect("ascii digit");
                if d == 0 {
                    return Err(ParseWordError::ZeroDigit);
                }
                prefs.push(d);
            }
        } else {
            for tok in tokens {
                let v: u32 = tok
                    .parse()
                    .map_err(|_| ParseWordError::BadToken(tok.to_string()))?;
                if v == 0 {
                    return Err(ParseWordError::BadToken(tok.to_string()));
                }
                prefs.push(v);
            }
        }
        Ok(Self { prefs })
    }
}

/// Canonical text form: comma-separated decimal values.
impl fmt::Display for PreferenceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.prefs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// A validated Stirling word of order n: a permutation of the multiset
/// {1,1,2,2,...,n,n} in which every value lying strictly between the two
/// copies of i exceeds i. Constructible only through [`StirlingWord::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StirlingWord {
    order: u32,
    word: PreferenceWord,
}

impl StirlingWord {
    /// Checks the multiset and betweenness conditions, reporting the first
    /// violation in left-to-right scan order.
    pub fn validate(word: PreferenceWord) -> Result<Self, ValidationError> {
        let len = word.len();
        if !len.is_multiple_of(2) {
            return Err(ValidationError::OddLength(len));
        }
        let n = (len / 2) as u32;

        let mut counts = vec![0u8; n as usize + 1];
        for v in word.iter() {
            if v > n {
                return Err(ValidationError::WrongMultiset { value: v });
            }
            counts[v as usize] += 1;
        }
        for v in 1..=n {
            if counts[v as usize] != 2 {
                return Err(ValidationError::WrongMultiset { value: v });
            }
        }

        // With the multiset confirmed, a single stack pass finds the first
        // intruding value: open values sit on the stack in increasing order,
        // so any entry smaller than the top lies inside the top's pair.
        let mut open: Vec<u32> = Vec::with_capacity(n as usize);
        for v in word.iter() {
            match open.last() {
                Some(&top) if top > v => {
                    return Err(ValidationError::StirlingViolation {
                        outer: top,
                        inner: v,
                    });
                }
                Some(&top) if top == v => {
                    open.pop();
                }
                _ => open.push(v),
            }
        }
        debug_assert!(open.is_empty());
        Ok(Self { order: n, word })
    }

    /// Parses and validates the text form in one step.
    pub fn parse(text: &str) -> Result<Self, StirlingParseError> {
        let word: PreferenceWord = text.parse()?;
        Ok(Self::validate(word)?)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn word(&self) -> &PreferenceWord {
        &self.word
    }

    pub fn as_slice(&self) -> &[u32] {
        self.word.as_slice()
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Entry at 1-based position `i`.
    pub fn at(&self, i: usize) -> u32 {
        self.word.pref(i)
    }

    pub fn into_word(self) -> PreferenceWord {
        self.word
    }
}

impl fmt::Display for StirlingWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StirlingParseError {
    #[error(transparent)]
    Parse(#[from] ParseWordError),
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

impl FromStr for StirlingWord {
    type Err = StirlingParseError;

    fn from_str(s: &str) -> Result<Self, StirlingParseError> {
        Self::parse(s)
    }
}

/// The set of lucky cars of a word: strictly increasing 1-based car indices.
/// Also the key type for admissibility censuses.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LuckySet {
    members: Vec<u32>,
}

impl LuckySet {
    /// Normalizes to sorted distinct members.
    pub fn from_members(mut members: Vec<u32>) -> Self {
        members.sort_unstable();
        members.dedup();
        Self { members }
    }

    pub fn empty() -> Self {
        Self {
            members: Vec::new(),
        }
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, car: u32) -> bool {
        self.members.binary_search(&car).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.members.iter().copied()
    }

    /// Smallest member after `car`, if any.
    pub fn next_after(&self, car: u32) -> Option<u32> {
        let idx = match self.members.binary_search(&car) {
            Ok(i) => i + 1,
            Err(i) => i,
        };
        self.members.get(idx).copied()
    }
}

/// Renders as `{1,3,6}`.
impl fmt::Display for LuckySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

/// Accepts `{1,3,6}`, `1,3,6`, or whitespace-separated indices.
impl FromStr for LuckySet {
    type Err = ParseWordError;

    fn from_str(s: &str) -> Result<Self, ParseWordError> {
        let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut members = Vec::new();
        for tok in inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let v: u32 = tok
                .parse()
                .map_err(|_| ParseWordError::BadToken(tok.to_string()))?;
            if v == 0 {
                return Err(ParseWordError::BadToken(tok.to_string()));
            }
            members.push(v);
        }
        if members.is_empty() {
            return Err(ParseWordError::Empty);
        }
        Ok(Self::from_members(members))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompositionError {
    #[error("first part must be 0 (car 1 always parks in its preferred spot), got {0}")]
    FirstPartNonzero(u64),
}

/// The per-car displacement vector (d(1),...,d(m)). The first part is always
/// zero; for a Stirling word of order n the parts sum to n^2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DisplacementComposition {
    parts: Vec<u64>,
}

impl DisplacementComposition {
    pub fn new(parts: Vec<u64>) -> Result<Self, CompositionError> {
        if let Some(&first) = parts.first() {
            if first != 0 {
                return Err(CompositionError::FirstPartNonzero(first));
            }
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.parts.iter().sum()
    }

    pub fn zero_parts(&self) -> usize {
        self.parts.iter().filter(|&&d| d == 0).count()
    }

    pub fn nonzero_parts(&self) -> usize {
        self.parts.len() - self.zero_parts()
    }
}

/// Renders as `(0,1,0,1,3,4)`.
impl fmt::Display for DisplacementComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Accepts `(0,1,0,1,3,4)` or a bare comma/whitespace-separated list.
impl FromStr for DisplacementComposition {
    type Err = ParseCompositionError;

    fn from_str(s: &str) -> Result<Self, ParseCompositionError> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut parts = Vec::new();
        for tok in inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let v: u64 = tok
                .parse()
                .map_err(|_| ParseCompositionError::BadToken(tok.to_string()))?;
            parts.push(v);
        }
        Ok(Self::new(parts)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseCompositionError {
    #[error("invalid part {0:?}")]
    BadToken(String),
    #[error(transparent)]
    Invalid(#[from] CompositionError),
}

/// Result of parking every car of a word: final spots, the lucky set, the
/// displacement composition, and the total displacement.
///
/// Internal consistency, maintained by [`crate::parking::park`]:
/// spots are distinct, `spots[i] >= prefs[i]`, `disvec[i] = spots[i] - prefs[i]`,
/// `total` is the sum of the parts, and car i is lucky exactly when
/// `disvec[i] == 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParkingOutcome {
    spots: Vec<u32>,
    lucky: LuckySet,
    disvec: DisplacementComposition,
    total: u64,
}

impl ParkingOutcome {
    pub(crate) fn new(
        spots: Vec<u32>,
        lucky: LuckySet,
        disvec: DisplacementComposition,
        total: u64,
    ) -> Self {
        Self {
            spots,
            lucky,
            disvec,
            total,
        }
    }

    /// Spot assigned to each car, in car order (1-based spot indices).
    pub fn spots(&self) -> &[u32] {
        &self.spots
    }

    /// Spot of `car` (1-based).
    pub fn spot(&self, car: usize) -> u32 {
        self.spots[car - 1]
    }

    pub fn lucky(&self) -> &LuckySet {
        &self.lucky
    }

    pub fn disvec(&self) -> &DisplacementComposition {
        &self.disvec
    }

    pub fn total_displacement(&self) -> u64 {
        self.total
    }
}
