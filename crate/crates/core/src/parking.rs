//! The parking rule: car i drives to its preferred spot and takes the first
//! free spot at or after it.
//!
//! [`park`] is a pure function and allocates its successor structure per
//! call, so arbitrary parallel invocation is safe. [`park_linear`] is the
//! straight-line reference implementation kept as an oracle; the two must
//! agree on every input.

use thiserror::Error;

use crate::model::{
    DisplacementComposition, LuckySet, ParkingOutcome, PreferenceWord, StirlingWord,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParkError {
    /// Car `car` prefers a spot beyond the end of the street.
    #[error("car {car} prefers a spot beyond the street (length {len})")]
    PreferenceOutOfRange { car: usize, len: usize },
    /// Car `car` found every spot at or after its preference occupied.
    #[error("car {car} finds no free spot at or after its preference")]
    Failure { car: usize },
}

/// Successor structure over spots 1..=m answering "first free spot >= s" with
/// path-compressed jump pointers. Slot m+1 is the off-street sentinel.
struct NextFreeIndex {
    next: Vec<u32>,
}

impl NextFreeIndex {
    fn new(m: usize) -> Self {
        Self {
            next: (0..=m as u32 + 1).collect(),
        }
    }

    /// First free spot >= s, or m+1 if the street is full past s.
    fn first_free(&mut self, s: u32) -> u32 {
        let mut root = s;
        while self.next[root as usize] != root {
            root = self.next[root as usize];
        }
        let mut cur = s;
        while self.next[cur as usize] != cur {
            let hop = self.next[cur as usize];
            self.next[cur as usize] = root;
            cur = hop;
        }
        root
    }

    /// Marks a spot returned by `first_free` as taken.
    fn occupy(&mut self, s: u32) {
        debug_assert_eq!(self.next[s as usize], s, "occupying a taken spot");
        self.next[s as usize] = s + 1;
    }
}

/// Parks the cars of `word` in index order on a street with as many spots as
/// cars. Deterministic; returns the full outcome or the first car that
/// cannot park.
pub fn park(word: &PreferenceWord) -> Result<ParkingOutcome, ParkError> {
    let m = word.len();
    let mut free = NextFreeIndex::new(m);
    let mut spots = Vec::with_capacity(m);
    let mut parts = Vec::with_capacity(m);
    let mut lucky = Vec::new();
    let mut total = 0u64;

    for (idx, pref) in word.iter().enumerate() {
        let car = idx + 1;
        if pref as usize > m {
            return Err(ParkError::PreferenceOutOfRange { car, len: m });
        }
        let spot = free.first_free(pref);
        if spot as usize > m {
            return Err(ParkError::Failure { car });
        }
        free.occupy(spot);
        let d = u64::from(spot - pref);
        if d == 0 {
            lucky.push(car as u32);
        }
        total += d;
        spots.push(spot);
        parts.push(d);
    }

    let disvec = DisplacementComposition::new(parts).expect("car 1 is never displaced");
    Ok(ParkingOutcome::new(
        spots,
        LuckySet::from_members(lucky),
        disvec,
        total,
    ))
}

/// Reference implementation scanning the street spot by spot. Quadratic;
/// used to cross-check [`park`].
pub fn park_linear(word: &PreferenceWord) -> Result<ParkingOutcome, ParkError> {
    let m = word.len();
    let mut taken = vec![false; m + 1];
    let mut spots = Vec::with_capacity(m);
    let mut parts = Vec::with_capacity(m);
    let mut lucky = Vec::new();
    let mut total = 0u64;

    for (idx, pref) in word.iter().enumerate() {
        let car = idx + 1;
        if pref as usize > m {
            return Err(ParkError::PreferenceOutOfRange { car, len: m });
        }
        let mut spot = pref as usize;
        while spot <= m && taken[spot] {
            spot += 1;
        }
        if spot > m {
            return Err(ParkError::Failure { car });
        }
        taken[spot] = true;
        let d = (spot as u64) - u64::from(pref);
        if d == 0 {
            lucky.push(car as u32);
        }
        total += d;
        spots.push(spot as u32);
        parts.push(d);
    }

    let disvec = DisplacementComposition::new(parts).expect("car 1 is never displaced");
    Ok(ParkingOutcome::new(
        spots,
        LuckySet::from_members(lucky),
        disvec,
        total,
    ))
}

/// Lucky cars of a Stirling word. Stirling words always park, since their
/// sorted form (1,1,2,2,...,n,n) meets the parking-function criterion.
pub fn lucky_set(w: &StirlingWord) -> LuckySet {
    outcome(w).lucky().clone()
}

/// Per-car displacement vector of a Stirling word; the parts sum to n^2.
pub fn displacement_composition(w: &StirlingWord) -> DisplacementComposition {
    outcome(w).disvec().clone()
}

/// Total displacement of a Stirling word; always n^2.
pub fn total_displacement(w: &StirlingWord) -> u64 {
    outcome(w).total_displacement()
}

/// Full parking outcome of a Stirling word.
pub fn outcome(w: &StirlingWord) -> ParkingOutcome {
    park(w.word()).expect("Stirling words always park")
}
