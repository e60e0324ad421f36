//! Stirling permutations as parking functions.
//!
//! A Stirling permutation of order n arranges the multiset {1,1,2,2,...,n,n}
//! so that everything between the two copies of a value exceeds it. Read as
//! a preference word, such an arrangement always parks: car i drives to its
//! preferred spot and takes the first free spot at or after it. This crate
//! computes the statistics that parking interpretation induces and checks
//! their structural laws by exhaustive scan:
//!
//! - lucky cars (cars parking exactly at their preference) and the sets of
//!   car indices realizable as a lucky set;
//! - displacement (spot minus preference, per car and in total, the total
//!   always being n^2);
//! - the extreme families: words with a single lucky car, counted by
//!   (n-1)!, and words with the maximum n lucky cars, counted by the
//!   Catalan numbers and in bijection with balanced parentheses;
//! - censuses over all (2n-1)!! words: lucky-statistic polynomials,
//!   admissible lucky sets, displacement-composition fibers.
//!
//! The `stirling` binary exposes all of it; `verify` replays every law and
//! compares the censuses against the reference tables under `data/`.

pub mod census;
pub mod cli;
pub mod construct;
pub mod enumeration;
pub mod model;
pub mod parking;
pub mod stats;
pub mod verify;

pub use model::{
    DisplacementComposition, LuckySet, ParkingOutcome, PreferenceWord, StirlingWord,
    ValidationError,
};
pub use parking::{displacement_composition, lucky_set, park, total_displacement, ParkError};
