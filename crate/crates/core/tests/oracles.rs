//! Independent oracles: everything here re-derives expected values through a
//! different route than the code under test (multiset permutations plus the
//! betweenness definition, linear-probe parking, recurrences) and then pins
//! the library against them.

use std::collections::{BTreeMap, HashSet};

use stirling_parking::census;
use stirling_parking::construct;
use stirling_parking::enumeration::{self, Filter};
use stirling_parking::model::{PreferenceWord, StirlingWord};
use stirling_parking::parking;
use stirling_parking::stats;

/// Standard next-permutation step; starting from the sorted arrangement it
/// walks every distinct permutation of a multiset exactly once.
fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All arrangements of {1,1,2,2,...,n,n}.
fn multiset_arrangements(n: u32) -> Vec<Vec<u32>> {
    let mut v: Vec<u32> = (1..=n).flat_map(|x| [x, x]).collect();
    let mut out = vec![v.clone()];
    while next_permutation(&mut v) {
        out.push(v.clone());
    }
    out
}

/// The betweenness condition read off its definition, value by value.
fn is_stirling_direct(word: &[u32]) -> bool {
    let n = (word.len() / 2) as u32;
    for v in 1..=n {
        let first = match word.iter().position(|&x| x == v) {
            Some(p) => p,
            None => return false,
        };
        let last = word.iter().rposition(|&x| x == v).unwrap();
        if first == last {
            return false;
        }
        if word[first + 1..last].iter().any(|&x| x < v) {
            return false;
        }
    }
    true
}

fn stirling(s: &str) -> StirlingWord {
    StirlingWord::parse(s).unwrap()
}

#[test]
fn enumeration_matches_multiset_filter() {
    for n in 0..=4u32 {
        let brute: HashSet<Vec<u32>> = multiset_arrangements(n)
            .into_iter()
            .filter(|w| is_stirling_direct(w))
            .collect();
        let expected = enumeration::double_factorial_odd(n).unwrap();
        assert_eq!(brute.len() as u64, expected, "brute-force count at n={n}");

        let enumerated: HashSet<Vec<u32>> = enumeration::all(n)
            .unwrap()
            .map(|w| w.as_slice().to_vec())
            .collect();
        assert_eq!(enumerated, brute, "enumeration vs brute force at n={n}");
    }
}

#[test]
fn validation_agrees_with_direct_definition() {
    for n in 1..=4u32 {
        for word in multiset_arrangements(n) {
            let direct = is_stirling_direct(&word);
            let validated =
                StirlingWord::validate(PreferenceWord::new(word.clone()).unwrap()).is_ok();
            assert_eq!(validated, direct, "n={n} word={word:?}");
        }
    }
}

#[test]
fn engine_agrees_with_linear_probe_on_all_arrangements() {
    for n in 1..=4u32 {
        for word in multiset_arrangements(n) {
            let word = PreferenceWord::new(word).unwrap();
            assert_eq!(
                parking::park(&word),
                parking::park_linear(&word),
                "word {word}"
            );
        }
    }
}

#[test]
fn engine_agrees_with_linear_probe_on_parking_functions() {
    for n in 1..=5u32 {
        for word in enumeration::parking_functions(n, 7).unwrap() {
            let fast = parking::park(&word).expect("parking function parks");
            let slow = parking::park_linear(&word).expect("parking function parks");
            assert_eq!(fast, slow, "word {word}");
        }
    }
}

#[test]
fn parked_outcomes_are_internally_consistent() {
    for n in 1..=4u32 {
        for word in multiset_arrangements(n) {
            let word = PreferenceWord::new(word).unwrap();
            let Ok(out) = parking::park(&word) else {
                continue;
            };
            let m = word.len();
            let mut sorted = out.spots().to_vec();
            sorted.sort_unstable();
            assert_eq!(sorted, (1..=m as u32).collect::<Vec<_>>());
            let mut total = 0;
            for car in 1..=m {
                let d = out.disvec().parts()[car - 1];
                assert!(out.spot(car) >= word.pref(car));
                assert_eq!(u64::from(out.spot(car) - word.pref(car)), d);
                assert_eq!(out.lucky().contains(car as u32), d == 0);
                total += d;
            }
            assert_eq!(out.total_displacement(), total);
        }
    }
}

#[test]
fn extreme_counts_against_brute_force() {
    for n in 1..=4u32 {
        let words: Vec<Vec<u32>> = multiset_arrangements(n)
            .into_iter()
            .filter(|w| is_stirling_direct(w))
            .collect();
        let mut unlucky = 0u64;
        let mut lucky = 0u64;
        for word in &words {
            let out = parking::park_linear(&PreferenceWord::new(word.clone()).unwrap()).unwrap();
            let k = out.lucky().len() as u32;
            // At n = 1 the single word is both extremes at once.
            if k == 1 {
                unlucky += 1;
            }
            if k == n {
                lucky += 1;
            }
        }
        assert_eq!(
            unlucky,
            stats::factorial(n - 1).unwrap(),
            "unlucky count n={n}"
        );
        assert_eq!(lucky, stats::catalan(n).unwrap(), "lucky count n={n}");
        assert_eq!(
            enumeration::enumerate(n, Filter::ExtremelyUnlucky)
                .unwrap()
                .count() as u64,
            unlucky
        );
        assert_eq!(
            enumeration::enumerate(n, Filter::ExtremelyLucky)
                .unwrap()
                .count() as u64,
            lucky
        );
    }
}

#[test]
fn catalan_matches_the_convolution_recurrence() {
    let mut dp = vec![1u64; 1];
    for n in 1..=10usize {
        let c: u64 = (0..n).map(|i| dp[i] * dp[n - 1 - i]).sum();
        dp.push(c);
    }
    for (n, &want) in dp.iter().enumerate() {
        assert_eq!(stats::catalan(n as u32).unwrap(), want);
    }
    assert_eq!(dp[8], 1430);
}

#[test]
fn paren_strings_counted_by_catalan() {
    for n in 0..=7u32 {
        assert_eq!(
            construct::ParenString::all(n).len() as u64,
            stats::catalan(n).unwrap()
        );
    }
}

#[test]
fn q3_displacement_pairs_from_hand_simulation() {
    // Every order-3 word with its composition, re-derived by the linear
    // probe rather than the engine.
    let mut by_comp: BTreeMap<Vec<u64>, Vec<String>> = BTreeMap::new();
    for w in enumeration::all(3).unwrap() {
        let out = parking::park_linear(w.word()).unwrap();
        by_comp
            .entry(out.disvec().parts().to_vec())
            .or_default()
            .push(w.to_string());
    }
    assert_eq!(by_comp.len(), 14);
    let census = census::displacement_census(3).unwrap();
    assert_eq!(census.payload().len(), 14);
    for (comp, words) in census.payload().iter() {
        let mine: Vec<String> = words.iter().map(|(_, w)| w.to_string()).collect();
        assert_eq!(&mine, by_comp.get(comp.parts()).unwrap(), "fiber of {comp}");
    }
    // The lone size-two fiber.
    assert_eq!(by_comp.get([0, 1, 0, 1, 3, 4].as_slice()).unwrap().len(), 2);
}

#[test]
fn shared_paren_image_example() {
    // Two words, one extremely unlucky and one extremely lucky, flatten to
    // the same parenthesization; only the lucky one comes back.
    let unlucky = stirling("1,1,2,2,3,5,5,4,6,6,4,3");
    let lucky = stirling("6,6,5,5,1,4,4,2,3,3,2,1");
    let p1 = construct::stirling_to_parens(&unlucky);
    let p2 = construct::stirling_to_parens(&lucky);
    assert_eq!(p1, p2);
    assert_eq!(construct::parens_to_extremely_lucky(&p1), lucky);
}

#[test]
fn admissible_census_against_direct_collection() {
    for n in 1..=5u32 {
        let mut direct: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for w in enumeration::all(n).unwrap() {
            let out = parking::park_linear(w.word()).unwrap();
            *direct.entry(out.lucky().members().to_vec()).or_default() += 1;
        }
        let table = census::admissible_sets(n).unwrap();
        assert_eq!(
            table.payload().len(),
            direct.len(),
            "set family size at n={n}"
        );
        for (set, rec) in table.payload().iter() {
            assert_eq!(
                direct.get(set.members()),
                Some(&rec.count),
                "count of {set}"
            );
        }
    }
}

#[test]
fn gessel_seo_simulation_against_independent_tally() {
    // Re-tally with the linear probe over the raw candidate space.
    for n in 1..=4u32 {
        let mut counts = vec![0u64; n as usize];
        let mut stack = vec![1u32; n as usize];
        let mut done = false;
        while !done {
            let word = PreferenceWord::new(stack.clone()).unwrap();
            if let Ok(out) = parking::park_linear(&word) {
                counts[out.lucky().len() - 1] += 1;
            }
            let mut i = stack.len();
            loop {
                if i == 0 {
                    done = true;
                    break;
                }
                i -= 1;
                if stack[i] < n {
                    stack[i] += 1;
                    for s in &mut stack[i + 1..] {
                        *s = 1;
                    }
                    break;
                }
            }
        }
        let check = stats::gessel_seo_check(n, 6).unwrap();
        assert_eq!(check.computed.counts(), counts.as_slice(), "length {n}");
        assert!(check.equal);
    }
}
