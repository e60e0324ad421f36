//! Acceptance suite: one test per release criterion, each printing a
//! pass/fail line (visible with `cargo test --test acceptance -- --nocapture`).
//! Time budgets are part of the criteria and asserted.

use std::time::{Duration, Instant};

use stirling_parking::census::{self, AdmissibleSets, CensusTable, DisplacementFibers};
use stirling_parking::construct::{self, ParenString};
use stirling_parking::enumeration::{self, Filter};
use stirling_parking::parking;
use stirling_parking::stats;
use stirling_parking::verify::{run_suite, Suite};

const GOLDEN_TN: &str = include_str!("../data/tn_polynomials.txt");
const GOLDEN_ADMISSIBLE_N4: &str = include_str!("../data/admissible_sets_n4.txt");
const GOLDEN_Q3_CENSUS: &str = include_str!("../data/q3_displacement_census.txt");

struct Criterion {
    name: &'static str,
    started: Instant,
}

impl Criterion {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            started: Instant::now(),
        }
    }

    fn pass(self, budget: Option<Duration>) {
        let elapsed = self.started.elapsed();
        println!("[PASS] {} ({elapsed:.2?})", self.name);
        if let Some(budget) = budget {
            assert!(
                elapsed <= budget,
                "[FAIL] {}: took {elapsed:.2?}, budget {budget:.2?}",
                self.name
            );
        }
    }
}

#[test]
fn counting_stirling_words() {
    let c = Criterion::new("counting-qn: |Q_n| = (2n-1)!! for n = 1..7");
    let expected = [1u64, 3, 15, 105, 945, 10395, 135135];
    for (i, &want) in expected.iter().enumerate() {
        let n = i as u32 + 1;
        let got = enumeration::all(n).unwrap().count() as u64;
        assert_eq!(got, want, "n={n}");
    }
    c.pass(Some(Duration::from_secs(10)));
}

#[test]
fn admissible_table_order_four() {
    let c = Criterion::new("table-4-admissible: 31 sets, sizes (1,5,11,14), byte-exact");
    let table = census::admissible_sets(4).unwrap();
    assert_eq!(table.payload().len(), 31);
    assert_eq!(table.payload().size_distribution(), vec![1, 5, 11, 14]);
    assert_eq!(census::render_admissible_sets(&table), GOLDEN_ADMISSIBLE_N4);
    c.pass(Some(Duration::from_secs(1)));
}

#[test]
fn lucky_polynomial_table() {
    let c = Criterion::new("table-tn: paper-style T_n(q) matches for n = 2..8");
    let golden: Vec<&str> = GOLDEN_TN.lines().collect();
    assert_eq!(golden.len(), 7);
    for (i, &line) in golden.iter().enumerate() {
        let n = i as u32 + 2;
        let poly = stats::lucky_polynomial(n).unwrap();
        let rendered = format!("T_{}(q) = {}", n, poly.paper_style());
        assert_eq!(rendered, line, "n={n}");
    }
    c.pass(Some(Duration::from_secs(60)));
}

#[test]
fn displacement_census_order_three() {
    let c = Criterion::new(
        "q3-displacement-census: 15 compositions, fiber of (0,1,0,1,3,4) has size 2",
    );
    let table = census::displacement_census(3).unwrap();
    assert_eq!(table.scanned(), 15);
    assert_eq!(census::render_displacement_census(&table), GOLDEN_Q3_CENSUS);
    let fiber = table
        .payload()
        .fiber(&"(0,1,0,1,3,4)".parse().unwrap())
        .unwrap();
    assert_eq!(fiber.len(), 2);
    let total_words: usize = table.payload().iter().map(|(_, ws)| ws.len()).sum();
    assert_eq!(total_words, 15);
    c.pass(Some(Duration::from_secs(1)));
}

#[test]
fn extreme_family_counts() {
    let c = Criterion::new("extreme-counts: (n-1)! unlucky and C_n lucky for n = 1..7");
    for n in 1..=7u32 {
        let unlucky = enumeration::enumerate(n, Filter::ExtremelyUnlucky)
            .unwrap()
            .count() as u64;
        assert_eq!(unlucky, stats::factorial(n - 1).unwrap(), "unlucky n={n}");
        let lucky = enumeration::enumerate(n, Filter::ExtremelyLucky)
            .unwrap()
            .count() as u64;
        assert_eq!(lucky, stats::catalan(n).unwrap(), "lucky n={n}");
    }
    c.pass(None);
}

#[test]
fn displacement_law() {
    let c = Criterion::new("displacement-law: d(w) = n^2 on all of Q_n for n <= 6");
    for n in 1..=6u32 {
        for w in enumeration::all(n).unwrap() {
            assert_eq!(
                parking::total_displacement(&w),
                u64::from(n) * u64::from(n),
                "w={w}"
            );
        }
    }
    c.pass(None);
}

#[test]
fn lucky_product_formula_cross_check() {
    let c = Criterion::new("lucky-product-formula: simulation equals the product for n = 1..6");
    for n in 1..=6u32 {
        let check = stats::gessel_seo_check(n, 6).unwrap();
        assert!(
            check.equal,
            "n={n}: simulated {} vs closed form {}",
            check.computed, check.closed_form
        );
    }
    c.pass(Some(Duration::from_secs(30)));
}

#[test]
fn bijection_round_trips() {
    let c = Criterion::new("bijection-round-trips: rank/unrank, parens, disvec reconstruction");
    for n in 0..=5u32 {
        let size = enumeration::double_factorial_odd(n).unwrap();
        for r in 0..size {
            let w = enumeration::unrank(n, r).unwrap();
            assert_eq!(enumeration::rank(&w), r);
            assert_eq!(enumeration::unrank(n, enumeration::rank(&w)).unwrap(), w);
        }
    }
    for n in 0..=7u32 {
        for p in ParenString::all(n) {
            let w = construct::parens_to_extremely_lucky(&p);
            assert_eq!(construct::stirling_to_parens(&w), p, "n={n}");
        }
    }
    for n in 1..=6u32 {
        for w in enumeration::enumerate(n, Filter::ExtremelyLucky).unwrap() {
            let m = parking::displacement_composition(&w);
            assert_eq!(
                construct::extremely_lucky_from_disvec(&m).unwrap(),
                w,
                "n={n}"
            );
        }
    }
    c.pass(None);
}

#[test]
fn theorem_property_suite() {
    let c = Criterion::new("theorem-suite: every structural law at its stated order range");
    let report = run_suite(Suite::Theorems, None, 2);
    println!("{report}");
    assert!(report.all_passed(), "counterexamples above");
    c.pass(None);
}

#[test]
fn parallel_census_determinism() {
    let c = Criterion::new("parallel-determinism: --jobs 1 and --jobs 8 byte-identical for n <= 6");
    for n in 1..=6u32 {
        let seq = CensusTable::<AdmissibleSets>::scan_parallel(n, 1).unwrap();
        let par = CensusTable::<AdmissibleSets>::scan_parallel(n, 8).unwrap();
        assert_eq!(
            census::render_admissible_sets(&seq),
            census::render_admissible_sets(&par),
            "admissible n={n}"
        );
        assert_eq!(seq, par);

        let seq = CensusTable::<DisplacementFibers>::scan_parallel(n, 1).unwrap();
        let par = CensusTable::<DisplacementFibers>::scan_parallel(n, 8).unwrap();
        assert_eq!(
            census::render_displacement_census(&seq),
            census::render_displacement_census(&par),
            "fibers n={n}"
        );
        assert_eq!(seq, par);

        let seq = stats::lucky_polynomial_with(n, 8, 1).unwrap();
        let par = stats::lucky_polynomial_with(n, 8, 8).unwrap();
        assert_eq!(seq.paper_style(), par.paper_style(), "polynomial n={n}");
    }
    c.pass(None);
}
