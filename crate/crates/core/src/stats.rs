//! Distribution of the lucky statistic: the polynomials summing q^lucky over
//! Q_n, Catalan numbers, and the cross-check of the classical product formula
//! for the same statistic over all parking functions.
//!
//! All arithmetic is exact; overflow is detected, never wrapped.

use std::fmt;

use thiserror::Error;

use crate::census::{CensusTable, LuckyHistogram};
use crate::enumeration::{self, EnumerationError};
use crate::parking;

/// Default length ceiling for the parking-function cross-check
/// (length 6 means 16807 parking functions among 46656 candidates).
pub const DEFAULT_GESSEL_SEO_CEILING: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("n = {n} exceeds the scan ceiling {ceiling} (raise it explicitly to proceed)")]
    BoundExceeded { n: u32, ceiling: u32 },
    #[error("value does not fit in 64 bits")]
    Overflow,
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
}

/// Coefficients a_1..a_n of a lucky-statistic polynomial: a_k counts the
/// words with exactly k lucky cars. Index 0 is absent since no word has zero
/// lucky cars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientVector {
    n: u32,
    counts: Vec<u64>,
}

impl CoefficientVector {
    pub fn new(n: u32, counts: Vec<u64>) -> Self {
        debug_assert_eq!(counts.len(), n as usize);
        Self { n, counts }
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    /// a_k, for k in 1..=n.
    pub fn coefficient(&self, k: u32) -> u64 {
        self.counts.get(k as usize - 1).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn sum(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Descending powers, coefficient 1 elided, power 1 written bare:
    /// "14q^4 + 49q^3 + 36q^2 + 6q".
    pub fn paper_style(&self) -> String {
        let mut terms = Vec::new();
        for k in (1..=self.n).rev() {
            let a = self.coefficient(k);
            if a == 0 {
                continue;
            }
            let power = if k == 1 {
                "q".to_string()
            } else {
                format!("q^{k}")
            };
            terms.push(if a == 1 { power } else { format!("{a}{power}") });
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: serde_json::Map<String, serde_json::Value> = (1..=self.n)
            .map(|k| (k.to_string(), serde_json::Value::from(self.coefficient(k))))
            .collect();
        serde_json::json!({ "n": self.n, "coeffs": coeffs })
    }
}

impl fmt::Display for CoefficientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.paper_style())
    }
}

/// n! with overflow detection.
pub fn factorial(n: u32) -> Result<u64, StatsError> {
    let mut acc = 1u64;
    for k in 2..=u64::from(n) {
        acc = acc.checked_mul(k).ok_or(StatsError::Overflow)?;
    }
    Ok(acc)
}

/// Catalan number C_n = binomial(2n, n) / (n+1), exactly.
pub fn catalan(n: u32) -> Result<u64, StatsError> {
    // binomial(2n, n) as the running product of (n+i)/i, integral at every step.
    let mut b: u128 = 1;
    for i in 1..=u128::from(n) {
        b = b
            .checked_mul(u128::from(n) + i)
            .ok_or(StatsError::Overflow)?
            / i;
    }
    let c = b / (u128::from(n) + 1);
    u64::try_from(c).map_err(|_| StatsError::Overflow)
}

/// Exact lucky-count distribution over Q_n from a full scan.
pub fn lucky_polynomial(n: u32) -> Result<CoefficientVector, StatsError> {
    lucky_polynomial_with(n, enumeration::DEFAULT_SCAN_CEILING, 1)
}

/// Same, with an explicit ceiling and worker count.
pub fn lucky_polynomial_with(
    n: u32,
    ceiling: u32,
    jobs: usize,
) -> Result<CoefficientVector, StatsError> {
    if n > ceiling {
        return Err(StatsError::BoundExceeded { n, ceiling });
    }
    let table = CensusTable::<LuckyHistogram>::scan_parallel(n, jobs)?;
    Ok(CoefficientVector::new(n, table.payload().counts().to_vec()))
}

/// Outcome of the parking-function cross-check: the simulated lucky
/// distribution over all parking functions of length n against the closed
/// form q * prod_{i=1}^{n-1} (i + (n-i+1)q).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GesselSeoCheck {
    pub computed: CoefficientVector,
    pub closed_form: CoefficientVector,
    pub equal: bool,
}

/// Expands q * prod_{i=1}^{n-1} (i + (n-i+1)q) into coefficients of q^1..q^n.
pub fn gessel_seo_closed_form(n: u32) -> Result<CoefficientVector, StatsError> {
    // poly[j] = coefficient of q^j before the final shift by q.
    let mut poly: Vec<u64> = vec![1];
    for i in 1..u64::from(n) {
        let constant = i;
        let linear = u64::from(n) - i + 1;
        let mut next = vec![0u64; poly.len() + 1];
        for (j, &c) in poly.iter().enumerate() {
            next[j] = next[j]
                .checked_add(c.checked_mul(constant).ok_or(StatsError::Overflow)?)
                .ok_or(StatsError::Overflow)?;
            next[j + 1] = next[j + 1]
                .checked_add(c.checked_mul(linear).ok_or(StatsError::Overflow)?)
                .ok_or(StatsError::Overflow)?;
        }
        poly = next;
    }
    poly.resize(n as usize, 0);
    Ok(CoefficientVector::new(n, poly))
}

/// Tallies q^lucky over every parking function of length n by simulation and
/// compares with the closed form.
pub fn gessel_seo_check(n: u32, ceiling: u32) -> Result<GesselSeoCheck, StatsError> {
    if n > ceiling {
        return Err(StatsError::BoundExceeded { n, ceiling });
    }
    let mut counts = vec![0u64; n as usize];
    for alpha in enumeration::parking_functions(n, n.max(enumeration::DEFAULT_PF_CEILING))? {
        let outcome = parking::park(&alpha).expect("streamed words are parking functions");
        let k = outcome.lucky().len();
        if k > 0 {
            counts[k - 1] += 1;
        }
    }
    let computed = CoefficientVector::new(n, counts);
    let closed_form = gessel_seo_closed_form(n)?;
    let equal = computed == closed_form;
    Ok(GesselSeoCheck {
        computed,
        closed_form,
        equal,
    })
}

/// Whether a coefficient vector rises to a single peak and falls afterwards
/// (plateaus allowed), and where the largest coefficient sits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnimodalityReport {
    pub n: u32,
    pub unimodal: bool,
    /// Smallest k attaining the maximum coefficient; None for empty vectors.
    pub mode: Option<u32>,
}

pub fn unimodality_report(coeffs: &CoefficientVector) -> UnimodalityReport {
    let counts = coeffs.counts();
    let mode = counts
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.cmp(b).then(j.cmp(i)))
        .map(|(i, _)| i as u32 + 1);
    let mut falling = false;
    let mut unimodal = true;
    for pair in counts.windows(2) {
        if pair[1] < pair[0] {
            falling = true;
        } else if pair[1] > pair[0] && falling {
            unimodal = false;
            break;
        }
    }
    UnimodalityReport {
        n: coeffs.order(),
        unimodal,
        mode,
    }
}
