//! Explicit constructions: the extremely-unlucky builder, the bijection with
//! balanced parentheses, reconstruction of an extremely lucky word from its
//! displacement composition, and witness words for admissible lucky sets.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{DisplacementComposition, PreferenceWord, StirlingWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("invalid choice code: {0}")]
    InvalidCode(String),
    #[error("unbalanced parenthesization: {0}")]
    Unbalanced(String),
    #[error("not the displacement composition of an extremely lucky word: {0}")]
    NotExtremelyLuckyComposition(String),
    #[error("no position available for the first copy of {value}")]
    NoValidPlacement { value: u32 },
    #[error("{{1,{i}}} is not an admissible lucky set for order {n}")]
    NotAdmissiblePair { n: u32, i: u32 },
    #[error("order {0} is odd; {{1,n-1,2n-2}} is admissible only for even orders")]
    OddOrder(u32),
    #[error("order {0} is too small for this construction (needs n >= {1})")]
    OrderTooSmall(u32, u32),
}

/// Mixed-radix choices t_n, t_{n-1}, ..., t_2 with t_x in [1, x-1]. Each
/// digit picks, by rank from the smallest, where the left copy of x goes
/// among the positions still open to it (every available position past x,
/// except the largest). The code space has size (n-1)!.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnluckyChoiceCode {
    n: u32,
    /// choices[0] = t_n, choices[1] = t_{n-1}, ..., last = t_2.
    choices: Vec<u32>,
}

impl UnluckyChoiceCode {
    pub fn new(n: u32, choices: Vec<u32>) -> Result<Self, ConstructError> {
        if n == 0 {
            return Err(ConstructError::OrderTooSmall(0, 1));
        }
        if choices.len() != n as usize - 1 {
            return Err(ConstructError::InvalidCode(format!(
                "order {n} needs {} choices (t_n down to t_2), got {}",
                n - 1,
                choices.len()
            )));
        }
        for (idx, &t) in choices.iter().enumerate() {
            let x = n - idx as u32;
            if t < 1 || t > x - 1 {
                return Err(ConstructError::InvalidCode(format!(
                    "choice t_{x} = {t} outside [1, {}]",
                    x - 1
                )));
            }
        }
        Ok(Self { n, choices })
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn choices(&self) -> &[u32] {
        &self.choices
    }

    /// Every code of order n, in odometer order ((n-1)! of them).
    pub fn all(n: u32) -> impl Iterator<Item = UnluckyChoiceCode> {
        let digits = n.saturating_sub(1) as usize;
        let mut current: Vec<u32> = vec![1; digits];
        let mut done = n == 0;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let code = UnluckyChoiceCode {
                n,
                choices: current.clone(),
            };
            // Bounds: t_x <= x-1 where x = n - idx.
            let mut i = current.len();
            loop {
                if i == 0 {
                    done = true;
                    break;
                }
                i -= 1;
                let x = n - i as u32;
                if current[i] < x - 1 {
                    current[i] += 1;
                    for slot in &mut current[i + 1..] {
                        *slot = 1;
                    }
                    break;
                }
            }
            Some(code)
        })
    }
}

/// Builds the extremely unlucky word selected by `code`: place the pair of n,
/// then n-1, and so on, the left copy of x at the chosen position past x and
/// the right copy at the next available one, finishing with 1 1 up front.
/// The image over all codes is exactly the words with lucky set {1}.
pub fn build_extremely_unlucky(code: &UnluckyChoiceCode) -> StirlingWord {
    let n = code.order();
    let len = 2 * n as usize;
    let mut word = vec![0u32; len];
    let mut used = vec![false; len + 1];

    for (idx, &t) in code.choices().iter().enumerate() {
        let x = n - idx as u32;
        let candidates: Vec<usize> = (x as usize + 1..=len).filter(|&p| !used[p]).collect();
        debug_assert_eq!(candidates.len(), x as usize);
        // nomax: everything but the largest candidate.
        let left = candidates[t as usize - 1];
        let bump = candidates[t as usize];
        used[left] = true;
        used[bump] = true;
        word[left - 1] = x;
        word[bump - 1] = x;
    }
    if n >= 1 {
        word[0] = 1;
        word[1] = 1;
    }

    let word = PreferenceWord::new(word).expect("all positions filled");
    StirlingWord::validate(word).expect("construction yields a Stirling word")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Paren {
    Open,
    Close,
}

/// A balanced string of parentheses: every prefix has at least as many opens
/// as closes and the totals agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParenString {
    symbols: Vec<Paren>,
}

impl ParenString {
    pub fn new(symbols: Vec<Paren>) -> Result<Self, ConstructError> {
        let mut depth: i64 = 0;
        for &s in &symbols {
            depth += match s {
                Paren::Open => 1,
                Paren::Close => -1,
            };
            if depth < 0 {
                return Err(ConstructError::Unbalanced(
                    "a prefix closes more pairs than it opens".into(),
                ));
            }
        }
        if depth != 0 {
            return Err(ConstructError::Unbalanced(format!(
                "{depth} pairs left open"
            )));
        }
        Ok(Self { symbols })
    }

    /// Number of pairs.
    pub fn pairs(&self) -> u32 {
        (self.symbols.len() / 2) as u32
    }

    pub fn symbols(&self) -> &[Paren] {
        &self.symbols
    }

    /// Every balanced string of n pairs, in lexicographic order with '('
    /// before ')'. There are C_n of them.
    pub fn all(n: u32) -> Vec<ParenString> {
        let mut out = Vec::new();
        let mut buf = Vec::with_capacity(2 * n as usize);
        fn go(buf: &mut Vec<Paren>, open: u32, depth: u32, n: u32, out: &mut Vec<ParenString>) {
            if buf.len() == 2 * n as usize {
                out.push(ParenString {
                    symbols: buf.clone(),
                });
                return;
            }
            if open < n {
                buf.push(Paren::Open);
                go(buf, open + 1, depth + 1, n, out);
                buf.pop();
            }
            if depth > 0 {
                buf.push(Paren::Close);
                go(buf, open, depth - 1, n, out);
                buf.pop();
            }
        }
        go(&mut buf, 0, 0, n, &mut out);
        out
    }
}

impl fmt::Display for ParenString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.symbols {
            f.write_str(match s {
                Paren::Open => "(",
                Paren::Close => ")",
            })?;
        }
        Ok(())
    }
}

impl FromStr for ParenString {
    type Err = ConstructError;

    fn from_str(s: &str) -> Result<Self, ConstructError> {
        let mut symbols = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '(' => symbols.push(Paren::Open),
                ')' => symbols.push(Paren::Close),
                c if c.is_whitespace() => {}
                c => {
                    return Err(ConstructError::Unbalanced(format!(
                        "unexpected character {c:?}"
                    )))
                }
            }
        }
        Self::new(symbols)
    }
}

/// The extremely lucky word matched with a balanced string: closes receive
/// n, n-1, ..., 1 left to right and each open receives its partner's value.
pub fn parens_to_extremely_lucky(p: &ParenString) -> StirlingWord {
    let n = p.pairs();
    let mut word = vec![0u32; p.symbols().len()];
    let mut stack: Vec<usize> = Vec::new();
    let mut next = n;
    for (i, &s) in p.symbols().iter().enumerate() {
        match s {
            Paren::Open => stack.push(i),
            Paren::Close => {
                let open = stack.pop().expect("balanced");
                word[open] = next;
                word[i] = next;
                next -= 1;
            }
        }
    }
    let word = PreferenceWord::new(word).expect("all positions filled");
    StirlingWord::validate(word).expect("matched pairs nest, so the word is Stirling")
}

/// First occurrences become opens, second occurrences closes. Defined for
/// every Stirling word; restricted to extremely lucky words it inverts
/// [`parens_to_extremely_lucky`].
pub fn stirling_to_parens(w: &StirlingWord) -> ParenString {
    let mut seen = vec![false; w.order() as usize + 1];
    let symbols = w
        .word()
        .iter()
        .map(|v| {
            if seen[v as usize] {
                Paren::Close
            } else {
                seen[v as usize] = true;
                Paren::Open
            }
        })
        .collect();
    ParenString::new(symbols).expect("first occurrences precede second occurrences")
}

/// Rebuilds the unique extremely lucky word with displacement composition
/// `m`. Requires 2n parts with exactly n zeros and nonzero entries reading
/// 1, 3, 5, ..., 2n-1 left to right: the i-th unlucky car of an extremely
/// lucky word prefers spot n-i+1 and is displaced by 2i-1.
pub fn extremely_lucky_from_disvec(
    m: &DisplacementComposition,
) -> Result<StirlingWord, ConstructError> {
    let len = m.len();
    if !len.is_multiple_of(2) {
        return Err(ConstructError::NotExtremelyLuckyComposition(format!(
            "odd length {len}"
        )));
    }
    let n = (len / 2) as u32;
    if m.zero_parts() != n as usize {
        return Err(ConstructError::NotExtremelyLuckyComposition(format!(
            "expected exactly {n} zero parts, found {}",
            m.zero_parts()
        )));
    }
    let nonzero_positions: Vec<usize> = m
        .parts()
        .iter()
        .enumerate()
        .filter(|(_, &d)| d != 0)
        .map(|(i, _)| i)
        .collect();
    for (i, &pos) in nonzero_positions.iter().enumerate() {
        let want = 2 * i as u64 + 1;
        if m.parts()[pos] != want {
            return Err(ConstructError::NotExtremelyLuckyComposition(format!(
                "nonzero parts must read 1,3,...,{}; part {} is {}",
                2 * n - 1,
                pos + 1,
                m.parts()[pos]
            )));
        }
    }

    // Second occurrences: nonzero positions receive n, n-1, ..., 1.
    let mut word = vec![0u32; len];
    for (i, &pos) in nonzero_positions.iter().enumerate() {
        word[pos] = n - i as u32;
    }
    // First occurrence of x fills the rightmost still-empty position left of
    // its second occurrence.
    for (i, &pos) in nonzero_positions.iter().enumerate() {
        let x = n - i as u32;
        let slot = word[..pos]
            .iter()
            .rposition(|&v| v == 0)
            .ok_or(ConstructError::NoValidPlacement { value: x })?;
        word[slot] = x;
    }

    let word = PreferenceWord::new(word).expect("all positions filled");
    let rebuilt = StirlingWord::validate(word)
        .map_err(|e| ConstructError::NotExtremelyLuckyComposition(e.to_string()))?;
    debug_assert_eq!(&crate::parking::displacement_composition(&rebuilt), m);
    Ok(rebuilt)
}

/// A word of order n with lucky set {1, i}. Exists exactly when 2 <= i <= n,
/// or i is odd with n < i <= 2n-1 (odd i <= n also uses the odd-case shape).
pub fn witness_two_element(n: u32, i: u32) -> Result<StirlingWord, ConstructError> {
    if n == 0 {
        return Err(ConstructError::NotAdmissiblePair { n, i });
    }
    let admissible = i >= 2 && ((i % 2 == 1 && i < 2 * n) || (i.is_multiple_of(2) && i <= n));
    if !admissible {
        return Err(ConstructError::NotAdmissiblePair { n, i });
    }

    let mut word: Vec<u32> = Vec::with_capacity(2 * n as usize);
    if i % 2 == 1 {
        // i = 2k+1: pairs 2..=k+1, then 1 1, then the remaining pairs.
        let k = (i - 1) / 2;
        for v in 2..=k + 1 {
            word.extend([v, v]);
        }
        word.extend([1, 1]);
        for v in k + 2..=n {
            word.extend([v, v]);
        }
    } else {
        // i = 2k <= n: pairs 1..=k-1, then k (2k)(2k), the pairs between,
        // and the second copy of k at the very end.
        let k = i / 2;
        for v in 1..=k - 1 {
            word.extend([v, v]);
        }
        word.push(k);
        word.extend([2 * k, 2 * k]);
        for v in k + 1..=2 * k - 1 {
            word.extend([v, v]);
        }
        for v in 2 * k + 1..=n {
            word.extend([v, v]);
        }
        word.push(k);
    }

    let word = PreferenceWord::new(word).expect("entries start at 1");
    Ok(StirlingWord::validate(word).expect("witness shape is Stirling"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftMode {
    /// w (n+1)(n+1): same lucky set one order up.
    Append,
    /// Increment every value and append 1 1: lucky set gains car 2n+1.
    Shift,
}

/// Embeds a word of order n into order n+1 while controlling its lucky set.
pub fn lift_admissible(w: &StirlingWord, mode: LiftMode) -> StirlingWord {
    let n = w.order();
    let mut word: Vec<u32> = w.as_slice().to_vec();
    match mode {
        LiftMode::Append => {
            word.extend([n + 1, n + 1]);
        }
        LiftMode::Shift => {
            for v in &mut word {
                *v += 1;
            }
            word.extend([1, 1]);
        }
    }
    let word = PreferenceWord::new(word).expect("entries start at 1");
    StirlingWord::validate(word).expect("lifting preserves the Stirling condition")
}

/// A word of even order n = 2k with lucky set {1, n-1, 2n-2}:
/// 3 3 4 4 ... (k+1)(k+1) 1 (k+2)(k+2) ... (2k)(2k) 2 2 1.
pub fn witness_1_n1_2n2(n: u32) -> Result<StirlingWord, ConstructError> {
    if !n.is_multiple_of(2) {
        return Err(ConstructError::OddOrder(n));
    }
    if n < 4 {
        return Err(ConstructError::OrderTooSmall(n, 4));
    }
    let k = n / 2;
    let mut word: Vec<u32> = Vec::with_capacity(2 * n as usize);
    for v in 3..=k + 1 {
        word.extend([v, v]);
    }
    word.push(1);
    for v in k + 2..=2 * k {
        word.extend([v, v]);
    }
    word.extend([2, 2, 1]);

    let word = PreferenceWord::new(word).expect("entries start at 1");
    Ok(StirlingWord::validate(word).expect("witness shape is Stirling"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parking::lucky_set;

    fn stirling(s: &str) -> StirlingWord {
        StirlingWord::parse(s).unwrap()
    }

    #[test]
    fn unlucky_builder_worked_example() {
        // Choices selecting positions 9, 6, 8, 5, 3 for the left copies of
        // 6, 5, 4, 3, 2.
        let code = UnluckyChoiceCode::new(6, vec![3, 1, 2, 2, 1]).unwrap();
        let w = build_extremely_unlucky(&code);
        assert_eq!(w, stirling("1,1,2,2,3,5,5,4,6,6,4,3"));
        assert_eq!(lucky_set(&w).members(), &[1]);
    }

    #[test]
    fn unlucky_builder_smallest_orders() {
        let only = UnluckyChoiceCode::new(2, vec![1]).unwrap();
        assert_eq!(build_extremely_unlucky(&only), stirling("1,1,2,2"));

        let trivial = UnluckyChoiceCode::new(1, vec![]).unwrap();
        assert_eq!(build_extremely_unlucky(&trivial), stirling("1,1"));

        let image: Vec<_> = UnluckyChoiceCode::all(3)
            .map(|c| build_extremely_unlucky(&c))
            .collect();
        assert_eq!(image.len(), 2);
        assert!(image.contains(&stirling("1,1,2,2,3,3")));
        assert!(image.contains(&stirling("1,1,2,3,3,2")));
    }

    #[test]
    fn unlucky_code_validation() {
        assert!(matches!(
            UnluckyChoiceCode::new(3, vec![1]),
            Err(ConstructError::InvalidCode(_))
        ));
        assert!(matches!(
            UnluckyChoiceCode::new(3, vec![3, 1]),
            Err(ConstructError::InvalidCode(_))
        ));
        assert_eq!(UnluckyChoiceCode::all(5).count(), 24);
    }

    #[test]
    fn parens_to_word_examples() {
        let p: ParenString = "()()(()(()))".parse().unwrap();
        assert_eq!(
            parens_to_extremely_lucky(&p),
            stirling("6,6,5,5,1,4,4,2,3,3,2,1")
        );

        let p: ParenString = "((()))".parse().unwrap();
        assert_eq!(parens_to_extremely_lucky(&p), stirling("1,2,3,3,2,1"));

        let p: ParenString = "()".parse().unwrap();
        assert_eq!(parens_to_extremely_lucky(&p), stirling("1,1"));
    }

    #[test]
    fn word_to_parens_examples() {
        assert_eq!(
            stirling_to_parens(&stirling("1,1,2,2,3,5,5,4,6,6,4,3")).to_string(),
            "()()(()(()))"
        );
        assert_eq!(
            stirling_to_parens(&stirling("6,6,5,5,1,4,4,2,3,3,2,1")).to_string(),
            "()()(()(()))"
        );
        assert_eq!(stirling_to_parens(&stirling("1,1")).to_string(), "()");
    }

    #[test]
    fn paren_string_validation_and_counts() {
        assert!(matches!(
            "(()".parse::<ParenString>(),
            Err(ConstructError::Unbalanced(_))
        ));
        assert!(matches!(
            ")(".parse::<ParenString>(),
            Err(ConstructError::Unbalanced(_))
        ));
        assert!(matches!(
            "(a)".parse::<ParenString>(),
            Err(ConstructError::Unbalanced(_))
        ));
        assert_eq!(ParenString::all(3).len(), 5);
        assert_eq!(ParenString::all(0).len(), 1);
    }

    #[test]
    fn disvec_reconstruction_example() {
        let m: DisplacementComposition = "(0,0,0,1,3,0,0,5,7,9)".parse().unwrap();
        let w = extremely_lucky_from_disvec(&m).unwrap();
        assert_eq!(w, stirling("1,4,5,5,4,2,3,3,2,1"));

        let m: DisplacementComposition = "(0,1)".parse().unwrap();
        assert_eq!(extremely_lucky_from_disvec(&m).unwrap(), stirling("1,1"));
    }

    #[test]
    fn disvec_reconstruction_rejections() {
        // Wrong zero count.
        let m: DisplacementComposition = "(0,0,1,3)".parse().unwrap();
        assert!(extremely_lucky_from_disvec(&m).is_ok());
        let m: DisplacementComposition = "(0,0,0,3)".parse().unwrap();
        assert!(matches!(
            extremely_lucky_from_disvec(&m),
            Err(ConstructError::NotExtremelyLuckyComposition(_))
        ));
        // Right pattern, but the slots left of position 3 fill up before the
        // first copy of 1 can be placed.
        let m: DisplacementComposition = "(0,1,3,0)".parse().unwrap();
        assert_eq!(
            extremely_lucky_from_disvec(&m),
            Err(ConstructError::NoValidPlacement { value: 1 })
        );
        // Nonzero entries out of pattern.
        let m: DisplacementComposition = "(0,2,0,2)".parse().unwrap();
        assert!(matches!(
            extremely_lucky_from_disvec(&m),
            Err(ConstructError::NotExtremelyLuckyComposition(_))
        ));
    }

    #[test]
    fn two_element_witnesses() {
        let w = witness_two_element(4, 3).unwrap();
        assert_eq!(w, stirling("2,2,1,1,3,3,4,4"));
        assert_eq!(lucky_set(&w).members(), &[1, 3]);

        let w = witness_two_element(4, 4).unwrap();
        assert_eq!(w, stirling("1,1,2,4,4,3,3,2"));
        assert_eq!(lucky_set(&w).members(), &[1, 4]);

        assert_eq!(
            witness_two_element(4, 8),
            Err(ConstructError::NotAdmissiblePair { n: 4, i: 8 })
        );
        assert_eq!(
            witness_two_element(4, 6),
            Err(ConstructError::NotAdmissiblePair { n: 4, i: 6 })
        );
        assert_eq!(
            witness_two_element(4, 1),
            Err(ConstructError::NotAdmissiblePair { n: 4, i: 1 })
        );
        assert_eq!(
            witness_two_element(4, 9),
            Err(ConstructError::NotAdmissiblePair { n: 4, i: 9 })
        );
    }

    #[test]
    fn lift_examples() {
        let one = stirling("1,1");
        let appended = lift_admissible(&one, LiftMode::Append);
        assert_eq!(appended, stirling("1,1,2,2"));
        assert_eq!(lucky_set(&appended).members(), &[1]);

        let shifted = lift_admissible(&one, LiftMode::Shift);
        assert_eq!(shifted, stirling("2,2,1,1"));
        assert_eq!(lucky_set(&shifted).members(), &[1, 3]);

        let w = stirling("3,3,1,4,4,2,2,1");
        let shifted = lift_admissible(&w, LiftMode::Shift);
        assert_eq!(lucky_set(&shifted).members(), &[1, 3, 6, 9]);
    }

    #[test]
    fn three_element_witnesses() {
        let w = witness_1_n1_2n2(4).unwrap();
        assert_eq!(w, stirling("3,3,1,4,4,2,2,1"));
        assert_eq!(lucky_set(&w).members(), &[1, 3, 6]);

        let w = witness_1_n1_2n2(6).unwrap();
        assert_eq!(w.len(), 12);
        assert_eq!(lucky_set(&w).members(), &[1, 5, 10]);

        assert_eq!(witness_1_n1_2n2(5), Err(ConstructError::OddOrder(5)));
        assert_eq!(
            witness_1_n1_2n2(2),
            Err(ConstructError::OrderTooSmall(2, 4))
        );
    }
}
