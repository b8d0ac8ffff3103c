//! Bi-infinite symbolic sequences and their factor languages.
//!
//! Index convention shared with [`crate::pointset`]: the letter `T(i)` sits
//! between points `r_{i-1}` and `r_i`, and every two-sided construction puts
//! its left half at indices `i <= 0` and its right half at `i >= 1`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Letter = char;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("empty alphabet")]
    EmptyAlphabet,
    #[error("repeated letter {0:?} in alphabet")]
    RepeatedLetter(Letter),
    #[error("substitution erases letter {0:?}")]
    Erasing(Letter),
    #[error("image of {0:?} uses letter {1:?} outside the rule's domain")]
    NotClosed(Letter, Letter),
    #[error("letter {0:?} has no substitution image")]
    UnknownLetter(Letter),
    #[error("empty word in sequence spec")]
    EmptyWord,
    #[error("two-sided extension undefined: {0}")]
    NotExtendable(String),
    #[error("half width must be at least 1")]
    ZeroHalfWidth,
}

/// An ordered finite set of distinct letters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet(Vec<Letter>);

impl Alphabet {
    pub fn new(letters: Vec<Letter>) -> Result<Self, SequenceError> {
        if letters.is_empty() {
            return Err(SequenceError::EmptyAlphabet);
        }
        let mut seen = BTreeSet::new();
        for &c in &letters {
            if !seen.insert(c) {
                return Err(SequenceError::RepeatedLetter(c));
            }
        }
        Ok(Alphabet(letters))
    }

    /// Letters of `word` in order of first appearance.
    pub fn of_word(word: &[Letter]) -> Result<Self, SequenceError> {
        let mut out = Vec::new();
        for &c in word {
            if !out.contains(&c) {
                out.push(c);
            }
        }
        Alphabet::new(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn contains(&self, c: Letter) -> bool {
        self.0.contains(&c)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A non-erasing substitution closed over its domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<Letter, String>", into = "BTreeMap<Letter, String>")]
pub struct Substitution {
    images: BTreeMap<Letter, Vec<Letter>>,
}

impl TryFrom<BTreeMap<Letter, String>> for Substitution {
    type Error = SequenceError;

    fn try_from(rule: BTreeMap<Letter, String>) -> Result<Self, SequenceError> {
        if rule.is_empty() {
            return Err(SequenceError::EmptyAlphabet);
        }
        let mut images = BTreeMap::new();
        for (&k, v) in &rule {
            if v.is_empty() {
                return Err(SequenceError::Erasing(k));
            }
            for c in v.chars() {
                if !rule.contains_key(&c) {
                    return Err(SequenceError::NotClosed(k, c));
                }
            }
            images.insert(k, v.chars().collect());
        }
        Ok(Substitution { images })
    }
}

impl From<Substitution> for BTreeMap<Letter, String> {
    fn from(s: Substitution) -> Self {
        s.images.into_iter().map(|(k, v)| (k, v.into_iter().collect())).collect()
    }
}

impl Substitution {
    pub fn from_pairs(pairs: &[(Letter, &str)]) -> Result<Self, SequenceError> {
        pairs
            .iter()
            .map(|&(k, v)| (k, v.to_string()))
            .collect::<BTreeMap<_, _>>()
            .try_into()
    }

    /// The Fibonacci substitution a→ab, b→a.
    pub fn fibonacci() -> Self {
        Substitution::from_pairs(&[('a', "ab"), ('b', "a")]).expect("valid rule")
    }

    pub fn image(&self, c: Letter) -> Result<&[Letter], SequenceError> {
        self.images.get(&c).map(Vec::as_slice).ok_or(SequenceError::UnknownLetter(c))
    }

    pub fn apply(&self, word: &[Letter]) -> Result<Vec<Letter>, SequenceError> {
        let mut out = Vec::with_capacity(word.len() * 2);
        for &c in word {
            out.extend_from_slice(self.image(c)?);
        }
        Ok(out)
    }

    pub fn iterate(&self, word: &[Letter], times: usize) -> Result<Vec<Letter>, SequenceError> {
        let mut w = word.to_vec();
        for _ in 0..times {
            w = self.apply(&w)?;
        }
        Ok(w)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.images.keys().copied()
    }
}

/// `σⁿ(seed)`.
pub fn expand_substitution(rule: &Substitution, seed: Letter, iterations: usize) -> Result<String, SequenceError> {
    Ok(rule.iterate(&[seed], iterations)?.into_iter().collect())
}

/// A finite window `T[start_index .. start_index + len)` of a bi-infinite word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexedWord {
    pub start_index: i64,
    pub letters: Vec<Letter>,
}

impl IndexedWord {
    pub fn new(start_index: i64, letters: impl Into<Vec<Letter>>) -> Self {
        IndexedWord { start_index, letters: letters.into() }
    }

    pub fn from_str_at(start_index: i64, word: &str) -> Self {
        IndexedWord::new(start_index, word.chars().collect::<Vec<_>>())
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// One past the last index.
    pub fn end_index(&self) -> i64 {
        self.start_index + self.letters.len() as i64
    }

    pub fn letter_at(&self, i: i64) -> Option<Letter> {
        if i < self.start_index || i >= self.end_index() {
            None
        } else {
            Some(self.letters[(i - self.start_index) as usize])
        }
    }

    pub fn word(&self) -> String {
        self.letters.iter().collect()
    }

    /// Distance from index 0 to the nearer window edge.
    pub fn half_width(&self) -> i64 {
        (-self.start_index).min(self.end_index() - 1).max(0)
    }
}

/// A bi-infinite sequence `ℤ → Σ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SequenceSpec {
    /// Two-sided fixed point of `rule` seeded by the legal pair
    /// `left_seed | seed`; `T(0) = left_seed`, `T(1) = seed`. When
    /// `left_seed` is omitted the first letter (in rule order) that makes a
    /// legal, self-reproducing pair is used.
    Substitution {
        rule: Substitution,
        seed: Letter,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        left_seed: Option<Letter>,
    },
    /// `T(i) = word[i mod |word|]`.
    Periodic { word: String },
    /// `left` repeated on `i <= 0` (ending at `T(0)`), `right` repeated on
    /// `i >= 1` (starting at `T(1)`).
    Spliced { left: String, right: String },
}

impl SequenceSpec {
    pub fn fibonacci() -> Self {
        SequenceSpec::Substitution { rule: Substitution::fibonacci(), seed: 'a', left_seed: Some('a') }
    }

    pub fn periodic(word: &str) -> Self {
        SequenceSpec::Periodic { word: word.to_string() }
    }

    pub fn spliced(left: &str, right: &str) -> Self {
        SequenceSpec::Spliced { left: left.to_string(), right: right.to_string() }
    }
}

/// Smallest `p >= 1` with `first(σᵖ(v)) = v` and `last(σᵖ(u)) = u`.
fn seed_period(rule: &Substitution, u: Letter, v: Letter) -> Result<Option<usize>, SequenceError> {
    let n = rule.images.len();
    let (mut lu, mut fv) = (u, v);
    for p in 1..=n * n + 1 {
        lu = *rule.image(lu)?.last().expect("non-erasing");
        fv = rule.image(fv)?[0];
        if lu == u && fv == v {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// Does `uv` occur in some iterate `σᵏ(x)`?
fn pair_is_legal(rule: &Substitution, u: Letter, v: Letter) -> Result<bool, SequenceError> {
    let n = rule.images.len();
    for x in rule.letters() {
        let mut w = vec![x];
        for _ in 0..(2 * n + 4) {
            if w.windows(2).any(|p| p[0] == u && p[1] == v) {
                return Ok(true);
            }
            if w.len() > 1 << 16 {
                break;
            }
            w = rule.apply(&w)?;
        }
        if w.windows(2).any(|p| p[0] == u && p[1] == v) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Resolve the seed pair actually used for a substitution spec.
pub fn resolve_seed_pair(rule: &Substitution, seed: Letter, left_seed: Option<Letter>) -> Result<(Letter, Letter), SequenceError> {
    rule.image(seed)?;
    let candidates: Vec<Letter> = match left_seed {
        Some(u) => {
            rule.image(u)?;
            vec![u]
        }
        None => rule.letters().collect(),
    };
    for u in candidates {
        if seed_period(rule, u, seed)?.is_some() && pair_is_legal(rule, u, seed)? {
            return Ok((u, seed));
        }
    }
    Err(SequenceError::NotExtendable(format!(
        "no legal self-reproducing seed pair ending in {seed:?}"
    )))
}

/// `T` restricted to `[-half_width, half_width]`.
pub fn two_sided_window(spec: &SequenceSpec, half_width: usize) -> Result<IndexedWord, SequenceError> {
    if half_width == 0 {
        return Err(SequenceError::ZeroHalfWidth);
    }
    let h = half_width as i64;
    let letters: Vec<Letter> = match spec {
        SequenceSpec::Periodic { word } => {
            let w: Vec<Letter> = word.chars().collect();
            if w.is_empty() {
                return Err(SequenceError::EmptyWord);
            }
            let n = w.len() as i64;
            (-h..=h).map(|i| w[i.rem_euclid(n) as usize]).collect()
        }
        SequenceSpec::Spliced { left, right } => {
            let l: Vec<Letter> = left.chars().collect();
            let r: Vec<Letter> = right.chars().collect();
            if l.is_empty() || r.is_empty() {
                return Err(SequenceError::EmptyWord);
            }
            let (nl, nr) = (l.len() as i64, r.len() as i64);
            (-h..=h)
                .map(|i| {
                    if i <= 0 {
                        l[(nl - 1 + i).rem_euclid(nl) as usize]
                    } else {
                        r[(i - 1).rem_euclid(nr) as usize]
                    }
                })
                .collect()
        }
        SequenceSpec::Substitution { rule, seed, left_seed } => {
            let (u, v) = resolve_seed_pair(rule, *seed, *left_seed)?;
            let p = seed_period(rule, u, v)?.expect("resolved pair has a period");
            let (mut left, mut right) = (vec![u], vec![v]);
            while left.len() < half_width + 1 || right.len() < half_width {
                let (nl, nr) = (rule.iterate(&left, p)?, rule.iterate(&right, p)?);
                if nl.len() == left.len() && nr.len() == right.len() {
                    return Err(SequenceError::NotExtendable(format!(
                        "seed pair {u}|{v} does not grow under the substitution"
                    )));
                }
                left = nl;
                right = nr;
            }
            let nl = left.len() as i64;
            (-h..=h)
                .map(|i| if i <= 0 { left[(nl - 1 + i) as usize] } else { right[(i - 1) as usize] })
                .collect()
        }
    };
    Ok(IndexedWord::new(-h, letters))
}

/// Where a finite language came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub start_index: i64,
    pub window_len: usize,
    pub max_len: usize,
}

impl Truncation {
    pub fn half_width(&self) -> i64 {
        IndexedWord { start_index: self.start_index, letters: vec!['?'; self.window_len] }.half_width()
    }
}

/// A finite factorial language, stamped with the window it was read from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorLanguage {
    words: BTreeSet<String>,
    pub stamp: Truncation,
}

impl FactorLanguage {
    /// The factorial closure of `words` (all non-empty factors added).
    pub fn closure<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut out = BTreeSet::new();
        let mut max_len = 0;
        for w in words {
            let cs: Vec<Letter> = w.as_ref().chars().collect();
            max_len = max_len.max(cs.len());
            for i in 0..cs.len() {
                for j in i + 1..=cs.len() {
                    out.insert(cs[i..j].iter().collect::<String>());
                }
            }
        }
        FactorLanguage {
            words: out,
            stamp: Truncation { start_index: 0, window_len: 0, max_len },
        }
    }

    pub fn contains(&self, w: &str) -> bool {
        self.words.contains(w)
    }

    pub fn contains_letters(&self, w: &[Letter]) -> bool {
        self.words.contains(&w.iter().collect::<String>())
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    pub fn of_length(&self, n: usize) -> Vec<&str> {
        self.words().filter(|w| w.chars().count() == n).collect()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.stamp.max_len
    }

    pub fn as_set(&self) -> &BTreeSet<String> {
        &self.words
    }

    /// Every non-empty factor of a member is a member.
    pub fn is_factorial(&self) -> bool {
        self.words.iter().all(|w| {
            let cs: Vec<Letter> = w.chars().collect();
            (0..cs.len()).all(|i| {
                (i + 1..=cs.len()).all(|j| self.words.contains(&cs[i..j].iter().collect::<String>()))
            })
        })
    }
}

/// All distinct factors of length `1..=max_len` occurring in `word`.
pub fn factor_language(word: &IndexedWord, max_len: usize) -> FactorLanguage {
    let mut words = BTreeSet::new();
    let n = word.letters.len();
    for i in 0..n {
        for len in 1..=max_len.min(n - i) {
            words.insert(word.letters[i..i + len].iter().collect::<String>());
        }
    }
    FactorLanguage {
        words,
        stamp: Truncation { start_index: word.start_index, window_len: n, max_len },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ws: &[&str]) -> BTreeSet<String> {
        ws.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn fibonacci_iterates() {
        let fib = Substitution::fibonacci();
        assert_eq!(expand_substitution(&fib, 'a', 3).unwrap(), "abaab");
        assert_eq!(expand_substitution(&fib, 'a', 0).unwrap(), "a");
        assert_eq!(expand_substitution(&fib, 'b', 0).unwrap(), "b");
        let w = expand_substitution(&fib, 'a', 5).unwrap();
        assert_eq!(w, "abaababaabaab");
        assert_eq!(w.len(), 13);
    }

    #[test]
    fn erasing_and_open_rules_rejected() {
        assert_eq!(Substitution::from_pairs(&[('a', "ab"), ('b', "")]), Err(SequenceError::Erasing('b')));
        assert_eq!(Substitution::from_pairs(&[('a', "ac")]), Err(SequenceError::NotClosed('a', 'c')));
    }

    #[test]
    fn periodic_window_puts_first_letter_at_zero() {
        let w = two_sided_window(&SequenceSpec::periodic("ab"), 3).unwrap();
        assert_eq!(w.start_index, -3);
        assert_eq!(w.letter_at(0), Some('a'));
        assert_eq!(w.word(), "bababab");
    }

    #[test]
    fn spliced_window() {
        let w = two_sided_window(&SequenceSpec::spliced("a", "b"), 2).unwrap();
        assert_eq!(w.start_index, -2);
        assert_eq!(w.word(), "aaabb");
        assert_eq!(w.letter_at(0), Some('a'));
        assert_eq!(w.letter_at(1), Some('b'));
    }

    #[test]
    fn fibonacci_window_is_a_factor_of_a_long_iterate() {
        let w = two_sided_window(&SequenceSpec::fibonacci(), 4).unwrap();
        assert_eq!(w.len(), 9);
        let long = expand_substitution(&Substitution::fibonacci(), 'a', 8).unwrap();
        assert!(long.contains(&w.word()));
        // right half is the one-sided fixed point
        assert_eq!(w.letter_at(1), Some('a'));
        assert_eq!(w.letter_at(2), Some('b'));
        assert_eq!(w.letter_at(3), Some('a'));
    }

    #[test]
    fn default_left_seed_is_resolved() {
        let spec = SequenceSpec::Substitution { rule: Substitution::fibonacci(), seed: 'a', left_seed: None };
        let w = two_sided_window(&spec, 10).unwrap();
        assert_eq!(w, two_sided_window(&SequenceSpec::fibonacci(), 10).unwrap());
    }

    #[test]
    fn illegal_or_static_seeds_rejected() {
        // "bb" never occurs in the Fibonacci language
        let spec = SequenceSpec::Substitution { rule: Substitution::fibonacci(), seed: 'b', left_seed: Some('b') };
        assert!(matches!(two_sided_window(&spec, 3), Err(SequenceError::NotExtendable(_))));
        let still = Substitution::from_pairs(&[('a', "a")]).unwrap();
        let spec = SequenceSpec::Substitution { rule: still, seed: 'a', left_seed: None };
        assert!(matches!(two_sided_window(&spec, 3), Err(SequenceError::NotExtendable(_))));
        assert_eq!(two_sided_window(&SequenceSpec::periodic("ab"), 0), Err(SequenceError::ZeroHalfWidth));
    }

    #[test]
    fn factor_scans() {
        let l = factor_language(&IndexedWord::from_str_at(0, "abab"), 2);
        assert_eq!(l.as_set(), &set(&["a", "b", "ab", "ba"]));
        let l = factor_language(&IndexedWord::from_str_at(0, "aaa"), 3);
        assert_eq!(l.as_set(), &set(&["a", "aa", "aaa"]));
        let fib = two_sided_window(&SequenceSpec::fibonacci(), 8).unwrap();
        let l = factor_language(&fib, 2);
        assert_eq!(l.as_set(), &set(&["a", "b", "aa", "ab", "ba"]));
        assert!(l.is_factorial());
        assert_eq!(l.stamp.half_width(), 8);
    }

    #[test]
    fn spec_json_shapes() {
        let s: SequenceSpec =
            serde_json::from_str(r#"{"kind":"substitution","rule":{"a":"ab","b":"a"},"seed":"a"}"#).unwrap();
        assert!(matches!(s, SequenceSpec::Substitution { seed: 'a', left_seed: None, .. }));
        let p: SequenceSpec = serde_json::from_str(r#"{"kind":"periodic","word":"ab"}"#).unwrap();
        assert_eq!(p, SequenceSpec::periodic("ab"));
        let q: SequenceSpec = serde_json::from_str(r#"{"kind":"spliced","left":"a","right":"b"}"#).unwrap();
        assert_eq!(q, SequenceSpec::spliced("a", "b"));
        assert!(serde_json::from_str::<SequenceSpec>(r#"{"kind":"substitution","rule":{"a":""},"seed":"a"}"#).is_err());
    }
}
