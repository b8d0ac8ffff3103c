//! Universal groups: the equal-length relation harvest for tilings of the
//! line, the connected tiling semigroup `S(L)`, and presentations read off
//! tables of maximal elements.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::QuadraticRational;
use crate::modelset::{gxh_max_table, CutProjectScheme, MacbeathData};
use crate::pointset::{LengthFunction, PointSet1D, PointSetError};
use crate::presentation::{
    presentation_from_pairs, universal_presentation_from_table, FreeWord, PartialTable, Presentation, PresentationError,
};
use crate::psgamma::maxset_table;
use crate::sequences::{factor_language, FactorLanguage, IndexedWord, Letter, Truncation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniversalError {
    #[error("max_len must be at least {0}")]
    MaxLenTooSmall(usize),
    #[error("harvested pair ({0}, {1}) has different letter counts")]
    UnequalCounts(String, String),
    #[error("decomposition needs a string of length at least 2")]
    TooShort,
    #[error("accent string is not in C(L)")]
    NotInC,
    #[error(transparent)]
    PointSet(#[from] PointSetError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// One harvested relation `u = v` with `|u| = |v| = length`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HarvestPair {
    pub u: String,
    pub v: String,
    pub length: QuadraticRational,
}

/// The Σ-presentation of `G_D`: generators Σ, one relation per unordered
/// pair of distinct equal-length factors seen in the window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarvestReport {
    pub presentation: Presentation,
    pub half_width: i64,
    pub max_len: usize,
    pub stamp: Truncation,
    pub pairs: Vec<HarvestPair>,
}

fn letter_counts(w: &str, alphabet: &[Letter]) -> Vec<usize> {
    alphabet.iter().map(|&c| w.chars().filter(|&d| d == c).count()).collect()
}

impl HarvestReport {
    /// Pairs whose letter-count vectors differ.
    pub fn count_violations(&self) -> Vec<&HarvestPair> {
        let alphabet: Vec<Letter> = self.presentation.generators.iter().filter_map(|g| g.chars().next()).collect();
        self.pairs
            .iter()
            .filter(|p| letter_counts(&p.u, &alphabet) != letter_counts(&p.v, &alphabet))
            .collect()
    }

    /// Abort with the first pair whose letter counts differ.
    pub fn require_equal_counts(&self) -> Result<(), UniversalError> {
        match self.count_violations().first() {
            Some(p) => Err(UniversalError::UnequalCounts(p.u.clone(), p.v.clone())),
            None => Ok(()),
        }
    }

    pub fn contains_pair(&self, a: &str, b: &str) -> bool {
        self.pairs.iter().any(|p| (p.u == a && p.v == b) || (p.u == b && p.v == a))
    }

    pub fn relation_set(&self) -> BTreeSet<(String, String)> {
        self.pairs.iter().map(|p| (p.u.clone(), p.v.clone())).collect()
    }
}

/// Harvest equal-length relations from the factors of `word` up to
/// `max_len` letters.
pub fn harvest_equal_length_relations(word: &IndexedWord, lengths: &LengthFunction, max_len: usize) -> Result<HarvestReport, UniversalError> {
    if max_len < 2 {
        return Err(UniversalError::MaxLenTooSmall(2));
    }
    let lang = factor_language(word, max_len);
    let mut by_length: BTreeMap<QuadraticRational, Vec<String>> = BTreeMap::new();
    for w in lang.words() {
        let chars: Vec<Letter> = w.chars().collect();
        by_length.entry(lengths.word_length(&chars)?).or_default().push(w.to_string());
    }
    let alphabet: Vec<String> = lengths.iter().map(|(c, _)| c.to_string()).collect();
    let mut pairs = Vec::new();
    for (len, ws) in &by_length {
        for (i, u) in ws.iter().enumerate() {
            for v in &ws[i + 1..] {
                pairs.push(HarvestPair { u: u.clone(), v: v.clone(), length: len.clone() });
            }
        }
    }
    let index: BTreeMap<char, usize> = lengths.iter().enumerate().map(|(i, (c, _))| (c, i)).collect();
    let to_word = |s: &str| FreeWord::from(s.chars().map(|c| crate::presentation::Syllable::pos(index[&c])).collect::<Vec<_>>());
    let word_pairs: Vec<(FreeWord, FreeWord)> = pairs.iter().map(|p| (to_word(&p.u), to_word(&p.v))).collect();
    let presentation = presentation_from_pairs(alphabet, &word_pairs)?;
    Ok(HarvestReport {
        presentation,
        half_width: word.half_width(),
        max_len,
        stamp: lang.stamp.clone(),
        pairs,
    })
}

/// An element of `S(L)`: a word with an out-letter (grave accent) and an
/// in-letter (acute accent); equal positions carry a check.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AccentString {
    pub letters: Vec<Letter>,
    pub out: usize,
    #[serde(rename = "in")]
    pub inn: usize,
}

impl AccentString {
    pub fn new(word: &str, out: usize, inn: usize) -> Self {
        let letters: Vec<Letter> = word.chars().collect();
        assert!(out < letters.len() && inn < letters.len(), "accent outside the word");
        AccentString { letters, out, inn }
    }

    /// `ǎ`.
    pub fn check(c: Letter) -> Self {
        AccentString { letters: vec![c], out: 0, inn: 0 }
    }

    /// Out on the first letter, in on the last: an element of `C(L)`.
    pub fn spanning(word: &str) -> Self {
        let n = word.chars().count();
        Self::new(word, 0, n - 1)
    }

    pub fn word(&self) -> String {
        self.letters.iter().collect()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_idempotent(&self) -> bool {
        self.out == self.inn
    }

    pub fn in_c(&self) -> bool {
        self.out == 0 && self.inn + 1 == self.len()
    }

    /// The unique maximal element above: the stretch between the accents.
    pub fn max_above(&self) -> AccentString {
        let (lo, hi) = (self.out.min(self.inn), self.out.max(self.inn));
        let letters = self.letters[lo..=hi].to_vec();
        AccentString { letters, out: self.out - lo, inn: self.inn - lo }
    }
}

impl fmt::Display for AccentString {
    /// Combining grave, acute and caron after the accented letters.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.letters.iter().enumerate() {
            write!(f, "{c}")?;
            match (i == self.out, i == self.inn) {
                (true, true) => write!(f, "\u{30C}")?,
                (true, false) => write!(f, "\u{300}")?,
                (false, true) => write!(f, "\u{301}")?,
                _ => {}
            }
        }
        Ok(())
    }
}

/// `p ⊗ q`: put the in-letter of `p` over the out-letter of `q`, glue,
/// keep `p`'s out and `q`'s in. Undefined on a letter clash or when the
/// glued word is not in `L`.
pub fn accent_multiply(p: &AccentString, q: &AccentString, lang: &FactorLanguage) -> Option<AccentString> {
    // q's index j sits at p-coordinate j + shift
    let shift = p.inn as i64 - q.out as i64;
    let lo = shift.min(0);
    let hi = (p.len() as i64).max(shift + q.len() as i64);
    let mut letters = Vec::with_capacity((hi - lo) as usize);
    for k in lo..hi {
        let from_p = (0..p.len() as i64).contains(&k).then(|| p.letters[k as usize]);
        let from_q = (0..q.len() as i64).contains(&(k - shift)).then(|| q.letters[(k - shift) as usize]);
        match (from_p, from_q) {
            (Some(a), Some(b)) if a != b => return None,
            (Some(a), _) | (None, Some(a)) => letters.push(a),
            (None, None) => unreachable!("the aligned letter is shared"),
        }
    }
    if !lang.contains_letters(&letters) {
        return None;
    }
    Some(AccentString {
        letters,
        out: (p.out as i64 - lo) as usize,
        inn: (q.inn as i64 + shift - lo) as usize,
    })
}

pub fn accent_inverse(p: &AccentString) -> AccentString {
    AccentString { letters: p.letters.clone(), out: p.inn, inn: p.out }
}

/// `s ≤ t`: `t` sits inside `s` with both accents lined up.
pub fn accent_leq(s: &AccentString, t: &AccentString) -> bool {
    if s.out < t.out {
        return false;
    }
    let shift = s.out - t.out;
    shift + t.len() <= s.len() && s.inn == t.inn + shift && s.letters[shift..shift + t.len()] == t.letters[..]
}

/// Every element of `S(L)` over words of length at most `n`.
pub fn enumerate_sl(lang: &FactorLanguage, n: usize) -> Vec<AccentString> {
    let mut out = Vec::new();
    for w in lang.words().filter(|w| w.chars().count() <= n) {
        let len = w.chars().count();
        for o in 0..len {
            for i in 0..len {
                out.push(AccentString::new(w, o, i));
            }
        }
    }
    out
}

/// `C(L)` and `M(L) = C(L) ∪ C(L)⁻¹` over words of length at most `n`.
pub fn enumerate_cl_and_max(lang: &FactorLanguage, n: usize) -> (Vec<AccentString>, Vec<AccentString>) {
    let c: Vec<AccentString> = lang.words().filter(|w| w.chars().count() <= n).map(AccentString::spanning).collect();
    let mut m: BTreeSet<AccentString> = c.iter().cloned().collect();
    m.extend(c.iter().map(accent_inverse));
    (c, m.into_iter().collect())
}

/// `c = (b₁b₂) ∘ (b₂b₃) ∘ …` into length-2 members of `C(L)`.
pub fn decompose_c_into_l2(c: &AccentString) -> Result<Vec<AccentString>, UniversalError> {
    if c.len() < 2 {
        return Err(UniversalError::TooShort);
    }
    if !c.in_c() {
        return Err(UniversalError::NotInC);
    }
    Ok(c.letters.windows(2).map(|w| AccentString { letters: w.to_vec(), out: 0, inn: 1 }).collect())
}

/// Fold a list with `⊗`.
pub fn compose(parts: &[AccentString], lang: &FactorLanguage) -> Option<AccentString> {
    let (first, rest) = parts.split_first()?;
    rest.iter().try_fold(first.clone(), |acc, p| accent_multiply(&acc, p, lang))
}

/// The free group on the length-2 words of `L`.
pub fn universal_group_sl(lang: &FactorLanguage) -> Result<(Presentation, usize), UniversalError> {
    if lang.max_len() < 2 {
        return Err(UniversalError::MaxLenTooSmall(2));
    }
    let l2: Vec<String> = lang.of_length(2).into_iter().map(String::from).collect();
    let rank = l2.len();
    Ok((Presentation::new(l2)?, rank))
}

/// `(M(L), ∘)` with `x ∘ y` the maximal element above `x ⊗ y`, products of
/// length above `n` left out.
pub fn sl_max_table(lang: &FactorLanguage, n: usize) -> Result<PartialTable<AccentString>, UniversalError> {
    let (_, m) = enumerate_cl_and_max(lang, n);
    Ok(PartialTable::from_fn(m, true, |x, y| accent_multiply(x, y, lang).map(|p| p.max_above()))?)
}

/// Where a table of maximal elements comes from.
pub enum MaxsetSource<'a> {
    /// `(D − D, ⊕)` up to `|ξ| ≤ bound`.
    Oplus(&'a PointSet1D, &'a QuadraticRational),
    /// Maximal elements of `Γ(X, G, H)` for a scheme, coefficient box.
    GxhMaximal(&'a CutProjectScheme, i64),
    Macbeath(&'a MacbeathData),
}

/// The universal group of a maximal-element table, generators labelled by
/// their `φ` values.
pub fn maxset_presentation(source: MaxsetSource<'_>) -> Result<Presentation, UniversalError> {
    let table = match source {
        MaxsetSource::Oplus(ps, bound) => maxset_table(ps, bound)?,
        MaxsetSource::GxhMaximal(scheme, bound) => gxh_max_table(scheme, bound),
        MaxsetSource::Macbeath(d) => d.table(),
    };
    Ok(universal_presentation_from_table(&table, QuadraticRational::compact)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::QuadField;
    use crate::presentation::tietze_simplify_deep;
    use crate::sequences::{two_sided_window, SequenceSpec};

    fn fib_lang(n: usize) -> FactorLanguage {
        factor_language(&two_sided_window(&SequenceSpec::fibonacci(), 40).unwrap(), n)
    }

    #[test]
    fn periodic_harvest() {
        let q = QuadField::rationals();
        let w = two_sided_window(&SequenceSpec::periodic("ab"), 10).unwrap();
        let l = LengthFunction::new([('a', q.int(2)), ('b', q.int(1))]).unwrap();
        let h = harvest_equal_length_relations(&w, &l, 3).unwrap();
        assert!(h.contains_pair("ab", "ba"));
        assert!(h.count_violations().is_empty());
        assert_eq!(h.presentation.abelian_invariants(), (2, vec![]));
    }

    #[test]
    fn fibonacci_harvest_short() {
        let g = QuadField::golden();
        let w = two_sided_window(&SequenceSpec::fibonacci(), 40).unwrap();
        let l = LengthFunction::new([('a', g.tau()), ('b', g.one())]).unwrap();
        let h = harvest_equal_length_relations(&w, &l, 3).unwrap();
        let expect: BTreeSet<(String, String)> = [("ab", "ba"), ("aab", "aba"), ("aab", "baa"), ("aba", "baa")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert_eq!(h.relation_set(), expect);
        assert!(harvest_equal_length_relations(&w, &l, 1).is_err());
    }

    #[test]
    fn accent_products() {
        let lang = fib_lang(4);
        let ca = AccentString::check('a');
        assert_eq!(accent_multiply(&ca, &ca, &lang), Some(ca.clone()));
        let p = AccentString::new("ab", 0, 1);
        let q = AccentString::new("ba", 0, 1);
        assert_eq!(accent_multiply(&p, &q, &lang), Some(AccentString::new("aba", 0, 2)));
        let no_aba = FactorLanguage::closure(["ab", "ba"]);
        assert_eq!(accent_multiply(&p, &q, &no_aba), None);
        // clash: in-letter b over out-letter a
        assert_eq!(accent_multiply(&p, &AccentString::new("ab", 0, 1), &lang), None);
        assert_eq!(accent_inverse(&ca), ca);
        assert_eq!(accent_inverse(&p), AccentString::new("ab", 1, 0));
        assert_eq!(accent_inverse(&accent_inverse(&p)), p);
        assert_eq!(p.to_string(), "a\u{300}b\u{301}");
    }

    #[test]
    fn c_and_m() {
        let single = FactorLanguage::closure(["a"]);
        let (c, m) = enumerate_cl_and_max(&single, 3);
        assert_eq!(c, vec![AccentString::check('a')]);
        assert_eq!(m, vec![AccentString::check('a')]);
        let (c, _) = enumerate_cl_and_max(&fib_lang(2), 2);
        assert_eq!(c.len(), 5);
        assert_eq!(c.iter().filter(|x| x.len() == 2).count(), 3);
    }

    #[test]
    fn unique_maximal_elements() {
        let lang = fib_lang(5);
        let (_, m) = enumerate_cl_and_max(&lang, 5);
        for s in enumerate_sl(&lang, 5) {
            let above: Vec<_> = m.iter().filter(|t| accent_leq(&s, t)).collect();
            assert_eq!(above, vec![&s.max_above()], "{s}");
        }
    }

    #[test]
    fn decompositions() {
        let lang = fib_lang(10);
        assert_eq!(
            decompose_c_into_l2(&AccentString::spanning("aba")).unwrap(),
            vec![AccentString::spanning("ab"), AccentString::spanning("ba")]
        );
        assert_eq!(
            decompose_c_into_l2(&AccentString::spanning("aab")).unwrap(),
            vec![AccentString::spanning("aa"), AccentString::spanning("ab")]
        );
        assert_eq!(decompose_c_into_l2(&AccentString::spanning("ab")).unwrap().len(), 1);
        assert_eq!(decompose_c_into_l2(&AccentString::check('a')), Err(UniversalError::TooShort));
        let (c, _) = enumerate_cl_and_max(&lang, 10);
        for x in c.iter().filter(|x| x.len() >= 2) {
            assert_eq!(compose(&decompose_c_into_l2(x).unwrap(), &lang).as_ref(), Some(x));
        }
    }

    #[test]
    fn sl_ranks() {
        assert_eq!(universal_group_sl(&fib_lang(4)).unwrap().1, 3);
        let per = factor_language(&two_sided_window(&SequenceSpec::periodic("ab"), 10).unwrap(), 4);
        assert_eq!(universal_group_sl(&per).unwrap().1, 2);
        let one = FactorLanguage::closure(["aaaa"]);
        let (p, r) = universal_group_sl(&one).unwrap();
        assert_eq!(r, 1);
        assert_eq!(p.generators, vec!["aa".to_string()]);
    }

    #[test]
    fn max_table_of_sl_is_free_on_l2() {
        let lang = fib_lang(5);
        let t = sl_max_table(&lang, 5).unwrap();
        let p = universal_presentation_from_table(&t, |x| x.to_string()).unwrap();
        let s = tietze_simplify_deep(&p, 500, 4);
        assert!(s.generators.len() == 3 && s.relators.is_empty(), "{s} / {:?}", p.abelian_invariants());
    }

    #[test]
    fn trivial_oplus_table() {
        let q = QuadField::rationals();
        let ps = PointSet1D::from_sorted(vec![q.zero()], 0).unwrap();
        let p = maxset_presentation(MaxsetSource::Oplus(&ps, &q.one())).unwrap();
        assert_eq!(p.generators, vec!["0".to_string()]);
        assert_eq!(p.abelian_invariants(), (0, vec![]));
    }
}
