//! One-dimensional point sets read off a tiling word, their difference sets
//! with the partial sum `⊕`, and the group they generate.
//!
//! A window `T[s..e)` with lengths `|·|` gives points `r_{s-1} < … < r_{e-1}`
//! with `r_i − r_{i−1} = |T(i)|` and `r_0` the anchor.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{NumError, QuadField, QuadraticRational};
use crate::presentation::{hnf, IntMatrix};
use crate::sequences::{IndexedWord, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PointSetError {
    #[error("length of {0:?} is not positive")]
    NonPositiveLength(Letter),
    #[error("letters {0:?} and {1:?} have the same length")]
    NotInjective(Letter, Letter),
    #[error("no length for letter {0:?}")]
    MissingLength(Letter),
    #[error("empty window")]
    EmptyWindow,
    #[error("index 0 is not covered by the window starting at {0}")]
    AnchorOutsideWindow(i64),
    #[error("radius {0} is below the maximal gap {1}")]
    RadiusBelowMaxGap(String, String),
    #[error("bad length spec {0:?}")]
    BadLengthSpec(String),
    #[error("points are not strictly increasing")]
    NotIncreasing,
    #[error(transparent)]
    Num(#[from] NumError),
}

/// Tile lengths: positive and injective.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<Letter, QuadraticRational>", into = "BTreeMap<Letter, QuadraticRational>")]
pub struct LengthFunction(BTreeMap<Letter, QuadraticRational>);

impl TryFrom<BTreeMap<Letter, QuadraticRational>> for LengthFunction {
    type Error = PointSetError;

    fn try_from(map: BTreeMap<Letter, QuadraticRational>) -> Result<Self, PointSetError> {
        for (&c, v) in &map {
            if !v.is_positive() {
                return Err(PointSetError::NonPositiveLength(c));
            }
        }
        let entries: Vec<_> = map.iter().collect();
        for (i, (c, v)) in entries.iter().enumerate() {
            for (d, w) in &entries[i + 1..] {
                if v.disc() != w.disc() {
                    return Err(NumError::DiscriminantMismatch(v.disc(), w.disc()).into());
                }
                if v == w {
                    return Err(PointSetError::NotInjective(**c, **d));
                }
            }
        }
        Ok(LengthFunction(map))
    }
}

impl From<LengthFunction> for BTreeMap<Letter, QuadraticRational> {
    fn from(l: LengthFunction) -> Self {
        l.0
    }
}

impl LengthFunction {
    pub fn new(pairs: impl IntoIterator<Item = (Letter, QuadraticRational)>) -> Result<Self, PointSetError> {
        Self::try_from(pairs.into_iter().collect::<BTreeMap<_, _>>())
    }

    /// Parse `a=2,b=1` style text in `field`.
    pub fn parse(text: &str, field: QuadField) -> Result<Self, PointSetError> {
        let mut map = BTreeMap::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (l, v) = part.split_once('=').ok_or_else(|| PointSetError::BadLengthSpec(part.into()))?;
            let mut chars = l.trim().chars();
            let (Some(c), None) = (chars.next(), chars.next()) else {
                return Err(PointSetError::BadLengthSpec(part.into()));
            };
            map.insert(c, field.parse(v.trim())?);
        }
        Self::try_from(map)
    }

    pub fn get(&self, c: Letter) -> Result<&QuadraticRational, PointSetError> {
        self.0.get(&c).ok_or(PointSetError::MissingLength(c))
    }

    /// The letter whose tile has length `v`, if any.
    pub fn letter_of(&self, v: &QuadraticRational) -> Option<Letter> {
        self.0.iter().find(|(_, w)| *w == v).map(|(&c, _)| c)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Letter, &QuadraticRational)> {
        self.0.iter().map(|(&c, v)| (c, v))
    }

    pub fn field(&self) -> Option<QuadField> {
        self.0.values().next().map(QuadraticRational::field)
    }

    /// Exact length of a word.
    pub fn word_length(&self, w: &[Letter]) -> Result<QuadraticRational, PointSetError> {
        let field = self.field().unwrap_or_else(QuadField::rationals);
        w.iter().try_fold(field.zero(), |acc, &c| Ok(&acc + self.get(c)?))
    }
}

/// Membership answer that never guesses beyond the computed range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    /// The point with this index.
    Member(i64),
    NotMember,
    OutOfTruncation,
}

/// Point indices `first ..= last` covered by a point set; every
/// window-relative answer carries one of these.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRange {
    pub first: i64,
    pub last: i64,
}

/// A finite, strictly increasing run `r_first < … < r_last` of a point set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet1D {
    points: Vec<QuadraticRational>,
    first_index: i64,
    word: Option<IndexedWord>,
    lengths: Option<LengthFunction>,
}

impl PointSet1D {
    /// Prefix sums of the tile lengths with `r_0 = anchor`.
    pub fn build(window: &IndexedWord, lengths: &LengthFunction, anchor: &QuadraticRational) -> Result<Self, PointSetError> {
        if window.is_empty() {
            return Err(PointSetError::EmptyWindow);
        }
        let first_index = window.start_index - 1;
        if first_index > 0 || window.end_index() - 1 < 0 {
            return Err(PointSetError::AnchorOutsideWindow(window.start_index));
        }
        let gaps = window
            .letters
            .iter()
            .map(|&c| lengths.get(c).cloned())
            .collect::<Result<Vec<_>, _>>()?;
        // r_{first} = anchor − Σ_{i=start}^{0} |T(i)|
        let mut r = anchor.clone();
        for g in &gaps[..(-first_index) as usize] {
            r = r.checked_sub(g)?;
        }
        let mut points = Vec::with_capacity(gaps.len() + 1);
        points.push(r.clone());
        for g in &gaps {
            r = r.checked_add(g)?;
            points.push(r.clone());
        }
        Ok(PointSet1D { points, first_index, word: Some(window.clone()), lengths: Some(lengths.clone()) })
    }

    /// From already sorted points; `points[zero_pos]` becomes `r_0`.
    pub fn from_sorted(points: Vec<QuadraticRational>, zero_pos: usize) -> Result<Self, PointSetError> {
        if points.is_empty() {
            return Err(PointSetError::EmptyWindow);
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PointSetError::NotIncreasing);
        }
        Ok(PointSet1D { points, first_index: -(zero_pos as i64), word: None, lengths: None })
    }

    pub fn points(&self) -> &[QuadraticRational] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn range(&self) -> PointRange {
        PointRange { first: self.first_index, last: self.first_index + self.points.len() as i64 - 1 }
    }

    pub fn anchor(&self) -> Option<&QuadraticRational> {
        self.point(0)
    }

    pub fn point(&self, i: i64) -> Option<&QuadraticRational> {
        let k = i - self.first_index;
        if k < 0 {
            None
        } else {
            self.points.get(k as usize)
        }
    }

    pub fn word(&self) -> Option<&IndexedWord> {
        self.word.as_ref()
    }

    pub fn lengths(&self) -> Option<&LengthFunction> {
        self.lengths.as_ref()
    }

    pub fn field(&self) -> QuadField {
        self.points[0].field()
    }

    pub fn min_point(&self) -> &QuadraticRational {
        &self.points[0]
    }

    pub fn max_point(&self) -> &QuadraticRational {
        &self.points[self.points.len() - 1]
    }

    pub fn gaps(&self) -> Vec<QuadraticRational> {
        self.points.windows(2).map(|w| &w[1] - &w[0]).collect()
    }

    pub fn max_gap(&self) -> Option<QuadraticRational> {
        self.gaps().into_iter().max()
    }

    /// Index of `y`, or a refusal if `y` lies outside `[r_first, r_last]`.
    pub fn membership(&self, y: &QuadraticRational) -> Membership {
        if y < self.min_point() || y > self.max_point() {
            return Membership::OutOfTruncation;
        }
        match self.points.binary_search(y) {
            Ok(k) => Membership::Member(self.first_index + k as i64),
            Err(_) => Membership::NotMember,
        }
    }

    pub fn index_of(&self, y: &QuadraticRational) -> Option<i64> {
        match self.membership(y) {
            Membership::Member(i) => Some(i),
            _ => None,
        }
    }

    /// Points whose absolute value is at most `radius`.
    pub fn restrict(&self, radius: &QuadraticRational) -> Vec<QuadraticRational> {
        self.points.iter().filter(|p| &p.abs() <= radius).cloned().collect()
    }

    /// Read the gaps back as letters through `lengths`, if every gap is a
    /// tile length.
    pub fn gap_word(&self, lengths: &LengthFunction) -> Option<String> {
        self.gaps().iter().map(|g| lengths.letter_of(g)).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PointSetDump::from(self)).expect("point dump serializes")
    }
}

/// JSON form of a point set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSetDump {
    pub anchor: Option<QuadraticRational>,
    pub first_index: i64,
    pub points: Vec<QuadraticRational>,
}

impl From<&PointSet1D> for PointSetDump {
    fn from(ps: &PointSet1D) -> Self {
        PointSetDump { anchor: ps.anchor().cloned(), first_index: ps.first_index, points: ps.points.clone() }
    }
}

/// `build_pointset` under its operation name.
pub fn build_pointset(window: &IndexedWord, lengths: &LengthFunction, anchor: &QuadraticRational) -> Result<PointSet1D, PointSetError> {
    PointSet1D::build(window, lengths, anchor)
}

/// An element of `D − D` with every index pair realizing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffElement {
    pub value: QuadraticRational,
    /// `(i, j)` with `r_i − r_j = value`.
    pub witnesses: Vec<(i64, i64)>,
}

/// All `r_i − r_j` with `|r_i − r_j| ≤ bound`, sorted by value.
pub fn diff_set(ps: &PointSet1D, bound: &QuadraticRational) -> Vec<DiffElement> {
    let mut out: BTreeMap<QuadraticRational, Vec<(i64, i64)>> = BTreeMap::new();
    let n = ps.points.len();
    for a in 0..n {
        // points are sorted, so stop once the gap exceeds the bound
        for b in a..n {
            let d = &ps.points[b] - &ps.points[a];
            if &d > bound {
                break;
            }
            let (i, j) = (ps.first_index + b as i64, ps.first_index + a as i64);
            if d.is_zero() {
                out.entry(d).or_default().push((i, i));
            } else {
                out.entry(-&d).or_default().push((j, i));
                out.entry(d).or_default().push((i, j));
            }
        }
    }
    out.into_iter()
        .map(|(value, mut witnesses)| {
            witnesses.sort();
            DiffElement { value, witnesses }
        })
        .collect()
}

/// Result of `⊕` relative to a finite run of points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OplusResult {
    /// With the `(x, z)` index pairs of every chain found.
    Defined(DiffElement),
    /// No chain `x, y, z` inside this range; says nothing beyond it.
    NoChainIn(PointRange),
}

impl OplusResult {
    pub fn value(&self) -> Option<&QuadraticRational> {
        match self {
            OplusResult::Defined(d) => Some(&d.value),
            OplusResult::NoChainIn(_) => None,
        }
    }

    pub fn is_defined(&self) -> bool {
        matches!(self, OplusResult::Defined(_))
    }
}

/// `a ⊕ b`: defined when some chain `x, y, z` has `x − y = a`, `y − z = b`.
pub fn oplus_values(a: &QuadraticRational, b: &QuadraticRational, ps: &PointSet1D) -> OplusResult {
    let mut witnesses = Vec::new();
    for y in &ps.points {
        let (Some(xi), Some(zi)) = (ps.index_of(&(y + a)), ps.index_of(&(y - b))) else { continue };
        debug_assert_eq!(ps.point(xi).zip(ps.point(zi)).map(|(x, z)| x - z), Some(a + b));
        witnesses.push((xi, zi));
    }
    if witnesses.is_empty() {
        OplusResult::NoChainIn(ps.range())
    } else {
        OplusResult::Defined(DiffElement { value: a + b, witnesses })
    }
}

pub fn oplus(a: &DiffElement, b: &DiffElement, ps: &PointSet1D) -> OplusResult {
    oplus_values(&a.value, &b.value, ps)
}

/// `Δ = {ξ ∈ D − D : |ξ| ≤ R}`; needs `R` at least the largest gap.
pub fn generator_set_delta(ps: &PointSet1D, radius: &QuadraticRational) -> Result<Vec<DiffElement>, PointSetError> {
    let max_gap = ps.max_gap().unwrap_or_else(|| ps.field().zero());
    if radius < &max_gap || !radius.is_positive() {
        return Err(PointSetError::RadiusBelowMaxGap(radius.to_string(), max_gap.to_string()));
    }
    Ok(diff_set(ps, radius))
}

/// Write `r_i − r_j` as `ξ₁ ⊕ … ⊕ ξ_k` with every `ξ` in `delta`, by
/// walking consecutive points; each partial `⊕` is re-checked. Returns the
/// chain, or `None` if some step fails.
pub fn delta_chain(ps: &PointSet1D, i: i64, j: i64, delta: &[DiffElement]) -> Option<Vec<QuadraticRational>> {
    let allowed: std::collections::BTreeSet<&QuadraticRational> = delta.iter().map(|d| &d.value).collect();
    let (ri, rj) = (ps.point(i)?, ps.point(j)?);
    if i == j {
        let z = ps.field().zero();
        return allowed.contains(&z).then(|| vec![z]);
    }
    let step: i64 = if i > j { 1 } else { -1 };
    // r_i − r_j = (r_i − r_{i−s}) ⊕ … ⊕ (r_{j+s} − r_j), leftmost first
    let mut chain = Vec::new();
    let mut k = i;
    while k != j {
        let d = ps.point(k)? - ps.point(k - step)?;
        if !allowed.contains(&d) {
            return None;
        }
        chain.push(d);
        k -= step;
    }
    // fold right-to-left so each partial sum is a difference ending at r_j
    let mut acc = chain.last()?.clone();
    for step in chain.iter().rev().skip(1) {
        acc = oplus_values(step, &acc, ps).value()?.clone();
    }
    (acc == ri - rj).then_some(chain)
}

/// Rank and a basis of the subgroup of ℝ generated by `values`, via HNF
/// on `(√d, 1)` coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HdInvariants {
    pub rank: usize,
    pub basis: Vec<QuadraticRational>,
}

pub fn hd_invariants(values: &[QuadraticRational]) -> Result<HdInvariants, PointSetError> {
    let Some(field) = values.first().map(QuadraticRational::field) else {
        return Ok(HdInvariants { rank: 0, basis: Vec::new() });
    };
    if let Some(v) = values.iter().find(|v| v.disc() != field.disc()) {
        return Err(NumError::DiscriminantMismatch(v.disc(), field.disc()).into());
    }
    let denom = values.iter().fold(BigInt::one(), |l, v| {
        l.lcm(v.rat_part().denom()).lcm(v.surd_part().denom())
    });
    let scale = BigRational::from_integer(denom.clone());
    let rows = values
        .iter()
        .map(|v| {
            let s = v.surd_part() * &scale;
            let r = v.rat_part() * &scale;
            vec![s.to_integer(), r.to_integer()]
        })
        .collect();
    let (rank, basis_rows) = hnf(&IntMatrix::from_rows(2, rows));
    let mut basis: Vec<QuadraticRational> = basis_rows
        .into_iter()
        .map(|row| {
            field.from_parts(
                BigRational::new(row[1].clone(), denom.clone()),
                BigRational::new(row[0].clone(), denom.clone()),
            )
        })
        .filter(|v| !v.is_zero())
        .collect();
    basis.sort();
    Ok(HdInvariants { rank, basis })
}

impl HdInvariants {
    /// `ℤ`, `ℤ^2`, … as a label.
    pub fn label(&self) -> String {
        match self.rank {
            0 => "0".into(),
            1 => "ℤ".into(),
            r => format!("ℤ^{r}"),
        }
    }
}

/// Check whether `value` lies in the subgroup spanned by `basis`; used by
/// tests to confirm that the basis generates each input.
pub fn in_span(basis: &[QuadraticRational], value: &QuadraticRational) -> bool {
    let mut all: Vec<QuadraticRational> = basis.to_vec();
    all.push(value.clone());
    match (hd_invariants(basis), hd_invariants(&all)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{two_sided_window, SequenceSpec};

    fn q() -> QuadField {
        QuadField::rationals()
    }

    fn g() -> QuadField {
        QuadField::golden()
    }

    fn ab21() -> LengthFunction {
        LengthFunction::new([('a', q().int(2)), ('b', q().int(1))]).unwrap()
    }

    fn fib_lengths() -> LengthFunction {
        LengthFunction::new([('a', g().tau()), ('b', g().one())]).unwrap()
    }

    fn fib_points(h: usize) -> PointSet1D {
        let w = two_sided_window(&SequenceSpec::fibonacci(), h).unwrap();
        PointSet1D::build(&w, &fib_lengths(), &g().zero()).unwrap()
    }

    fn values(ds: &[DiffElement]) -> Vec<QuadraticRational> {
        ds.iter().map(|d| d.value.clone()).collect()
    }

    #[test]
    fn prefix_sums() {
        let ps = PointSet1D::build(&IndexedWord::from_str_at(1, "ab"), &ab21(), &q().zero()).unwrap();
        assert_eq!(ps.points(), &[q().int(0), q().int(2), q().int(3)]);
        let one = LengthFunction::new([('a', q().int(1))]).unwrap();
        let ps = PointSet1D::build(&IndexedWord::from_str_at(1, "a"), &one, &q().zero()).unwrap();
        assert_eq!(ps.points(), &[q().int(0), q().int(1)]);
    }

    #[test]
    fn fibonacci_prefix() {
        let ps = fib_points(10);
        let t = g().tau();
        assert_eq!(ps.word().unwrap().letter_at(1), Some('a'));
        assert_eq!(ps.point(0), Some(&g().zero()));
        assert_eq!(ps.point(1), Some(&t));
        assert_eq!(ps.point(2), Some(&(&t + &g().one())));
        assert_eq!(ps.point(3), Some(&(&t.scale_int(2) + &g().one())));
    }

    #[test]
    fn bad_lengths_rejected() {
        assert_eq!(
            LengthFunction::new([('a', q().int(0))]),
            Err(PointSetError::NonPositiveLength('a'))
        );
        assert_eq!(
            LengthFunction::new([('a', q().int(1)), ('b', q().int(1))]),
            Err(PointSetError::NotInjective('a', 'b'))
        );
        assert_eq!(LengthFunction::parse("a=2, b=1", q()).unwrap(), ab21());
        assert!(LengthFunction::parse("ab=2", q()).is_err());
    }

    #[test]
    fn membership_refuses_outside() {
        let ps = PointSet1D::build(&IndexedWord::from_str_at(1, "ab"), &ab21(), &q().zero()).unwrap();
        assert_eq!(ps.membership(&q().int(2)), Membership::Member(1));
        assert_eq!(ps.membership(&q().int(1)), Membership::NotMember);
        assert_eq!(ps.membership(&q().int(7)), Membership::OutOfTruncation);
        assert_eq!(ps.membership(&q().int(-1)), Membership::OutOfTruncation);
    }

    #[test]
    fn small_diff_sets() {
        let ps = PointSet1D::build(&IndexedWord::from_str_at(1, "ab"), &ab21(), &q().zero()).unwrap();
        let d = diff_set(&ps, &q().int(10));
        let expect: Vec<_> = [-3, -2, -1, 0, 1, 2, 3].iter().map(|&n| q().int(n)).collect();
        assert_eq!(values(&d), expect);
        for e in &d {
            for &(i, j) in &e.witnesses {
                assert_eq!(ps.point(i).unwrap() - ps.point(j).unwrap(), e.value);
            }
        }
        assert_eq!(values(&diff_set(&ps, &q().ratio(1, 2))), vec![q().zero()]);
    }

    #[test]
    fn fibonacci_diff_set_contains_short_lengths() {
        let ps = fib_points(12);
        let t = g().tau();
        let d = values(&diff_set(&ps, &(&t + &g().one())));
        for v in [g().zero(), g().one(), t.clone(), &t + &g().one()] {
            assert!(d.contains(&v) && d.contains(&-&v), "{v}");
        }
    }

    #[test]
    fn fibonacci_oplus() {
        let ps = fib_points(12);
        let (t, one) = (g().tau(), g().one());
        let z = g().zero();
        assert_eq!(oplus_values(&z, &z, &ps).value(), Some(&z));
        let r = oplus_values(&t, &one, &ps);
        assert_eq!(r.value(), Some(&(&t + &one)));
        let OplusResult::Defined(d) = r else { unreachable!() };
        // x = 2τ+1, z = τ is one of the chains
        assert!(d.witnesses.contains(&(3, 1)));
        assert_eq!(oplus_values(&one, &one, &ps), OplusResult::NoChainIn(ps.range()));
    }

    #[test]
    fn delta_sets() {
        let ps = PointSet1D::build(&IndexedWord::from_str_at(1, "ab"), &ab21(), &q().zero()).unwrap();
        let d = generator_set_delta(&ps, &q().int(2)).unwrap();
        let expect: Vec<_> = [-2, -1, 0, 1, 2].iter().map(|&n| q().int(n)).collect();
        assert_eq!(values(&d), expect);
        assert!(generator_set_delta(&ps, &q().zero()).is_err());
        assert!(generator_set_delta(&ps, &q().int(1)).is_err());

        let fp = fib_points(12);
        let t = g().tau();
        let d = generator_set_delta(&fp, &t).unwrap();
        assert_eq!(values(&d), vec![-&t, -g().one(), g().zero(), g().one(), t.clone()]);
        let r = fp.range();
        for (i, j) in [(r.last, r.first), (r.first, r.last), (3, 3), (5, -4)] {
            let chain = delta_chain(&fp, i, j, &d).unwrap();
            let sum = chain.iter().fold(g().zero(), |a, b| &a + b);
            assert_eq!(sum, fp.point(i).unwrap() - fp.point(j).unwrap());
        }
    }

    #[test]
    fn hd_examples() {
        let h = hd_invariants(&[q().int(2), q().int(1)]).unwrap();
        assert_eq!(h, HdInvariants { rank: 1, basis: vec![q().int(1)] });
        let h = hd_invariants(&[g().tau(), g().one()]).unwrap();
        assert_eq!(h, HdInvariants { rank: 2, basis: vec![g().one(), g().tau()] });
        assert_eq!(hd_invariants(&[q().zero()]).unwrap().rank, 0);
        assert!(hd_invariants(&[q().int(1), g().tau()]).is_err());
        // half-integers and τ multiples still get an honest basis
        let h = hd_invariants(&[q().ratio(1, 2), q().ratio(1, 3)]).unwrap();
        assert_eq!(h.basis, vec![q().ratio(1, 6)]);
        assert!(in_span(&h.basis, &q().ratio(5, 6)));
        assert!(!in_span(&h.basis, &q().ratio(1, 7)));
    }

    #[test]
    fn json_dump() {
        let ps = PointSet1D::build(&IndexedWord::from_str_at(1, "ab"), &ab21(), &q().zero()).unwrap();
        let j = ps.to_json();
        assert_eq!(j["anchor"], "0");
        assert_eq!(j["points"], serde_json::json!(["0", "2", "3"]));
    }
}
