//! The point-set semigroup Γ(D): translation classes of doubly pointed
//! finite patterns `[p₂, P, p₁]`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::QuadraticRational;
use crate::pointset::{diff_set, oplus_values, PointRange, PointSet1D};
use crate::presentation::{PartialTable, PresentationError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GammaError {
    #[error("empty pattern")]
    EmptyPattern,
    #[error("point index {0} outside the point set")]
    IndexOutOfRange(i64),
    #[error("pointed index {0} is not in the pattern")]
    PointedNotInPattern(i64),
}

/// Canonical representative of `[p₂, P, p₁]`: offsets of `P` shifted so the
/// smallest is 0, with `out` at `p₂` and `in` at `p₁`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PatternClass {
    pub offsets: Vec<QuadraticRational>,
    pub out: usize,
    #[serde(rename = "in")]
    pub inn: usize,
}

impl PatternClass {
    /// From absolute positions; `out` and `inn` must be among `points`.
    pub fn from_points(points: &[QuadraticRational], out: &QuadraticRational, inn: &QuadraticRational) -> Option<Self> {
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        let base = pts.first()?.clone();
        let offsets: Vec<QuadraticRational> = pts.iter().map(|p| p - &base).collect();
        let out = offsets.binary_search(&(out - &base)).ok()?;
        let inn = offsets.binary_search(&(inn - &base)).ok()?;
        Some(PatternClass { offsets, out, inn })
    }

    pub fn out_offset(&self) -> &QuadraticRational {
        &self.offsets[self.out]
    }

    pub fn in_offset(&self) -> &QuadraticRational {
        &self.offsets[self.inn]
    }

    /// `φ[p₂, P, p₁] = p₂ − p₁`.
    pub fn phi(&self) -> QuadraticRational {
        self.out_offset() - self.in_offset()
    }

    pub fn is_idempotent(&self) -> bool {
        self.out == self.inn
    }

    pub fn inverse(&self) -> PatternClass {
        PatternClass { offsets: self.offsets.clone(), out: self.inn, inn: self.out }
    }

    /// `[p₂, {p₂, p₁}, p₁]`.
    pub fn max_above(&self) -> PatternClass {
        let pts = [self.out_offset().clone(), self.in_offset().clone()];
        PatternClass::from_points(&pts, &pts[0], &pts[1]).expect("pointed points are in the pattern")
    }

    /// The pattern placed with its `in` point at `at`.
    pub fn placed_at_in(&self, at: &QuadraticRational) -> Vec<QuadraticRational> {
        let shift = at - self.in_offset();
        self.offsets.iter().map(|o| o + &shift).collect()
    }
}

/// The class of a sub-pattern of `ps`, given by point indices.
pub fn make_element(ps: &PointSet1D, subset: &[i64], out: i64, inn: i64) -> Result<PatternClass, GammaError> {
    if subset.is_empty() {
        return Err(GammaError::EmptyPattern);
    }
    for p in [out, inn] {
        if !subset.contains(&p) {
            return Err(GammaError::PointedNotInPattern(p));
        }
    }
    let pts = subset
        .iter()
        .map(|&i| ps.point(i).cloned().ok_or(GammaError::IndexOutOfRange(i)))
        .collect::<Result<Vec<_>, _>>()?;
    let p_out = ps.point(out).expect("checked above");
    let p_in = ps.point(inn).expect("checked above");
    Ok(PatternClass::from_points(&pts, p_out, p_in).expect("pointed points are in the pattern"))
}

/// Translates `t` with `offsets + t ⊆ ps`.
pub fn embeddings(offsets: &[QuadraticRational], ps: &PointSet1D) -> Vec<QuadraticRational> {
    let Some(first) = offsets.first() else { return Vec::new() };
    ps.points()
        .iter()
        .map(|p| p - first)
        .filter(|t| offsets.iter().all(|o| ps.index_of(&(o + t)).is_some()))
        .collect()
}

/// Something that can decide exactly, not just within a window, whether a
/// finite pattern (given by offsets) occurs in the full point set.
pub trait PatternOracle {
    /// `None` when the oracle cannot decide.
    fn occurs(&self, offsets: &[QuadraticRational]) -> Option<bool>;
}

/// Outcome of a product in Γ(D).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Product {
    Defined(PatternClass),
    /// Shown impossible by an exact oracle.
    Undefined,
    /// No embedding within the computed points.
    UnknownAtTruncation(PointRange),
}

impl Product {
    pub fn defined(&self) -> Option<&PatternClass> {
        match self {
            Product::Defined(c) => Some(c),
            _ => None,
        }
    }
}

/// The aligned union `R = (P − p₁) ∪ (Q − q₂)` as a class with `out` from
/// `x` and `in` from `y`; the product when `R` occurs in `D`.
pub fn aligned_union(x: &PatternClass, y: &PatternClass) -> PatternClass {
    let px: Vec<QuadraticRational> = x.offsets.iter().map(|o| o - x.in_offset()).collect();
    let qy: Vec<QuadraticRational> = y.offsets.iter().map(|o| o - y.out_offset()).collect();
    let mut all = px.clone();
    all.extend(qy.iter().cloned());
    let out = &px[x.out];
    let inn = &qy[y.inn];
    PatternClass::from_points(&all, out, inn).expect("pointed points are in the union")
}

/// `xy` within the truncation only.
pub fn multiply(x: &PatternClass, y: &PatternClass, ps: &PointSet1D) -> Product {
    multiply_with(x, y, ps, None)
}

/// `xy`, asking `oracle` when the truncation shows no embedding.
pub fn multiply_with(x: &PatternClass, y: &PatternClass, ps: &PointSet1D, oracle: Option<&dyn PatternOracle>) -> Product {
    let r = aligned_union(x, y);
    let places = embeddings(&r.offsets, ps);
    if !places.is_empty() {
        // the class does not depend on the embedding; check anyway
        for t in &places {
            let placed: Vec<QuadraticRational> = r.offsets.iter().map(|o| o + t).collect();
            let again = PatternClass::from_points(&placed, &(r.out_offset() + t), &(r.in_offset() + t));
            assert_eq!(again.as_ref(), Some(&r), "product class depends on the embedding");
        }
        return Product::Defined(r);
    }
    match oracle.and_then(|o| o.occurs(&r.offsets)) {
        Some(true) => Product::Defined(r),
        Some(false) => Product::Undefined,
        None => Product::UnknownAtTruncation(ps.range()),
    }
}

/// `x ≤ y`: after lining up the pointed pairs, `y`'s pattern sits inside
/// `x`'s.
pub fn natural_leq(x: &PatternClass, y: &PatternClass) -> bool {
    if x.phi() != y.phi() {
        return false;
    }
    let shift = x.in_offset() - y.in_offset();
    y.offsets.iter().all(|o| x.offsets.binary_search(&(o + &shift)).is_ok())
}

/// `θ(a) = [a, {0, a}, 0]`, the maximal element with `φ = a`.
pub fn theta(a: &QuadraticRational) -> PatternClass {
    let zero = a.field().zero();
    PatternClass::from_points(&[zero.clone(), a.clone()], a, &zero).expect("both points present")
}

/// The `⊕` table on `D − D` restricted to `|ξ| ≤ bound`; products leaving
/// the bound are left out.
pub fn maxset_table(ps: &PointSet1D, bound: &QuadraticRational) -> Result<PartialTable<QuadraticRational>, PresentationError> {
    let elements = diff_set(ps, bound).into_iter().map(|d| d.value).collect();
    PartialTable::from_fn(elements, true, |a, b| oplus_values(a, b, ps).value().cloned())
}
