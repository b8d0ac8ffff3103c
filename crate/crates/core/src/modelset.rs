//! Cut-and-project sets with one physical and one internal dimension.
//!
//! A scheme is a lattice `Λ = ℤv₁ + ℤv₂ ⊂ ℝ × ℝ` and a window `K` in
//! internal space. The model set is `D_K = {π(x) : x ∈ Λ, π′(x) ∈ K}` and
//! `π(x)* = π′(x)` is the star map. Everything here is exact: window
//! endpoints, lattice coordinates and membership are decided in ℚ(√d).

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{NumError, QuadField, QuadraticRational};
use crate::pointset::{PointSet1D, PointSetError};
use crate::presentation::{PartialTable, PresentationError};
use crate::psgamma::{PatternClass, PatternOracle};

type Q = QuadraticRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelSetError {
    #[error("interval [{0}, {1}] has lo > hi")]
    ReversedInterval(String, String),
    #[error("window must be a non-empty union of non-degenerate intervals")]
    DegenerateWindow,
    #[error("physical coordinates do not give an injective projection of the lattice")]
    NotInjective,
    #[error("internal coordinates do not generate a dense subgroup")]
    NotDense,
    #[error("{0} is not in the projected lattice")]
    NotInLattice(String),
    #[error("model set within radius {0} is empty")]
    EmptyModelSet(String),
    #[error("radius must be positive")]
    NonPositiveRadius,
    #[error("pattern point {0} is not in the model set")]
    NotPlaceable(String),
    #[error("coefficient bound must be at least 1")]
    ZeroBound,
    #[error("|s| must exceed 8r")]
    SeparationTooSmall,
    #[error("{0} lies at least 1/4 away from every integer")]
    ChiUndefined(String),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    PointSet(#[from] PointSetError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// A finite union of closed intervals, sorted and with touching pieces
/// merged. Single points appear only as results of intersections.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<(Q, Q)>", into = "Vec<(Q, Q)>")]
pub struct WindowSet {
    comps: Vec<(Q, Q)>,
}

impl TryFrom<Vec<(Q, Q)>> for WindowSet {
    type Error = ModelSetError;

    fn try_from(comps: Vec<(Q, Q)>) -> Result<Self, ModelSetError> {
        WindowSet::new(comps)
    }
}

impl From<WindowSet> for Vec<(Q, Q)> {
    fn from(w: WindowSet) -> Self {
        w.comps
    }
}

impl WindowSet {
    /// Pure rational endpoints are lifted into the field of the others.
    pub fn new(comps: Vec<(Q, Q)>) -> Result<Self, ModelSetError> {
        let field = comps.iter().flat_map(|(lo, hi)| [lo, hi]).find(|v| !v.is_rational()).map(Q::field);
        let comps = match field {
            Some(f) => comps.iter().map(|(lo, hi)| (lift(f, lo), lift(f, hi))).collect(),
            None => comps,
        };
        if let Some((lo, hi)) = comps.iter().find(|(lo, hi)| lo > hi) {
            return Err(ModelSetError::ReversedInterval(lo.to_string(), hi.to_string()));
        }
        Ok(Self::normalized(comps))
    }

    fn normalized(mut comps: Vec<(Q, Q)>) -> Self {
        comps.sort();
        let mut out: Vec<(Q, Q)> = Vec::with_capacity(comps.len());
        for (lo, hi) in comps {
            match out.last_mut() {
                Some(last) if lo <= last.1 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => out.push((lo, hi)),
            }
        }
        WindowSet { comps: out }
    }

    pub fn interval(lo: Q, hi: Q) -> Result<Self, ModelSetError> {
        Self::new(vec![(lo, hi)])
    }

    pub fn empty() -> Self {
        WindowSet { comps: Vec::new() }
    }

    pub fn components(&self) -> &[(Q, Q)] {
        &self.comps
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn has_interior(&self) -> bool {
        self.comps.iter().any(|(lo, hi)| lo < hi)
    }

    /// Components that are single points.
    pub fn isolated_points(&self) -> Vec<&Q> {
        self.comps.iter().filter(|(lo, hi)| lo == hi).map(|(lo, _)| lo).collect()
    }

    pub fn contains(&self, x: &Q) -> bool {
        // components are sorted and disjoint
        let k = self.comps.partition_point(|(lo, _)| lo <= x);
        k > 0 && x <= &self.comps[k - 1].1
    }

    /// Open-interior containment.
    pub fn interior_contains(&self, x: &Q) -> bool {
        self.comps.iter().any(|(lo, hi)| lo < x && x < hi)
    }

    pub fn translate(&self, t: &Q) -> WindowSet {
        WindowSet { comps: self.comps.iter().map(|(lo, hi)| (lo + t, hi + t)).collect() }
    }

    pub fn negate(&self) -> WindowSet {
        Self::normalized(self.comps.iter().map(|(lo, hi)| (-hi, -lo)).collect())
    }

    pub fn intersect(&self, other: &WindowSet) -> WindowSet {
        let mut out = Vec::new();
        for (a, b) in &self.comps {
            for (c, d) in &other.comps {
                let lo = a.max(c);
                let hi = b.min(d);
                if lo <= hi {
                    out.push((lo.clone(), hi.clone()));
                }
            }
        }
        Self::normalized(out)
    }

    /// Do the interiors meet?
    pub fn interiors_meet(&self, other: &WindowSet) -> bool {
        self.comps.iter().any(|(a, b)| other.comps.iter().any(|(c, d)| a.max(c) < b.min(d)))
    }

    pub fn is_subset_of(&self, other: &WindowSet) -> bool {
        &self.intersect(other) == self
    }

    pub fn hull(&self) -> Option<(&Q, &Q)> {
        Some((&self.comps.first()?.0, &self.comps.last()?.1))
    }

    pub fn field(&self) -> Option<QuadField> {
        self.comps.first().map(|(lo, _)| lo.field())
    }

    fn lift(&self, field: QuadField) -> WindowSet {
        WindowSet { comps: self.comps.iter().map(|(lo, hi)| (lift(field, lo), lift(field, hi))).collect() }
    }
}

impl fmt::Display for WindowSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.comps.iter().map(|(lo, hi)| format!("[{lo}, {hi}]")).collect();
        write!(f, "{}", parts.join(" ∪ "))
    }
}

/// Move a pure rational into `field`; other values are left alone.
fn lift(field: QuadField, v: &Q) -> Q {
    if v.disc() == field.disc() || !v.is_rational() {
        v.clone()
    } else {
        field.from_parts(v.rat_part().clone(), BigRational::zero())
    }
}

/// Solve `n·e₁ + m·e₂ = y` for rationals `n, m`, reading both sides in the
/// `(1, √d)` coordinates. `None` when `e₁, e₂` are ℚ-dependent.
fn rational_coords(e1: &Q, e2: &Q, y: &Q) -> Option<(BigRational, BigRational)> {
    let (a, b) = (e1.rat_part(), e2.rat_part());
    let (c, d) = (e1.surd_part(), e2.surd_part());
    let det = a * d - b * c;
    if det.is_zero() {
        return None;
    }
    let (y0, y1) = (y.rat_part(), y.surd_part());
    Some(((d * y0 - b * y1) / &det, (a * y1 - c * y0) / &det))
}

/// Integer coordinates of `y` in `ℤe₁ + ℤe₂`.
pub fn integer_coords(e1: &Q, e2: &Q, y: &Q) -> Option<(BigInt, BigInt)> {
    let (n, m) = rational_coords(e1, e2, y)?;
    (n.is_integer() && m.is_integer()).then(|| (n.to_integer(), m.to_integer()))
}

/// A lattice vector `(physical, internal)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeVector {
    pub phys: Q,
    #[serde(rename = "int")]
    pub internal: Q,
}

#[derive(Serialize, Deserialize)]
struct SchemeJson {
    v1: LatticeVector,
    v2: LatticeVector,
    window: WindowSet,
}

/// Lattice basis and window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SchemeJson", into = "SchemeJson")]
pub struct CutProjectScheme {
    v1: LatticeVector,
    v2: LatticeVector,
    window: WindowSet,
    field: QuadField,
}

impl TryFrom<SchemeJson> for CutProjectScheme {
    type Error = ModelSetError;

    fn try_from(j: SchemeJson) -> Result<Self, ModelSetError> {
        CutProjectScheme::new(j.v1, j.v2, j.window)
    }
}

impl From<CutProjectScheme> for SchemeJson {
    fn from(s: CutProjectScheme) -> Self {
        SchemeJson { v1: s.v1, v2: s.v2, window: s.window }
    }
}

/// Lattice point `n·v₁ + m·v₂` with its two projections.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeTranslate {
    pub n: i64,
    pub m: i64,
    pub phys: Q,
    pub internal: Q,
}

impl CutProjectScheme {
    pub fn new(v1: LatticeVector, v2: LatticeVector, window: WindowSet) -> Result<Self, ModelSetError> {
        let all = [&v1.phys, &v1.internal, &v2.phys, &v2.internal];
        let field = all
            .iter()
            .find(|v| !v.is_rational())
            .map(|v| v.field())
            .or_else(|| window.field())
            .unwrap_or_else(QuadField::rationals);
        for v in all {
            if !v.is_rational() && v.disc() != field.disc() {
                return Err(NumError::DiscriminantMismatch(v.disc(), field.disc()).into());
            }
        }
        let lv = |v: &LatticeVector| LatticeVector { phys: lift(field, &v.phys), internal: lift(field, &v.internal) };
        let (v1, v2) = (lv(&v1), lv(&v2));
        let window = window.lift(field);
        if window.is_empty() || window.components().iter().any(|(lo, hi)| lo == hi) {
            return Err(ModelSetError::DegenerateWindow);
        }
        // π restricted to Λ injective, and lattice coordinates of a physical
        // point decidable: the physical coordinates are ℚ-independent
        if rational_coords(&v1.phys, &v2.phys, &field.zero()).is_none() {
            return Err(ModelSetError::NotInjective);
        }
        // π′(Λ) dense: internal coordinates ℚ-independent
        if rational_coords(&v1.internal, &v2.internal, &field.zero()).is_none() {
            return Err(ModelSetError::NotDense);
        }
        let det = &(&v1.phys * &v2.internal) - &(&v2.phys * &v1.internal);
        if det.is_zero() {
            return Err(ModelSetError::NotInjective);
        }
        Ok(CutProjectScheme { v1, v2, window, field })
    }

    /// `v₁ = (1, 1)`, `v₂ = (τ, 1 − τ)`, `K = [−99/100, −99/100 + τ]`.
    ///
    /// `K` has the usual Fibonacci length τ but its endpoints avoid
    /// `ℤ[τ]`, so no star ever sits on the boundary.
    pub fn fibonacci() -> Self {
        let f = QuadField::golden();
        let lo = f.ratio(-99, 100);
        let hi = &lo + &f.tau();
        Self::fibonacci_with_window(WindowSet::interval(lo, hi).expect("lo < hi"))
    }

    pub fn fibonacci_with_window(window: WindowSet) -> Self {
        let f = QuadField::golden();
        let t = f.tau();
        let v1 = LatticeVector { phys: f.one(), internal: f.one() };
        let v2 = LatticeVector { phys: t.clone(), internal: &f.one() - &t };
        Self::new(v1, v2, window).expect("Fibonacci scheme is valid")
    }

    pub fn with_window(&self, window: WindowSet) -> Result<Self, ModelSetError> {
        Self::new(self.v1.clone(), self.v2.clone(), window)
    }

    pub fn window(&self) -> &WindowSet {
        &self.window
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn basis(&self) -> (&LatticeVector, &LatticeVector) {
        (&self.v1, &self.v2)
    }

    pub fn translate(&self, n: i64, m: i64) -> LatticeTranslate {
        LatticeTranslate {
            n,
            m,
            phys: self.field.combine(n, &self.v1.phys, m, &self.v2.phys),
            internal: self.field.combine(n, &self.v1.internal, m, &self.v2.internal),
        }
    }

    /// Lattice coordinates of a physical point.
    pub fn coords(&self, y: &Q) -> Option<(BigInt, BigInt)> {
        integer_coords(&self.v1.phys, &self.v2.phys, &lift(self.field, y))
    }

    /// Is `w` in `π′(Λ)`?
    pub fn is_internal_lattice_point(&self, w: &Q) -> bool {
        integer_coords(&self.v1.internal, &self.v2.internal, &lift(self.field, w)).is_some()
    }

    pub fn star(&self, y: &Q) -> Result<Q, ModelSetError> {
        let (n, m) = self.coords(y).ok_or_else(|| ModelSetError::NotInLattice(y.to_string()))?;
        let n = BigRational::from_integer(n);
        let m = BigRational::from_integer(m);
        Ok(&self.v1.internal.scale(&n) + &self.v2.internal.scale(&m))
    }

    pub fn is_member(&self, y: &Q) -> bool {
        self.star(y).map(|s| self.window.contains(&s)).unwrap_or(false)
    }

    /// `P* = ⋂_{x∈P} (K − x*)`.
    /// The empty pattern gets `K`.
    pub fn pattern_window(&self, pattern: &[Q]) -> Result<WindowSet, ModelSetError> {
        let Some((first, rest)) = pattern.split_first() else { return Ok(self.window.clone()) };
        let mut w = self.window.translate(&-self.star(first)?);
        for x in rest {
            w = w.intersect(&self.window.translate(&-self.star(x)?));
        }
        Ok(w)
    }

    /// Does `W` meet `π′(Λ)`? Exact: an interval with interior always does
    /// by density, a single point must itself be a star.
    pub fn meets_lattice(&self, w: &WindowSet) -> bool {
        w.has_interior() || w.isolated_points().into_iter().any(|p| self.is_internal_lattice_point(p))
    }

    /// Integer box for `n, m` covering `|phys| ≤ radius`, `internal ∈ hull(K)`.
    fn coefficient_box(&self, radius: &Q) -> ((BigInt, BigInt), (BigInt, BigInt)) {
        let (lo, hi) = self.window.hull().expect("window is non-empty");
        let det = &(&self.v1.phys * &self.v2.internal) - &(&self.v2.phys * &self.v1.internal);
        let mut ns = Vec::new();
        let mut ms = Vec::new();
        for phys in [-radius, radius.clone()] {
            for int in [lo, hi] {
                let n = &(&(&self.v2.internal * &phys) - &(&self.v2.phys * int)) / &det;
                let m = &(&(&self.v1.phys * int) - &(&self.v1.internal * &phys)) / &det;
                ns.push(n);
                ms.push(m);
            }
        }
        let range = |v: &[Q]| (v.iter().min().unwrap().floor(), v.iter().max().unwrap().ceil());
        (range(&ns), range(&ms))
    }

    /// All points of `D_K` with `|y| ≤ radius`, sorted; `r_0` is the least
    /// non-negative point.
    pub fn generate(&self, radius: &Q) -> Result<PointSet1D, ModelSetError> {
        let radius = lift(self.field, radius);
        if !radius.is_positive() {
            return Err(ModelSetError::NonPositiveRadius);
        }
        let ((n0, n1), (m0, m1)) = self.coefficient_box(&radius);
        let to_i = |b: &BigInt| b.to_i64().expect("coefficient box fits in i64");
        let mut pts = Vec::new();
        for m in to_i(&m0)..=to_i(&m1) {
            for n in to_i(&n0)..=to_i(&n1) {
                let t = self.translate(n, m);
                if t.phys.abs() <= radius && self.window.contains(&t.internal) {
                    pts.push(t.phys);
                }
            }
        }
        pts.sort();
        if pts.is_empty() {
            return Err(ModelSetError::EmptyModelSet(radius.to_string()));
        }
        let zero = self.field.zero();
        let zero_pos = pts.partition_point(|p| p < &zero).min(pts.len() - 1);
        Ok(PointSet1D::from_sorted(pts, zero_pos)?)
    }
}

impl PatternOracle for CutProjectScheme {
    fn occurs(&self, offsets: &[Q]) -> Option<bool> {
        let base = offsets.first()?;
        let rel: Vec<Q> = offsets.iter().map(|o| o - base).collect();
        let w = self.pattern_window(&rel).ok()?;
        Some(self.meets_lattice(&w))
    }
}

/// `generate_modelset` under its operation name.
pub fn generate_modelset(scheme: &CutProjectScheme, radius: &Q) -> Result<PointSet1D, ModelSetError> {
    scheme.generate(radius)
}

pub fn pattern_window(scheme: &CutProjectScheme, pattern: &[Q]) -> Result<WindowSet, ModelSetError> {
    scheme.pattern_window(pattern)
}

/// Same empire iff same pattern window.
pub fn empire_equal(scheme: &CutProjectScheme, p: &[Q], q: &[Q]) -> Result<bool, ModelSetError> {
    Ok(scheme.pattern_window(p)? == scheme.pattern_window(q)?)
}

/// Memoized `D_K` membership on lattice coordinates.
#[derive(Debug, Default)]
pub struct MembershipGrid {
    cache: RefCell<HashMap<(i64, i64), bool>>,
}

impl MembershipGrid {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn member(&self, scheme: &CutProjectScheme, n: i64, m: i64) -> bool {
        if let Some(&b) = self.cache.borrow().get(&(n, m)) {
            return b;
        }
        let b = scheme.window.contains(&scheme.translate(n, m).internal);
        self.cache.borrow_mut().insert((n, m), b);
        b
    }
}

/// Result of the brute-force empire comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmpireVerdict {
    pub same_empire: bool,
    /// A lattice translate admitted by exactly one of the two patterns.
    pub separating: Option<LatticeTranslate>,
    pub translates_checked: usize,
    /// Translates where "pattern fits at g" and "g* ∈ P*" disagree; always
    /// zero unless something is broken.
    pub window_law_violations: usize,
}

/// Compare `∃ g + P ⊆ D_K` with `∃ g + Q ⊆ D_K` for every lattice `g` in
/// the coefficient box, by direct membership tests.
pub fn empire_brute(scheme: &CutProjectScheme, p: &[Q], q: &[Q], box_bound: i64) -> Result<EmpireVerdict, ModelSetError> {
    empire_brute_with(scheme, p, q, box_bound, &MembershipGrid::new())
}

pub fn empire_brute_with(
    scheme: &CutProjectScheme,
    p: &[Q],
    q: &[Q],
    box_bound: i64,
    grid: &MembershipGrid,
) -> Result<EmpireVerdict, ModelSetError> {
    let lattice_coords = |pat: &[Q]| -> Result<Vec<(i64, i64)>, ModelSetError> {
        pat.iter()
            .map(|y| {
                let (n, m) = scheme.coords(y).ok_or_else(|| ModelSetError::NotInLattice(y.to_string()))?;
                Ok((n.to_i64().expect("small"), m.to_i64().expect("small")))
            })
            .collect()
    };
    let (pc, qc) = (lattice_coords(p)?, lattice_coords(q)?);
    let (pw, qw) = (scheme.pattern_window(p)?, scheme.pattern_window(q)?);
    let fits = |coords: &[(i64, i64)], n: i64, m: i64| coords.iter().all(|&(a, b)| grid.member(scheme, a + n, b + m));
    let mut verdict = EmpireVerdict { same_empire: true, separating: None, translates_checked: 0, window_law_violations: 0 };
    for n in -box_bound..=box_bound {
        for m in -box_bound..=box_bound {
            let (fp, fq) = (fits(&pc, n, m), fits(&qc, n, m));
            verdict.translates_checked += 1;
            if fp || fq {
                // g + P ⊆ D_K ⟺ g* ∈ P*
                let g = scheme.translate(n, m);
                if fp != pw.contains(&g.internal) || fq != qw.contains(&g.internal) {
                    verdict.window_law_violations += 1;
                }
            }
            if fp != fq && verdict.separating.is_none() {
                verdict.same_empire = false;
                verdict.separating = Some(scheme.translate(n, m));
            }
        }
    }
    Ok(verdict)
}

/// An orbit `[(0, window, φ)]` of `Γ(X, G, H)` with `X = K`, written
/// additively: the class of `(a, P, b)` is stored as `(P − a, b − a)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GxhElement {
    pub window: WindowSet,
    pub phi: Q,
}

impl GxhElement {
    /// The class of `(a, P, b)`.
    pub fn from_triple(a: &Q, p: &WindowSet, b: &Q) -> Self {
        GxhElement { window: p.translate(&-a), phi: b - a }
    }

    /// `[0, K, 0]`.
    pub fn identity(scheme: &CutProjectScheme) -> Self {
        GxhElement { window: scheme.window.clone(), phi: scheme.field.zero() }
    }

    pub fn is_idempotent(&self) -> bool {
        self.phi.is_zero()
    }

    /// `(b, P, a)`.
    pub fn inverse(&self) -> Self {
        GxhElement { window: self.window.translate(&-&self.phi), phi: -&self.phi }
    }

    /// `[a, P, b] ≤ [c, Q, d]`: same `φ`, smaller window.
    pub fn leq(&self, other: &GxhElement) -> bool {
        self.phi == other.phi && self.window.is_subset_of(&other.window)
    }
}

/// `[0, P, φx][0, Q, φy] = [0, P ∩ (Q + φx), φx + φy]`, defined when the
/// intersection meets `G = π′(Λ)`.
pub fn gxh_multiply(scheme: &CutProjectScheme, x: &GxhElement, y: &GxhElement) -> Option<GxhElement> {
    let w = x.window.intersect(&y.window.translate(&x.phi));
    scheme.meets_lattice(&w).then(|| GxhElement { window: w, phi: &x.phi + &y.phi })
}

/// The maximal element above `x`, `[0, K ∩ (K + φ), φ]`, and `φ` itself.
pub fn gxh_max_and_phi(scheme: &CutProjectScheme, x: &GxhElement) -> (GxhElement, Q) {
    let k = &scheme.window;
    let max = GxhElement { window: k.intersect(&k.translate(&x.phi)), phi: x.phi.clone() };
    (max, x.phi.clone())
}

/// The maximal elements with `φ = (n v₁ + m v₂)*`, `|n|, |m| ≤ bound`,
/// under `x ∘ y` = maximal element above `xy`. Keyed by `φ`.
pub fn gxh_max_table(scheme: &CutProjectScheme, bound: i64) -> PartialTable<Q> {
    let k = &scheme.window;
    let mut maxes: Vec<GxhElement> = Vec::new();
    for n in -bound..=bound {
        for m in -bound..=bound {
            let phi = scheme.translate(n, m).internal;
            let w = k.intersect(&k.translate(&phi));
            if scheme.meets_lattice(&w) {
                maxes.push(GxhElement { window: w, phi });
            }
        }
    }
    maxes.sort_by(|a, b| a.phi.cmp(&b.phi));
    maxes.dedup_by(|a, b| a.phi == b.phi);
    let elements: Vec<Q> = maxes.iter().map(|x| x.phi.clone()).collect();
    let mut products = std::collections::BTreeMap::new();
    for (i, x) in maxes.iter().enumerate() {
        for (j, y) in maxes.iter().enumerate() {
            let Some(xy) = gxh_multiply(scheme, x, y) else { continue };
            if let Ok(kk) = elements.binary_search(&xy.phi) {
                products.insert((i, j), kk);
            }
        }
    }
    PartialTable { elements, products }
}

/// `[φ](p₂, P, p₁) = (−p₂*, P*, −p₁*)` for the class placed with offset
/// 0 at `at`.
pub fn project_functor(scheme: &CutProjectScheme, x: &PatternClass, at: &Q) -> Result<GxhElement, ModelSetError> {
    let placed: Vec<Q> = x.offsets.iter().map(|o| o + at).collect();
    if let Some(bad) = placed.iter().find(|y| !scheme.is_member(y)) {
        return Err(ModelSetError::NotPlaceable(bad.to_string()));
    }
    let p_star = scheme.pattern_window(&placed)?;
    let p2 = scheme.star(&placed[x.out])?;
    let p1 = scheme.star(&placed[x.inn])?;
    Ok(GxhElement::from_triple(&-&p2, &p_star, &-&p1))
}

/// How overlaps of translates are decided in [`macbeath_data`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Overlap {
    /// `V` is open: interiors must meet.
    Interior,
    /// Overlap region must contain a point of `G`.
    DensePoint,
}

/// Generators `E`, composable pairs `F′` and relations `R` inside the
/// coefficient box `|n|, |m| ≤ bound` of `G = ℤg₁ + ℤg₂`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MacbeathData {
    pub basis: (Q, Q),
    pub bound: i64,
    pub overlap: Overlap,
    /// `E`, sorted, with coefficients.
    pub generators: Vec<(Q, (i64, i64))>,
    /// `F′` as index pairs into `generators`.
    pub pairs: Vec<(usize, usize)>,
    /// `R`: `(g)(g′) = (g + g′)` as index triples.
    pub relations: Vec<(usize, usize, usize)>,
}

impl MacbeathData {
    pub fn elements(&self) -> Vec<Q> {
        self.generators.iter().map(|(g, _)| g.clone()).collect()
    }

    pub fn index_of(&self, g: &Q) -> Option<usize> {
        self.generators.binary_search_by(|(h, _)| h.cmp(g)).ok()
    }

    pub fn contains(&self, g: &Q) -> bool {
        self.index_of(g).is_some()
    }

    /// The relations as a partial operation table on `E`.
    pub fn table(&self) -> PartialTable<Q> {
        PartialTable {
            elements: self.elements(),
            products: self.relations.iter().map(|&(i, j, k)| ((i, j), k)).collect(),
        }
    }

    /// Relation values `(g, g′)`, for comparing truncations.
    pub fn relation_values(&self) -> BTreeSet<(Q, Q)> {
        self.relations
            .iter()
            .map(|&(i, j, _)| (self.generators[i].0.clone(), self.generators[j].0.clone()))
            .collect()
    }
}

/// Does `V ∩ (V + t₁) ∩ … ` have a point under `mode`?
fn overlap_nonempty(v: &WindowSet, shifts: &[&Q], mode: Overlap, g_basis: (&Q, &Q)) -> bool {
    let mut w = v.clone();
    for t in shifts {
        w = w.intersect(&v.translate(t));
    }
    match mode {
        Overlap::Interior => w.has_interior(),
        Overlap::DensePoint => {
            w.has_interior() || w.isolated_points().into_iter().any(|p| integer_coords(g_basis.0, g_basis.1, p).is_some())
        }
    }
}

/// `E(V)`, `F′(V)` and `R(V)` truncated to the coefficient box.
pub fn macbeath_data(basis: (&Q, &Q), v: &WindowSet, bound: i64, overlap: Overlap) -> Result<MacbeathData, ModelSetError> {
    if bound < 1 {
        return Err(ModelSetError::ZeroBound);
    }
    let field = basis.0.field();
    let (g1, g2) = (lift(field, basis.0), lift(field, basis.1));
    if rational_coords(&g1, &g2, &field.zero()).is_none() {
        return Err(ModelSetError::NotDense);
    }
    let v = v.lift(field);
    let mut gens = Vec::new();
    for n in -bound..=bound {
        for m in -bound..=bound {
            let g = field.combine(n, &g1, m, &g2);
            // V ∩ (V − g) ≠ ∅
            if overlap_nonempty(&v, &[&-&g], overlap, (&g1, &g2)) {
                gens.push((g, (n, m)));
            }
        }
    }
    gens.sort();
    let mut data = MacbeathData {
        basis: (g1.clone(), g2.clone()),
        bound,
        overlap,
        generators: gens,
        pairs: Vec::new(),
        relations: Vec::new(),
    };
    for i in 0..data.generators.len() {
        for j in 0..data.generators.len() {
            let (g, h) = (&data.generators[i].0, &data.generators[j].0);
            let gh = g + h;
            let Some(k) = data.index_of(&gh) else { continue };
            // V ∩ (V + g) ∩ (V + g + g′) ≠ ∅
            if overlap_nonempty(&v, &[g, &gh], overlap, (&g1, &g2)) {
                data.pairs.push((i, j));
                data.relations.push((i, j, k));
            }
        }
    }
    Ok(data)
}

/// `χ(x)`: the integer nearest to `x/s`, for `X = (0, r) ∪ (s, s + r)`.
pub fn chi_obstruction(r: &Q, s: &Q, x: &Q) -> Result<BigInt, ModelSetError> {
    let field = s.field();
    let (r, x) = (lift(field, r), lift(field, x));
    if s.abs() <= r.scale_int(8) {
        return Err(ModelSetError::SeparationTooSmall);
    }
    let ratio = x.checked_div(s)?;
    let k = (&ratio + &field.ratio(1, 2)).floor();
    let kq = field.from_parts(BigRational::from_integer(k.clone()), BigRational::zero());
    if (&ratio - &kq).abs() >= field.ratio(1, 4) {
        return Err(ModelSetError::ChiUndefined(x.to_string()));
    }
    Ok(k)
}

/// The computed certificate that `ψ_V^{X′}` is not surjective.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiCertificate {
    pub generators: usize,
    pub pairs: usize,
    /// χ defined on every enumerated element of `E(X′)`.
    pub well_defined: bool,
    /// `χ(x + y) = χ(x) + χ(y)` on every enumerated pair of `F′(X′)`.
    pub additive: bool,
    /// `s ∈ E(X′)` by a direct overlap test (it may lie outside the box).
    pub s_in_e: bool,
    pub chi_s: Option<i64>,
    /// χ vanishes on every enumerated element of `E(V)`.
    pub vanishes_on_v: bool,
    /// The values `χ` takes on `E(X′)`.
    pub values: Vec<i64>,
}

impl ChiCertificate {
    pub fn holds(&self) -> bool {
        self.well_defined && self.additive && self.s_in_e && self.chi_s == Some(1) && self.vanishes_on_v
    }
}

/// Run the χ argument for `V = (0, r)`, `X = V ∪ (V + s)` over `G = ℤg₁ + ℤg₂`.
pub fn chi_certificate(basis: (&Q, &Q), r: &Q, s: &Q, bound: i64) -> Result<ChiCertificate, ModelSetError> {
    let field = basis.0.field();
    let zero = field.zero();
    let r = lift(field, r);
    let s = lift(field, s);
    let v = WindowSet::interval(zero.clone(), r.clone())?;
    let x = WindowSet::new(vec![(zero, r.clone()), (s.clone(), &s + &r)])?;
    let ex = macbeath_data(basis, &x, bound, Overlap::Interior)?;
    let ev = macbeath_data(basis, &v, bound, Overlap::Interior)?;
    let chis: Vec<Option<BigInt>> = ex.generators.iter().map(|(g, _)| chi_obstruction(&r, &s, g).ok()).collect();
    let well_defined = chis.iter().all(Option::is_some);
    let additive = ex.relations.iter().all(|&(i, j, k)| match (&chis[i], &chis[j], &chis[k]) {
        (Some(a), Some(b), Some(c)) => &(a + b) == c,
        _ => false,
    });
    let s_in_e = x.interiors_meet(&x.translate(&-&s));
    let chi_s = chi_obstruction(&r, &s, &s).ok().and_then(|k| k.to_i64());
    let vanishes_on_v = ev
        .generators
        .iter()
        .all(|(g, _)| chi_obstruction(&r, &s, g).map(|k| k.is_zero()).unwrap_or(false));
    let mut values: Vec<i64> = chis.iter().flatten().filter_map(|k| k.to_i64()).collect();
    values.sort();
    values.dedup();
    Ok(ChiCertificate {
        generators: ex.generators.len(),
        pairs: ex.pairs.len(),
        well_defined,
        additive,
        s_in_e,
        chi_s,
        vanishes_on_v,
        values,
    })
}
