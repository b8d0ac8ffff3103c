//! Seeded property suites: each run returns a machine-readable report and
//! passes iff no check failed.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::exactnum::{QuadField, QuadraticRational};
use crate::modelset::{
    empire_brute_with, empire_equal, gxh_max_and_phi, gxh_multiply, macbeath_data, project_functor, CutProjectScheme, GxhElement,
    MembershipGrid, Overlap, WindowSet,
};
use crate::pointset::{LengthFunction, PointSet1D};
use crate::presentation::PartialTable;
use crate::psgamma::{make_element, maxset_table, multiply, PatternClass, Product};
use crate::sequences::{factor_language, two_sided_window, SequenceSpec};
use crate::universal::{accent_inverse, accent_multiply, enumerate_sl};

type Q = QuadraticRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Empire,
    SemigroupAxioms,
    ModelsetVsSubstitution,
    IdempotentPurity,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Empire, Suite::SemigroupAxioms, Suite::ModelsetVsSubstitution, Suite::IdempotentPurity];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Empire => "empire",
            Suite::SemigroupAxioms => "semigroup-axioms",
            Suite::ModelsetVsSubstitution => "modelset-vs-substitution",
            Suite::IdempotentPurity => "idempotent-purity",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            format!("unknown suite {s:?}; expected one of empire, semigroup-axioms, modelset-vs-substitution, idempotent-purity")
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Pattern pairs for the empire suite.
    pub pairs: usize,
    pub box_bound: i64,
    /// Radius patterns are drawn from.
    pub pattern_radius: i64,
    /// Radius of the model set compared against the substitution.
    pub radius: i64,
    pub samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 0, pairs: 100, box_bound: 60, pattern_radius: 30, radius: 50, samples: 200 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: usize,
    pub failures: Vec<String>,
    pub passed: bool,
    pub details: BTreeMap<String, Value>,
}

impl SuiteReport {
    fn new(suite: Suite, seed: u64) -> Self {
        SuiteReport { suite, seed, checks: 0, failures: Vec::new(), passed: true, details: BTreeMap::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(mut self) -> Self {
        self.passed = self.failures.is_empty();
        self
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> SuiteReport {
    match suite {
        Suite::Empire => empire_suite(cfg),
        Suite::SemigroupAxioms => axiom_suite(cfg),
        Suite::ModelsetVsSubstitution => modelset_vs_substitution(cfg),
        Suite::IdempotentPurity => purity_suite(cfg),
    }
}

fn fib_lengths() -> LengthFunction {
    let g = QuadField::golden();
    LengthFunction::new([('a', g.tau()), ('b', g.one())]).expect("valid lengths")
}

fn fib_pointset(half_width: usize) -> PointSet1D {
    let w = two_sided_window(&SequenceSpec::fibonacci(), half_width).expect("fibonacci window");
    PointSet1D::build(&w, &fib_lengths(), &QuadField::golden().zero()).expect("anchor inside window")
}

/// A random pattern of 1 to 5 points of `pts`, clustered so that the
/// pattern windows are usually non-trivial.
fn sample_pattern(rng: &mut ChaCha8Rng, pts: &[Q]) -> Vec<Q> {
    let k = rng.gen_range(1..=5);
    let start = rng.gen_range(0..pts.len());
    let span = (start + 8).min(pts.len());
    let mut idx: Vec<usize> = (start..span).collect();
    idx.shuffle(rng);
    let mut out: Vec<Q> = idx.into_iter().take(k).map(|i| pts[i].clone()).collect();
    out.sort();
    out
}

fn empire_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut r = SuiteReport::new(Suite::Empire, cfg.seed);
    let scheme = CutProjectScheme::fibonacci();
    let f = scheme.field();
    let pts = scheme.generate(&f.int(cfg.pattern_radius)).expect("non-empty model set").points().to_vec();
    let grid = MembershipGrid::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut equal, mut unequal) = (0usize, 0usize);
    for n in 0..cfg.pairs {
        let p = sample_pattern(&mut rng, &pts);
        // half the pairs add one nearby point, which often leaves the window alone
        let q = if rng.gen_bool(0.5) {
            let mut q = p.clone();
            let near: Vec<&Q> = pts.iter().filter(|y| (*y - &p[0]).abs() <= f.int(6) && !p.contains(y)).collect();
            if let Some(y) = near.choose(&mut rng) {
                q.push((*y).clone());
                q.sort();
            }
            q
        } else {
            sample_pattern(&mut rng, &pts)
        };
        let fast = empire_equal(&scheme, &p, &q).expect("patterns lie in the lattice");
        let slow = empire_brute_with(&scheme, &p, &q, cfg.box_bound, &grid).expect("patterns lie in the lattice");
        let show = |v: &[Q]| v.iter().map(Q::compact).collect::<Vec<_>>().join(" ");
        r.check(fast == slow.same_empire, || format!("pair {n}: window test {fast}, brute force {}: [{}] vs [{}]", slow.same_empire, show(&p), show(&q)));
        r.check(slow.window_law_violations == 0, || format!("pair {n}: {} window-law violations", slow.window_law_violations));
        if fast {
            equal += 1;
        } else {
            unequal += 1;
            r.check(slow.separating.is_some(), || format!("pair {n}: no separating translate in the box"));
        }
    }
    r.details.insert("pairs".into(), json!(cfg.pairs));
    r.details.insert("equal".into(), json!(equal));
    r.details.insert("unequal".into(), json!(unequal));
    r.details.insert("box_bound".into(), json!(cfg.box_bound));
    r.finish()
}

/// GL1 to GL3 on a finite table with identity `one` and inverse `inv`.
pub fn group_like_violations<T: PartialEq + fmt::Display>(table: &PartialTable<T>, one: &T, inv: impl Fn(&T) -> T) -> Vec<String> {
    let mut bad = Vec::new();
    let idx = |x: &T| table.elements.iter().position(|e| e == x);
    let prod = |i: usize, j: usize| table.products.get(&(i, j)).copied();
    let Some(e) = idx(one) else {
        return vec![format!("identity {one} missing")];
    };
    for (i, s) in table.elements.iter().enumerate() {
        if prod(e, i) != Some(i) || prod(i, e) != Some(i) {
            bad.push(format!("GL1 fails at {s}"));
        }
        match idx(&inv(s)) {
            Some(j) if prod(i, j) == Some(e) && prod(j, i) == Some(e) => {}
            Some(_) => bad.push(format!("GL2 fails at {s}")),
            None => bad.push(format!("inverse of {s} missing")),
        }
    }
    for (&(i, j), &k) in &table.products {
        let (s, t, u) = (&table.elements[i], &table.elements[j], &table.elements[k]);
        let lhs = idx(&inv(t)).zip(idx(&inv(s))).and_then(|(ti, si)| prod(ti, si));
        if lhs != idx(&inv(u)) || lhs.is_none() {
            bad.push(format!("GL3 fails at {s} ∘ {t} = {u}"));
        }
    }
    bad
}

fn sample_gamma(rng: &mut ChaCha8Rng, ps: &PointSet1D, count: usize) -> Vec<PatternClass> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let start = rng.gen_range(-12i64..=8);
        let mut idx: Vec<i64> = (start..start + 5).collect();
        idx.shuffle(rng);
        idx.truncate(rng.gen_range(1..=4));
        let out_i = idx[rng.gen_range(0..idx.len())];
        let in_i = if rng.gen_bool(0.3) { out_i } else { idx[rng.gen_range(0..idx.len())] };
        if let Ok(x) = make_element(ps, &idx, out_i, in_i) {
            out.push(x);
        }
    }
    out
}

fn axiom_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut r = SuiteReport::new(Suite::SemigroupAxioms, cfg.seed);
    let g = QuadField::golden();

    let ps = fib_pointset(30);
    let table = maxset_table(&ps, &g.int(4)).expect("clipped table");
    for v in group_like_violations(&table, &g.zero(), |x| -x) {
        r.check(false, || format!("(D − D, ⊕): {v}"));
    }
    r.checks += table.len();

    let v = WindowSet::interval(g.zero(), g.one()).expect("interval");
    let mac = macbeath_data((&g.one(), &g.tau()), &v, 3, Overlap::Interior).expect("dense basis");
    for v in group_like_violations(&mac.table(), &g.zero(), |x| -x) {
        r.check(false, || format!("M(G, V): {v}"));
    }
    r.checks += mac.generators.len();

    let lang = factor_language(&two_sided_window(&SequenceSpec::fibonacci(), 40).expect("window"), 5);
    let sl = enumerate_sl(&lang, 4);
    for p in &sl {
        let pi = accent_inverse(p);
        let back = accent_multiply(p, &pi, &lang).and_then(|e| accent_multiply(&e, p, &lang));
        r.check(back.as_ref() == Some(p), || format!("S(L): p p⁻¹ p ≠ p at {p}"));
        let back = accent_multiply(&pi, p, &lang).and_then(|e| accent_multiply(&e, &pi, &lang));
        r.check(back.as_ref() == Some(&pi), || format!("S(L): p⁻¹ p p⁻¹ ≠ p⁻¹ at {p}"));
    }
    let idem: Vec<_> = sl.iter().filter(|p| p.is_idempotent()).collect();
    for e in &idem {
        for f in &idem {
            let ef = accent_multiply(e, f, &lang);
            let fe = accent_multiply(f, e, &lang);
            r.check(ef == fe, || format!("S(L): idempotents {e}, {f} do not commute"));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let xs = sample_gamma(&mut rng, &ps, cfg.samples);
    for x in &xs {
        let xi = x.inverse();
        let back = multiply(x, &xi, &ps).defined().map(|e| multiply(e, x, &ps));
        r.check(matches!(&back, Some(Product::Defined(y)) if y == x), || format!("Γ(D): x x⁻¹ x ≠ x at {x:?}"));
    }
    let idem: Vec<_> = xs.iter().filter(|x| x.is_idempotent()).take(40).collect();
    for e in &idem {
        for f in &idem {
            let (ef, fe) = (multiply(e, f, &ps), multiply(f, e, &ps));
            let same = match (&ef, &fe) {
                (Product::Defined(a), Product::Defined(b)) => a == b,
                (Product::Defined(_), _) | (_, Product::Defined(_)) => false,
                _ => true,
            };
            r.check(same, || format!("Γ(D): idempotents {e:?}, {f:?} do not commute"));
        }
    }
    r.details.insert("s_l_elements".into(), json!(sl.len()));
    r.details.insert("gamma_samples".into(), json!(xs.len()));
    r.details.insert("oplus_table".into(), json!(table.len()));
    r.details.insert("macbeath_generators".into(), json!(mac.generators.len()));
    r.finish()
}

/// The model set of the Fibonacci scheme and the point set of the
/// substitution fixed point, anchored at 0, agree on `[−R, R]`.
fn modelset_vs_substitution(cfg: &VerifyConfig) -> SuiteReport {
    let mut r = SuiteReport::new(Suite::ModelsetVsSubstitution, cfg.seed);
    let scheme = CutProjectScheme::fibonacci();
    let radius = scheme.field().int(cfg.radius);
    let model = scheme.generate(&radius).expect("non-empty model set");
    // half_width generous enough that the window covers [−R, R]
    let half_width = (cfg.radius as usize) + 2;
    let sub: Vec<Q> = fib_pointset(half_width).restrict(&radius);
    r.details.insert("modelset_points".into(), json!(model.len()));
    r.details.insert("substitution_points".into(), json!(sub.len()));
    r.check(model.points().len() == sub.len(), || format!("{} model-set points vs {} substitution points", model.len(), sub.len()));
    for (a, b) in model.points().iter().zip(&sub) {
        r.check(a == b, || format!("first mismatch: {} vs {}", a.compact(), b.compact()));
        if a != b {
            break;
        }
    }
    r.finish()
}

fn purity_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut r = SuiteReport::new(Suite::IdempotentPurity, cfg.seed);
    let scheme = CutProjectScheme::fibonacci();
    let f = scheme.field();
    let ps = scheme.generate(&f.int(30)).expect("non-empty model set");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let xs = sample_gamma(&mut rng, &ps, cfg.samples);
    let mut images = 0usize;
    for x in &xs {
        let square_is_x = matches!(multiply(x, x, &ps), Product::Defined(y) if &y == x);
        r.check(x.phi().is_zero() == square_is_x, || format!("Γ(D): φ = {} but x² = x is {square_is_x}", x.phi().compact()));
        // place the class at its own first point
        let at = ps.point(0).expect("anchor").clone();
        let Ok(img) = project_functor(&scheme, x, &at) else { continue };
        images += 1;
        let img_idem = gxh_multiply(&scheme, &img, &img).as_ref() == Some(&img);
        r.check(img.phi.is_zero() == img_idem, || format!("[φ] image: φ = {} but idempotent is {img_idem}", img.phi.compact()));
        r.check(img_idem == x.is_idempotent(), || format!("[φ] maps x (idempotent {}) to idempotent {img_idem}", x.is_idempotent()));
        let (max, phi) = gxh_max_and_phi(&scheme, &img);
        r.check(phi == img.phi && img.leq(&max), || "image not below its maximal element".to_string());
    }
    let k = scheme.window().clone();
    for n in -6..=6 {
        for m in -6..=6 {
            let phi = scheme.translate(n, m).internal;
            let w = k.intersect(&k.translate(&phi));
            if !scheme.meets_lattice(&w) {
                continue;
            }
            let x = GxhElement { window: w, phi };
            let idem = gxh_multiply(&scheme, &x, &x).as_ref() == Some(&x);
            r.check(x.phi.is_zero() == idem, || format!("Γ(X, G, H): φ = {} but idempotent is {idem}", x.phi.compact()));
        }
    }
    r.details.insert("gamma_samples".into(), json!(xs.len()));
    r.details.insert("functor_images".into(), json!(images));
    r.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
    }

    #[test]
    fn suites_pass_small() {
        let cfg = VerifyConfig { pairs: 10, box_bound: 30, samples: 30, radius: 20, ..VerifyConfig::default() };
        for s in Suite::ALL {
            let r = run_suite(s, &cfg);
            assert!(r.passed, "{s}: {:?}", &r.failures[..r.failures.len().min(5)]);
            assert!(r.checks > 0);
        }
    }

    #[test]
    fn group_like_detects_missing_inverse() {
        let t = PartialTable { elements: vec![0, 1], products: [((0, 0), 0), ((0, 1), 1), ((1, 0), 1)].into_iter().collect() };
        let bad = group_like_violations(&t, &0, |x| -x);
        assert!(bad.iter().any(|b| b.contains("inverse of 1")));
    }
}
