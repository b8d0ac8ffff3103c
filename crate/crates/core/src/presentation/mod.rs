//! Free-group words, finite presentations and their invariants.
//!
//! Nothing here decides isomorphism in general. What a report can state is
//! the abelianization (via Smith normal form) plus two relation-level
//! certificates: an empty relator set means the group is free, and a
//! relator set containing every generator commutator means the group equals
//! its abelianization.

mod matrix;
mod tietze;
mod word;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use matrix::{hnf, smith_normal_form, IntMatrix, SmithForm};
pub use tietze::{tietze_simplify, tietze_simplify_deep};
pub use word::{reduce_word, FreeWord, Syllable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("unknown generator label {0:?}")]
    UnknownLabel(String),
    #[error("duplicate generator label {0:?}")]
    DuplicateLabel(String),
    #[error("malformed presentation text: {0}")]
    Syntax(String),
    #[error("table product ({0}, {1}) is not an element of the table")]
    ProductOutsideTable(String, String),
    #[error("image list has {0} entries for {1} generators")]
    ImageCount(usize, usize),
}

/// Generators plus relators; a relation pair `(u, v)` is stored as `u·v⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PresentationJson", into = "PresentationJson")]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<FreeWord>,
}

/// JSON shape: `{"generators": [...], "relators": ["a b a- b-", ...]}`.
#[derive(Serialize, Deserialize)]
struct PresentationJson {
    generators: Vec<String>,
    relators: Vec<String>,
}

impl From<Presentation> for PresentationJson {
    fn from(p: Presentation) -> Self {
        let relators = p.relators.iter().map(|r| r.render(&p.generators)).collect();
        PresentationJson { generators: p.generators, relators }
    }
}

impl TryFrom<PresentationJson> for Presentation {
    type Error = PresentationError;

    fn try_from(j: PresentationJson) -> Result<Self, PresentationError> {
        let mut p = Presentation::new(j.generators)?;
        for r in &j.relators {
            let w = p.parse_word(r)?;
            p.relators.push(w);
        }
        Ok(p)
    }
}

/// The target group of [`check_homomorphism`], given by how it decides
/// triviality of a word over its own generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetGroup {
    /// Free group: trivial iff freely reduces to the empty word.
    Free,
    /// Free abelian group: trivial iff every exponent sum vanishes.
    FreeAbelian,
    /// ℤ written on one generator per unit: trivial iff the total exponent
    /// sum vanishes.
    Integers,
}

/// Named facts a presentation can certify about its group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "certificate", content = "rank", rename_all = "kebab-case")]
pub enum Certificate {
    /// No relators: free of the given rank.
    Free(usize),
    /// Every generator commutator is a relator (so the group is abelian)
    /// and the abelianization is torsion-free of full rank.
    FreeAbelian(usize),
    /// Neither certificate applies; see the abelian invariants.
    None,
}

impl Presentation {
    pub fn new(generators: Vec<String>) -> Result<Self, PresentationError> {
        let mut seen = std::collections::BTreeSet::new();
        for g in &generators {
            if !seen.insert(g) {
                return Err(PresentationError::DuplicateLabel(g.clone()));
            }
        }
        Ok(Presentation { generators, relators: Vec::new() })
    }

    pub fn index_of(&self, label: &str) -> Result<usize, PresentationError> {
        self.generators
            .iter()
            .position(|g| g == label)
            .ok_or_else(|| PresentationError::UnknownLabel(label.to_string()))
    }

    /// Build a word from `(label, inverted)` pairs.
    pub fn word<'a>(&self, letters: impl IntoIterator<Item = (&'a str, bool)>) -> Result<FreeWord, PresentationError> {
        let raw = letters
            .into_iter()
            .map(|(l, inv)| Ok(Syllable::new(self.index_of(l)?, inv)))
            .collect::<Result<Vec<_>, PresentationError>>()?;
        Ok(reduce_word(&raw))
    }

    /// Parse space-separated labels, a trailing `-` marking an inverse.
    pub fn parse_word(&self, text: &str) -> Result<FreeWord, PresentationError> {
        self.word(text.split_whitespace().map(|t| match t.strip_suffix('-') {
            Some(l) if !l.is_empty() => (l, true),
            _ => (t, false),
        }))
    }

    pub fn add_relation(&mut self, u: &FreeWord, v: &FreeWord) {
        let r = u.mul(&v.inverse());
        if !r.is_empty() {
            self.relators.push(r);
        }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Relator exponent-sum matrix (one row per relator).
    pub fn relation_matrix(&self) -> IntMatrix {
        let n = self.generators.len();
        IntMatrix::from_rows(
            n,
            self.relators
                .iter()
                .map(|r| r.exponent_sums(n).into_iter().map(BigInt::from).collect())
                .collect(),
        )
    }

    /// `(free rank, torsion coefficients > 1)` of the abelianization.
    pub fn abelian_invariants(&self) -> (usize, Vec<BigInt>) {
        let m = self.relation_matrix();
        // HNF first: same row lattice, at most `n` rows
        let (_, basis) = hnf(&m);
        let reduced = IntMatrix::from_rows(m.cols(), basis);
        let s = smith_normal_form(&reduced, false);
        let free_rank = self.generators.len() - s.invariants.len();
        let torsion = s.invariants.into_iter().filter(|d| !d.abs().is_one()).collect();
        (free_rank, torsion)
    }

    /// True iff for every pair of generators some relator is a cyclic
    /// conjugate of their commutator or its inverse.
    pub fn has_all_commutators(&self) -> bool {
        let n = self.generators.len();
        let mut seen = vec![vec![false; n]; n];
        for r in &self.relators {
            let w = r.cyclically_reduce();
            let s = w.syllables();
            if s.len() == 4 && s[2] == s[0].inverse() && s[3] == s[1].inverse() && s[0].gen != s[1].gen {
                seen[s[0].gen][s[1].gen] = true;
                seen[s[1].gen][s[0].gen] = true;
            }
        }
        (0..n).all(|i| (i + 1..n).all(|j| seen[i][j]))
    }

    pub fn certificate(&self) -> Certificate {
        if self.relators.iter().all(FreeWord::is_empty) {
            return Certificate::Free(self.generators.len());
        }
        let (free, torsion) = self.abelian_invariants();
        if self.has_all_commutators() && torsion.is_empty() && free == self.generators.len() {
            Certificate::FreeAbelian(free)
        } else {
            Certificate::None
        }
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Presentation {
    /// `gens: a b; rel: a b a- b-; rel: …`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gens: {}", self.generators.join(" "))?;
        for r in &self.relators {
            write!(f, "; rel: {}", r.render(&self.generators))?;
        }
        Ok(())
    }
}

impl FromStr for Presentation {
    type Err = PresentationError;

    fn from_str(text: &str) -> Result<Self, PresentationError> {
        let mut clauses = text.split(';').map(str::trim).filter(|c| !c.is_empty());
        let gens = clauses
            .next()
            .and_then(|c| c.strip_prefix("gens:"))
            .ok_or_else(|| PresentationError::Syntax("expected leading 'gens:' clause".into()))?;
        let mut p = Presentation::new(gens.split_whitespace().map(String::from).collect())?;
        for c in clauses {
            let body = c
                .strip_prefix("rel:")
                .ok_or_else(|| PresentationError::Syntax(format!("unexpected clause {c:?}")))?;
            let w = p.parse_word(body)?;
            p.relators.push(w);
        }
        Ok(p)
    }
}

/// One relator `u·v⁻¹` per pair; pairs with `u = v` contribute nothing.
pub fn presentation_from_pairs(generators: Vec<String>, pairs: &[(FreeWord, FreeWord)]) -> Result<Presentation, PresentationError> {
    let mut p = Presentation::new(generators)?;
    let n = p.generators.len();
    for (u, v) in pairs {
        for s in u.syllables().iter().chain(v.syllables()) {
            if s.gen >= n {
                return Err(PresentationError::UnknownLabel(format!("#{}", s.gen)));
            }
        }
        p.add_relation(u, v);
    }
    Ok(p)
}

/// Does `generator i ↦ images[i]` kill every relator of `p` in `target`?
pub fn check_homomorphism(p: &Presentation, images: &[FreeWord], target: TargetGroup) -> Result<bool, PresentationError> {
    if images.len() != p.generators.len() {
        return Err(PresentationError::ImageCount(images.len(), p.generators.len()));
    }
    let width = images
        .iter()
        .flat_map(|w| w.syllables().iter().map(|s| s.gen + 1))
        .max()
        .unwrap_or(0);
    Ok(p.relators.iter().all(|r| {
        let w = r.substitute(|g| images[g].clone());
        match target {
            TargetGroup::Free => w.is_empty(),
            TargetGroup::FreeAbelian => w.exponent_sums(width).iter().all(|&e| e == 0),
            TargetGroup::Integers => w.exponent_sums(width).iter().sum::<i64>() == 0,
        }
    }))
}

/// A finite partial binary operation: `products[(i, j)] = k` records
/// `elements[i] ∘ elements[j] = elements[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialTable<T> {
    pub elements: Vec<T>,
    pub products: BTreeMap<(usize, usize), usize>,
}

impl<T: Clone + Ord + fmt::Display> PartialTable<T> {
    /// Tabulate `op` on all ordered pairs. A product outside `elements` is
    /// an error unless `clip` is set, in which case it is left undefined.
    pub fn from_fn(elements: Vec<T>, clip: bool, op: impl Fn(&T, &T) -> Option<T>) -> Result<Self, PresentationError> {
        let index: BTreeMap<T, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let mut products = BTreeMap::new();
        for (i, x) in elements.iter().enumerate() {
            for (j, y) in elements.iter().enumerate() {
                if let Some(z) = op(x, y) {
                    match index.get(&z) {
                        Some(&k) => {
                            products.insert((i, j), k);
                        }
                        None if clip => {}
                        None => return Err(PresentationError::ProductOutsideTable(x.to_string(), y.to_string())),
                    }
                }
            }
        }
        Ok(PartialTable { elements, products })
    }

    pub fn product(&self, x: &T, y: &T) -> Option<&T> {
        let i = self.elements.iter().position(|e| e == x)?;
        let j = self.elements.iter().position(|e| e == y)?;
        self.products.get(&(i, j)).map(|&k| &self.elements[k])
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// The universal group of a partial operation: one generator per element
/// and one relation `(s)(t) = (s∘t)` per defined product.
pub fn universal_presentation_from_table<T>(table: &PartialTable<T>, label: impl Fn(&T) -> String) -> Result<Presentation, PresentationError> {
    let mut p = Presentation::new(table.elements.iter().map(label).collect())?;
    for (&(i, j), &k) in &table.products {
        let lhs = FreeWord::gen(i).mul(&FreeWord::gen(j));
        p.add_relation(&lhs, &FreeWord::gen(k));
    }
    Ok(p)
}

/// Convenience for reports: torsion as plain integers.
pub fn torsion_i64(t: &[BigInt]) -> Vec<i64> {
    t.iter().map(|x| i64::try_from(x.clone()).unwrap_or(i64::MAX)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(text: &str) -> Presentation {
        text.parse().unwrap()
    }

    fn gens(ls: &[&str]) -> Vec<String> {
        ls.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn pairs_become_relators() {
        let p0 = Presentation::new(gens(&["a", "b"])).unwrap();
        let ab = p0.parse_word("a b").unwrap();
        let ba = p0.parse_word("b a").unwrap();
        let p = presentation_from_pairs(gens(&["a", "b"]), &[(ab.clone(), ba)]).unwrap();
        assert_eq!(p.relators, vec![p0.parse_word("a b a- b-").unwrap()]);
        let p = presentation_from_pairs(gens(&["a", "b"]), &[(ab.clone(), ab)]).unwrap();
        assert!(p.relators.is_empty());
        let aa = p0.parse_word("a a").unwrap();
        let bbb = p0.parse_word("b b b").unwrap();
        let p = presentation_from_pairs(gens(&["a", "b"]), &[(aa, bbb)]).unwrap();
        assert_eq!(p.to_string(), "gens: a b; rel: a a b- b- b-");
    }

    #[test]
    fn unknown_labels_rejected() {
        assert_eq!(pres("gens: a").parse_word("a c"), Err(PresentationError::UnknownLabel("c".into())));
        let bad = FreeWord::gen(3);
        assert!(presentation_from_pairs(gens(&["a"]), &[(bad, FreeWord::empty())]).is_err());
        assert!(matches!("rel: a".parse::<Presentation>(), Err(PresentationError::Syntax(_))));
        assert!(matches!("gens: a a".parse::<Presentation>(), Err(PresentationError::DuplicateLabel(_))));
    }

    #[test]
    fn abelianizations() {
        assert_eq!(pres("gens: a b; rel: a b a- b-").abelian_invariants(), (2, vec![]));
        assert_eq!(pres("gens: a b; rel: a a b- b- b-").abelian_invariants(), (1, vec![]));
        assert_eq!(pres("gens: a").abelian_invariants(), (1, vec![]));
        assert_eq!(pres("gens: a b; rel: a a; rel: b b b").abelian_invariants(), (0, vec![BigInt::from(6)]));
        assert_eq!(pres("gens: a b; rel: a a; rel: b b").abelian_invariants(), (0, vec![BigInt::from(2), BigInt::from(2)]));
    }

    #[test]
    fn certificates() {
        assert_eq!(pres("gens: a b").certificate(), Certificate::Free(2));
        assert_eq!(pres("gens: a b; rel: b a b- a-").certificate(), Certificate::FreeAbelian(2));
        assert_eq!(pres("gens: a b; rel: a b a- b-; rel: a a b a- a- b-").certificate(), Certificate::FreeAbelian(2));
        assert_eq!(pres("gens: a b; rel: a a b- b- b-").certificate(), Certificate::None);
        // commutator present but a torsion relator as well
        assert_eq!(pres("gens: a b; rel: a b a- b-; rel: a a").certificate(), Certificate::None);
        assert_eq!(pres("gens: a b c; rel: a b a- b-").certificate(), Certificate::None);
    }

    #[test]
    fn homomorphism_checks() {
        let p = pres("gens: a b; rel: a b a- b-");
        let ids = vec![FreeWord::gen(0), FreeWord::gen(1)];
        assert!(check_homomorphism(&p, &ids, TargetGroup::FreeAbelian).unwrap());
        assert!(!check_homomorphism(&p, &ids, TargetGroup::Free).unwrap());
        let q = pres("gens: a b; rel: a a b- b- b-");
        let t = FreeWord::gen(0);
        let into_z = vec![t.pow(3), t.pow(2)];
        assert!(check_homomorphism(&q, &into_z, TargetGroup::Integers).unwrap());
        let r = pres("gens: a b; rel: a b");
        assert!(!check_homomorphism(&r, &ids, TargetGroup::Free).unwrap());
        assert!(check_homomorphism(&r, &ids[..1], TargetGroup::Free).is_err());
    }

    #[test]
    fn text_and_json_forms() {
        let p = pres("gens: a b; rel: a b a- b-");
        assert_eq!(p.to_string().parse::<Presentation>().unwrap(), p);
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(j, r#"{"generators":["a","b"],"relators":["a b a- b-"]}"#);
        assert_eq!(serde_json::from_str::<Presentation>(&j).unwrap(), p);
    }

    #[test]
    fn trivial_table_gives_trivial_group() {
        let t = PartialTable::from_fn(vec!['e'], false, |_, _| Some('e')).unwrap();
        let p = universal_presentation_from_table(&t, |c| c.to_string()).unwrap();
        assert_eq!(p.to_string(), "gens: e; rel: e");
        let s = tietze_simplify(&p, 10);
        assert!(s.generators.is_empty());
        assert_eq!(s.abelian_invariants(), (0, vec![]));
    }

    #[test]
    fn table_products_must_close() {
        let err = PartialTable::from_fn(vec![0i64, 1], false, |x, y| Some(x + y));
        assert!(matches!(err, Err(PresentationError::ProductOutsideTable(_, _))));
        let ok = PartialTable::from_fn(vec![0i64, 1], true, |x, y| Some(x + y)).unwrap();
        assert_eq!(ok.products.len(), 3);
        assert_eq!(ok.product(&1, &1), None);
        assert_eq!(ok.product(&0, &1), Some(&1));
    }

    #[test]
    fn cyclic_group_table() {
        // ℤ/3 as a (total) table: universal group is ℤ/3
        let t = PartialTable::from_fn(vec![0i64, 1, 2], false, |x, y| Some((x + y) % 3)).unwrap();
        let p = universal_presentation_from_table(&t, |x| format!("z{x}")).unwrap();
        assert_eq!(p.abelian_invariants(), (0, vec![BigInt::from(3)]));
        let s = tietze_simplify(&p, 10);
        assert_eq!(s.abelian_invariants(), (0, vec![BigInt::from(3)]));
    }
}
