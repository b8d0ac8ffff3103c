use std::fmt;

use serde::{Deserialize, Serialize};

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Syllable {
    pub gen: usize,
    pub inv: bool,
}

impl Syllable {
    pub fn new(gen: usize, inv: bool) -> Self {
        Syllable { gen, inv }
    }

    pub fn pos(gen: usize) -> Self {
        Syllable { gen, inv: false }
    }

    pub fn neg(gen: usize) -> Self {
        Syllable { gen, inv: true }
    }

    pub fn inverse(self) -> Self {
        Syllable { gen: self.gen, inv: !self.inv }
    }

    pub fn exponent(self) -> i64 {
        if self.inv {
            -1
        } else {
            1
        }
    }
}

/// A freely reduced word over generator indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FreeWord(Vec<Syllable>);

/// Free reduction of an arbitrary syllable sequence.
pub fn reduce_word(raw: &[Syllable]) -> FreeWord {
    let mut out: Vec<Syllable> = Vec::with_capacity(raw.len());
    for &s in raw {
        if out.last() == Some(&s.inverse()) {
            out.pop();
        } else {
            out.push(s);
        }
    }
    FreeWord(out)
}

impl FreeWord {
    pub fn empty() -> Self {
        FreeWord(Vec::new())
    }

    pub fn gen(g: usize) -> Self {
        FreeWord(vec![Syllable::pos(g)])
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord(self.0.iter().rev().map(|s| s.inverse()).collect())
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut raw = self.0.clone();
        raw.extend_from_slice(&other.0);
        reduce_word(&raw)
    }

    pub fn pow(&self, k: i64) -> FreeWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeWord::empty();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Strip conjugating pairs `x … x⁻¹` from the ends.
    pub fn cyclically_reduce(&self) -> FreeWord {
        let mut v = &self.0[..];
        while v.len() >= 2 && v[0] == v[v.len() - 1].inverse() {
            v = &v[1..v.len() - 1];
        }
        FreeWord(v.to_vec())
    }

    /// Exponent sum per generator.
    pub fn exponent_sums(&self, n_gens: usize) -> Vec<i64> {
        let mut out = vec![0i64; n_gens];
        for s in &self.0 {
            out[s.gen] += s.exponent();
        }
        out
    }

    pub fn mentions(&self, g: usize) -> bool {
        self.0.iter().any(|s| s.gen == g)
    }

    /// Replace each generator by its image word.
    pub fn substitute(&self, image: impl Fn(usize) -> FreeWord) -> FreeWord {
        let mut raw = Vec::new();
        for s in &self.0 {
            let w = image(s.gen);
            if s.inv {
                raw.extend(w.inverse().0);
            } else {
                raw.extend(w.0);
            }
        }
        reduce_word(&raw)
    }

    /// Canonical representative of the cyclic class of `w` and `w⁻¹`, used
    /// to spot duplicate relators.
    pub fn cyclic_key(&self) -> FreeWord {
        let w = self.cyclically_reduce();
        if w.is_empty() {
            return w;
        }
        let mut best: Option<Vec<Syllable>> = None;
        for cand in [w.0.clone(), w.inverse().0] {
            for r in 0..cand.len() {
                let mut rot = cand[r..].to_vec();
                rot.extend_from_slice(&cand[..r]);
                if best.as_ref().is_none_or(|b| rot < *b) {
                    best = Some(rot);
                }
            }
        }
        FreeWord(best.unwrap_or_default())
    }

    /// Render with generator labels, `x-` for an inverse.
    pub fn render(&self, labels: &[String]) -> String {
        self.0
            .iter()
            .map(|s| {
                let l = labels.get(s.gen).cloned().unwrap_or_else(|| format!("g{}", s.gen));
                if s.inv {
                    format!("{l}-")
                } else {
                    l
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl From<Vec<Syllable>> for FreeWord {
    fn from(raw: Vec<Syllable>) -> Self {
        reduce_word(&raw)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        write!(f, "{}", self.render(&[]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const A: Syllable = Syllable { gen: 0, inv: false };
    const AI: Syllable = Syllable { gen: 0, inv: true };
    const B: Syllable = Syllable { gen: 1, inv: false };
    const BI: Syllable = Syllable { gen: 1, inv: true };

    #[test]
    fn reductions() {
        assert!(reduce_word(&[A, AI]).is_empty());
        assert_eq!(reduce_word(&[A, B, BI, A]).syllables(), &[A, A]);
        assert_eq!(reduce_word(&[A, B, AI, BI]).syllables(), &[A, B, AI, BI]);
    }

    #[test]
    fn cyclic_key_identifies_rotations_and_inverses() {
        let c = reduce_word(&[A, B, AI, BI]);
        let rot = reduce_word(&[B, AI, BI, A]);
        assert_eq!(c.cyclic_key(), rot.cyclic_key());
        assert_eq!(c.cyclic_key(), c.inverse().cyclic_key());
        assert_eq!(reduce_word(&[B, A, BI]).cyclically_reduce().syllables(), &[A]);
    }

    fn syllable() -> impl Strategy<Value = Syllable> {
        (0usize..3, any::<bool>()).prop_map(|(g, i)| Syllable::new(g, i))
    }

    proptest! {
        #[test]
        fn reduction_is_idempotent_and_shrinking(raw in prop::collection::vec(syllable(), 0..30)) {
            let w = reduce_word(&raw);
            prop_assert!(w.len() <= raw.len());
            prop_assert_eq!(reduce_word(w.syllables()), w.clone());
            prop_assert!(w.mul(&w.inverse()).is_empty());
        }
    }
}
