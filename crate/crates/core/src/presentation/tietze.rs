use std::collections::BTreeSet;

use super::word::{FreeWord, Syllable};
use super::Presentation;

/// Drop trivial and duplicate relators (up to cyclic permutation and
/// inversion), cyclically reducing the survivors.
fn tidy(relators: &[FreeWord]) -> Vec<FreeWord> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for r in relators {
        let c = r.cyclically_reduce();
        if c.is_empty() {
            continue;
        }
        if seen.insert(c.cyclic_key()) {
            out.push(c);
        }
    }
    out
}

/// A generator eliminable by a relator of length at most two:
/// `g^e` gives `g = 1`, `g^e h^f` (h ≠ g) gives `g = h^(−e·f)`.
fn find_definition(p: &Presentation) -> Option<(usize, FreeWord)> {
    for r in &p.relators {
        let s = r.syllables();
        match s {
            [x] => return Some((x.gen, FreeWord::empty())),
            [x, y] if x.gen != y.gen => {
                let e = x.exponent() * y.exponent();
                let h = Syllable::new(y.gen, e > 0);
                return Some((x.gen, FreeWord::from(vec![h])));
            }
            _ => {}
        }
    }
    None
}

/// Bounded Tietze simplification: at most `budget` generator eliminations,
/// interleaved with relator clean-up. The output presents an isomorphic
/// group.
pub fn tietze_simplify(p: &Presentation, budget: usize) -> Presentation {
    let mut cur = Presentation {
        generators: p.generators.clone(),
        relators: tidy(&p.relators),
    };
    for _ in 0..budget {
        let Some((g, image)) = find_definition(&cur) else { break };
        // substitute g := image everywhere, then delete g and renumber
        cur = eliminate(&cur, g, &image);
    }
    cur
}

/// A generator occurring exactly once in a relator of length at most
/// `max_len`: `u·g·v = 1` gives `g = u⁻¹v⁻¹`. Among all candidates, the one
/// whose substitution adds the fewest syllables elsewhere.
fn find_long_definition(p: &Presentation, max_len: usize) -> Option<(usize, FreeWord)> {
    let mut occurrences = vec![0usize; p.generators.len()];
    for r in &p.relators {
        for x in r.syllables() {
            occurrences[x.gen] += 1;
        }
    }
    let mut best: Option<(usize, usize, FreeWord)> = None;
    for r in p.relators.iter().filter(|r| r.len() <= max_len) {
        let s = r.syllables();
        for (k, x) in s.iter().enumerate() {
            if s.iter().filter(|y| y.gen == x.gen).count() != 1 {
                continue;
            }
            let cost = (s.len() - 2) * (occurrences[x.gen] - 1);
            if best.as_ref().is_some_and(|b| b.0 <= cost) {
                continue;
            }
            let u = FreeWord::from(s[..k].to_vec());
            let v = FreeWord::from(s[k + 1..].to_vec());
            // u g v = 1 ⇒ g = u⁻¹ v⁻¹;  u g⁻¹ v = 1 ⇒ g = v u
            let image = if x.inv { v.mul(&u) } else { u.inverse().mul(&v.inverse()) };
            best = Some((cost, x.gen, image));
        }
    }
    best.map(|(_, g, image)| (g, image))
}

/// Like [`tietze_simplify`], but also eliminates a generator that occurs
/// once in some relator of length at most `max_len`.
pub fn tietze_simplify_deep(p: &Presentation, budget: usize, max_len: usize) -> Presentation {
    let mut cur = tietze_simplify(p, budget);
    for _ in 0..budget {
        let Some((g, image)) = find_definition(&cur).or_else(|| find_long_definition(&cur, max_len)) else { break };
        cur = eliminate(&cur, g, &image);
    }
    cur
}

fn eliminate(cur: &Presentation, g: usize, image: &FreeWord) -> Presentation {
    let relators: Vec<FreeWord> = cur
        .relators
        .iter()
        .map(|r| r.substitute(|k| if k == g { image.clone() } else { FreeWord::gen(k) }))
        .map(|r| r.substitute(|k| FreeWord::gen(if k > g { k - 1 } else { k })))
        .collect();
    let mut generators = cur.generators.clone();
    generators.remove(g);
    Presentation { generators, relators: tidy(&relators) }
}
