//! Tietze transformations on one-object presentations.
//!
//! Words are handled as letter codes (`2·generator + inverse`). The
//! simplifier eliminates generators that occur exactly once in some
//! cyclically reduced relator and keeps track of where every original
//! generator went, so words can be carried across.

use std::collections::HashSet;

use rand::Rng;

use crate::error::Result;
use crate::presentation::{GroupoidPresentation, ObjectId, Word};

use super::finite::{letters, loop_relators};

pub(crate) fn reduce(codes: impl IntoIterator<Item = u32>) -> Vec<u32> {
    let mut out: Vec<u32> = Vec::new();
    for c in codes {
        if out.last() == Some(&(c ^ 1)) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out
}

pub(crate) fn invert(codes: &[u32]) -> Vec<u32> {
    codes.iter().rev().map(|c| c ^ 1).collect()
}

pub(crate) fn cyclic_reduce(codes: &[u32]) -> Vec<u32> {
    let r = reduce(codes.iter().copied());
    let (mut i, mut j) = (0, r.len());
    while j - i >= 2 && r[i] == r[j - 1] ^ 1 {
        i += 1;
        j -= 1;
    }
    r[i..j].to_vec()
}

/// Lexicographically least rotation of `r` or of its inverse.
pub(crate) fn canonical_cyclic(r: &[u32]) -> Vec<u32> {
    let mut best: Option<Vec<u32>> = None;
    for w in [r.to_vec(), invert(r)] {
        for k in 0..w.len().max(1) {
            let rot: Vec<u32> = w[k..].iter().chain(&w[..k]).copied().collect();
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

/// A one-object presentation as generator names plus relator loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopPresentation {
    pub names: Vec<String>,
    pub relators: Vec<Vec<u32>>,
}

impl LoopPresentation {
    pub fn from_presentation(g: &GroupoidPresentation) -> Result<Self> {
        let relators = loop_relators(g)?;
        Ok(LoopPresentation { names: g.arrows().iter().map(|a| a.name.clone()).collect(), relators })
    }

    pub fn to_presentation(&self, object: &str) -> GroupoidPresentation {
        let mut p = GroupoidPresentation::trivial(object);
        let o = ObjectId(0);
        for n in &self.names {
            p.add_arrow(n.clone(), o, o).expect("distinct generator names");
        }
        for r in &self.relators {
            let w = p.word(o, &letters(r)).expect("relators are loops at the object");
            p.add_relator(w, Word::identity(o)).expect("loops are parallel to the identity");
        }
        p
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Vec::len).sum()
    }

    /// Cyclically reduces, drops trivial relators, removes duplicates up to
    /// rotation and inversion.
    pub fn tidy(&mut self) {
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        for r in &self.relators {
            let c = cyclic_reduce(r);
            if c.is_empty() {
                continue;
            }
            if seen.insert(canonical_cyclic(&c)) {
                kept.push(c);
            }
        }
        self.relators = kept;
    }
}

/// Result of [`simplify`]: the reduced presentation and the image of every
/// original generator as a word in the new generators.
#[derive(Debug, Clone)]
pub struct Simplified {
    pub presentation: LoopPresentation,
    pub images: Vec<Vec<u32>>,
}

impl Simplified {
    /// Carries a word over the original generators to the simplified group.
    pub fn map_codes(&self, codes: &[u32]) -> Vec<u32> {
        reduce(codes.iter().flat_map(|&c| {
            let img = &self.images[(c >> 1) as usize];
            if c & 1 == 1 {
                invert(img)
            } else {
                img.clone()
            }
        }))
    }
}

fn substitute(word: &[u32], gen: usize, replacement: &[u32]) -> Vec<u32> {
    let inv = invert(replacement);
    reduce(word.iter().flat_map(|&c| {
        if (c >> 1) as usize == gen {
            if c & 1 == 1 {
                inv.clone()
            } else {
                replacement.to_vec()
            }
        } else {
            vec![c]
        }
    }))
}

/// Drops generator `gen` from the code space, shifting higher generators down.
fn renumber(word: &[u32], gen: usize) -> Vec<u32> {
    word.iter()
        .map(|&c| if (c >> 1) as usize > gen { c - 2 } else { c })
        .collect()
}

/// Eliminates `gen` using relator `rel`, in which it occurs exactly once.
fn eliminate(p: &mut LoopPresentation, images: &mut [Vec<u32>], rel: usize, gen: usize) {
    let r = p.relators.remove(rel);
    let pos = r.iter().position(|&c| (c >> 1) as usize == gen).expect("generator occurs");
    // rotate so the generator letter is last: A x = 1  =>  x = A^-1
    let rotated: Vec<u32> = r[pos + 1..].iter().chain(&r[..pos]).copied().collect();
    let mut value = invert(&rotated);
    if r[pos] & 1 == 1 {
        value = invert(&value);
    }
    for rr in p.relators.iter_mut() {
        *rr = renumber(&substitute(rr, gen, &value), gen);
    }
    for img in images.iter_mut() {
        *img = renumber(&substitute(img, gen, &value), gen);
    }
    p.names.remove(gen);
}

fn occurrences(r: &[u32], gen: usize) -> usize {
    r.iter().filter(|&&c| (c >> 1) as usize == gen).count()
}

/// Repeatedly eliminates a generator occurring exactly once in a shortest
/// possible relator, as long as the total relator length does not grow by
/// more than a fixed margin per step.
pub fn simplify(g: &LoopPresentation) -> Simplified {
    const GROWTH: usize = 64;
    let mut p = g.clone();
    let mut images: Vec<Vec<u32>> = (0..g.names.len() as u32).map(|i| vec![i << 1]).collect();
    p.tidy();
    loop {
        let mut choice: Option<(usize, usize, usize)> = None;
        for (ri, r) in p.relators.iter().enumerate() {
            if choice.is_some_and(|(_, _, len)| r.len() >= len) {
                continue;
            }
            let mut gens: Vec<usize> = r.iter().map(|&c| (c >> 1) as usize).collect();
            gens.sort_unstable();
            gens.dedup();
            for gen in gens {
                if occurrences(r, gen) != 1 {
                    continue;
                }
                let elsewhere: usize = p.relators.iter().map(|x| occurrences(x, gen)).sum::<usize>() - 1;
                let growth = elsewhere * r.len().saturating_sub(2);
                if r.len() <= 3 || growth <= GROWTH + r.len() {
                    choice = Some((ri, gen, r.len()));
                    break;
                }
            }
        }
        match choice {
            Some((ri, gen, _)) => {
                eliminate(&mut p, &mut images, ri, gen);
                p.tidy();
            }
            None => break,
        }
    }
    Simplified { presentation: p, images }
}

/// One randomly chosen Tietze move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TietzeMove {
    /// Append a conjugate of an existing relator.
    AddConjugate { relator: usize, by: Vec<u32> },
    /// Append the product of two existing relators.
    AddProduct { first: usize, second: usize },
    /// Add a generator `name` together with the relator `name = word`.
    AddGenerator { name: String, word: Vec<u32> },
    /// Eliminate a generator occurring once in a relator.
    Eliminate { relator: usize, generator: usize },
    /// Remove a relator that is freely trivial or a cyclic duplicate.
    Tidy,
}

impl TietzeMove {
    pub fn random<R: Rng>(rng: &mut R, p: &LoopPresentation) -> TietzeMove {
        let n = p.names.len() as u32;
        let random_word = |rng: &mut R, len: usize| -> Vec<u32> {
            if n == 0 {
                return Vec::new();
            }
            reduce((0..len).map(|_| rng.gen_range(0..2 * n)))
        };
        loop {
            match rng.gen_range(0..5) {
                0 if !p.relators.is_empty() => {
                    let relator = rng.gen_range(0..p.relators.len());
                    let len = rng.gen_range(1..4);
                    return TietzeMove::AddConjugate { relator, by: random_word(rng, len) };
                }
                1 if !p.relators.is_empty() => {
                    let first = rng.gen_range(0..p.relators.len());
                    let second = rng.gen_range(0..p.relators.len());
                    return TietzeMove::AddProduct { first, second };
                }
                2 => {
                    let name = format!("t{}", p.names.len());
                    if p.names.contains(&name) {
                        continue;
                    }
                    let len = rng.gen_range(0..4);
                    return TietzeMove::AddGenerator { name, word: random_word(rng, len) };
                }
                3 => {
                    let candidates: Vec<(usize, usize)> = p
                        .relators
                        .iter()
                        .enumerate()
                        .flat_map(|(ri, r)| {
                            let c = cyclic_reduce(r);
                            (0..p.names.len())
                                .filter(move |&g| occurrences(&c, g) == 1)
                                .map(move |g| (ri, g))
                        })
                        .collect();
                    if candidates.is_empty() {
                        continue;
                    }
                    let (relator, generator) = candidates[rng.gen_range(0..candidates.len())];
                    return TietzeMove::Eliminate { relator, generator };
                }
                4 => return TietzeMove::Tidy,
                _ => continue,
            }
        }
    }

    pub fn apply(&self, p: &LoopPresentation) -> LoopPresentation {
        let mut q = p.clone();
        match self {
            TietzeMove::AddConjugate { relator, by } => {
                let r = &p.relators[*relator];
                q.relators.push(reduce(by.iter().chain(r).copied().chain(invert(by))));
            }
            TietzeMove::AddProduct { first, second } => {
                let r = p.relators[*first].iter().chain(&p.relators[*second]).copied();
                q.relators.push(reduce(r));
            }
            TietzeMove::AddGenerator { name, word } => {
                let new = (q.names.len() as u32) << 1;
                q.names.push(name.clone());
                q.relators.push(reduce(std::iter::once(new).chain(invert(word))));
            }
            TietzeMove::Eliminate { relator, generator } => {
                q.relators[*relator] = cyclic_reduce(&q.relators[*relator]);
                let mut images = Vec::new();
                eliminate(&mut q, &mut images, *relator, *generator);
            }
            TietzeMove::Tidy => q.tidy(),
        }
        q
    }
}
