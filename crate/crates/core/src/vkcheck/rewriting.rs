//! Knuth–Bendix completion for group presentations over letter codes,
//! shortlex order.
//!
//! Every rule is a consequence of the relators, so equal normal forms
//! always prove equality. Distinct normal forms prove inequality only when
//! the system is confluent.

use std::cmp::Ordering;

#[derive(Debug, Clone, Copy)]
pub struct KbLimits {
    pub max_rules: usize,
    /// Overlap checks before giving up.
    pub max_steps: usize,
    /// Equations with a longer side after reduction are dropped, which
    /// forfeits confluence.
    pub max_len: usize,
}

impl Default for KbLimits {
    fn default() -> Self {
        KbLimits { max_rules: 400, max_steps: 60_000, max_len: 40 }
    }
}

#[derive(Debug, Clone)]
pub struct RewritingSystem {
    /// Rank of each letter code in the ordering.
    rank: Vec<u32>,
    rules: Vec<Option<(Vec<u32>, Vec<u32>)>>,
    /// Active rule ids by last letter of the left side.
    by_last: Vec<Vec<usize>>,
    confluent: bool,
}

impl RewritingSystem {
    pub fn is_confluent(&self) -> bool {
        self.confluent
    }

    pub fn rule_count(&self) -> usize {
        self.rules.iter().flatten().count()
    }

    pub fn rules(&self) -> impl Iterator<Item = &(Vec<u32>, Vec<u32>)> {
        self.rules.iter().flatten()
    }

    fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        a.len().cmp(&b.len()).then_with(|| {
            a.iter().map(|&c| self.rank[c as usize]).cmp(b.iter().map(|&c| self.rank[c as usize]))
        })
    }

    /// Normal form by repeated suffix rewriting.
    pub fn reduce(&self, w: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = Vec::with_capacity(w.len());
        let mut input: Vec<u32> = w.iter().rev().copied().collect();
        while let Some(c) = input.pop() {
            out.push(c);
            for &id in &self.by_last[c as usize] {
                let (lhs, rhs) = self.rules[id].as_ref().expect("index holds active rules");
                if out.ends_with(lhs) {
                    out.truncate(out.len() - lhs.len());
                    input.extend(rhs.iter().rev());
                    break;
                }
            }
        }
        out
    }

    fn add_rule(&mut self, lhs: Vec<u32>, rhs: Vec<u32>) -> usize {
        let id = self.rules.len();
        self.by_last[*lhs.last().expect("left sides are nonempty") as usize].push(id);
        self.rules.push(Some((lhs, rhs)));
        id
    }

    fn remove_rule(&mut self, id: usize) -> (Vec<u32>, Vec<u32>) {
        let rule = self.rules[id].take().expect("rule is active");
        let last = *rule.0.last().unwrap() as usize;
        self.by_last[last].retain(|&r| r != id);
        rule
    }

    /// Orients and adds an equation, then inter-reduces. Returns false if
    /// the equation was dropped for length.
    fn push_equation(&mut self, a: &[u32], b: &[u32], limits: &KbLimits) -> bool {
        let mut pending = vec![(a.to_vec(), b.to_vec())];
        let mut kept = true;
        while let Some((a, b)) = pending.pop() {
            let (a, b) = (self.reduce(&a), self.reduce(&b));
            let (lhs, rhs) = match self.cmp(&a, &b) {
                Ordering::Equal => continue,
                Ordering::Greater => (a, b),
                Ordering::Less => (b, a),
            };
            if lhs.len() > limits.max_len {
                kept = false;
                continue;
            }
            let id = self.add_rule(lhs.clone(), rhs);
            // older rules whose left side contains the new one go back to
            // the queue; right sides get re-reduced
            for other in 0..self.rules.len() {
                if other == id {
                    continue;
                }
                let Some((l, _)) = &self.rules[other] else { continue };
                if contains(l, &lhs) {
                    let (l, r) = self.remove_rule(other);
                    pending.push((l, r));
                }
            }
            for other in 0..self.rules.len() {
                if let Some((_, r)) = &self.rules[other] {
                    let r = r.clone();
                    let reduced = self.reduce(&r);
                    if reduced != r {
                        self.rules[other].as_mut().unwrap().1 = reduced;
                    }
                }
            }
        }
        kept
    }
}

fn contains(hay: &[u32], needle: &[u32]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}

/// Completes `{x x⁻¹ → 1} ∪ {r → 1}` for `gens` generators. `order` lists
/// generator indices from smallest; each generator is followed by its
/// inverse.
pub fn knuth_bendix(gens: usize, relators: &[Vec<u32>], order: &[usize], limits: &KbLimits) -> RewritingSystem {
    let mut rank = vec![0u32; 2 * gens];
    for (i, &g) in order.iter().enumerate() {
        rank[2 * g] = 2 * i as u32;
        rank[2 * g + 1] = 2 * i as u32 + 1;
    }
    let mut sys = RewritingSystem { rank, rules: Vec::new(), by_last: vec![Vec::new(); 2 * gens], confluent: false };
    let mut lossless = true;
    for c in 0..2 * gens as u32 {
        lossless &= sys.push_equation(&[c, c ^ 1], &[], limits);
    }
    let mut sorted: Vec<&Vec<u32>> = relators.iter().collect();
    sorted.sort_by_key(|r| r.len());
    for r in sorted {
        // r = 1 as (first half) = (second half)⁻¹
        let h = r.len().div_ceil(2);
        let rhs: Vec<u32> = r[h..].iter().rev().map(|c| c ^ 1).collect();
        lossless &= sys.push_equation(&r[..h], &rhs, limits);
    }
    let mut steps = 0usize;
    let mut i = 0;
    while i < sys.rules.len() {
        if sys.rules[i].is_none() {
            i += 1;
            continue;
        }
        for j in 0..=i {
            for (x, y) in [(i, j), (j, i)] {
                let (Some((lx, rx)), Some((ly, ry))) = (sys.rules[x].clone(), sys.rules[y].clone()) else {
                    continue;
                };
                // suffix of lx equals prefix of ly
                for k in 1..lx.len().min(ly.len()) {
                    if lx[lx.len() - k..] != ly[..k] {
                        continue;
                    }
                    steps += 1;
                    let mut a = rx.clone();
                    a.extend_from_slice(&ly[k..]);
                    let mut b = lx[..lx.len() - k].to_vec();
                    b.extend_from_slice(&ry);
                    lossless &= sys.push_equation(&a, &b, limits);
                    if sys.rule_count() > limits.max_rules || steps > limits.max_steps {
                        return sys;
                    }
                    if sys.rules[x].is_none() || sys.rules[y].is_none() {
                        break;
                    }
                }
            }
            if sys.rules[i].is_none() {
                break;
            }
        }
        i += 1;
    }
    sys.confluent = lossless;
    sys
}
