//! Finite groups given by multiplication tables, homomorphism counting, and
//! random functors into them.

use std::collections::HashMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::presentation::{GroupoidPresentation, Letter, PresentationMorphism, Word};

/// Default cap on relator evaluations for [`hom_count`].
pub const DEFAULT_HOM_BUDGET: u64 = 100_000_000;

/// A finite group; element `0` is the identity.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<u16>,
    inverses: Vec<u16>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({})", self.name)
    }
}

impl FiniteGroup {
    /// `table[x][y]` is the product `x·y`. Checks closure, identity at 0,
    /// inverses and associativity.
    pub fn from_table(name: impl Into<String>, table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::Structural("multiplication table is not square".into()));
        }
        if (0..n).any(|x| table[0][x] != x || table[x][0] != x) {
            return Err(Error::Structural("element 0 is not the identity".into()));
        }
        let mut inverses = vec![0u16; n];
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| table[x][y] == 0)
                .ok_or_else(|| Error::Structural(format!("element {x} has no inverse")))?;
            inverses[x] = inv as u16;
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if table[table[x][y]][z] != table[x][table[y][z]] {
                        return Err(Error::Structural("table is not associative".into()));
                    }
                }
            }
        }
        let flat = table.iter().flat_map(|r| r.iter().map(|&x| x as u16)).collect();
        Ok(FiniteGroup { name: name.into(), order: n, table: flat, inverses })
    }

    /// Closure of a set of permutations of `0..degree` under composition.
    pub fn from_permutations(name: impl Into<String>, degree: usize, gens: &[Vec<usize>]) -> Self {
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        index.insert(elements[0].clone(), 0);
        let mut i = 0;
        while i < elements.len() {
            for g in gens {
                let prod: Vec<usize> = (0..degree).map(|k| elements[i][g[k]]).collect();
                if !index.contains_key(&prod) {
                    index.insert(prod.clone(), elements.len());
                    elements.push(prod);
                }
            }
            i += 1;
        }
        let n = elements.len();
        let table: Vec<Vec<usize>> = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let prod: Vec<usize> = (0..degree).map(|k| elements[x][elements[y][k]]).collect();
                        index[&prod]
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(name, &table).expect("permutation groups are groups")
    }

    pub fn cyclic(n: usize) -> Self {
        let table: Vec<Vec<usize>> = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
        FiniteGroup::from_table(format!("Z{n}"), &table).expect("cyclic group")
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let n = a.order * b.order;
        let table: Vec<Vec<usize>> = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let (xa, xb) = (x / b.order, x % b.order);
                        let (ya, yb) = (y / b.order, y % b.order);
                        a.mul(xa, ya) * b.order + b.mul(xb, yb)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(format!("{}x{}", a.name, b.name), &table).expect("product group")
    }

    pub fn symmetric3() -> Self {
        FiniteGroup::from_permutations("S3", 3, &[vec![1, 0, 2], vec![1, 2, 0]])
    }

    pub fn dihedral8() -> Self {
        FiniteGroup::from_permutations("D4", 4, &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]])
    }

    pub fn quaternion() -> Self {
        // elements (sign, unit) encoded as 4*sign + unit with units 1,i,j,k
        const UNIT: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let table: Vec<Vec<usize>> = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (s, u) = UNIT[x % 4][y % 4];
                        ((s + x / 4 + y / 4) % 2) * 4 + u
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table("Q8", &table).expect("quaternion group")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order + y] as usize
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inverses[x] as usize
    }

    #[inline]
    pub fn letter_value(&self, values: &[usize], code: u32) -> usize {
        let v = values[(code >> 1) as usize];
        if code & 1 == 1 {
            self.inv(v)
        } else {
            v
        }
    }

    /// Product along a word of letter codes, left to right in path order.
    ///
    /// Path order `l1 l2 …` evaluates to `v(l1)·v(l2)·…`; any fixed convention
    /// works as long as it is used consistently.
    pub fn eval_codes(&self, values: &[usize], codes: &[u32]) -> usize {
        codes.iter().fold(0, |acc, &c| self.mul(acc, self.letter_value(values, c)))
    }

    pub fn eval_word(&self, values: &[usize], w: &Word) -> usize {
        w.letters().iter().fold(0, |acc, l| self.mul(acc, self.letter_value(values, l.code())))
    }
}

/// Every group of order at most `max_order`, up to isomorphism (orders ≤ 8).
pub fn small_groups(max_order: usize) -> Vec<FiniteGroup> {
    let z = FiniteGroup::cyclic;
    let all = vec![
        z(1),
        z(2),
        z(3),
        z(4),
        FiniteGroup::direct_product(&z(2), &z(2)),
        z(5),
        z(6),
        FiniteGroup::symmetric3(),
        z(7),
        z(8),
        FiniteGroup::direct_product(&z(4), &z(2)),
        FiniteGroup::direct_product(&FiniteGroup::direct_product(&z(2), &z(2)), &z(2)),
        FiniteGroup::dihedral8(),
        FiniteGroup::quaternion(),
    ];
    all.into_iter().filter(|g| g.order() <= max_order).collect()
}

/// Relators of a one-object presentation as loop words `u·v⁻¹` in letter codes.
pub(crate) fn loop_relators(g: &GroupoidPresentation) -> Result<Vec<Vec<u32>>> {
    if g.object_count() != 1 {
        return Err(Error::Contract(format!(
            "expected a one-object presentation, got {} objects (take a vertex group first)",
            g.object_count()
        )));
    }
    Ok(g.relators()
        .iter()
        .map(|(u, v)| {
            let w = crate::presentation::compose(&v.inverse(), u).expect("relators are parallel");
            w.letters().iter().map(|l| l.code()).collect()
        })
        .filter(|r: &Vec<u32>| !r.is_empty())
        .collect())
}

/// Backtracking over generator values with relators checked as soon as all
/// their generators are assigned.
struct Enumerator<'a> {
    target: &'a FiniteGroup,
    order: Vec<usize>,
    checks: Vec<Vec<usize>>,
    relators: Vec<Vec<u32>>,
    values: Vec<usize>,
    budget: u64,
    spent: u64,
}

impl<'a> Enumerator<'a> {
    fn new(gens: usize, relators: Vec<Vec<u32>>, target: &'a FiniteGroup, budget: u64) -> Self {
        let mut order: Vec<usize> = Vec::new();
        let mut seen = vec![false; gens];
        let mut sorted: Vec<usize> = (0..relators.len()).collect();
        sorted.sort_by_key(|&i| relators[i].len());
        for &r in &sorted {
            for &c in &relators[r] {
                let a = (c >> 1) as usize;
                if !seen[a] {
                    seen[a] = true;
                    order.push(a);
                }
            }
        }
        let position: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let mut checks = vec![Vec::new(); order.len()];
        for (i, r) in relators.iter().enumerate() {
            let last = r.iter().map(|&c| position[&((c >> 1) as usize)]).max().expect("nonempty relator");
            checks[last].push(i);
        }
        Enumerator { target, order, checks, relators, values: vec![0; gens], budget, spent: 0 }
    }

    fn free_generators(&self) -> usize {
        self.values.len() - self.order.len()
    }

    fn consistent(&mut self, depth: usize) -> Result<bool> {
        for &r in &self.checks[depth] {
            self.spent += 1;
            if self.spent > self.budget {
                return Err(Error::Budget(format!(
                    "more than {} relator evaluations into {}",
                    self.budget,
                    self.target.name()
                )));
            }
            if self.target.eval_codes(&self.values, &self.relators[r]) != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn count(&mut self, depth: usize) -> Result<u64> {
        if depth == self.order.len() {
            return Ok(1);
        }
        let mut total = 0u64;
        for x in 0..self.target.order() {
            self.values[self.order[depth]] = x;
            if self.consistent(depth)? {
                total += self.count(depth + 1)?;
            }
        }
        Ok(total)
    }

    fn collect(&mut self, depth: usize, limit: usize, out: &mut Vec<Vec<usize>>) -> Result<()> {
        if out.len() >= limit {
            return Ok(());
        }
        if depth == self.order.len() {
            out.push(self.values.clone());
            return Ok(());
        }
        for x in 0..self.target.order() {
            self.values[self.order[depth]] = x;
            if self.consistent(depth)? {
                self.collect(depth + 1, limit, out)?;
            }
        }
        Ok(())
    }
}

/// Number of homomorphisms from a one-object presentation into `target`.
pub fn hom_count(g: &GroupoidPresentation, target: &FiniteGroup, budget: u64) -> Result<u64> {
    let relators = loop_relators(g)?;
    let mut e = Enumerator::new(g.arrow_count(), relators, target, budget);
    let constrained = e.count(0)?;
    let free = e.free_generators() as u32;
    (target.order() as u64)
        .checked_pow(free)
        .and_then(|f| f.checked_mul(constrained))
        .ok_or_else(|| Error::Overflow("homomorphism count exceeds u64".into()))
}

/// Up to `limit` homomorphisms, each given as generator values.
pub fn enumerate_homs(
    g: &GroupoidPresentation,
    target: &FiniteGroup,
    limit: usize,
    budget: u64,
) -> Result<Vec<Vec<usize>>> {
    let relators = loop_relators(g)?;
    let gens = g.arrow_count();
    let mut e = Enumerator::new(gens, relators, target, budget);
    let mut constrained = Vec::new();
    e.collect(0, limit, &mut constrained)?;
    let free: Vec<usize> = {
        let mut seen = vec![false; gens];
        for &a in &e.order {
            seen[a] = true;
        }
        (0..gens).filter(|&a| !seen[a]).collect()
    };
    let mut out = Vec::new();
    'outer: for base in constrained {
        let mut counter = vec![0usize; free.len()];
        loop {
            let mut v = base.clone();
            for (k, &a) in free.iter().enumerate() {
                v[a] = counter[k];
            }
            out.push(v);
            if out.len() >= limit {
                break 'outer;
            }
            let mut k = 0;
            while k < counter.len() {
                counter[k] += 1;
                if counter[k] < target.order() {
                    break;
                }
                counter[k] = 0;
                k += 1;
            }
            if k == counter.len() {
                break;
            }
        }
    }
    Ok(out)
}

/// A functor from a presented groupoid into a finite group viewed as a
/// one-object groupoid: a value for every generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupValuation {
    pub values: Vec<usize>,
}

impl GroupValuation {
    pub fn eval(&self, group: &FiniteGroup, w: &Word) -> usize {
        group.eval_word(&self.values, w)
    }

    /// Whether every relator of `p` holds.
    pub fn respects(&self, group: &FiniteGroup, p: &GroupoidPresentation) -> bool {
        p.relators().iter().all(|(u, v)| self.eval(group, u) == self.eval(group, v))
    }
}

/// Constraint `loop word = 1` over generator values.
fn constraint_loops(constraints: &[(Word, Word)]) -> Vec<Vec<u32>> {
    constraints
        .iter()
        .map(|(u, v)| {
            let mut codes: Vec<u32> = u.letters().iter().map(|l| l.code()).collect();
            codes.extend(v.letters().iter().rev().map(|l| l.inv().code()));
            codes
        })
        .collect()
}

/// Searches for a random functor `d: mid → group` with `d∘alpha = d∘beta`
/// generator-wise, by randomized backtracking with unit propagation.
/// Returns `None` when `max_nodes` search nodes are exhausted.
pub fn random_coequalizing_valuation<R: Rng>(
    rng: &mut R,
    src: &GroupoidPresentation,
    mid: &GroupoidPresentation,
    alpha: &PresentationMorphism,
    beta: &PresentationMorphism,
    group: &FiniteGroup,
    max_nodes: usize,
) -> Option<GroupValuation> {
    let mut constraints: Vec<(Word, Word)> = mid.relators().to_vec();
    for a in src.arrow_ids() {
        constraints.push((alpha.image(a).clone(), beta.image(a).clone()));
    }
    random_solution(rng, mid.arrow_count(), constraint_loops(&constraints), group, max_nodes)
        .map(|values| GroupValuation { values })
}

/// A random assignment of `gens` generators satisfying every loop `= 1`,
/// or `None` once `max_nodes` search nodes are spent.
pub(crate) fn random_solution<R: Rng>(
    rng: &mut R,
    gens: usize,
    loops: Vec<Vec<u32>>,
    group: &FiniteGroup,
    max_nodes: usize,
) -> Option<Vec<usize>> {
    let mut solver = Solver { group, loops, values: vec![None; gens], nodes: 0, max_nodes };
    solver
        .search(rng)
        .then(|| solver.values.iter().map(|v| v.unwrap_or(0)).collect())
}

struct Solver<'a> {
    group: &'a FiniteGroup,
    loops: Vec<Vec<u32>>,
    values: Vec<Option<usize>>,
    nodes: usize,
    max_nodes: usize,
}

enum Pick {
    Violated,
    Done,
    Forced(usize, usize),
    Branch(usize),
}

impl Solver<'_> {
    fn value(&self, code: u32) -> Option<usize> {
        self.values[(code >> 1) as usize].map(|v| if code & 1 == 1 { self.group.inv(v) } else { v })
    }

    fn pick(&self) -> Pick {
        let mut branch: Option<(usize, usize)> = None;
        for lp in &self.loops {
            let mut unassigned: Vec<usize> = lp
                .iter()
                .map(|&c| (c >> 1) as usize)
                .filter(|&a| self.values[a].is_none())
                .collect();
            if unassigned.is_empty() {
                let prod = lp.iter().fold(0, |acc, &c| self.group.mul(acc, self.value(c).unwrap()));
                if prod != 0 {
                    return Pick::Violated;
                }
                continue;
            }
            unassigned.sort_unstable();
            unassigned.dedup();
            let occurrences = lp.iter().filter(|&&c| (c >> 1) as usize == unassigned[0]).count();
            if unassigned.len() == 1 && occurrences == 1 {
                // A x B = 1  =>  x = A^-1 B^-1
                let pos = lp.iter().position(|&c| (c >> 1) as usize == unassigned[0]).unwrap();
                let a = lp[..pos].iter().fold(0, |acc, &c| self.group.mul(acc, self.value(c).unwrap()));
                let b = lp[pos + 1..].iter().fold(0, |acc, &c| self.group.mul(acc, self.value(c).unwrap()));
                let x = self.group.mul(self.group.inv(a), self.group.inv(b));
                let x = if lp[pos] & 1 == 1 { self.group.inv(x) } else { x };
                return Pick::Forced(unassigned[0], x);
            }
            if branch.is_none_or(|(_, n)| unassigned.len() < n) {
                branch = Some((unassigned[0], unassigned.len()));
            }
        }
        match branch {
            Some((a, _)) => Pick::Branch(a),
            None => match self.values.iter().position(|v| v.is_none()) {
                Some(a) => Pick::Branch(a),
                None => Pick::Done,
            },
        }
    }

    fn search<R: Rng>(&mut self, rng: &mut R) -> bool {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return false;
        }
        match self.pick() {
            Pick::Violated => false,
            Pick::Done => true,
            Pick::Forced(a, x) => {
                self.values[a] = Some(x);
                if self.search(rng) {
                    return true;
                }
                self.values[a] = None;
                false
            }
            Pick::Branch(a) => {
                let mut choices: Vec<usize> = (0..self.group.order()).collect();
                choices.shuffle(rng);
                for x in choices {
                    self.values[a] = Some(x);
                    if self.search(rng) {
                        return true;
                    }
                    if self.nodes > self.max_nodes {
                        break;
                    }
                }
                self.values[a] = None;
                false
            }
        }
    }
}

/// Letter codes of a word.
pub(crate) fn codes(w: &Word) -> Vec<u32> {
    w.letters().iter().map(|l| l.code()).collect()
}

pub(crate) fn letters(codes: &[u32]) -> Vec<Letter> {
    codes.iter().map(|&c| Letter::from_code(c)).collect()
}
